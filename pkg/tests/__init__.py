# -*- coding: utf-8 -*-
"""Tests for graph-mfe."""
import os

THIS_DIR = os.path.dirname(os.path.abspath(__file__))
