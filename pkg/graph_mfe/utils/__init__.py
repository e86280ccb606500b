# -*- coding: utf-8 -*-
"""graph-mfe utils"""
import math

from .other_utilities import dict_merge, is_valid, validate_parameters, write_atomically, ReportMixin

FOUR_PI = 4.0 * math.pi
