# -*- coding: utf-8 -*-
"""Discrete 2-tori and the critical points of their Green's functions."""
from .lattice import TorusSpec, TorusGraph, build_torus_graph, PRESETS
from .green import (CriticalClass, CriticalPoint, CriticalPointSet, torus_green, find_critical_points, critical_slope,
                    slope_convergence, half_periods)
