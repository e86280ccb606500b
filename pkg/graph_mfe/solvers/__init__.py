# -*- coding: utf-8 -*-
"""Linear and nonlinear solvers on weighted graphs."""
from .elliptic import (SolveMethod, LinearSolveReport, ScreenedOperator, solve_poisson, solve_screened,
                       maximum_principle_holds, green_function)
from .variational import (DiracProblem, VariationalReport, DiracMfeSolver, functional_J, functional_gradient,
                          project_to_B, dirac_residual, solve_dirac_mfe)
from .monotone import (VortexProblem, BackgroundField, TraceStatus, IterationTrace, SolverReport, VortexMfeSolver,
                       solve_background, necessary_lambda_bound, is_upper_solution, iterate_once,
                       transformed_residual, find_constant_upper_solution, solve_vortex_mfe, vortex_residual)
from .lambda_critical import LambdaCritical, LambdaCriticalSearch, estimate_lambda_c
