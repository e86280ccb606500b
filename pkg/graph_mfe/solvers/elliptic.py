# -*- coding: utf-8 -*-
"""Linear solves against the graph Laplacian.

Delta u = f is equivalent to ``(D - W) u = -mu f`` and (Delta - K) v = f to ``(D - W + K diag(mu)) v = -mu f``.
Graphs with at most DENSE_LIMIT vertices are factorized densely (Cholesky), larger ones go through
Jacobi-preconditioned conjugate gradients. Both paths are held to the same residual contract.
"""
import enum
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from graph_mfe.exceptions import CompatibilityViolated, NonpositiveK, SolveFailed
from graph_mfe.graphs import VertexField, bound_values, dirac_field, laplacian_values

__all__ = ('DENSE_LIMIT', 'SolveMethod', 'LinearSolveReport', 'ScreenedOperator', 'solve_poisson', 'solve_screened',
           'maximum_principle_holds', 'green_function', 'green_rhs')

LOGGER = logging.getLogger(__name__)

DENSE_LIMIT = 2000
INVERSE_LIMIT = 256  # small operators keep an explicit inverse for cheap repeated solves
COMPATIBILITY_RTOL = 1e-10
RESIDUAL_RTOL = 1e-9


class SolveMethod(enum.Enum):
    DIRECT = 'direct'
    ITERATIVE = 'iterative'


@dataclass(frozen=True)
class LinearSolveReport:
    """Outcome of one linear solve; ``residual_sup`` is recomputed from the returned solution."""
    residual_sup: float
    method: SolveMethod
    iterations: int = 0

    def as_dict(self):
        return {'residual_sup': self.residual_sup, 'method': self.method.value, 'iterations': self.iterations}


def _residual_bound(rhs):
    return RESIDUAL_RTOL * max(1.0, float(np.max(np.abs(rhs))))


def _conjugate_gradient(matrix, rhs, atol, x0=None):
    """Jacobi-preconditioned CG; returns the solution and the number of iterations."""
    diagonal = matrix.diagonal()
    preconditioner = sp.diags(1.0 / diagonal)
    iterations = [0]

    def count(_):
        iterations[0] += 1

    solution, info = cg(matrix,
                        rhs,
                        x0=x0,
                        rtol=0.0,
                        atol=atol,
                        maxiter=10 * matrix.shape[0],
                        M=preconditioner,
                        callback=count)
    if info < 0:
        raise SolveFailed(f'Conjugate gradients broke down (info={info}).')
    if info > 0:
        LOGGER.debug('CG reached its iteration cap after %d steps', iterations[0])
    return solution, iterations[0]


def _mean_zero(graph, values):
    return values - np.dot(values, graph.measure) / graph.volume


def solve_poisson(graph, field, method=None):
    """Mean-zero solution of Delta u = f.

    :param method: force a ``SolveMethod``; by default dense up to DENSE_LIMIT vertices
    :returns: ``(u, LinearSolveReport)``
    :raises CompatibilityViolated: if int f dmu is not zero within 1e-10 * Vol * sup|f|
    :raises SolveFailed: if the residual contract is missed
    """
    rhs = bound_values(graph, field)
    integral = float(np.dot(rhs, graph.measure))
    sup_rhs = float(np.max(np.abs(rhs)))
    if abs(integral) > COMPATIBILITY_RTOL * graph.volume * sup_rhs:
        raise CompatibilityViolated(f'int f dmu = {integral:.3e} is not zero: Delta u = f has no solution.')

    if method is None:
        method = SolveMethod.DIRECT if graph.num_vertices <= DENSE_LIMIT else SolveMethod.ITERATIVE

    if graph.num_vertices == 1:
        return VertexField.zeros(graph), LinearSolveReport(sup_rhs, method)

    # remove the admissible compatibility defect so the pinned and singular systems are consistent
    compatible = rhs - integral / graph.volume
    load = -graph.measure * compatible
    iterations = 0
    if method is SolveMethod.DIRECT:
        stiffness = graph.stiffness_matrix.toarray()
        factor = scipy.linalg.cho_factor(stiffness[1:, 1:])
        solution = np.zeros(graph.num_vertices)
        solution[1:] = scipy.linalg.cho_solve(factor, load[1:])
    else:
        load = load - load.mean()
        atol = 1e-2 * _residual_bound(rhs) * float(graph.measure.min())
        solution, iterations = _conjugate_gradient(graph.stiffness_matrix, load, atol)

    solution = _mean_zero(graph, solution)
    residual = float(np.max(np.abs(laplacian_values(graph, solution) - rhs)))
    if not residual <= _residual_bound(rhs):
        raise SolveFailed(f'Poisson solve missed its residual bound: {residual:.3e}')
    return VertexField(graph, solution), LinearSolveReport(residual, method, iterations)


def _check_screening(screening):
    if not (math.isfinite(screening) and screening > 0):
        raise NonpositiveK(f'The screening constant must be positive, got K={screening}.')


class ScreenedOperator:
    """(Delta - K) on one graph with its factorization kept for repeated solves.

    An instance belongs to the solve that created it; it is not shared between threads.
    """

    def __init__(self, graph, screening, method=None):
        _check_screening(screening)
        self.graph = graph
        self.screening = float(screening)
        self.method = method or (SolveMethod.DIRECT if graph.num_vertices <= DENSE_LIMIT else SolveMethod.ITERATIVE)
        self._matrix = (graph.stiffness_matrix + sp.diags(self.screening * graph.measure)).tocsr()
        self._factor = self._inverse = None
        if self.method is SolveMethod.DIRECT:
            self._factor = scipy.linalg.cho_factor(self._matrix.toarray())
            if graph.num_vertices <= INVERSE_LIMIT:
                self._inverse = scipy.linalg.cho_solve(self._factor, np.eye(graph.num_vertices))
        self.total_iterations = 0

    def apply_values(self, values):
        """(Delta - K) v as an array."""
        return laplacian_values(self.graph, values) - self.screening * values

    def solve_values(self, rhs, initial=None):
        """Solve (Delta - K) v = rhs on arrays; ``initial`` warm-starts the iterative path."""
        load = -self.graph.measure * rhs
        if self._inverse is not None:
            return self._inverse @ load
        if self._factor is not None:
            return scipy.linalg.cho_solve(self._factor, load)
        # tight enough that successive iterates of a fixed-point scheme can be told apart
        atol = min(1e-2 * _residual_bound(rhs) * float(self.graph.measure.min()), 1e-13 * float(np.linalg.norm(load)))
        solution, iterations = _conjugate_gradient(self._matrix, load, atol, x0=initial)
        self.total_iterations += iterations
        return solution

    def residual_sup(self, solution, rhs):
        return float(np.max(np.abs(self.apply_values(solution) - rhs)))


def solve_screened(graph, screening, field):
    """Unique solution of (Delta - K) v = f for K > 0.

    :returns: ``(v, LinearSolveReport)``
    :raises NonpositiveK: if K <= 0
    """
    rhs = bound_values(graph, field)
    operator = ScreenedOperator(graph, screening)
    solution = operator.solve_values(rhs)
    residual = operator.residual_sup(solution, rhs)
    if not residual <= _residual_bound(rhs):
        raise SolveFailed(f'Screened solve missed its residual bound: {residual:.3e}')
    return VertexField(graph, solution), LinearSolveReport(residual, operator.method, operator.total_iterations)


def maximum_principle_holds(graph, screening, field, tol):
    """Check the discrete maximum principle on one field.

    Returns False only if (Delta - K) u >= -tol everywhere and yet u > tol somewhere.
    """
    if screening < 0:
        raise NonpositiveK(f'The maximum principle needs K >= 0, got K={screening}.')
    values = bound_values(graph, field)
    image = laplacian_values(graph, values) - screening * values
    if np.all(image >= -tol):
        return bool(np.all(values <= tol))
    return True


def green_rhs(graph, pole):
    """delta_pole - 1/Vol as an array."""
    return dirac_field(graph, [pole]).realization.values - 1.0 / graph.volume


def green_function(graph, pole):
    """Mean-zero G with Delta G = delta_pole - 1/Vol."""
    rhs = green_rhs(graph, pole)
    green, report = solve_poisson(graph, VertexField(graph, rhs))
    LOGGER.debug('Green function at %s: residual %.3e (%s, %d iterations)', pole, report.residual_sup,
                 report.method.value, report.iterations)
    return green
