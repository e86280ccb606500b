# -*- coding: utf-8 -*-
"""Delta u = lambda e^u (e^u - 1) + 4 pi sum_j delta_pj by monotone iteration.

With the background u0 solving Delta u0 = -4 pi M / Vol + 4 pi sum_j delta_pj, the unknown v = u - u0
solves Delta v = lambda e^(u0+v) (e^(u0+v) - 1) + 4 pi M / Vol. Starting from v0 = -u0 the scheme

    (Delta - K) v_n = lambda e^(u0+v_(n-1)) (e^(u0+v_(n-1)) - 1) - K v_(n-1) + 4 pi M / Vol,   K >= 2 lambda,

decreases pointwise and converges to the maximal solution whenever one exists. Without a solution the
sequence is unbounded below, which is what the divergence floor detects.
"""
import enum
import math
from dataclasses import dataclass, field, asdict
from types import SimpleNamespace

import numpy as np

from graph_mfe.exceptions import InvalidProblem, NonpositiveK, SolveFailed
from graph_mfe.graphs import VertexField, bound_values, dirac_field, laplacian_values
from graph_mfe.parameters_schemas import VORTEX_PARAMETERS
from graph_mfe.utils import FOUR_PI, ReportMixin
from .elliptic import ScreenedOperator, solve_poisson

__all__ = ('VortexProblem', 'BackgroundField', 'TraceStatus', 'IterationTrace', 'SolverReport', 'VortexMfeSolver',
           'solve_background', 'necessary_lambda_bound', 'is_upper_solution', 'iterate_once', 'transformed_residual',
           'find_constant_upper_solution', 'solve_vortex_mfe', 'vortex_residual')

MONOTONE_TOL = 1e-10


@dataclass(frozen=True)
class VortexProblem:
    """Data of Delta u = lambda e^u (e^u - 1) + 4 pi sum_j delta_pj; repeated vortices add up."""
    graph: object
    lam: float
    vortices: tuple

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise InvalidProblem(f'lambda must be positive, got {self.lam}')
        vortices = tuple(str(vortex) for vortex in self.vortices)
        if not vortices:
            raise InvalidProblem('At least one vortex is required.')
        self.graph.indices_of(vortices)
        object.__setattr__(self, 'vortices', vortices)
        object.__setattr__(self, 'lam', float(self.lam))

    @property
    def num_vortices(self):
        return len(self.vortices)

    @property
    def necessary_bound(self):
        return necessary_lambda_bound(self.graph, self.num_vortices)

    def parameters_dict(self):
        return {'lambda': self.lam, 'vortices': list(self.vortices)}


class BackgroundField(VertexField):
    """The background u0 of a vortex configuration; remembers the vortices it was built for."""

    def __init__(self, graph, values, vortices):
        super().__init__(graph, values)
        self.vortices = tuple(str(vortex) for vortex in vortices)

    @property
    def num_vortices(self):
        return len(self.vortices)


class TraceStatus(enum.Enum):
    CONVERGED = 'converged'
    DIVERGED = 'diverged'
    BUDGET_EXHAUSTED = 'budget_exhausted'


@dataclass
class IterationTrace:
    """Per-step record of the monotone iteration.

    ``max_increase`` is the largest pointwise increase max_x (v_n - v_(n-1))(x) seen along the run;
    ``values`` holds v_0, v_1, ... only when fields are recorded.
    """
    K: float
    floor: float
    status: TraceStatus = TraceStatus.BUDGET_EXHAUSTED
    residuals: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    max_increase: float = -math.inf
    values: list = field(default_factory=list)

    @property
    def iterations(self):
        return len(self.steps)

    def is_monotone(self, tol=MONOTONE_TOL):
        return self.max_increase <= tol

    def fields(self, graph):
        return [VertexField(graph, values) for values in self.values]

    def summary(self):
        return {
            'K': self.K,
            'floor': self.floor,
            'status': self.status.value,
            'iterations': self.iterations,
            'max_increase': self.max_increase,
            'first_residual': self.residuals[0] if self.residuals else None,
            'last_residual': self.residuals[-1] if self.residuals else None,
        }


@dataclass
class SolverReport:
    """Outcome of a vortex solve. Residuals are recomputed from the final iterate."""
    status: str
    converged: bool
    lam: float
    num_vortices: int
    necessary_bound: float
    K: float
    iterations: int
    residual_sup: float
    transformed_residual_sup: float
    min_v: float
    floor: float
    criterion: str = ''
    mass_identity_defect: float = math.nan
    max_u: float = math.nan

    def as_dict(self):
        return asdict(self)


def _num_vortices(background, num_vortices):
    if num_vortices is not None:
        return int(num_vortices)
    if isinstance(background, BackgroundField):
        return background.num_vortices
    raise InvalidProblem('The number of vortices is needed when u0 is not a BackgroundField.')


def _nonlinearity(lam, background, values, constant):
    """lambda e^(u0+v) (e^(u0+v) - 1) + 4 pi M / Vol."""
    exponential = np.exp(background + values)
    return lam * exponential * np.expm1(background + values) + constant


def solve_background(graph, vortices):
    """Mean-zero u0 with Delta u0 = -4 pi M / Vol + 4 pi sum_j delta_pj."""
    source = dirac_field(graph, vortices)
    rhs = FOUR_PI * source.realization.values - FOUR_PI * source.total_multiplicity / graph.volume
    background, _ = solve_poisson(graph, VertexField(graph, rhs))
    return BackgroundField(graph, background.values, source.poles)


def necessary_lambda_bound(graph, num_vortices):
    """16 pi M / Vol: no solution exists below this value of lambda."""
    if num_vortices < 1:
        raise InvalidProblem('At least one vortex is required.')
    return 4.0 * FOUR_PI * num_vortices / graph.volume


def transformed_residual(graph, lam, background, field_v, num_vortices=None):
    """Delta v - lambda e^(u0+v) (e^(u0+v) - 1) - 4 pi M / Vol."""
    constant = FOUR_PI * _num_vortices(background, num_vortices) / graph.volume
    values = bound_values(graph, field_v)
    rhs = _nonlinearity(lam, bound_values(graph, background), values, constant)
    return VertexField(graph, laplacian_values(graph, values) - rhs)


def is_upper_solution(graph, lam, background, field_v, tol=0.0, num_vortices=None):
    """True if Delta v >= lambda e^(u0+v) (e^(u0+v) - 1) + 4 pi M / Vol - tol at every vertex.

    ``field_v`` may be a number, read as a constant field.
    """
    if not isinstance(field_v, VertexField):
        field_v = VertexField.constant(graph, field_v)
    defect = transformed_residual(graph, lam, background, field_v, num_vortices).values
    return bool(np.all(defect >= -tol))


def _check_screening(lam, screening):
    if not screening >= 2.0 * lam:
        raise NonpositiveK(f'The monotone iteration needs K >= 2 lambda = {2.0 * lam:g}, got K={screening}.')


def iterate_once(graph, lam, screening, background, field_v, num_vortices=None, operator=None):
    """One step of the monotone scheme: returns v_n given v_(n-1).

    :param operator: a ScreenedOperator for this graph and K, reused across steps if given
    :raises NonpositiveK: if K < 2 lambda
    """
    _check_screening(lam, screening)
    constant = FOUR_PI * _num_vortices(background, num_vortices) / graph.volume
    previous = bound_values(graph, field_v)
    if operator is None:
        operator = ScreenedOperator(graph, screening)
    rhs = _nonlinearity(lam, bound_values(graph, background), previous, constant) - screening * previous
    return VertexField(graph, operator.solve_values(rhs, initial=previous))


def vortex_residual(problem, field_u):
    """Delta u - lambda e^u (e^u - 1) - 4 pi sum_j delta_pj."""
    graph = problem.graph
    values = bound_values(graph, field_u)
    sources = FOUR_PI * dirac_field(graph, problem.vortices).realization.values
    return VertexField(graph, laplacian_values(graph, values) - problem.lam * np.exp(values) * np.expm1(values) - sources)


def find_constant_upper_solution(graph, lam, background, num_vortices=None):
    """A constant c with u0 + c < 0 and lambda e^(u0+c) (e^(u0+c) - 1) + 4 pi M / Vol < 0 everywhere.

    The values t = e^(u0+c) are centred so that min t + max t = 1, which is optimal because the
    admissible interval for t is symmetric about 1/2. Returns None if even this choice fails.
    """
    num_vortices = _num_vortices(background, num_vortices)
    values = bound_values(graph, background)
    shift = -float(np.logaddexp(values.min(), values.max()))
    constant = FOUR_PI * num_vortices / graph.volume
    shifted = values + shift
    nonlinearity = _nonlinearity(lam, values, np.full_like(values, shift), constant)
    if np.all(shifted < 0) and np.all(nonlinearity < 0):
        return shift
    return None


class VortexMfeSolver(ReportMixin):
    """Monotone iteration for the vortex equation.

    Outline: ``setup`` -> ``run_iteration`` -> ``return_results``. Non-existence is a status of the
    returned report, not an exception.
    """

    parameters_schema = VORTEX_PARAMETERS
    parameters_info = parameters_schema.schema  # shorthand for printing

    def __init__(self, problem, parameters=None, background=None):
        self.problem = problem
        self.parameters = self.parameters_schema(dict(parameters or {}))
        self.background = background
        self.ctx = SimpleNamespace()

    def setup(self):
        """Background, K, divergence floor and v0 = -u0."""
        self._step = 'setup'
        problem, parameters = self.problem, self.parameters
        if self.background is None:
            self.background = solve_background(problem.graph, problem.vortices)
        self.ctx.background = self.background.values

        screening = parameters.get('K')
        if screening is None:
            screening = parameters['K_factor'] * problem.lam
        _check_screening(problem.lam, screening)
        self.ctx.K = float(screening)

        floor = parameters.get('divergence_floor')
        if floor is None:
            floor = float(np.max(np.abs(self.ctx.background))) + parameters['divergence_margin']
        self.ctx.floor = float(floor)

        self.ctx.constant = FOUR_PI * problem.num_vortices / problem.graph.volume
        self.ctx.operator = ScreenedOperator(problem.graph, self.ctx.K)
        self.ctx.values = -self.ctx.background
        self.ctx.trace = IterationTrace(K=self.ctx.K, floor=self.ctx.floor)
        if parameters['record_fields']:
            self.ctx.trace.values.append(self.ctx.values)
        self.ctx.criterion = ''
        self.report(f'lambda={problem.lam:g} (necessary bound {problem.necessary_bound:g}), M={problem.num_vortices}, '
                    f'K={self.ctx.K:g}, floor={self.ctx.floor:g}')

    def _transformed_residual(self, values):
        rhs = _nonlinearity(self.problem.lam, self.ctx.background, values, self.ctx.constant)
        return laplacian_values(self.problem.graph, values) - rhs

    def run_iteration(self):
        """Iterate until convergence, divergence below the floor, or the iteration budget."""
        self._step = 'run_iteration'
        parameters, trace = self.parameters, self.ctx.trace
        lam, screening = self.problem.lam, self.ctx.K
        values = self.ctx.values
        for iteration in range(1, parameters['max_iters'] + 1):
            rhs = _nonlinearity(lam, self.ctx.background, values, self.ctx.constant) - screening * values
            new_values = self.ctx.operator.solve_values(rhs, initial=values)
            difference = new_values - values
            values = new_values

            step = float(np.max(np.abs(difference)))
            residual = float(np.max(np.abs(self._transformed_residual(values))))
            trace.steps.append(step)
            trace.residuals.append(residual)
            trace.max_increase = max(trace.max_increase, float(difference.max()))
            if parameters['record_fields']:
                trace.values.append(values)
            if iteration % 1000 == 0:
                self._logger.debug('iteration %d: step=%.3e residual=%.3e min v=%.4g', iteration, step, residual,
                                   values.min())

            if values.min() < -self.ctx.floor:
                trace.status = TraceStatus.DIVERGED
                self.ctx.criterion = f'min v = {values.min():.4g} dropped below -{self.ctx.floor:g}'
                break
            if step <= parameters['step_tol'] and residual <= parameters['tol']:
                trace.status = TraceStatus.CONVERGED
                break
        else:
            window = parameters['stall_window']
            residuals = trace.residuals
            if len(residuals) > window and min(residuals[-window:]) >= residuals[-window - 1]:
                trace.status = TraceStatus.DIVERGED
                self.ctx.criterion = f'residual did not decrease over the last {window} iterations'
            else:
                trace.status = TraceStatus.BUDGET_EXHAUSTED
                self.ctx.criterion = f'no convergence within {parameters["max_iters"]} iterations'
        self.ctx.values = values

    def return_results(self):
        """Check the converged solution and assemble the report."""
        self._step = 'return_results'
        problem, trace = self.problem, self.ctx.trace
        graph = problem.graph
        values = self.ctx.values
        solution = self.ctx.background + values
        converged = trace.status is TraceStatus.CONVERGED
        residual = float(np.max(np.abs(vortex_residual(problem, VertexField(graph, solution)).values)))

        report = SolverReport(
            status=trace.status.value,
            converged=converged,
            lam=problem.lam,
            num_vortices=problem.num_vortices,
            necessary_bound=problem.necessary_bound,
            K=self.ctx.K,
            iterations=trace.iterations,
            residual_sup=residual,
            transformed_residual_sup=trace.residuals[-1] if trace.residuals else math.nan,
            min_v=float(values.min()),
            floor=self.ctx.floor,
            criterion=self.ctx.criterion,
        )
        if not converged:
            self.report(f'{trace.status.value} after {trace.iterations} iterations: {self.ctx.criterion}')
            return None, trace, report

        if problem.lam < problem.necessary_bound:
            raise SolveFailed(f'Converged at lambda={problem.lam:g} below the necessary bound {problem.necessary_bound:g}')
        if not np.all(solution < 0):
            raise SolveFailed(f'Converged solution is not negative: max u = {solution.max():.3e}')
        exponential = np.exp(solution)
        report.mass_identity_defect = abs(
            problem.lam * float(np.dot(exponential * np.expm1(solution), graph.measure)) + FOUR_PI * problem.num_vortices)
        report.max_u = float(solution.max())
        self.report(f'converged after {trace.iterations} iterations: residual {residual:.3e}, max u={report.max_u:.6g}')
        return VertexField(graph, solution), trace, report

    def run(self):
        """:returns: ``(u or None, IterationTrace, SolverReport)``"""
        self.setup()
        self.run_iteration()
        return self.return_results()


def solve_vortex_mfe(problem, parameters=None, background=None):
    """Solve the vortex equation by monotone iteration; see VortexMfeSolver."""
    return VortexMfeSolver(problem, parameters, background).run()
