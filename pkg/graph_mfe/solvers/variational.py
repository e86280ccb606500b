# -*- coding: utf-8 -*-
"""Delta u + e^u = rho delta_0 by constrained minimization.

J(u) = E(u) + rho u(x0) is minimized over B = {u : int e^u dmu = rho}. A projected gradient
descent with Armijo backtracking brings the iterate close to a critical point, then Newton's
method on F(u) = Delta u + e^u - rho delta_0 finishes the job. Every accepted iterate is shifted
back onto B.
"""
import math
from dataclasses import dataclass, field, asdict
from types import SimpleNamespace

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve
from scipy.special import logsumexp

from graph_mfe.exceptions import ExpOverflow, InvalidProblem, MaxIterationsExceeded
from graph_mfe.graphs import VertexField, bound_values, dirac_field, dirichlet_energy, laplacian_values
from graph_mfe.parameters_schemas import DIRAC_PARAMETERS
from graph_mfe.utils import ReportMixin
from .elliptic import DENSE_LIMIT

__all__ = ('DiracProblem', 'VariationalReport', 'DiracMfeSolver', 'functional_J', 'functional_gradient',
           'project_to_B', 'dirac_residual', 'solve_dirac_mfe')

EXP_GUARD = 700.0
STEP_MIN, STEP_MAX = 1e-12, 1e8


@dataclass(frozen=True)
class DiracProblem:
    """Data of Delta u + e^u = rho delta_x0 on one graph."""
    graph: object
    rho: float
    pole: str

    def __post_init__(self):
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise InvalidProblem(f'rho must be positive, got {self.rho}')
        object.__setattr__(self, 'pole', str(self.pole))
        object.__setattr__(self, 'rho', float(self.rho))
        self.graph.index_of(self.pole)

    @property
    def pole_index(self):
        return self.graph.index_of(self.pole)

    @property
    def source(self):
        """rho delta_x0 as an array."""
        return self.rho * dirac_field(self.graph, [self.pole]).realization.values

    def parameters_dict(self):
        return {'rho': self.rho, 'pole': self.pole}


@dataclass
class VariationalReport:
    """Diagnostics of a Dirac solve, recomputed from the returned field."""
    J_value: float
    constraint_defect: float
    residual_sup: float
    lagrange_multiplier: float
    iterations: int
    gradient_iterations: int = 0
    newton_iterations: int = 0
    converged: bool = False
    status: str = 'converged'
    trace: list = field(default_factory=list)

    def as_dict(self):
        return asdict(self)


def _energy(problem, values):
    heads, tails, weights = problem.graph.edge_arrays
    return 0.5 * float(np.dot(weights, (values[tails] - values[heads])**2))


def _functional(problem, values):
    return _energy(problem, values) + problem.rho * float(values[problem.pole_index])


def _residual(problem, values, source):
    return laplacian_values(problem.graph, values) + np.exp(values) - source


def _project(problem, values, exp_guard=EXP_GUARD):
    shifted = values + (math.log(problem.rho) - logsumexp(values, b=problem.graph.measure))
    if shifted.max() > exp_guard:
        raise ExpOverflow(f'max u = {shifted.max():.1f} exceeds the exp guard {exp_guard}')
    return shifted


def _multiplier(problem, gradient, exponential):
    measure = problem.graph.measure
    return float(np.dot(gradient * exponential, measure) / np.dot(exponential * exponential, measure))


def functional_J(problem, field_u):
    """J(u) = E(u) + rho u(x0)."""
    return dirichlet_energy(problem.graph, field_u) + problem.rho * field_u[problem.pole]


def functional_gradient(problem, field_u):
    """The mu-gradient -Delta u + rho delta_x0, so that dJ(u)[phi] = int gradient * phi dmu."""
    values = bound_values(problem.graph, field_u)
    return VertexField(problem.graph, -laplacian_values(problem.graph, values) + problem.source)


def project_to_B(problem, field_u, exp_guard=EXP_GUARD):
    """Shift u by the constant log(rho / int e^u dmu), which puts it on B.

    :raises ExpOverflow: if the shifted field exceeds ``exp_guard``
    """
    values = bound_values(problem.graph, field_u)
    return VertexField(problem.graph, _project(problem, values, exp_guard))


def dirac_residual(problem, field_u):
    """Delta u + e^u - rho delta_x0."""
    values = bound_values(problem.graph, field_u)
    return VertexField(problem.graph, _residual(problem, values, problem.source))


class DiracMfeSolver(ReportMixin):
    """Two-stage solver for Delta u + e^u = rho delta_x0.

    Outline: ``setup`` -> ``run_gradient`` <-> ``run_newton`` -> ``return_results``. Newton takes
    over once sup |F| < newton_switch; if a Newton step cannot reduce the merit function, the
    solver goes back to gradient steps with a tenfold smaller switch threshold.
    """

    parameters_schema = DIRAC_PARAMETERS
    parameters_info = parameters_schema.schema  # shorthand for printing

    def __init__(self, problem, parameters=None):
        self.problem = problem
        self.parameters = self.parameters_schema(dict(parameters or {}))
        self.ctx = SimpleNamespace()

    def setup(self, initial=None):
        """Start from the feasible constant log(rho / Vol), or from the projection of ``initial``."""
        self._step = 'setup'
        problem = self.problem
        self.ctx.measure = problem.graph.measure
        self.ctx.source = problem.source
        self.ctx.newton_switch = self.parameters['newton_switch']
        if initial is None:
            start = np.full(problem.graph.num_vertices, math.log(problem.rho / problem.graph.volume))
        else:
            start = bound_values(problem.graph, initial).copy()
        self.ctx.values = _project(problem, start, self.parameters['exp_guard'])
        self.ctx.iteration = 0
        self.ctx.gradient_iterations = 0
        self.ctx.newton_iterations = 0
        self.ctx.trace = []
        self.ctx.best = (np.inf, self.ctx.values)
        self.ctx.previous = None
        self._evaluate()
        self.report(f'rho={problem.rho:g} at pole {problem.pole} on {problem.graph!r}, '
                    f'initial sup|F|={self.ctx.residual_sup:.3e}')

    def _evaluate(self):
        values = self.ctx.values
        self.ctx.residual = _residual(self.problem, values, self.ctx.source)
        self.ctx.residual_sup = float(np.max(np.abs(self.ctx.residual)))
        self.ctx.J = _functional(self.problem, values)
        if self.ctx.residual_sup < self.ctx.best[0]:
            self.ctx.best = (self.ctx.residual_sup, values)

    def _record(self, phase, step):
        self.ctx.iteration += 1
        self._logger.debug('%s %d: J=%.12g sup|F|=%.3e step=%.3e', phase, self.ctx.iteration, self.ctx.J,
                           self.ctx.residual_sup, step)
        if self.parameters['verbose']:
            self.ctx.trace.append({
                'iteration': self.ctx.iteration,
                'phase': phase,
                'J': self.ctx.J,
                'residual_sup': self.ctx.residual_sup,
                'step': step,
            })

    def is_converged(self):
        defect = abs(math.exp(logsumexp(self.ctx.values, b=self.ctx.measure)) - self.problem.rho)
        return self.ctx.residual_sup <= self.parameters['tol'] and defect <= 1e-10 * self.problem.rho

    def should_continue(self):
        return not self.is_converged() and self.ctx.iteration < self.parameters['max_iters']

    def _trial(self, values):
        """Projected trial point, or None if it leaves the exp guard."""
        try:
            return _project(self.problem, values, self.parameters['exp_guard'])
        except ExpOverflow:
            return None

    def run_gradient(self):
        """Projected gradient steps until Newton can take over. Returns False on stagnation."""
        self._step = 'run_gradient'
        problem, measure = self.problem, self.ctx.measure
        parameters = self.parameters
        while self.should_continue() and self.ctx.residual_sup >= self.ctx.newton_switch:
            values = self.ctx.values
            gradient = self.ctx.source - laplacian_values(problem.graph, values)
            exponential = np.exp(values)
            direction = gradient - _multiplier(problem, gradient, exponential) * exponential
            slope = float(np.dot(direction * direction, measure))
            if slope == 0.0:
                return False

            if self.ctx.previous is None:
                step = 1.0 / (2.0 * float(np.max(problem.graph.degree / measure)) + float(exponential.max()))
            else:
                last_values, last_direction = self.ctx.previous
                s_vec, y_vec = values - last_values, direction - last_direction
                curvature = float(np.dot(s_vec * y_vec, measure))
                step = float(np.dot(s_vec * s_vec, measure)) / curvature if curvature > 0 else STEP_MAX
            step = min(max(step, STEP_MIN), STEP_MAX)

            for _ in range(parameters['max_backtracks']):
                trial = self._trial(values - step * direction)
                if trial is not None and _functional(problem, trial) <= self.ctx.J - parameters['armijo'] * step * slope:
                    break
                step *= 0.5
            else:
                self.report(f'line search failed at iteration {self.ctx.iteration}, sup|F|={self.ctx.residual_sup:.3e}')
                return False

            self.ctx.previous = (values, direction)
            self.ctx.values = trial
            self._evaluate()
            self.ctx.gradient_iterations += 1
            self._record('gradient', step)
        return True

    def _newton_direction(self):
        graph = self.problem.graph
        values = self.ctx.values
        load = -self.ctx.measure * self.ctx.residual
        diagonal = self.ctx.measure * np.exp(values)
        if graph.num_vertices <= DENSE_LIMIT:
            if getattr(self.ctx, 'dense_stiffness', None) is None:
                self.ctx.dense_stiffness = graph.stiffness_matrix.toarray()
            jacobian = np.diag(diagonal) - self.ctx.dense_stiffness
            return scipy.linalg.solve(jacobian, load, assume_a='sym')
        jacobian = (sp.diags(diagonal) - graph.stiffness_matrix).tocsc()
        return spsolve(jacobian, load)

    def run_newton(self):
        """Damped Newton steps on F, projected onto B. Returns False if a step fails."""
        self._step = 'run_newton'
        measure = self.ctx.measure
        while self.should_continue():
            try:
                direction = self._newton_direction()
            except (np.linalg.LinAlgError, ValueError) as exc:
                self.report(f'Newton system could not be solved: {exc}')
                return False
            if not np.all(np.isfinite(direction)):
                self.report('Newton direction is not finite')
                return False

            merit = float(np.dot(self.ctx.residual**2, measure))
            step = 1.0
            for _ in range(self.parameters['max_backtracks']):
                trial = self._trial(self.ctx.values + step * direction)
                if trial is not None:
                    trial_residual = _residual(self.problem, trial, self.ctx.source)
                    if float(np.dot(trial_residual**2, measure)) <= (1.0 - 1e-4 * step) * merit:
                        break
                step *= 0.5
            else:
                self.report(f'Newton line search failed, sup|F|={self.ctx.residual_sup:.3e}')
                return False

            self.ctx.values = trial
            self._evaluate()
            self.ctx.newton_iterations += 1
            self._record('newton', step)
        return True

    def return_results(self):
        """Build the report from the final (or best) iterate."""
        self._step = 'return_results'
        converged = self.is_converged()
        values = self.ctx.values if converged else self.ctx.best[1]
        report = self.build_report(VertexField(self.problem.graph, values), converged)
        if converged:
            self.report(f'converged after {report.gradient_iterations} gradient and {report.newton_iterations} '
                        f'Newton steps: sup|F|={report.residual_sup:.3e}, J={report.J_value:.10g}')
        return VertexField(self.problem.graph, values), report

    def build_report(self, field_u, converged):
        problem = self.problem
        values = field_u.values
        gradient = problem.source - laplacian_values(problem.graph, values)
        exponential = np.exp(values)
        return VariationalReport(
            J_value=_functional(problem, values),
            constraint_defect=abs(float(np.dot(exponential, self.ctx.measure)) - problem.rho),
            residual_sup=float(np.max(np.abs(_residual(problem, values, self.ctx.source)))),
            lagrange_multiplier=_multiplier(problem, gradient, exponential),
            iterations=self.ctx.iteration,
            gradient_iterations=self.ctx.gradient_iterations,
            newton_iterations=self.ctx.newton_iterations,
            converged=converged,
            status='converged' if converged else 'max_iterations',
            trace=self.ctx.trace,
        )

    def run(self, initial=None):
        """Run the outline.

        :returns: ``(u, VariationalReport)``
        :raises MaxIterationsExceeded: with the best iterate and its report attached
        """
        self.setup(initial)
        while self.should_continue():
            gradient_ok = self.run_gradient()
            if not self.should_continue():
                break
            if self.run_newton():
                continue
            self.ctx.newton_switch /= 10.0
            if not gradient_ok:
                break

        field_u, report = self.return_results()
        if not report.converged:
            self.report(f'no convergence within {self.ctx.iteration} iterations, best sup|F|={report.residual_sup:.3e}')
            raise MaxIterationsExceeded(f'Dirac solve did not converge: sup|F|={report.residual_sup:.3e}',
                                        field=field_u,
                                        report=report)
        return field_u, report


def solve_dirac_mfe(problem, parameters=None, initial=None):
    """Solve Delta u + e^u = rho delta_x0; see DiracMfeSolver."""
    return DiracMfeSolver(problem, parameters).run(initial)
