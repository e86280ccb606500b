# -*- coding: utf-8 -*-
"""Bracketing the critical coupling lambda_c of the vortex equation.

The set of lambda for which a solution exists is an interval unbounded above, so a succeeding upper
value and a failing lower value can be bisected. The bracket is never collapsed to a point claim.
"""
from dataclasses import dataclass, field
from types import SimpleNamespace

from graph_mfe.exceptions import BudgetExhausted
from graph_mfe.parameters_schemas import LAMBDA_C_PARAMETERS, VORTEX_PARAMETERS
from graph_mfe.utils import ReportMixin
from .monotone import VortexProblem, VortexMfeSolver, necessary_lambda_bound, solve_background

__all__ = ('LambdaCritical', 'LambdaCriticalSearch', 'estimate_lambda_c')

VORTEX_KEYS = tuple(marker.schema for marker in VORTEX_PARAMETERS.schema)


@dataclass
class LambdaCritical:
    """Bracket [lower, upper] of lambda_c with the solver reports on both ends.

    ``lower_report`` is the report of the failed solve at ``lower``. When every solve converged, ``lower``
    comes from the necessary bound 16 pi M / Vol instead, no solve is run there and ``lower_report`` is
    None; the matching entry of ``evaluations`` has status ``below_necessary_bound``.
    """
    lower: float
    upper: float
    bound_necessary: float
    lower_report: object = None
    upper_report: object = None
    evaluations: list = field(default_factory=list)

    @property
    def width(self):
        return self.upper - self.lower

    def as_dict(self):
        return {
            'lower': self.lower,
            'upper': self.upper,
            'width': self.width,
            'bound_necessary': self.bound_necessary,
            'lower_report': self.lower_report.as_dict() if self.lower_report else None,
            'upper_report': self.upper_report.as_dict() if self.upper_report else None,
            'evaluations': self.evaluations,
        }


class LambdaCriticalSearch(ReportMixin):
    """Double an upper guess until the monotone iteration converges, then bisect.

    Outline: ``setup`` -> ``find_upper`` -> ``bisect`` -> ``return_results``. Evaluations run one after
    the other, so the bracket only depends on the inputs.
    """

    parameters_schema = LAMBDA_C_PARAMETERS
    parameters_info = parameters_schema.schema  # shorthand for printing

    def __init__(self, graph, vortices, parameters=None):
        self.graph = graph
        self.vortices = tuple(str(vortex) for vortex in vortices)
        self.parameters = self.parameters_schema(dict(parameters or {}))
        self.ctx = SimpleNamespace()

    def setup(self):
        self._step = 'setup'
        parameters = self.parameters
        self.ctx.background = solve_background(self.graph, self.vortices)
        self.ctx.bound = necessary_lambda_bound(self.graph, len(self.vortices))
        self.ctx.width = parameters.get('width') or parameters['rel_width'] * self.ctx.bound
        self.ctx.solver_parameters = {key: parameters[key] for key in VORTEX_KEYS if key in parameters}
        self.ctx.solver_parameters['record_fields'] = False
        self.ctx.evaluations = []
        self.ctx.lower = self.ctx.lower_report = None
        self.ctx.upper = self.ctx.upper_report = None
        self.report(f'necessary bound 16 pi M / Vol = {self.ctx.bound:.10g}, target width {self.ctx.width:.3g}')

    def evaluate(self, lam):
        """Run the vortex solver at one lambda; returns ``(converged, report)``."""
        problem = VortexProblem(self.graph, lam, self.vortices)
        _, _, report = VortexMfeSolver(problem, self.ctx.solver_parameters, self.ctx.background).run()
        self.ctx.evaluations.append({'lambda': lam, 'status': report.status, 'iterations': report.iterations})
        self.report(f'lambda={lam:.12g}: {report.status} after {report.iterations} iterations')
        return report.converged, report

    def find_upper(self):
        """Double the upper guess until a solve converges; failures become the lower end."""
        self._step = 'find_upper'
        upper = self.parameters.get('upper_guess') or 2.0 * self.ctx.bound
        for _ in range(self.parameters['max_doublings'] + 1):
            converged, report = self.evaluate(upper)
            if converged:
                self.ctx.upper, self.ctx.upper_report = upper, report
                break
            self.ctx.lower, self.ctx.lower_report = upper, report
            upper *= 2.0
        else:
            raise BudgetExhausted(f'No converging lambda found up to {upper / 2.0:.6g}', evidence=self.ctx.evaluations)

        if self.ctx.lower is None:
            # no solution exists below the necessary bound, so this end needs no solve
            lower = max(self.ctx.bound - 0.5 * self.ctx.width, 0.5 * self.ctx.bound)
            self.ctx.evaluations.append({'lambda': lower, 'status': 'below_necessary_bound', 'iterations': 0})
            self.report(f'lambda={lower:.12g}: below the necessary bound, taken as the lower end')
            self.ctx.lower = lower

    def bisect(self):
        self._step = 'bisect'
        for _ in range(self.parameters['max_bisections']):
            if self.ctx.upper - self.ctx.lower <= self.ctx.width:
                break
            middle = 0.5 * (self.ctx.lower + self.ctx.upper)
            converged, report = self.evaluate(middle)
            if converged:
                self.ctx.upper, self.ctx.upper_report = middle, report
            else:
                self.ctx.lower, self.ctx.lower_report = middle, report

    def return_results(self):
        self._step = 'return_results'
        self.report(f'lambda_c in [{self.ctx.lower:.12g}, {self.ctx.upper:.12g}] '
                    f'after {len(self.ctx.evaluations)} solves')
        return LambdaCritical(lower=self.ctx.lower,
                              upper=self.ctx.upper,
                              bound_necessary=self.ctx.bound,
                              lower_report=self.ctx.lower_report,
                              upper_report=self.ctx.upper_report,
                              evaluations=self.ctx.evaluations)

    def run(self):
        self.setup()
        self.find_upper()
        self.bisect()
        return self.return_results()


def estimate_lambda_c(graph, vortices, parameters=None):
    """Bracket lambda_c; see LambdaCriticalSearch.

    :raises BudgetExhausted: if no upper guess converges within ``max_doublings`` doublings
    """
    return LambdaCriticalSearch(graph, vortices, parameters).run()
