# -*- coding: utf-8 -*-
"""Exceptions and exit codes of graph-mfe."""
from collections import namedtuple

__all__ = (
    'GraphMfeError',
    'GraphValidationError',
    'FieldBindingError',
    'UnknownVertexError',
    'CompatibilityViolated',
    'NonpositiveK',
    'DegenerateLatticeError',
    'InvalidTorusSpec',
    'NonFiniteField',
    'InvalidProblem',
    'SolveFailed',
    'ExpOverflow',
    'MaxIterationsExceeded',
    'BudgetExhausted',
    'AmbiguousCriticalSet',
    'ExitCode',
    'EXIT_CODES',
)


class GraphMfeError(Exception):
    """Base class of every error raised by graph-mfe."""


class GraphValidationError(GraphMfeError, ValueError):
    """The graph description violates an invariant (disconnected, nonpositive weight or measure, self-loop)."""


class FieldBindingError(GraphMfeError, ValueError):
    """A vertex field is used with a graph it is not bound to."""


class UnknownVertexError(GraphMfeError, ValueError):
    """A vertex id does not belong to the graph."""


class CompatibilityViolated(GraphMfeError, ValueError):
    """The right-hand side of a Poisson equation does not integrate to zero."""


class NonpositiveK(GraphMfeError, ValueError):
    """The screening constant of (Laplacian - K) is not admissible."""


class DegenerateLatticeError(GraphMfeError, ValueError):
    """The period vectors of a torus do not span a rank 2 sublattice."""


class InvalidTorusSpec(GraphMfeError, ValueError):
    """Torus preset used with an incompatible refinement (e.g. odd n)."""


class NonFiniteField(GraphMfeError, ValueError):
    """A vertex field would hold NaN or infinite values."""


class InvalidProblem(GraphMfeError, ValueError):
    """Problem data out of range: nonpositive rho or lambda, no vortices."""


class SolveFailed(GraphMfeError, RuntimeError):
    """A linear solve stagnated or missed its residual contract."""


class ExpOverflow(GraphMfeError, RuntimeError):
    """A field is too large for exp() to stay representable."""


class MaxIterationsExceeded(GraphMfeError, RuntimeError):
    """A nonlinear solve ran out of iterations. Carries the best iterate and its report."""

    def __init__(self, message, field=None, report=None):
        super().__init__(message)
        self.field = field
        self.report = report


class BudgetExhausted(GraphMfeError, RuntimeError):
    """The lambda_c search could not find a succeeding upper value. Carries the reports gathered."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or []


class AmbiguousCriticalSet(GraphMfeError, RuntimeError):
    """The number of additional critical points is not two."""

    def __init__(self, message, points=None):
        super().__init__(message)
        self.points = points or []


ExitCode = namedtuple('ExitCode', ['status', 'message'])

EXIT_CODES = {
    'SUCCESS': ExitCode(0, 'Finished successfully'),
    'DIVERGED': ExitCode(1, 'The monotone iteration diverged: evidence that no solution exists at this lambda'),
    'ERROR_INVALID_INPUT': ExitCode(2, 'Invalid input: unreadable file, bad parameters or bad graph'),
    'ERROR_MAX_ITERATIONS': ExitCode(3, 'The solver exhausted its iteration budget without converging'),
    'ERROR_BUDGET_EXHAUSTED': ExitCode(4, 'The lambda_c search never found a succeeding upper value'),
    'ERROR_VERIFY_MISMATCH': ExitCode(5, 'The recomputed residual does not match the stored one'),
    'ERROR_SOLVE_FAILED': ExitCode(6, 'A linear solve or a check on the converged solution failed'),
}
