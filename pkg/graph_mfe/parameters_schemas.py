# -*- coding: utf-8 -*-
"""Schemas for validating solver parameters.

Every solver validates its options against one of these schemas, which also fills in the defaults.
"""
__all__ = ('Required', 'Optional', 'NUMBER', 'DIRAC_PARAMETERS', 'VORTEX_PARAMETERS', 'LAMBDA_C_PARAMETERS',
           'TORUS_PARAMETERS', 'SECTION_SCHEMAS')
import voluptuous


def show_description(cls):
    """Adds description to representation of voluptuous Marker.

    This makes the description show up in the sphinx autodoc and in ``graph-mfe protocols``.
    """

    def __repr__(self):
        if self.description:
            return f'{self.__class__.__name__}({repr(self.schema)}, description={repr(self.description)})'
        return repr(self.schema)

    setattr(cls, '__repr__', __repr__)
    return cls


Required = show_description(voluptuous.Required)
Optional = show_description(voluptuous.Optional)
Any = voluptuous.Any
Schema = voluptuous.Schema

NUMBER = voluptuous.Any(int, float)
POSITIVE = voluptuous.All(NUMBER, voluptuous.Range(min=0, min_included=False))
POSITIVE_INT = voluptuous.All(int, voluptuous.Range(min=1))

DIRAC_PARAMETERS = voluptuous.Schema({
    Required('tol', default=1e-8, description='Sup-norm tolerance on the residual of the Dirac equation.'):
        POSITIVE,
    Required('max_iters', default=10000, description='Maximum number of gradient plus Newton iterations.'):
        POSITIVE_INT,
    Required('newton_switch',
             default=1e-3,
             description='Switch from projected gradient to Newton once the residual sup-norm drops below this.'):
        POSITIVE,
    Required('armijo', default=1e-4, description='Sufficient decrease constant of the backtracking line search.'):
        POSITIVE,
    Required('max_backtracks', default=60, description='Step halvings before a line search gives up.'):
        POSITIVE_INT,
    Required('exp_guard', default=700.0, description='Iterates with max(u) above this are rejected.'):
        POSITIVE,
    Required('verbose', default=False, description='Record the per-iteration trace in the report.'):
        bool,
})

VORTEX_PARAMETERS = voluptuous.Schema({
    Required('tol', default=1e-8, description='Sup-norm tolerance on the residual of the transformed equation.'):
        POSITIVE,
    Required('max_iters', default=100000, description='Maximum number of monotone iterations.'):
        POSITIVE_INT,
    Optional('K', description='Screening constant of the iteration; must be >= 2*lambda. Default: K_factor*lambda.'):
        POSITIVE,
    Required('K_factor', default=2.0, description='K = K_factor * lambda when K is not given.'):
        voluptuous.All(NUMBER, voluptuous.Range(min=2.0)),
    Required('step_tol', default=1e-12, description='Sup-norm of v_n - v_(n-1) required for convergence.'):
        POSITIVE,
    Optional('divergence_floor',
             description='Declare divergence once min(v_n) drops below -floor. Default: sup|u0| + 50.'):
        POSITIVE,
    Required('divergence_margin', default=50.0, description='Margin added to sup|u0| for the default floor.'):
        POSITIVE,
    Required('stall_window',
             default=1000,
             description='Iterations without residual decrease after which a stalled run is reported.'):
        POSITIVE_INT,
    Required('record_fields', default=True, description='Keep every iterate v_n in the trace.'):
        bool,
})

LAMBDA_C_PARAMETERS = VORTEX_PARAMETERS.extend({
    Optional('upper_guess',
             description='Initial upper value of lambda, doubled until a solve succeeds. '
             'Default: twice the necessary bound.'):
        POSITIVE,
    Optional('width', description='Absolute target width of the final bracket.'):
        POSITIVE,
    Required('rel_width', default=1e-3,
             description='Target width relative to the necessary bound, used when width is not given.'):
        POSITIVE,
    Required('max_doublings', default=30, description='Doubling budget of the upper guess.'):
        POSITIVE_INT,
    Required('max_bisections', default=200, description='Safety cap on bisection steps.'):
        POSITIVE_INT,
})

TORUS_PARAMETERS = voluptuous.Schema({
    Required('tol', default=1e-12, description='Tolerance under which central differences count as vanishing.'):
        POSITIVE,
    Required('cell_slack',
             default=0.05,
             description='Slack added to the half-cell when accepting a refined stationary point.'):
        NUMBER,
    Required('degenerate_tol',
             default=1e-12,
             description='Relative size of the Hessian determinant below which a point is degenerate.'):
        POSITIVE,
    Required('slope_target', default=25.0 / 64.0, description='Reference slope of the line through the extra points.'):
        NUMBER,
    Required('slope_rel_tol', default=0.05, description='Relative deviation above which a warning is logged.'):
        POSITIVE,
})

SECTION_SCHEMAS = {
    'dirac': DIRAC_PARAMETERS,
    'vortex': VORTEX_PARAMETERS,
    'lambda_c': LAMBDA_C_PARAMETERS,
    'torus': TORUS_PARAMETERS,
}
