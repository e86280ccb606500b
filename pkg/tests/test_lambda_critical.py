# -*- coding: utf-8 -*-
"""Tests for the lambda_c bracketing"""
import math

import numpy as np
import pytest
from scipy.optimize import brentq

from graph_mfe.exceptions import BudgetExhausted
from graph_mfe.solvers import LambdaCriticalSearch, estimate_lambda_c, necessary_lambda_bound

SIXTEEN_PI = 16.0 * math.pi


def k2_lambda_c():
    """lambda_c on K_2 (w = 1, mu = 1) with one vortex at 'a'.

    With s = e^u_a and t = e^u_b the two vertex equations read log(t / s) = lambda t (1 - t) and
    lambda (s (1 - s) + t (1 - t)) = 4 pi. Eliminating s, a solution exists iff
    max_t lambda h(t) >= 4 pi where h(t) = s (1 - s) + t (1 - t) and s = t exp(-lambda t (1 - t)).
    """
    grid = np.linspace(1e-6, 1.0 - 1e-6, 400001)

    def excess(lam):
        lower = grid * np.exp(-lam * grid * (1.0 - grid))
        return lam * float(np.max(lower * (1.0 - lower) + grid * (1.0 - grid))) - 4.0 * math.pi

    return brentq(excess, 8.0 * math.pi, 1000.0, xtol=1e-10)


def test_single_vertex_bracket(single_vertex_graph):
    """One vertex with one vortex has lambda_c = 16 pi exactly."""
    bracket = estimate_lambda_c(single_vertex_graph, ['x'])
    assert bracket.lower <= SIXTEEN_PI <= bracket.upper
    assert bracket.width <= 1e-3 * SIXTEEN_PI
    assert bracket.lower >= bracket.bound_necessary - 1e-3 * SIXTEEN_PI
    assert bracket.upper_report.converged
    assert bracket.evaluations[1]['status'] == 'below_necessary_bound'
    # no solve runs at a lower end taken from the necessary bound
    assert (bracket.lower_report is None) == (bracket.lower < bracket.bound_necessary)


def test_bracket_is_deterministic(single_vertex_graph):
    parameters = {'rel_width': 0.05}
    first = estimate_lambda_c(single_vertex_graph, ['x'], parameters)
    second = estimate_lambda_c(single_vertex_graph, ['x'], parameters)
    assert (first.lower, first.upper) == (second.lower, second.upper)
    assert first.evaluations == second.evaluations


def test_k2_bracket(k2_graph):
    bound = necessary_lambda_bound(k2_graph, 1)
    lambda_c = k2_lambda_c()
    assert 8.0 * math.pi < lambda_c < 1000.0

    bracket = estimate_lambda_c(k2_graph, ['a'], {'rel_width': 1e-2, 'max_iters': 20000})
    assert bracket.bound_necessary == pytest.approx(bound)
    assert bracket.width <= 1e-2 * bound
    assert bracket.upper_report.converged
    assert bracket.lower_report is not None
    assert not bracket.lower_report.converged
    assert lambda_c <= bracket.upper + 1e-6
    assert bracket.lower >= lambda_c - bracket.width
    # slow convergence next to lambda_c may count as a failure, never by more than a few widths
    assert bracket.lower <= lambda_c + 5.0 * bracket.width

    result = bracket.as_dict()
    assert result['width'] == pytest.approx(result['upper'] - result['lower'])
    assert result['upper_report']['status'] == 'converged'
    assert result['lower_report']['status'] != 'converged'


def test_k2_bracket_is_deterministic(k2_graph):
    parameters = {'rel_width': 0.05, 'max_iters': 20000}
    first = estimate_lambda_c(k2_graph, ['a'], parameters)
    second = estimate_lambda_c(k2_graph, ['a'], parameters)
    assert (first.lower, first.upper) == (second.lower, second.upper)
    assert first.evaluations == second.evaluations


def test_absolute_width(single_vertex_graph):
    bracket = estimate_lambda_c(single_vertex_graph, ['x'], {'width': 1.0})
    assert bracket.width <= 1.0
    assert bracket.lower <= SIXTEEN_PI <= bracket.upper


def test_budget_exhausted(single_vertex_graph):
    with pytest.raises(BudgetExhausted) as excinfo:
        estimate_lambda_c(single_vertex_graph, ['x'], {'max_doublings': 1, 'max_iters': 1})
    assert len(excinfo.value.evidence) == 2
    assert all(evaluation['status'] != 'converged' for evaluation in excinfo.value.evidence)


def test_search_steps(single_vertex_graph):
    """The outline steps can be driven one at a time."""
    search = LambdaCriticalSearch(single_vertex_graph, ['x'], {'upper_guess': 100.0, 'rel_width': 0.1})
    search.setup()
    assert search.ctx.bound == pytest.approx(SIXTEEN_PI)
    search.find_upper()
    assert search.ctx.upper == 100.0
    search.bisect()
    result = search.return_results()
    assert result.upper - result.lower <= 0.1 * SIXTEEN_PI
