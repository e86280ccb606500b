# -*- coding: utf-8 -*-
"""Tests for the Poisson and screened solves"""
import numpy as np
import pytest

from graph_mfe.exceptions import CompatibilityViolated, NonpositiveK
from graph_mfe.graphs import VertexField, integrate, laplacian_apply, random_connected_graph
from graph_mfe.solvers import (ScreenedOperator, SolveMethod, green_function, maximum_principle_holds, solve_poisson,
                               solve_screened)


def _compatible_field(graph, rng):
    values = rng.normal(size=graph.num_vertices)
    return VertexField(graph, values - np.dot(values, graph.measure) / graph.volume)


def test_poisson_k2(k2_graph):
    solution, report = solve_poisson(k2_graph, VertexField.from_mapping(k2_graph, {'a': 1.0, 'b': -1.0}))
    assert solution.values == pytest.approx([-0.5, 0.5])
    assert report.method is SolveMethod.DIRECT
    assert report.residual_sup < 1e-12


def test_poisson_zero_rhs(random_graph_factory):
    graph = random_graph_factory(10, seed=1)
    solution, _ = solve_poisson(graph, VertexField.zeros(graph))
    assert np.max(np.abs(solution.values)) < 1e-14


@pytest.mark.parametrize('seed', range(25))
def test_poisson_matches_pseudo_inverse(random_graph_factory, seed):
    """The dense solve agrees with a pseudo-inverse of the stiffness matrix."""
    rng = np.random.default_rng(seed)
    graph = random_graph_factory(int(rng.integers(2, 31)), seed)
    field = _compatible_field(graph, rng)

    solution, _ = solve_poisson(graph, field)

    oracle = np.linalg.pinv(graph.stiffness_matrix.toarray()) @ (-graph.measure * field.values)
    oracle -= np.dot(oracle, graph.measure) / graph.volume
    assert np.max(np.abs(solution.values - oracle)) < 1e-10
    assert abs(integrate(graph, solution)) < 1e-10


def test_poisson_iterative_path(random_graph_factory):
    rng = np.random.default_rng(42)
    graph = random_graph_factory(60, seed=42)
    field = _compatible_field(graph, rng)

    direct, _ = solve_poisson(graph, field, method=SolveMethod.DIRECT)
    iterative, report = solve_poisson(graph, field, method=SolveMethod.ITERATIVE)

    assert report.method is SolveMethod.ITERATIVE
    assert report.iterations > 0
    assert report.residual_sup <= 1e-9 * max(1.0, float(np.max(np.abs(field.values))))
    assert np.max(np.abs(direct.values - iterative.values)) < 1e-7


def test_poisson_inverts_laplacian(random_graph_factory):
    """Solving Delta v = Delta u gives u minus its mean."""
    rng = np.random.default_rng(0)
    graph = random_graph_factory(30, seed=0)
    field = VertexField(graph, rng.normal(size=graph.num_vertices))
    solution, _ = solve_poisson(graph, laplacian_apply(graph, field))
    expected = field.values - integrate(graph, field) / graph.volume
    assert np.max(np.abs(solution.values - expected)) < 1e-9


def test_poisson_incompatible(k2_graph):
    with pytest.raises(CompatibilityViolated):
        solve_poisson(k2_graph, VertexField.constant(k2_graph, 1.0))


def test_poisson_single_vertex(single_vertex_graph):
    solution, _ = solve_poisson(single_vertex_graph, VertexField.zeros(single_vertex_graph))
    assert solution.values == pytest.approx([0.0])


def test_screened_k2(k2_graph):
    solution, _ = solve_screened(k2_graph, 1.0, VertexField.from_mapping(k2_graph, {'a': 1.0, 'b': -1.0}))
    assert solution.values == pytest.approx([-1.0 / 3.0, 1.0 / 3.0])


def test_screened_constants(random_graph_factory):
    graph = random_graph_factory(8, seed=4)
    solution, _ = solve_screened(graph, 2.5, VertexField.constant(graph, 5.0))
    assert solution.values == pytest.approx(np.full(graph.num_vertices, -2.0))
    zero, _ = solve_screened(graph, 2.5, VertexField.zeros(graph))
    assert np.max(np.abs(zero.values)) < 1e-14


@pytest.mark.parametrize('screening', [0.0, -1.0])
def test_screened_needs_positive_k(k2_graph, screening):
    with pytest.raises(NonpositiveK):
        solve_screened(k2_graph, screening, VertexField.zeros(k2_graph))


def test_screened_iterative_matches_direct(random_graph_factory):
    rng = np.random.default_rng(9)
    graph = random_graph_factory(50, seed=9)
    rhs = rng.normal(size=graph.num_vertices)
    direct = ScreenedOperator(graph, 3.0, SolveMethod.DIRECT).solve_values(rhs)
    iterative_operator = ScreenedOperator(graph, 3.0, SolveMethod.ITERATIVE)
    iterative = iterative_operator.solve_values(rhs)
    assert np.max(np.abs(direct - iterative)) < 1e-9
    assert iterative_operator.residual_sup(iterative, rhs) < 1e-9


def test_maximum_principle():
    """(Delta - K) v = f >= 0 forces v <= 0, on randomized instances."""
    rng = np.random.default_rng(2024)
    for trial in range(100):
        graph = random_connected_graph(int(rng.integers(1, 20)), seed=trial)
        screening = float(rng.uniform(0.1, 10.0))
        field = VertexField(graph, rng.uniform(0.0, 5.0, size=graph.num_vertices))
        solution, _ = solve_screened(graph, screening, field)
        assert solution.values.max() <= 1e-12
        assert maximum_principle_holds(graph, screening, solution, 1e-10)


def test_maximum_principle_examples(k2_graph):
    assert maximum_principle_holds(k2_graph, 1.0, VertexField.zeros(k2_graph), 0.0)
    assert maximum_principle_holds(k2_graph, 1.0, VertexField.constant(k2_graph, -1.0), 0.0)
    with pytest.raises(NonpositiveK):
        maximum_principle_holds(k2_graph, -1.0, VertexField.zeros(k2_graph), 0.0)


def test_green_function_k2(k2_graph):
    green = green_function(k2_graph, 'a')
    assert green.values == pytest.approx([-0.25, 0.25])
    assert laplacian_apply(k2_graph, green).values == pytest.approx([0.5, -0.5])


def test_green_function_single_vertex(single_vertex_graph):
    assert green_function(single_vertex_graph, 'x').values == pytest.approx([0.0])


def test_green_function_symmetry(random_graph_factory):
    """G_x(y) = G_y(x) when mu is uniform."""
    rng = np.random.default_rng(17)
    for seed in range(5):
        graph = random_graph_factory(20, seed, measure_range=(1.0, 1.0))
        first, second = rng.choice(graph.vertices, size=2, replace=False)
        assert green_function(graph, first)[second] == pytest.approx(green_function(graph, second)[first], abs=1e-10)
