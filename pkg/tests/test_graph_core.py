# -*- coding: utf-8 -*-
"""Tests for weighted graphs, vertex fields and the basic operators"""
import json

import numpy as np
import pytest
from scipy.linalg import null_space

from graph_mfe.exceptions import (FieldBindingError, GraphValidationError, InvalidProblem, NonFiniteField,
                                  UnknownVertexError)
from graph_mfe.graphs import (VertexField, WeightedGraph, dirac_field, dirichlet_energy, graph_from_dict, inner,
                              integrate, laplacian_apply, load_graph, random_connected_graph, sup_norm_and_mean)


def test_k2_laplacian(k2_graph):
    """Delta u(a) = u(b) - u(a) on K_2."""
    field = VertexField.from_mapping(k2_graph, {'a': 0.0, 'b': 1.0})
    laplacian = laplacian_apply(k2_graph, field)
    assert laplacian['a'] == pytest.approx(1.0)
    assert laplacian['b'] == pytest.approx(-1.0)
    assert dirichlet_energy(k2_graph, field) == pytest.approx(0.5)


def test_measure_enters_laplacian():
    graph = WeightedGraph(['a', 'b'], [('a', 'b', 3.0)], {'a': 2.0, 'b': 0.5})
    laplacian = laplacian_apply(graph, VertexField(graph, [0.0, 1.0]))
    assert laplacian.values == pytest.approx([1.5, -6.0])


def test_parallel_edges_are_merged():
    graph = WeightedGraph(['a', 'b'], [('a', 'b', 1.0), ('b', 'a', 0.5)])
    assert graph.num_edges == 1
    assert graph.edges == [('a', 'b', 1.5)]
    assert graph.degree == pytest.approx([1.5, 1.5])


@pytest.mark.parametrize('vertices,edges,measure', [
    (['a', 'b'], [], None),
    (['a', 'b'], [('a', 'b', 0.0)], None),
    (['a', 'b'], [('a', 'b', -1.0)], None),
    (['a', 'b'], [('a', 'a', 1.0), ('a', 'b', 1.0)], None),
    (['a', 'b'], [('a', 'b', 1.0)], {'a': 0.0}),
    (['a', 'a'], [], None),
    ([], [], None),
])
def test_invalid_graphs(vertices, edges, measure):
    """Disconnected graphs, nonpositive weights or measures, loops and duplicate ids are rejected."""
    with pytest.raises(GraphValidationError):
        WeightedGraph(vertices, edges, measure)


def test_unknown_vertex_in_edge():
    with pytest.raises(UnknownVertexError):
        WeightedGraph(['a', 'b'], [('a', 'c', 1.0)])


def test_integral_of_laplacian_vanishes(random_graph_factory):
    """int Delta u dmu = 0 and E(u) = -1/2 int u Delta u dmu."""
    rng = np.random.default_rng(3)
    for seed in range(10):
        graph = random_graph_factory(int(rng.integers(2, 40)), seed)
        field = VertexField(graph, rng.normal(size=graph.num_vertices))
        laplacian = laplacian_apply(graph, field)
        assert abs(integrate(graph, laplacian)) < 1e-10
        assert dirichlet_energy(graph, field) == pytest.approx(-0.5 * inner(graph, field, laplacian), rel=1e-10)


def test_laplacian_matrix_matches_edge_form(random_graph_factory):
    graph = random_graph_factory(25, seed=11)
    values = np.linspace(-1.0, 2.0, graph.num_vertices)
    assert graph.laplacian_matrix @ values == pytest.approx(laplacian_apply(graph, VertexField(graph, values)).values)


def test_dirac_field_counts_multiplicity():
    graph = WeightedGraph(['a', 'b'], [('a', 'b')], {'a': 2.0, 'b': 1.0})
    source = dirac_field(graph, ['a', 'a', 'b'])
    assert source.total_multiplicity == 3
    assert source.realization.values == pytest.approx([1.0, 1.0])
    assert integrate(graph, source.realization) == pytest.approx(3.0)

    with pytest.raises(InvalidProblem):
        dirac_field(graph, [])
    with pytest.raises(UnknownVertexError):
        dirac_field(graph, ['z'])


def test_field_binding(k2_graph, single_vertex_graph):
    field = VertexField.zeros(k2_graph)
    with pytest.raises(FieldBindingError):
        laplacian_apply(single_vertex_graph, field)
    with pytest.raises(FieldBindingError):
        VertexField(k2_graph, [1.0])
    with pytest.raises(NonFiniteField):
        VertexField(k2_graph, [0.0, np.nan])
    with pytest.raises(FieldBindingError):
        VertexField.from_mapping(k2_graph, {'a': 1.0})

    # a field stays bound to an identical rebuild of its graph
    rebuilt = WeightedGraph(['a', 'b'], [('a', 'b', 1.0)])
    assert field.is_bound_to(rebuilt)
    assert sup_norm_and_mean(rebuilt, field) == (0.0, 0.0)


def test_field_is_read_only(k2_graph):
    field = VertexField(k2_graph, [1.0, 2.0])
    with pytest.raises(ValueError):
        field.values[0] = 3.0
    shifted = field + 1.0
    assert shifted.values == pytest.approx([2.0, 3.0])
    assert (field - shifted).values == pytest.approx([-1.0, -1.0])


def test_relabeling_commutes_with_laplacian(random_graph_factory):
    graph = random_graph_factory(12, seed=5)
    mapping = {vertex: f'v{vertex}' for vertex in graph.vertices}
    relabeled = graph.relabeled(mapping)
    values = np.arange(graph.num_vertices, dtype=float)
    original = laplacian_apply(graph, VertexField(graph, values)).as_dict()
    renamed = laplacian_apply(relabeled, VertexField(relabeled, values)).as_dict()
    for vertex, value in original.items():
        assert renamed[mapping[vertex]] == pytest.approx(value)
    assert relabeled.fingerprint != graph.fingerprint


def test_random_graph_is_deterministic():
    first = random_connected_graph(20, seed=7)
    second = random_connected_graph(20, seed=7)
    assert first.fingerprint == second.fingerprint
    assert random_connected_graph(20, seed=8).fingerprint != first.fingerprint
    assert np.all((first.measure >= 0.5) & (first.measure <= 2.0))


def test_graph_file(tmp_graph_file, random_graph_factory):
    """A written graph loads back as the same graph."""
    graph = random_graph_factory(15, seed=2)
    path = tmp_graph_file(graph)
    assert load_graph(path).fingerprint == graph.fingerprint


def test_graph_defaults():
    graph = graph_from_dict({'vertices': [{'id': 'a'}, {'id': 'b', 'mu': 2}], 'edges': [{'u': 'a', 'v': 'b'}]})
    assert graph.volume == 3.0
    assert graph.edges == [('a', 'b', 1.0)]


@pytest.mark.parametrize('content', [
    '{"vertices": [{"id": "a"}, {"id": "b"}], "edges": [{"u": "a", "v": "b",',
    '{"vertices": []}',
    '{"vertices": [{"id": "a", "mu": -1}]}',
    '{"vertices": [{"id": "a"}], "edges": [{"u": "a"}]}',
])
def test_malformed_graph_file(tmp_path, content):
    path = tmp_path / 'broken.json'
    path.write_text(content)
    with pytest.raises(GraphValidationError):
        load_graph(path)


def test_graph_file_is_plain_json(tmp_graph_file, k2_graph):
    with open(tmp_graph_file(k2_graph)) as handle:
        graph_dict = json.load(handle)
    assert graph_dict['vertices'] == [{'id': 'a', 'mu': 1.0}, {'id': 'b', 'mu': 1.0}]
    assert graph_dict['edges'] == [{'u': 'a', 'v': 'b', 'w': 1.0}]


def test_summation_by_parts(random_graph_factory):
    """int u Delta v dmu = int v Delta u dmu."""
    rng = np.random.default_rng(17)
    for seed in range(10):
        graph = random_graph_factory(int(rng.integers(2, 40)), seed)
        first = VertexField(graph, rng.normal(size=graph.num_vertices))
        second = VertexField(graph, rng.normal(size=graph.num_vertices))
        assert inner(graph, first, laplacian_apply(graph, second)) == \
            pytest.approx(inner(graph, second, laplacian_apply(graph, first)), rel=1e-10, abs=1e-10)


@pytest.mark.parametrize('seed', range(5))
def test_harmonic_fields_are_constant(random_graph_factory, seed):
    """On a connected graph the kernel of the Laplacian is spanned by the constants."""
    graph = random_graph_factory(10 + 5 * seed, seed)
    kernel = null_space(graph.laplacian_matrix.toarray())
    assert kernel.shape[1] == 1
    assert np.ptp(kernel[:, 0]) <= 1e-10


def test_energy_is_quadratic(k2_graph):
    field = VertexField.from_mapping(k2_graph, {'a': 0.0, 'b': 1.0})
    assert dirichlet_energy(k2_graph, field * 2.0) == pytest.approx(2.0)
    assert dirichlet_energy(k2_graph, field * 2.0) == pytest.approx(4.0 * dirichlet_energy(k2_graph, field))
    assert dirichlet_energy(k2_graph, VertexField.constant(k2_graph, 5.0)) == 0.0


def test_integrate(k2_graph, random_graph_factory):
    assert integrate(k2_graph, VertexField.from_mapping(k2_graph, {'a': 3.0, 'b': 4.0})) == pytest.approx(7.0)
    graph = random_graph_factory(20, seed=4)
    assert integrate(graph, VertexField.constant(graph, 1.0)) == pytest.approx(graph.volume)


def test_sup_norm_and_mean(k2_graph):
    assert sup_norm_and_mean(k2_graph, VertexField.from_mapping(k2_graph, {'a': 1.0, 'b': -1.0})) == \
        pytest.approx((1.0, 0.0))
    graph = WeightedGraph(['a', 'b'], [('a', 'b', 1.0)], {'a': 1.0, 'b': 3.0})
    assert sup_norm_and_mean(graph, VertexField(graph, [2.0, 0.0])) == pytest.approx((2.0, 0.5))


def test_random_graph_needs_a_vertex():
    with pytest.raises(GraphValidationError):
        random_connected_graph(0, seed=1)
