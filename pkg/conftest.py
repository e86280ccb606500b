# -*- coding: utf-8 -*-
"""
For pytest
shared graphs and graph files
"""
import pytest

from graph_mfe.graphs import WeightedGraph, complete_graph, random_connected_graph, write_graph


@pytest.fixture(scope='function')
def k2_graph():
    """Two vertices 'a', 'b' joined by an edge of weight 1, mu = 1."""
    return complete_graph(2)


@pytest.fixture(scope='function')
def single_vertex_graph():
    """One vertex 'x' with mu = 1 and no edges."""
    return WeightedGraph(['x'], [], {'x': 1.0})


@pytest.fixture(scope='function')
def heavy_single_vertex_graph():
    return WeightedGraph(['x'], [], {'x': 2.0})


@pytest.fixture(scope='function')
def random_graph_factory():
    """Seeded random connected graphs: ``random_graph_factory(num_vertices, seed)``."""

    def _factory(num_vertices, seed, **kwargs):
        return random_connected_graph(num_vertices, seed=seed, **kwargs)

    return _factory


@pytest.fixture(scope='function')
def tmp_graph_file(tmp_path):
    """Write a graph to a JSON file in a temporary directory and return the path."""

    def _write(graph, name='graph.json'):
        path = tmp_path / name
        write_graph(graph, path)
        return path

    return _write
