# -*- coding: utf-8 -*-
"""Small graph generators used by the tests and by ``graph-mfe random-graph``."""
import itertools

import numpy as np

from graph_mfe.exceptions import GraphValidationError
from .weighted_graph import WeightedGraph

__all__ = ('random_connected_graph', 'single_vertex_graph', 'complete_graph')


def random_connected_graph(num_vertices, seed=None, weight_range=(0.5, 2.0), measure_range=(0.5, 2.0),
                           extra_edge_prob=0.2):
    """Random spanning tree plus independent extra edges; deterministic for a given seed.

    Vertex ids are ``'0'`` ... ``'n-1'``. Weights and measures are uniform on the given ranges.
    """
    if num_vertices < 1:
        raise GraphValidationError('num_vertices must be positive')
    rng = np.random.default_rng(seed)
    vertices = [str(idx) for idx in range(num_vertices)]

    pairs = {(int(rng.integers(0, idx)), idx) for idx in range(1, num_vertices)}
    for first, second in itertools.combinations(range(num_vertices), 2):
        if (first, second) not in pairs and rng.random() < extra_edge_prob:
            pairs.add((first, second))

    pairs = sorted(pairs)
    weights = rng.uniform(*weight_range, size=len(pairs))
    measure = rng.uniform(*measure_range, size=num_vertices)
    edges = [(vertices[x], vertices[y], w) for (x, y), w in zip(pairs, weights)]
    return WeightedGraph(vertices, edges, dict(zip(vertices, measure)))


def single_vertex_graph(mu=1.0, vertex='x'):
    return WeightedGraph([vertex], [], {vertex: mu})


def complete_graph(num_vertices, weight=1.0, mu=1.0):
    """Complete graph K_n with uniform weight and measure (K_2 has vertices 'a', 'b')."""
    if num_vertices == 2:
        vertices = ['a', 'b']
    else:
        vertices = [str(idx) for idx in range(num_vertices)]
    edges = [(x, y, weight) for x, y in itertools.combinations(vertices, 2)]
    return WeightedGraph(vertices, edges, {vertex: mu for vertex in vertices})
