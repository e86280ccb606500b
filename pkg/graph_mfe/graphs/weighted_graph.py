# -*- coding: utf-8 -*-
"""Connected finite graphs with symmetric edge weights and a positive vertex measure."""
import hashlib
import json
import math
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from graph_mfe.exceptions import GraphValidationError, UnknownVertexError

__all__ = ('WeightedGraph',)


def _frozen(array):
    array.setflags(write=False)
    return array


class WeightedGraph:
    """A connected finite graph G=(V,E) with weights w_xy = w_yx > 0 and a vertex measure mu > 0.

    Vertex ids are strings; the order in which they are given fixes the dense index used by every
    vertex field on this graph. Parallel edges are merged by summing their weights, self-loops are
    rejected. The graph is immutable after construction.

    :param vertices: sequence of vertex ids
    :param edges: iterable of ``(x, y, w)`` triples (``(x, y)`` pairs get weight 1)
    :param measure: mapping vertex id -> mu(x); missing vertices get mu = 1
    """

    def __init__(self, vertices, edges=(), measure=None):
        ids = tuple(str(vertex) for vertex in vertices)
        if not ids:
            raise GraphValidationError('A graph needs at least one vertex.')
        index = {vertex: idx for idx, vertex in enumerate(ids)}
        if len(index) != len(ids):
            raise GraphValidationError('Vertex ids must be unique.')

        measure = measure or {}
        unknown = set(map(str, measure)) - set(index)
        if unknown:
            raise UnknownVertexError(f'Measure given for unknown vertices: {sorted(unknown)}')
        mu = np.array([float(measure.get(vertex, 1.0)) for vertex in ids])
        if not np.all(np.isfinite(mu)) or np.any(mu <= 0):
            raise GraphValidationError('The vertex measure must be finite and positive on every vertex.')

        merged = {}
        for edge in edges:
            if len(edge) == 2:
                x, y, weight = edge[0], edge[1], 1.0
            else:
                x, y, weight = edge
            x, y, weight = str(x), str(y), float(weight)
            for vertex in (x, y):
                if vertex not in index:
                    raise UnknownVertexError(f"Edge {x}-{y} refers to unknown vertex '{vertex}'")
            if x == y:
                raise GraphValidationError(f"Self-loop at vertex '{x}' is not allowed.")
            if not math.isfinite(weight) or weight <= 0:
                raise GraphValidationError(f'Edge {x}-{y} has nonpositive weight {weight}.')
            key = tuple(sorted((index[x], index[y])))
            merged[key] = merged.get(key, 0.0) + weight

        keys = sorted(merged)
        heads = np.array([key[0] for key in keys], dtype=np.int64)
        tails = np.array([key[1] for key in keys], dtype=np.int64)
        weights = np.array([merged[key] for key in keys], dtype=float)

        self._ids = ids
        self._index = index
        self._mu = _frozen(mu)
        self._heads = _frozen(heads)
        self._tails = _frozen(tails)
        self._weights = _frozen(weights)
        self._volume = float(mu.sum())

        size = len(ids)
        rows = np.concatenate([heads, tails])
        cols = np.concatenate([tails, heads])
        self._weight_matrix = sp.csr_matrix((np.concatenate([weights, weights]), (rows, cols)), shape=(size, size))
        self._degree = _frozen(np.asarray(self._weight_matrix.sum(axis=1)).ravel())

        n_components, _ = connected_components(self._weight_matrix, directed=False)
        if n_components != 1:
            raise GraphValidationError(f'The graph must be connected, found {n_components} components.')

    def __repr__(self):
        return f'<WeightedGraph vertices={self.num_vertices} edges={self.num_edges} vol={self.volume:g}>'

    @property
    def vertices(self):
        """Vertex ids, in index order."""
        return self._ids

    @property
    def num_vertices(self):
        return len(self._ids)

    @property
    def num_edges(self):
        return len(self._weights)

    @property
    def measure(self):
        """Read-only array of mu(x) in index order."""
        return self._mu

    @property
    def volume(self):
        """Vol(G) = sum of mu(x) over all vertices."""
        return self._volume

    @property
    def edge_arrays(self):
        """Read-only ``(heads, tails, weights)`` arrays, one entry per merged edge."""
        return self._heads, self._tails, self._weights

    @property
    def degree(self):
        """Weighted degree sum_y w_xy per vertex."""
        return self._degree

    @property
    def edges(self):
        """List of ``(x, y, w)`` triples with merged weights."""
        return [(self._ids[h], self._ids[t], float(w)) for h, t, w in zip(self._heads, self._tails, self._weights)]

    def __contains__(self, vertex):
        return str(vertex) in self._index

    def index_of(self, vertex):
        """Dense index of a vertex id."""
        try:
            return self._index[str(vertex)]
        except KeyError:
            raise UnknownVertexError(f"Vertex '{vertex}' is not in the graph.") from None

    def indices_of(self, vertices):
        return np.array([self.index_of(vertex) for vertex in vertices], dtype=np.int64)

    def neighbors(self, vertex):
        """List of ``(y, w_xy)`` for the neighbours of a vertex."""
        row = self._weight_matrix.getrow(self.index_of(vertex))
        return [(self._ids[idx], float(weight)) for idx, weight in zip(row.indices, row.data)]

    @property
    def weight_matrix(self):
        """Symmetric sparse matrix of edge weights."""
        return self._weight_matrix

    @cached_property
    def stiffness_matrix(self):
        """Symmetric positive semidefinite ``D - W``, so that mu * (Laplacian u) = -(D - W) u."""
        return (sp.diags(self._degree) - self._weight_matrix).tocsr()

    @cached_property
    def laplacian_matrix(self):
        """Sparse matrix of the mu-weighted Laplacian, (Lu)(x) = 1/mu(x) sum_y w_xy (u(y) - u(x))."""
        return (sp.diags(1.0 / self._mu) @ (self._weight_matrix - sp.diags(self._degree))).tocsr()

    @cached_property
    def fingerprint(self):
        """sha256 of the canonical JSON description; identifies the graph fields are bound to."""
        canonical = {
            'vertices': [[vertex, float(mu)] for vertex, mu in zip(self._ids, self._mu)],
            'edges': [[self._ids[h], self._ids[t], float(w)] for h, t, w in zip(self._heads, self._tails, self._weights)],
        }
        payload = json.dumps(canonical, separators=(',', ':'))
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()

    def relabeled(self, mapping, order=None):
        """Isomorphic copy with vertex ``x`` renamed to ``mapping[x]``.

        :param order: optional sequence of new ids fixing the vertex order of the copy
        """
        new_ids = [str(mapping[vertex]) for vertex in self._ids]
        measure = dict(zip(new_ids, self._mu))
        edges = [(mapping[x], mapping[y], w) for x, y, w in self.edges]
        return WeightedGraph(order if order is not None else new_ids, edges, measure)
