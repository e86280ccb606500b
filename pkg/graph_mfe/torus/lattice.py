# -*- coding: utf-8 -*-
"""Discrete tori: the square lattice Z^2 modulo a rank 2 sublattice L.

L is reduced to its Hermite normal form basis (A, 0), (B, C) with A, C > 0 and 0 <= B < A, so every
class of Z^2 / L has exactly one representative (i, j) with 0 <= i < A and 0 <= j < C.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from graph_mfe.exceptions import DegenerateLatticeError, InvalidTorusSpec
from graph_mfe.graphs import WeightedGraph

__all__ = ('TorusSpec', 'TorusGraph', 'build_torus_graph', 'PRESETS')

TAU_HALF_PLUS_I = 'tau-half-plus-i'


def _extended_gcd(first, second):
    """Return ``(g, s, t)`` with ``s*first + t*second = g = gcd(first, second) >= 0``."""
    old_r, r = first, second
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class TorusSpec:
    """Period vectors (a, b), (c, d) of the sublattice; ``n`` is the grid refinement, if any."""
    periods: tuple
    n: int = None
    preset: str = None

    def __post_init__(self):
        (a, b), (c, d) = self.periods
        periods = ((int(a), int(b)), (int(c), int(d)))
        object.__setattr__(self, 'periods', periods)
        if self.determinant == 0:
            raise DegenerateLatticeError(f'Period vectors {periods} do not span a rank 2 sublattice.')

    @classmethod
    def tau_half_plus_i(cls, n):
        """Torus with periods 1 and 1/2 + i, discretized with n points per unit length."""
        if not isinstance(n, (int, np.integer)) or n < 2 or n % 2:
            raise InvalidTorusSpec(f'The tau = 1/2 + i preset needs an even n >= 2, got {n}.')
        return cls(periods=((n, 0), (n // 2, n)), n=int(n), preset=TAU_HALF_PLUS_I)

    @classmethod
    def from_periods(cls, a, b, c, d, n=None):
        return cls(periods=((a, b), (c, d)), n=n)

    @property
    def determinant(self):
        (a, b), (c, d) = self.periods
        return a * d - b * c

    @property
    def num_vertices(self):
        return abs(self.determinant)

    @property
    def scale(self):
        """Lattice spacing of the continuum torus is 1/scale."""
        return self.n or 1

    @property
    def hermite_basis(self):
        """``(A, B, C)`` such that (A, 0) and (B, C) span the sublattice."""
        (a, b), (c, d) = self.periods
        gcd, s_coef, t_coef = _extended_gcd(b, d)
        if gcd == 0:
            raise DegenerateLatticeError('Both period vectors are horizontal.')
        first = abs(self.determinant) // gcd
        return first, (s_coef * a + t_coef * c) % first, gcd

    def canonical(self, x, y):
        """Fundamental-domain representative of the class of (x, y); works on numpy arrays too."""
        first, shear, second = self.hermite_basis
        turns = np.floor_divide(y, second)
        return np.mod(x - turns * shear, first), y - turns * second

    def to_dict(self):
        return {'periods': [list(vector) for vector in self.periods], 'n': self.n, 'preset': self.preset}

    @classmethod
    def from_dict(cls, spec_dict):
        return cls(periods=tuple(tuple(vector) for vector in spec_dict['periods']),
                   n=spec_dict.get('n'),
                   preset=spec_dict.get('preset'))


PRESETS = {TAU_HALF_PLUS_I: TorusSpec.tau_half_plus_i}


def vertex_id(i, j):
    return f'{i},{j}'


@dataclass(frozen=True)
class TorusGraph:
    """A torus graph with its coordinate map.

    ``coordinates[k]`` is the representative (i, j) of the k-th vertex; vertices are ordered row by row.
    """
    spec: TorusSpec
    graph: WeightedGraph
    coordinates: np.ndarray

    @property
    def origin(self):
        return vertex_id(0, 0)

    def index_of_point(self, x, y):
        """Dense vertex index of the class of (x, y); vectorized over arrays."""
        first, _, _ = self.spec.hermite_basis
        i, j = self.spec.canonical(x, y)
        return j * first + i

    def vertex_of_point(self, x, y):
        i, j = self.spec.canonical(x, y)
        return vertex_id(int(i), int(j))

    def involution(self):
        """Index permutation of x -> -x, which fixes the origin."""
        return self.index_of_point(-self.coordinates[:, 0], -self.coordinates[:, 1])

    def translation(self, dx, dy):
        """Index permutation of x -> x + (dx, dy)."""
        return self.index_of_point(self.coordinates[:, 0] + dx, self.coordinates[:, 1] + dy)

    def continuum(self, x, y):
        """Position of a (possibly fractional) lattice point in the period parallelogram, scaled by 1/n.

        (x, y) is written as s v1 + t v2, s and t are wrapped to [0, 1) and mapped back.
        """
        (a, b), (c, d) = self.spec.periods
        basis = np.array([[a, c], [b, d]], dtype=float)
        s_coef, t_coef = np.mod(np.linalg.solve(basis, np.array([x, y], dtype=float)), 1.0)
        point = basis @ np.array([s_coef, t_coef])
        return float(point[0]) / self.spec.scale, float(point[1]) / self.spec.scale

    def lattice_distance(self, first, second):
        """Chebyshev distance between two (fractional) lattice points on the torus."""
        (a, b), (c, d) = self.spec.periods
        basis = np.array([[a, c], [b, d]], dtype=float)
        difference = np.asarray(first, dtype=float) - np.asarray(second, dtype=float)
        coefficients = np.round(np.linalg.solve(basis, difference))
        best = math.inf
        for shift_s in (-1, 0, 1):
            for shift_t in (-1, 0, 1):
                shifted = difference - basis @ (coefficients + np.array([shift_s, shift_t]))
                best = min(best, float(np.max(np.abs(shifted))))
        return best


@lru_cache(maxsize=8)
def build_torus_graph(spec):
    """Quotient of the square lattice by the sublattice of ``spec``: 4-neighbour edges, w = 1, mu = 1.

    Parallel edges of small tori are merged and loops dropped, so every vertex has weighted degree 4
    unless a period is a unit vector.
    """
    first, _, second = spec.hermite_basis
    jj, ii = np.meshgrid(np.arange(second), np.arange(first), indexing='ij')
    coordinates = np.column_stack([ii.ravel(), jj.ravel()]).astype(np.int64)
    vertices = [vertex_id(i, j) for i, j in coordinates]

    edges = []
    for shift in ((1, 0), (0, 1)):
        ends = spec.canonical(coordinates[:, 0] + shift[0], coordinates[:, 1] + shift[1])
        for (i, j), end_i, end_j in zip(coordinates, *ends):
            if (i, j) != (end_i, end_j):
                edges.append((vertices[j * first + i], vertex_id(end_i, end_j), 1.0))

    coordinates.setflags(write=False)
    return TorusGraph(spec=spec, graph=WeightedGraph(vertices, edges), coordinates=coordinates)
