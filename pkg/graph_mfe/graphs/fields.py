# -*- coding: utf-8 -*-
"""Real-valued functions on the vertices of a WeightedGraph."""
from dataclasses import dataclass

import numpy as np

from graph_mfe.exceptions import FieldBindingError, NonFiniteField, UnknownVertexError

__all__ = ('VertexField', 'DiracSource')


class VertexField:
    """A total, finite function V -> R bound to one graph.

    Values are stored in the dense vertex order of the graph and are read-only; arithmetic returns
    new fields. The binding is the graph fingerprint, so fields survive a reload of the same graph.
    """

    def __init__(self, graph, values):
        values = np.array(values, dtype=float).reshape(-1)
        if values.shape != (graph.num_vertices,):
            raise FieldBindingError(f'Expected {graph.num_vertices} values, got {values.shape[0]}.')
        if not np.all(np.isfinite(values)):
            raise NonFiniteField(f'Field on {graph!r} has non-finite values.')
        values.setflags(write=False)
        self._graph = graph
        self._values = values

    @classmethod
    def constant(cls, graph, value):
        return cls(graph, np.full(graph.num_vertices, float(value)))

    @classmethod
    def zeros(cls, graph):
        return cls.constant(graph, 0.0)

    @classmethod
    def from_mapping(cls, graph, mapping):
        """Build a field from ``{vertex id: value}``; every vertex must be present."""
        mapping = {str(key): value for key, value in mapping.items()}
        missing = [vertex for vertex in graph.vertices if vertex not in mapping]
        if missing:
            raise FieldBindingError(f'Field is undefined on vertices {missing[:5]}.')
        extra = set(mapping) - set(graph.vertices)
        if extra:
            raise UnknownVertexError(f'Values given for unknown vertices {sorted(extra)[:5]}.')
        return cls(graph, [mapping[vertex] for vertex in graph.vertices])

    @property
    def graph(self):
        return self._graph

    @property
    def graph_id(self):
        """Fingerprint of the graph the field is bound to."""
        return self._graph.fingerprint

    @property
    def values(self):
        return self._values

    @property
    def vertices(self):
        return self._graph.vertices

    def __len__(self):
        return len(self._values)

    def __getitem__(self, vertex):
        return float(self._values[self._graph.index_of(vertex)])

    def __repr__(self):
        return f'<VertexField on {self._graph!r} min={self._values.min():.6g} max={self._values.max():.6g}>'

    def as_dict(self):
        return {vertex: float(value) for vertex, value in zip(self._graph.vertices, self._values)}

    def with_values(self, values):
        """New field on the same graph."""
        return VertexField(self._graph, values)

    def is_bound_to(self, graph):
        return self._graph is graph or self.graph_id == graph.fingerprint

    def _other_values(self, other):
        if isinstance(other, VertexField):
            if not other.is_bound_to(self._graph):
                raise FieldBindingError('Cannot combine fields bound to different graphs.')
            return other.values
        return float(other)

    def __add__(self, other):
        return self.with_values(self._values + self._other_values(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self._values - self._other_values(other))

    def __rsub__(self, other):
        return self.with_values(self._other_values(other) - self._values)

    def __neg__(self):
        return self.with_values(-self._values)

    def __mul__(self, other):
        return self.with_values(self._values * self._other_values(other))

    __rmul__ = __mul__

    def max(self):
        return float(self._values.max())

    def min(self):
        return float(self._values.min())

    def allclose(self, other, atol=1e-10):
        """Pointwise comparison in the sup norm."""
        return bool(np.max(np.abs(self._values - self._other_values(other))) <= atol)


@dataclass(frozen=True)
class DiracSource:
    """Point masses on designated vertices, normalized to unit integral per pole.

    ``poles`` keeps multiplicity; ``realization`` has value multiplicity(x)/mu(x) at each pole.
    """
    poles: tuple
    realization: VertexField

    @property
    def total_multiplicity(self):
        return len(self.poles)
