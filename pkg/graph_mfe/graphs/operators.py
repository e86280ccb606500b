# -*- coding: utf-8 -*-
"""Laplacian, Dirichlet energy, integration and Dirac masses on weighted graphs.

All functions are pure and check that their fields are bound to the graph they are given.
"""
from collections import Counter

import numpy as np

from graph_mfe.exceptions import FieldBindingError, InvalidProblem
from .fields import VertexField, DiracSource

__all__ = ('laplacian_apply', 'laplacian_values', 'dirichlet_energy', 'integrate', 'inner', 'dirac_field',
           'sup_norm_and_mean', 'bound_values')


def bound_values(graph, field):
    """Values of a field after checking that it lives on ``graph``."""
    if not isinstance(field, VertexField):
        raise FieldBindingError(f'Expected a VertexField, got {type(field).__name__}.')
    if not field.is_bound_to(graph):
        raise FieldBindingError('The field is bound to a different graph.')
    return field.values


def laplacian_values(graph, values):
    """Delta u as an array, computed edge by edge in divergence form."""
    heads, tails, weights = graph.edge_arrays
    flux = weights * (values[tails] - values[heads])
    size = graph.num_vertices
    divergence = np.bincount(heads, weights=flux, minlength=size) - np.bincount(tails, weights=flux, minlength=size)
    return divergence / graph.measure


def laplacian_apply(graph, field):
    """Delta u(x) = 1/mu(x) sum_y w_xy (u(y) - u(x))."""
    return VertexField(graph, laplacian_values(graph, bound_values(graph, field)))


def dirichlet_energy(graph, field):
    """E(u) = 1/2 sum over edges of w_xy (u(y) - u(x))^2, which equals -1/2 int u Delta u dmu."""
    values = bound_values(graph, field)
    heads, tails, weights = graph.edge_arrays
    return 0.5 * float(np.dot(weights, (values[tails] - values[heads])**2))


def integrate(graph, field):
    """int_V f dmu = sum_x f(x) mu(x)."""
    return float(np.dot(bound_values(graph, field), graph.measure))


def inner(graph, first, second):
    """mu-weighted inner product of two fields."""
    return float(np.sum(bound_values(graph, first) * bound_values(graph, second) * graph.measure))


def dirac_field(graph, poles):
    """Sum of unit point masses at ``poles`` (repetitions add up).

    :raises InvalidProblem: if ``poles`` is empty
    :raises UnknownVertexError: if a pole is not a vertex of the graph
    """
    poles = tuple(str(pole) for pole in poles)
    if not poles:
        raise InvalidProblem('A Dirac source needs at least one pole.')
    values = np.zeros(graph.num_vertices)
    for pole, count in Counter(poles).items():
        idx = graph.index_of(pole)
        values[idx] = count / graph.measure[idx]
    return DiracSource(poles=poles, realization=VertexField(graph, values))


def sup_norm_and_mean(graph, field):
    """Return ``(max |f|, int f dmu / Vol)``."""
    values = bound_values(graph, field)
    return float(np.max(np.abs(values))), float(np.dot(values, graph.measure)) / graph.volume
