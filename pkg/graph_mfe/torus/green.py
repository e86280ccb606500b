# -*- coding: utf-8 -*-
"""Green's function of a discrete torus and its critical points.

A vertex is a candidate when the central differences G(x+e1) - G(x-e1) and G(x+e2) - G(x-e2) both
bracket zero on the 3x3 stencil around x. Candidates are refined by a least-squares quadratic on the
same stencil; the stationary point of the quadratic must fall inside the half cell around the vertex.
"""
import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from graph_mfe.exceptions import AmbiguousCriticalSet
from graph_mfe.parameters_schemas import TORUS_PARAMETERS
from graph_mfe.solvers.elliptic import green_function
from .lattice import TorusSpec, build_torus_graph

__all__ = ('CriticalClass', 'CriticalPoint', 'CriticalPointSet', 'torus_green', 'find_critical_points',
           'critical_slope', 'slope_convergence', 'half_periods')

LOGGER = logging.getLogger(__name__)

STENCIL = tuple((dx, dy) for dy in (-1, 0, 1) for dx in (-1, 0, 1))
_DESIGN = np.array([[1.0, dx, dy, dx * dx, dx * dy, dy * dy] for dx, dy in STENCIL])
_FIT = np.linalg.pinv(_DESIGN)
_WEST, _EAST = STENCIL.index((-1, 0)), STENCIL.index((1, 0))
_SOUTH, _NORTH = STENCIL.index((0, -1)), STENCIL.index((0, 1))


class CriticalClass(enum.Enum):
    MAX = 'max'
    MIN = 'min'
    SADDLE = 'saddle'
    DEGENERATE = 'degenerate'


@dataclass(frozen=True)
class CriticalPoint:
    """A critical point near vertex ``(i, j)``; ``refined`` is in lattice units, ``continuum`` in the torus."""
    vertex: tuple
    refined: tuple
    classification: CriticalClass
    value: float
    continuum: tuple
    label: str = 'additional'

    def as_row(self):
        return [self.vertex[0], self.vertex[1], self.refined[0], self.refined[1], self.classification.value, self.value]


@dataclass
class CriticalPointSet:
    spec: TorusSpec
    pole: tuple = (0, 0)
    points: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def with_label(self, label):
        return [point for point in self.points if point.label == label]

    @property
    def additional(self):
        return self.with_label('additional')


def half_periods(spec):
    """Lattice positions of v1/2, v2/2 and (v1+v2)/2."""
    (a, b), (c, d) = spec.periods
    return [(a / 2, b / 2), (c / 2, d / 2), ((a + c) / 2, (b + d) / 2)]


def torus_green(spec):
    """Mean-zero Green's function of the torus graph with its pole at the origin class."""
    torus = build_torus_graph(spec)
    return green_function(torus.graph, torus.origin)


def _stencil_indices(torus):
    coordinates = torus.coordinates
    return np.column_stack(
        [torus.index_of_point(coordinates[:, 0] + dx, coordinates[:, 1] + dy) for dx, dy in STENCIL])


def _brackets_zero(differences, neighbours, tol):
    around = differences[neighbours]
    return (around.min(axis=1) <= tol) & (around.max(axis=1) >= -tol)


def find_critical_points(spec, green, parameters=None):
    """Locate and classify the critical points of ``green`` on the torus of ``spec``.

    Points within one cell (Chebyshev) of the pole are labelled 'pole', within one cell of a half period
    'half-period', the rest 'additional'. Refined points closer than half a cell are merged.
    """
    parameters = TORUS_PARAMETERS(dict(parameters or {}))
    tol, slack = parameters['tol'], parameters['cell_slack']
    torus = build_torus_graph(spec)
    values = green.values
    neighbours = _stencil_indices(torus)
    stencil = values[neighbours]

    east_west = stencil[:, _EAST] - stencil[:, _WEST]
    north_south = stencil[:, _NORTH] - stencil[:, _SOUTH]
    candidates = _brackets_zero(east_west, neighbours, tol) & _brackets_zero(north_south, neighbours, tol)

    coefficients = stencil @ _FIT.T
    # round-off of the fit on flat stencils
    coefficients[np.abs(coefficients) <= tol * max(1.0, float(np.max(np.abs(values))))] = 0.0
    scale = float(np.ptp(values))
    found = []
    for idx in np.flatnonzero(candidates):
        _, grad_x, grad_y, xx, xy, yy = coefficients[idx]
        hessian = np.array([[2.0 * xx, xy], [xy, 2.0 * yy]])
        determinant = float(np.linalg.det(hessian))
        gradient = np.array([grad_x, grad_y])
        if abs(determinant) <= parameters['degenerate_tol'] * scale**2:
            if np.max(np.abs(gradient)) > tol:
                continue
            offset, kind = np.zeros(2), CriticalClass.DEGENERATE
        else:
            offset = -np.linalg.solve(hessian, gradient)
            if np.max(np.abs(offset)) > 0.5 + slack:
                continue
            if determinant < 0:
                kind = CriticalClass.SADDLE
            else:
                kind = CriticalClass.MAX if np.trace(hessian) < 0 else CriticalClass.MIN
        vertex = tuple(int(coord) for coord in torus.coordinates[idx])
        found.append((float(np.max(np.abs(offset))), vertex, tuple(np.array(vertex) + offset), kind, float(values[idx])))

    pole = (0.0, 0.0)
    specials = half_periods(spec)
    points = []
    for _, vertex, refined, kind, value in sorted(found, key=lambda item: item[:2]):
        if any(torus.lattice_distance(refined, point.refined) < 0.5 for point in points):
            continue
        if torus.lattice_distance(refined, pole) <= 1.0:
            label = 'pole'
        elif any(torus.lattice_distance(refined, special) <= 1.0 for special in specials):
            label = 'half-period'
        else:
            label = 'additional'
        points.append(
            CriticalPoint(vertex=vertex,
                          refined=(float(refined[0]), float(refined[1])),
                          classification=kind,
                          value=value,
                          continuum=torus.continuum(*refined),
                          label=label))

    points.sort(key=lambda point: point.vertex[::-1])
    LOGGER.debug('%d critical points (%d candidates) on %s', len(points), int(candidates.sum()), spec)
    return CriticalPointSet(spec=spec, points=points)


def critical_slope(critical_points, spec=None, parameters=None):
    """Slope of the line through the two additional critical points, in continuum coordinates.

    :raises AmbiguousCriticalSet: unless exactly two additional points were found
    """
    parameters = TORUS_PARAMETERS(dict(parameters or {}))
    additional = critical_points.additional
    if len(additional) != 2:
        raise AmbiguousCriticalSet(f'Expected 2 additional critical points, found {len(additional)}',
                                   points=additional)
    (x_first, y_first), (x_second, y_second) = additional[0].continuum, additional[1].continuum
    if x_first == x_second:
        return math.inf
    slope = (y_second - y_first) / (x_second - x_first)

    target = parameters['slope_target']
    deviation = abs(slope - target)
    if deviation > parameters['slope_rel_tol'] * abs(target):
        LOGGER.warning('slope %.6f deviates from %.6f by %.2f%% on %s', slope, target, 100 * deviation / abs(target),
                       spec or critical_points.spec)
    return slope


def slope_convergence(ns, parameters=None):
    """Slope and its deviation from the target for the tau = 1/2 + i torus at each refinement in ``ns``.

    Refinements where the additional points are ambiguous get ``slope`` None.
    """
    parameters = TORUS_PARAMETERS(dict(parameters or {}))
    rows = []
    for n in ns:
        spec = TorusSpec.tau_half_plus_i(n)
        critical_points = find_critical_points(spec, torus_green(spec), parameters)
        try:
            slope = critical_slope(critical_points, spec, parameters)
        except AmbiguousCriticalSet as exc:
            LOGGER.warning('n=%d: %s', n, exc)
            slope = None
        deviation = None if slope is None else abs(slope - parameters['slope_target'])
        rows.append({'n': n, 'slope': slope, 'deviation': deviation, 'num_critical_points': len(critical_points)})
    return rows
