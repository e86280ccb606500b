# -*- coding: utf-8 -*-
"""Tests for discrete tori and the critical points of their Green's functions"""
import logging
import math

import numpy as np
import pytest

from graph_mfe.exceptions import AmbiguousCriticalSet, DegenerateLatticeError, InvalidTorusSpec
from graph_mfe.graphs import VertexField, laplacian_apply
from graph_mfe.solvers import green_function
from graph_mfe.torus import (CriticalClass, CriticalPoint, CriticalPointSet, TorusSpec, build_torus_graph, critical_slope,
                             find_critical_points, half_periods, slope_convergence, torus_green)

SLOPE_TARGET = 25.0 / 64.0


def test_hermite_basis():
    assert TorusSpec.tau_half_plus_i(8).hermite_basis == (8, 4, 8)
    assert TorusSpec.from_periods(3, 0, 0, 5).hermite_basis == (3, 0, 5)
    # the same lattice spanned by another basis
    assert TorusSpec.from_periods(8, 0, 12, 8).hermite_basis == (8, 4, 8)


def test_canonical_representatives():
    spec = TorusSpec.tau_half_plus_i(8)
    for x, y in [(0, 0), (3, 7), (-1, -1), (20, -13)]:
        first = spec.canonical(x, y)
        assert spec.canonical(x + 8, y) == first
        assert spec.canonical(x + 4, y + 8) == first
        assert 0 <= first[0] < 8 and 0 <= first[1] < 8


def test_smallest_preset_torus():
    torus = build_torus_graph(TorusSpec.tau_half_plus_i(2))
    assert torus.graph.num_vertices == 4
    assert torus.graph.degree == pytest.approx([4.0] * 4)
    assert torus.origin == '0,0'


@pytest.mark.parametrize('n', [4, 16, 64])
def test_torus_sizes(n):
    torus = build_torus_graph(TorusSpec.tau_half_plus_i(n))
    assert torus.graph.num_vertices == n * n
    assert torus.graph.degree == pytest.approx(np.full(n * n, 4.0))


@pytest.mark.parametrize('n', [3, 7, 0, 1])
def test_preset_needs_even_n(n):
    with pytest.raises(InvalidTorusSpec):
        TorusSpec.tau_half_plus_i(n)


def test_degenerate_periods():
    with pytest.raises(DegenerateLatticeError):
        TorusSpec.from_periods(1, 2, 2, 4)
    with pytest.raises(DegenerateLatticeError):
        TorusSpec.from_periods(0, 0, 3, 1)


def test_spec_dict():
    spec = TorusSpec.tau_half_plus_i(16)
    assert TorusSpec.from_dict(spec.to_dict()) == spec


def test_torus_graph_is_shared_read_only():
    torus = build_torus_graph(TorusSpec.tau_half_plus_i(4))
    assert build_torus_graph(TorusSpec.tau_half_plus_i(4)) is torus
    with pytest.raises(ValueError):
        torus.coordinates[0, 0] = 1


def test_green_residual_and_symmetry():
    spec = TorusSpec.tau_half_plus_i(16)
    torus = build_torus_graph(spec)
    green = torus_green(spec)

    expected = np.full(torus.graph.num_vertices, -1.0 / torus.graph.volume)
    expected[torus.graph.index_of(torus.origin)] += 1.0
    assert np.max(np.abs(laplacian_apply(torus.graph, green).values - expected)) <= 1e-9
    assert abs(green.values.sum()) <= 1e-9
    assert np.max(np.abs(green.values[torus.involution()] - green.values)) <= 1e-9
    # the pole is the minimum of G
    assert int(np.argmin(green.values)) == torus.graph.index_of(torus.origin)


def test_green_translation():
    """G with its pole at p is G with its pole at 0, shifted by p."""
    spec = TorusSpec.tau_half_plus_i(8)
    torus = build_torus_graph(spec)
    shifted = green_function(torus.graph, torus.vertex_of_point(3, 5))
    expected = torus_green(spec).values[torus.translation(-3, -5)]
    assert np.max(np.abs(shifted.values - expected)) <= 1e-9


@pytest.mark.parametrize('n,value', [(4, 1.0), (8, 1.0), (16, 1.0), (8, 0.0), (8, -2.5), (8, 1e3)])
def test_constant_field_is_degenerate(n, value):
    """Every vertex of a constant field is a degenerate critical point."""
    spec = TorusSpec.tau_half_plus_i(n)
    torus = build_torus_graph(spec)
    critical_points = find_critical_points(spec, VertexField.constant(torus.graph, value))
    assert len(critical_points) == torus.graph.num_vertices
    assert all(point.classification is CriticalClass.DEGENERATE for point in critical_points.points)


def test_half_periods():
    assert half_periods(TorusSpec.tau_half_plus_i(8)) == [(4.0, 0.0), (2.0, 4.0), (6.0, 4.0)]


@pytest.mark.parametrize('n', [16, 64])
def test_critical_points(n):
    spec = TorusSpec.tau_half_plus_i(n)
    critical_points = find_critical_points(spec, torus_green(spec))

    assert any(point.vertex == (0, 0) and point.label == 'pole' for point in critical_points.points)
    assert len(critical_points.with_label('half-period')) >= 3
    for point in critical_points.points:
        assert max(abs(point.refined[0] - point.vertex[0]), abs(point.refined[1] - point.vertex[1])) <= 0.55 + 1e-9
        assert 0.0 <= point.continuum[1] <= math.hypot(1.0, 1.0)
    rows = [point.as_row() for point in critical_points.points]
    assert all(row[4] in ('max', 'min', 'saddle', 'degenerate') for row in rows)


def test_critical_set_is_symmetric():
    """x -> -x maps the critical set onto itself."""
    spec = TorusSpec.tau_half_plus_i(32)
    torus = build_torus_graph(spec)
    critical_points = find_critical_points(spec, torus_green(spec))
    for point in critical_points.points:
        mirrored = (-point.refined[0], -point.refined[1])
        assert any(torus.lattice_distance(mirrored, other.refined) <= 1.0 for other in critical_points.points)


def test_slope(caplog):
    spec = TorusSpec.tau_half_plus_i(64)
    critical_points = find_critical_points(spec, torus_green(spec))
    with caplog.at_level(logging.WARNING, logger='graph_mfe.torus.green'):
        try:
            slope = critical_slope(critical_points, spec)
        except AmbiguousCriticalSet as exc:
            pytest.xfail(f'additional critical points not resolved at n=64: {exc}')
    assert math.isfinite(slope)
    warned = any('deviates' in record.getMessage() for record in caplog.records)
    assert warned == (abs(slope - SLOPE_TARGET) > 0.05 * SLOPE_TARGET)


def test_slope_needs_two_points():
    spec = TorusSpec.tau_half_plus_i(4)
    torus = build_torus_graph(spec)
    critical_points = find_critical_points(spec, VertexField.zeros(torus.graph))
    critical_points.points = [point for point in critical_points.points if point.label != 'additional']
    with pytest.raises(AmbiguousCriticalSet):
        critical_slope(critical_points)


def test_horizontal_slope():
    spec = TorusSpec.tau_half_plus_i(8)
    points = [
        CriticalPoint(vertex=(2, 3), refined=(2.1, 3.0), classification=CriticalClass.SADDLE, value=0.0,
                      continuum=(0.2625, 0.375)),
        CriticalPoint(vertex=(5, 3), refined=(5.2, 3.0), classification=CriticalClass.SADDLE, value=0.0,
                      continuum=(0.65, 0.375)),
    ]
    critical_points = CriticalPointSet(spec=spec, points=points)
    assert len(critical_points.additional) == 2
    assert critical_slope(critical_points, spec, {'slope_target': 0.0}) == 0.0


@pytest.mark.slow
def test_slope_convergence():
    rows = slope_convergence([32, 64, 128])
    assert [row['n'] for row in rows] == [32, 64, 128]
    resolved = [row for row in rows if row['slope'] is not None]
    if not resolved:
        pytest.xfail('additional critical points not resolved on any refinement')
    for row in resolved:
        assert row['deviation'] == pytest.approx(abs(row['slope'] - SLOPE_TARGET))
    coarse, fine = rows[0]['deviation'], rows[-1]['deviation']
    if coarse is None or fine is None or fine > coarse + 1e-3:
        pytest.xfail(f'no refinement trend: deviations {coarse} at n=32, {fine} at n=128')
