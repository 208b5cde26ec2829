"""Generating functions, rotation symbols, configurations, the map itself."""

import math

import numpy as np
import pytest

from twistlab.trigpoly import TrigPoly
from twistlab.twist_core import (Configuration, ContractViolation,
                                 RotationSymbol, cosine_well_family,
                                 integrable, rotation_number_estimate,
                                 standard_family, stationarity_residual,
                                 tangent_matrix, twist_map_step,
                                 with_potential)


# ------------------------------------------------------------------- symbols
def test_symbol_kinds_and_value():
    assert RotationSymbol.rational(1, 2).value == 0.5
    assert RotationSymbol.plus(2, 3).value == pytest.approx(2 / 3)
    assert RotationSymbol.irrational(0.3).value == 0.3
    assert str(RotationSymbol.minus(1, 3)) == "1/3-"


def test_symbol_contracts():
    with pytest.raises(ContractViolation):
        RotationSymbol.rational(2, 4)      # not lowest terms
    with pytest.raises(ContractViolation):
        RotationSymbol.rational(1, 0)
    with pytest.raises(ContractViolation):
        RotationSymbol.irrational(float("nan"))
    with pytest.raises(ContractViolation):
        RotationSymbol("weird")


# --------------------------------------------------------------------- maps
def test_integrable_is_half_square():
    h = integrable()
    assert h.h(0.25, 1.0) == pytest.approx(0.5 * 0.75 ** 2)
    assert h.d1(0.25, 1.0) == pytest.approx(-0.75)
    assert h.d2(0.25, 1.0) == pytest.approx(0.75)
    assert float(h.d12(0.0, 0.0)) == -1.0


def test_with_potential_adds_to_second_slot():
    v = TrigPoly(np.array([1.0, -1.0]))
    h = with_potential(v)
    x, xp = 0.3, 0.85
    assert h.h(x, xp) == pytest.approx(0.5 * (xp - x) ** 2 + v(xp), abs=1e-14)
    assert h.d2(x, xp) == pytest.approx((xp - x) + v.derivative()(xp), abs=1e-12)
    assert h.d22(x, xp) == pytest.approx(1.0 + v.derivative(2)(xp), abs=1e-10)


def test_families_match_their_potentials():
    k = 1.5
    h = standard_family(k)
    x = np.linspace(0, 1, 17)
    assert np.max(np.abs(h.h(0.0, x) - (0.5 * x ** 2 + k / (4 * np.pi ** 2) * np.cos(2 * np.pi * x)))) < 1e-14
    hw = cosine_well_family(2, 1.0)
    assert hw.h(0.0, 0.5) == pytest.approx(0.5 * 0.25 + 0.5 * 2.0)
    assert hw.potential(0.0) == pytest.approx(0.0, abs=1e-15)


# ------------------------------------------------------------ configurations
def test_periodic_extension_is_exact():
    c = Configuration(points=np.array([0.1, 0.6, 1.1]), period=(1, 2))
    assert c.point(2) == pytest.approx(1.1)
    assert c.point(5) == pytest.approx(0.6 + 2.0)
    assert c.point(-2) == pytest.approx(0.1 - 1.0)
    assert np.allclose(c.window(-1, 3), [0.6 - 1.0, 0.1, 0.6, 1.1, 1.6])


def test_periodicity_violations_rejected():
    with pytest.raises(ContractViolation):
        Configuration(points=np.array([0.0, 0.5, 1.2]), period=(1, 2))
    with pytest.raises(ContractViolation):
        Configuration(points=np.array([0.0]), period=(1, 2))
    with pytest.raises(ContractViolation):
        Configuration(points=np.array([[0.0, 1.0]]))


def test_plain_window_has_no_extension():
    c = Configuration(points=np.array([0.0, 0.5, 1.0]))
    with pytest.raises(ContractViolation):
        c.point(3)


def test_points_read_only():
    c = Configuration(points=np.array([0.0, 0.5]))
    with pytest.raises(ValueError):
        c.points[0] = 9.0


# ----------------------------------------------------------------- operations
def test_linear_orbit_is_stationary_for_shear():
    h = integrable()
    c = Configuration(points=0.1 + 0.4 * np.arange(10))
    assert np.max(np.abs(stationarity_residual(h, c))) < 1e-14


def test_periodic_residual_covers_wraparound():
    h = standard_family(0.5)
    c = Configuration(points=np.array([0.2, 0.7]), period=(1, 2))
    r = stationarity_residual(h, c)
    assert r.shape == (2,)
    assert np.max(np.abs(r)) > 1e-3    # not stationary at an arbitrary phase


def test_twist_step_shear_case():
    h = integrable()
    xp, yp = twist_map_step(h, 0.2, 0.7)
    assert xp == pytest.approx(0.9, abs=1e-10)
    assert yp == pytest.approx(0.7, abs=1e-10)


def test_twist_step_inverts_derivative_relation():
    h = standard_family(1.2)
    x, y = 0.3, 0.55
    xp, yp = twist_map_step(h, x, y)
    assert float(h.d1(x, xp)) == pytest.approx(-y, abs=1e-9)
    assert float(h.d2(x, xp)) == pytest.approx(yp, abs=1e-12)


def test_tangent_matrix_is_symplectic():
    h = standard_family(1.5)
    for (x, xp) in [(0.1, 0.5), (0.3, 1.2), (0.75, 0.9)]:
        m = tangent_matrix(h, x, xp)
        assert float(np.linalg.det(m)) == pytest.approx(1.0, abs=1e-10)


def test_rotation_number_estimate():
    c = Configuration(points=np.array([0.0, 0.5, 1.0]), period=(1, 2))
    assert rotation_number_estimate(c) == 0.5
    w = Configuration(points=0.3 * np.arange(11))
    assert rotation_number_estimate(w) == pytest.approx(0.3, abs=1e-12)
