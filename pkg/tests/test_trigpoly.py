"""Trigonometric polynomial arithmetic against closed forms."""

import json
import math

import numpy as np
import pytest

from twistlab.trigpoly import TrigPoly


def test_harmonic_matches_cosine():
    p = TrigPoly.harmonic(3, cos_amp=2.0, sin_amp=-0.5)
    x = np.linspace(0.0, 1.0, 257)
    want = 2.0 * np.cos(6.0 * np.pi * x) - 0.5 * np.sin(6.0 * np.pi * x)
    assert np.max(np.abs(p(x) - want)) < 1e-12
    assert p.degree == 3
    assert p(0.25) == pytest.approx(float(want[64]), abs=1e-12)


def test_constant_and_zero():
    assert TrigPoly.zero().degree == 0
    assert TrigPoly.zero()(0.37) == 0.0
    assert TrigPoly.constant(1.5)(np.array([0.0, 0.9]))[1] == pytest.approx(1.5)


def test_sin_at_index_zero_rejected():
    with pytest.raises(ValueError):
        TrigPoly(np.array([0.0]), np.array([1.0]))


def test_grid_roundtrip_is_lossless():
    rng = np.random.default_rng(7)
    c = rng.normal(size=9)
    s = np.concatenate([[0.0], rng.normal(size=8)])
    p = TrigPoly(c, s)
    for m in (2 * p.degree + 2, 64, 257):
        q = TrigPoly.from_samples(p.grid_values(m), p.degree)
        assert np.max(np.abs(q.cos_coef - p.cos_coef)) < 1e-10
        assert np.max(np.abs(q.sin_coef - p.sin_coef)) < 1e-10


def test_grid_too_small_rejected():
    p = TrigPoly.harmonic(4, cos_amp=1.0)
    with pytest.raises(ValueError):
        p.grid_values(2 * p.degree + 1)


def test_product_is_pointwise_and_degree_adds():
    rng = np.random.default_rng(11)
    f = TrigPoly(rng.normal(size=4), np.concatenate([[0.0], rng.normal(size=3)]))
    g = TrigPoly(rng.normal(size=6), np.concatenate([[0.0], rng.normal(size=5)]))
    fg = f * g
    assert fg.degree <= f.degree + g.degree
    x = np.linspace(0.0, 1.0, 401)
    assert np.max(np.abs(fg(x) - f(x) * g(x))) < 1e-12


def test_scalar_product_and_sum():
    f = TrigPoly.harmonic(2, cos_amp=1.0)
    g = f * 0.25 + TrigPoly.constant(1.0)
    x = np.linspace(0.0, 1.0, 101)
    assert np.max(np.abs(g(x) - (1.0 + 0.25 * np.cos(4 * np.pi * x)))) < 1e-13


def test_derivative_closed_form():
    p = TrigPoly.harmonic(2, cos_amp=1.0)
    d = p.derivative()
    x = np.linspace(0.0, 1.0, 301)
    assert np.max(np.abs(d(x) + 4.0 * np.pi * np.sin(4.0 * np.pi * x))) < 1e-11
    # order composes
    d3a = p.derivative(3)
    d3b = p.derivative().derivative().derivative()
    assert np.max(np.abs(d3a(x) - d3b(x))) < 1e-8


def test_eval_deriv_matches_derivative():
    p = TrigPoly(np.array([0.3, 1.0, -0.4]), np.array([0.0, 0.2, 0.7]))
    x = np.linspace(0.0, 1.0, 97)
    for order in (0, 1, 2):
        assert np.max(np.abs(p.eval_deriv(x, order) - p.derivative(order)(x))) < 1e-10


def test_dilate_composes_argument():
    p = TrigPoly(np.array([0.1, 1.0, 0.0, -0.2]))
    q = 5
    d = p.dilate(q)
    assert d.degree == q * p.degree
    x = np.linspace(0.0, 1.0, 173)
    assert np.max(np.abs(d(x) - p(q * x))) < 1e-12


def test_extremum_on_well():
    # 1 - cos(2 pi x): min 0 at 0, max 2 at 1/2
    p = TrigPoly(np.array([1.0, -1.0]))
    loc, val = p.extremum(maximize=True)
    assert val == pytest.approx(2.0, abs=1e-12)
    assert loc == pytest.approx(0.5, abs=1e-9)
    assert p.min_value() == pytest.approx(0.0, abs=1e-12)
    assert p.sup_norm() == pytest.approx(2.0, abs=1e-12)


def test_json_roundtrip():
    p = TrigPoly(np.array([0.5, -1.25, 0.0, 3e-3]), np.array([0.0, 1e-6, 2.0, 0.0]))
    q = TrigPoly.from_json(p.to_json())
    assert q.degree == p.degree
    assert np.array_equal(q.cos_coef, p.cos_coef)
    assert np.array_equal(q.sin_coef, p.sin_coef)
    obj = json.loads(p.to_json())
    assert obj["degree"] == p.degree


def test_trim_is_relative_not_absolute():
    # uniformly tiny coefficients survive; only relatively tiny tails drop
    p = TrigPoly(np.array([1e-200, 1e-200]))
    assert p.degree == 1
    q = TrigPoly(np.array([1.0, 1e-16]))
    assert q.degree == 0


def test_coefficients_read_only():
    p = TrigPoly.harmonic(1, cos_amp=1.0)
    with pytest.raises(ValueError):
        p.cos_coef[0] = 5.0
