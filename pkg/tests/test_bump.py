"""Flat-top bump: support, peak, smoothness order."""

import numpy as np
import pytest

from twistlab.bump import SmoothBump, step_derivatives


def test_step_monotone_zero_to_one():
    t = np.linspace(-0.2, 1.2, 401)
    s = step_derivatives(t, 0)[0]
    assert s[0] == 0.0 and s[-1] == 1.0
    assert np.all(np.diff(s) >= -1e-15)
    assert np.all((s >= 0.0) & (s <= 1.0))


def test_peak_exactly_two_on_flat_top():
    b = SmoothBump(0.25, 0.75)
    assert b.peak == 2.0
    mid = np.linspace(0.45, 0.55, 21)   # inside the flat top for rise 1/3
    assert np.max(np.abs(b.eval_deriv(mid, 0) - 2.0)) < 1e-12
    assert np.max(np.abs(b.eval_deriv(mid, 1))) < 1e-12


def test_vanishes_outside_support():
    b = SmoothBump(0.25, 0.75)
    out = np.array([0.0, 0.1, 0.24, 0.76, 0.9, 1.0])
    for order in (0, 1, 2):
        assert np.max(np.abs(b.eval_deriv(out, order))) == 0.0


def test_edges_join_smoothly():
    b = SmoothBump(0.3, 0.7, rise_fraction=0.45)
    eps = 1e-6
    for order in (0, 1, 2):
        assert abs(b.eval_deriv(0.3 + eps, order)) < 1e-2
        assert abs(b.eval_deriv(0.7 - eps, order)) < 1e-2


def test_derivative_matches_finite_difference():
    b = SmoothBump(0.25, 0.75, rise_fraction=0.45)
    x = np.linspace(0.27, 0.73, 301)
    h = 1e-6
    fd = (b.eval_deriv(x + h, 0) - b.eval_deriv(x - h, 0)) / (2 * h)
    assert np.max(np.abs(b.eval_deriv(x, 1) - fd)) < 1e-4 * max(1.0, float(np.max(np.abs(fd))))


def test_ck_norm_grows_with_order():
    b = SmoothBump(0.25, 0.75)
    norms = [b.ck_norm(k) for k in range(4)]
    assert norms[0] == pytest.approx(2.0, rel=1e-6)
    assert all(norms[i] < norms[i + 1] for i in range(3))


def test_support_properties():
    b = SmoothBump(0.3, 0.6)
    assert b.support == (0.3, 0.6)
    assert b.length == pytest.approx(0.3)
