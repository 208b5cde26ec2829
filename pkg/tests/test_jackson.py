"""Kernel smoothing rates on a flat-top bump.

The frozen slopes come from fitting log error against log kernel degree for
the bump on [1/4, 3/4] with rise fraction 0.45; that shape is steep enough
to show the asymptotic rate over degrees 32..256 without entering the
preasymptotic plateau a sharper rise produces.
"""

import numpy as np
import pytest

from oracles import loglog_fit
from twistlab.bump import SmoothBump
from twistlab.jackson import jackson_approx, jackson_kernel, kernel_power_for_order

BUMP = SmoothBump(0.25, 0.75, rise_fraction=0.45)


def test_kernel_power_choices():
    assert kernel_power_for_order(1) == 2
    assert kernel_power_for_order(2) == 2
    assert kernel_power_for_order(3) == 3
    assert kernel_power_for_order(4) == 3


def test_kernel_is_a_probability_spectrum():
    khat, deg = jackson_kernel(32, 2)
    assert deg <= 32
    assert float(khat[0]) == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.abs(khat) <= 1.0 + 1e-12)


def test_kernel_degree_respects_budget():
    for budget in (8, 33, 100):
        for power in (2, 3):
            _, deg = jackson_kernel(budget, power)
            assert deg <= budget


def test_achieved_error_is_the_measured_sup():
    res = jackson_approx(BUMP, 64, order=2)
    x = np.arange(8192) / 8192
    measured = float(np.max(np.abs(res.poly(x) - BUMP.eval_deriv(x, 0))))
    assert res.achieved_error == pytest.approx(measured, rel=1e-3)
    assert res.poly.degree <= 64


def test_error_decreases_with_degree():
    errs = [jackson_approx(BUMP, n, order=2).achieved_error for n in (16, 32, 64, 128)]
    assert all(errs[i + 1] < errs[i] for i in range(3))


@pytest.mark.parametrize("order,slope_ref,r2_ref", [
    (2, -1.600900914579748, 0.9935073959739891),
    (3, -2.658603240072514, 0.9858143193775667),
])
def test_rate_slopes_frozen(order, slope_ref, r2_ref):
    degs, errs = [], []
    for budget in (32, 64, 128, 256):
        res = jackson_approx(BUMP, budget, order=order)
        degs.append(res.kernel_degree)
        errs.append(res.achieved_error)
    slope, r2 = loglog_fit(degs, errs)
    assert slope == pytest.approx(slope_ref, abs=1e-9)
    assert r2 == pytest.approx(r2_ref, abs=1e-9)
    # the rate itself: smoothing of order k converges no slower than k - 1/2
    assert slope <= -order + 0.5
    assert r2 >= 0.9
