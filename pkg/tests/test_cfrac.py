"""Continued fractions: convergents, approximation exponents, noise floor.

The frozen exponents are depth-dependent by design: the measured exponent is
a running minimum over the available convergents, so requesting more depth
can only keep it or pull it down.
"""

import math

import pytest

from twistlab.cfrac import (approximation_exponent, expand, from_quotients,
                            is_badly_approximable, jarnik_dimension,
                            successive_denominator_ratio)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def test_golden_quotients_all_ones():
    cf = expand(GOLDEN, 12)
    assert cf.quotients[0] == 0
    assert all(a == 1 for a in cf.quotients[1:])
    assert [c.q for c in cf.convergents[:7]] == [1, 1, 2, 3, 5, 8, 13]


def test_golden_exponent_depth12():
    cf = expand(GOLDEN, 12)
    assert approximation_exponent(cf) == pytest.approx(0.16192330629611673, rel=1e-12)


def test_golden_exponent_depth34_hits_noise_floor():
    # |q w - p| for the stored double bottoms out near q ~ 5.7e6; past that
    # the expansion reports the value as rational at working precision
    cf = expand(GOLDEN, 34)
    assert cf.depth == 34
    assert cf.rational and cf.exhausted_precision
    assert cf.convergents[-1].q == 5702887
    assert approximation_exponent(cf) == pytest.approx(0.05198329191153617, rel=1e-12)
    deeper = expand(GOLDEN, 40)
    assert deeper.depth == 34      # the request is capped by the floor


def test_exact_quotients_reach_past_the_floor():
    cf = from_quotients([0] + [1] * 60)
    # the exact value is rational, so the trailing ...,1,1 folds into ...,2
    assert cf.depth == 60
    assert cf.convergents[-1].q == 2504730781961
    assert not cf.exhausted_precision
    assert approximation_exponent(cf) == pytest.approx(0.027687607400503467, rel=1e-12)


def test_convergent_errors_decrease():
    cf = expand(GOLDEN, 20)
    errs = [c.error for c in cf.convergents if c.q >= 1]
    assert all(errs[i + 1] < errs[i] for i in range(1, len(errs) - 1))


def test_neighbor_determinant_is_unimodular():
    cf = from_quotients([0, 2, 1, 3, 1, 5, 2, 2])
    cv = cf.convergents
    for i in range(1, len(cv)):
        det = cv[i].p * cv[i - 1].q - cv[i - 1].p * cv[i].q
        assert det in (1, -1)


def test_rational_input_flagged_not_raised():
    cf = expand(0.5, 10)
    assert cf.rational and not cf.exhausted_precision
    assert [(c.p, c.q) for c in cf.convergents] == [(0, 1), (1, 2)]


def test_quotient_ladder_exponent():
    # rapidly growing quotients force a large exponent; exact arithmetic route
    cf = from_quotients([0, 1, 10, 100, 1000, 10000])
    assert approximation_exponent(cf) == pytest.approx(0.6620552759652745, rel=1e-12)


def test_sqrt2_is_badly_approximable():
    cf = expand(math.sqrt(2.0) - 1.0, 20)
    assert all(a == 2 for a in cf.quotients[1:8])
    assert is_badly_approximable(cf, 2)
    assert not is_badly_approximable(cf, 1)
    assert approximation_exponent(cf) == pytest.approx(0.06543779519515791, rel=1e-10)


def test_jarnik_dimension_values():
    assert jarnik_dimension(0.0) == 1.0
    assert jarnik_dimension(2.0) == 0.5
    with pytest.raises(ValueError):
        jarnik_dimension(-0.1)
    cf = expand(GOLDEN, 12)
    assert jarnik_dimension(approximation_exponent(cf)) == pytest.approx(
        0.9251021968149603, rel=1e-12)


def test_golden_denominator_ratio_is_two():
    # Fibonacci denominators double at the first step (1 -> 2) and never again
    assert successive_denominator_ratio(expand(GOLDEN, 34)) == 2.0


def test_bad_inputs():
    with pytest.raises(ValueError):
        expand(float("nan"), 5)
    with pytest.raises(ValueError):
        expand(GOLDEN, 0)
    with pytest.raises(ValueError):
        from_quotients([])
    with pytest.raises(ValueError):
        from_quotients([0, -1])
