"""Perturbation pipeline, rescaled packages, and both search routes."""
import math

import numpy as np
import pytest

from twistlab.errors import BudgetExceeded, ContractViolation
from twistlab.forge import (
    ConstructionParams,
    RescaledPoly,
    analytic_growth_check,
    build_bump,
    build_construction,
    choose_support,
    cr_decay_sweep,
    cr_norm,
    degree_sweep,
    destroy_with_low_degree,
    destroy_with_small_norm,
    gamma_decomposition,
    gamma_exponent,
    normalize_squared,
    period_rescale,
    well_potential,
)
from twistlab.peierls import barrier_lower_bound_check
from twistlab.trigpoly import TrigPoly

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ------------------------------------------------------------------ pipeline
def test_well_potential_closed_form():
    u = well_potential(4, 1.0)
    assert u(0.0) == pytest.approx(0.0, abs=1e-15)
    assert u(0.5) == pytest.approx(2.0 * 4.0 ** -1.0, rel=1e-14)
    x = np.linspace(0.0, 1.0, 97)
    assert np.allclose(u(x), 0.25 * (1.0 - np.cos(2.0 * np.pi * x)), atol=1e-14)


def test_choose_support_scale_and_clamp():
    lo, hi = choose_support(16, 1.0)
    assert hi - lo == pytest.approx(16.0 ** -0.5, rel=1e-14)
    assert lo + hi == pytest.approx(1.0, rel=1e-14)
    lo, hi = choose_support(1, 1.0)    # width capped at the half interval
    assert (lo, hi) == (0.25, 0.75)


def test_params_reject_shallow_smoothness():
    # chain needs k > a / delta
    with pytest.raises(ContractViolation):
        ConstructionParams(n=4, a=1.0, delta=0.25, k=4)
    ConstructionParams(n=4, a=1.0, delta=0.25, k=5)


def test_params_reject_bad_support():
    with pytest.raises(ContractViolation):
        ConstructionParams(n=4, a=1.0, delta=0.5, k=3, support=(0.1, 0.6))
    with pytest.raises(ContractViolation):
        build_bump((0.3, 0.8))


def test_normalize_squared_peak_exact():
    p = TrigPoly.harmonic(2, cos_amp=1.0) + 1.2
    big_n = 12
    sq = normalize_squared(p, big_n)
    assert sq.max_value() == pytest.approx(math.exp(-2.0 * big_n), rel=1e-12)
    assert sq.min_value() >= -1e-15


def test_normalize_squared_refuses_underflow():
    p = TrigPoly.harmonic(1, cos_amp=1.0) + 2.0
    with pytest.raises(ContractViolation):
        normalize_squared(p, 351)      # e^-702 is not a double


def test_pipeline_small_case_frozen():
    c = build_construction(4, 1.0)
    assert c.params.err_budget == pytest.approx(0.25, rel=1e-14)
    assert c.params.search_budget == 8
    assert c.params.degree == 8
    assert c.v.degree == 17
    assert c.eta == pytest.approx(0.5000000000000043, abs=1e-12)
    assert c.v_report.materialized
    assert c.v_report.log_scale == pytest.approx(-16.0, rel=1e-14)
    assert c.v_report.peak_margin_log == pytest.approx(0.6865050151424328, rel=1e-10)
    assert c.v_report.min_unit_value >= -1e-10
    # perturbation peak beats the guaranteed floor e^-2N n^-a
    assert c.log_v(c.eta) >= -2.0 * c.degree - math.log(4.0)


def test_pipeline_deeper_case_frozen():
    c = build_construction(8, 1.0)
    assert c.params.err_budget == pytest.approx(0.1767766952966369, rel=1e-13)
    assert c.params.search_budget == 16
    assert c.params.degree == 16
    assert c.v.degree == 33
    assert c.eta == pytest.approx(0.5463602319566012, abs=1e-12)
    assert c.v_report.peak_margin_log == pytest.approx(0.669933788078541, rel=1e-10)


def test_analytic_growth_check_frozen():
    c = build_construction(4, 1.0)
    lhs, rhs, ok = analytic_growth_check(c.approx.poly, 2)
    assert ok
    assert lhs == pytest.approx(4.657820260538234, rel=1e-10)
    assert rhs == pytest.approx(17.220931577298252, rel=1e-12)


def test_lower_bound_margins_frozen():
    c = build_construction(4, 1.0)
    rep = barrier_lower_bound_check(c, c.h_full)
    assert rep.margin_lower == pytest.approx(15.522734779034419, rel=1e-6)
    assert rep.margin_tail == pytest.approx(10.761603174800854, rel=1e-6)
    assert rep.margin_pointwise == pytest.approx(8.0070707221927, rel=1e-6)
    assert rep.barrier == pytest.approx(0.308184319718983, rel=1e-6)
    assert rep.quarter_square_sum == pytest.approx(0.41936070560932837, rel=1e-6)
    assert rep.quarter_square_sum <= 1.0
    assert rep.threequarters_ok


# ----------------------------------------------------------------- rescaling
def test_period_rescale_moves_indices():
    p = TrigPoly.harmonic(3, cos_amp=2.0) + TrigPoly.harmonic(1, sin_amp=0.5)
    q = 5
    r = period_rescale(p, q)
    assert r.degree == q * p.degree
    x = np.linspace(0.0, 1.0, 203)
    assert np.allclose(r(x), p(q * x) / q ** 2, atol=1e-13)


def test_period_rescale_materialization_cap():
    p = TrigPoly.harmonic(800, cos_amp=1.0)
    with pytest.raises(BudgetExceeded):
        period_rescale(p, 10_000)


LAZY_BASE = well_potential(4, 1.0) + TrigPoly.harmonic(3, sin_amp=0.25)


def test_lazy_package_matches_materialized_pointwise():
    lazy = RescaledPoly(LAZY_BASE, 7, 1.0 / 49.0)
    mat = lazy.materialize()
    assert lazy.degree == 7 * LAZY_BASE.degree == mat.degree
    x = np.linspace(0.0, 1.0, 517)
    assert np.max(np.abs(lazy(x) - mat(x))) < 1e-14
    assert np.max(np.abs(lazy.eval_deriv(x, 2) - mat.eval_deriv(x, 2))) < 1e-10


def test_lazy_package_norms_integer_orders():
    lazy = RescaledPoly(LAZY_BASE, 7, 1.0 / 49.0)
    mat = lazy.materialize()
    for r in (0.0, 1.0, 2.0, 3.0):
        a, b = cr_norm(lazy, r), cr_norm(mat, r)
        assert a == pytest.approx(b, rel=1e-12)


def test_lazy_package_norms_fractional_orders():
    # the Holder ladder sees different spacing grids before and after
    # dilation, so the identity holds only to the ladder resolution
    lazy = RescaledPoly(LAZY_BASE, 7, 1.0 / 49.0)
    mat = lazy.materialize()
    for r in (1.5, 2.5):
        a, b = cr_norm(lazy, r), cr_norm(mat, r)
        assert a == pytest.approx(b, rel=5e-5)


def test_cr_norm_closed_forms():
    p = TrigPoly.harmonic(3, cos_amp=2.0)
    for j in (0, 1, 2):
        assert cr_norm(p, float(j)) == pytest.approx(2.0 * (6.0 * math.pi) ** j, rel=1e-12)


def test_holder_seminorm_against_dense_scan():
    # for cos 2 pi x the seminorm is max over d of 2 sin(pi d) / d^beta
    beta = 0.5
    d = np.linspace(1e-6, 0.5, 400_000)
    oracle = float(np.max(2.0 * np.sin(np.pi * d) / d ** beta))
    got = cr_norm(TrigPoly.harmonic(1, cos_amp=1.0), beta)
    assert got == pytest.approx(3.0175690283679137, rel=1e-12)
    assert got == pytest.approx(oracle, rel=1e-5)


def test_cr_norm_rejects_negative_order():
    with pytest.raises(ContractViolation):
        cr_norm(TrigPoly.harmonic(1), -0.5)


# -------------------------------------------------------------- decay sweeps
def test_decay_sweep_matches_dimension_count():
    rows, slope, bound = cr_decay_sweep(GOLDEN, 1.0, 2.0, depth=12)
    assert bound == pytest.approx(-1.0, abs=1e-12)
    assert slope == pytest.approx(-1.000000000002023, abs=1e-9)
    assert [q for q, _ in rows] == [2, 3, 5, 8, 13, 21, 34, 55, 89, 144]
    frozen = {2: 19.739208802541302, 13: 3.0368013541813412, 144: 0.27415567780803773}
    vals = dict(rows)
    for q, v in frozen.items():
        assert vals[q] == pytest.approx(v, rel=1e-9)
    assert slope <= bound + 0.2


def test_decay_sweep_fractional_order():
    rows, slope, bound = cr_decay_sweep(GOLDEN, 1.4, 2.2, depth=12)
    assert bound == pytest.approx(-1.2, abs=1e-12)
    assert slope == pytest.approx(-1.199999999553679, abs=1e-6)
    assert rows[0][1] == pytest.approx(39.828201842232865, rel=1e-9)
    assert rows[-1][1] == pytest.approx(0.23517529929795133, rel=1e-7)


# ------------------------------------------------------------- search routes
def test_small_norm_route_frozen():
    pkg, rep = destroy_with_small_norm(GOLDEN, 2.0, 2.0, depth=16)
    assert rep.freq_exponent == pytest.approx(0.11671612376458596, rel=1e-12)
    assert rep.a == pytest.approx(0.558358061882293, rel=1e-12)
    assert rep.delta == rep.a          # at the midpoint split both coincide
    assert rep.k == 2
    assert rep.chosen_q == 233
    assert rep.slope == pytest.approx(-0.5583616174663161, rel=1e-6)
    assert rep.slope_bound == pytest.approx(-0.558358061882293, rel=1e-12)
    assert len(rep.rows) == 12
    assert rep.rows[0] == (1, 4, 0.5, pytest.approx(39.55668710541482, rel=1e-9))
    assert rep.rows[-1][3] == pytest.approx(1.8816007299061313, rel=1e-9)
    assert pkg.q == 233
    assert pkg.scale == pytest.approx(233.0 ** -2.0, rel=1e-14)
    assert cr_norm(pkg, 2.0) < 2.0


def test_small_norm_route_rejects_high_order():
    # admissible orders stop at 3 + measured exponent (about 3.117 here)
    with pytest.raises(ContractViolation):
        destroy_with_small_norm(GOLDEN, 2.0, 3.2, depth=16)


def test_small_norm_route_budget_exhaustion():
    with pytest.raises(BudgetExceeded) as e:
        destroy_with_small_norm(GOLDEN, 1e-9, 2.0, depth=10)
    rep = e.value.args[1]
    assert rep.chosen_q is None
    assert all(v >= 1e-9 for _, _, _, v in rep.rows)


def test_low_degree_route_frozen():
    pkg, rep = destroy_with_low_degree(GOLDEN, 1e-4, 1.0, 4, 8)
    assert rep.a == pytest.approx(0.75, rel=1e-14)
    assert rep.delta == pytest.approx(0.25, rel=1e-14)
    assert rep.chosen_q == 610
    assert rep.total_degree == 18910
    assert rep.support_degree == 18910
    assert rep.gamma == pytest.approx(0.8125, rel=1e-14)
    assert pkg.q == 610
    assert pkg.degree == rep.total_degree
    assert pkg.scale == pytest.approx(610.0 ** -2.75, rel=1e-14)
    assert cr_norm(pkg, 1.0) < 1e-4


def test_low_degree_route_needs_constant_type():
    bumpy = 1.0 / (1.0 + 1.0 / 50.0)   # partial quotient 50
    with pytest.raises(ContractViolation):
        destroy_with_low_degree(bumpy, 1e-4, 1.0, 4, 8)


def test_low_degree_route_order_range():
    with pytest.raises(ContractViolation):
        destroy_with_low_degree(GOLDEN, 1e-4, 3.0, 4, 8)


def test_degree_sweep_slope_tracks_exponent():
    out, slope, gamma = degree_sweep(
        GOLDEN, 1.0, 4, 8, (1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 3e-7, 1e-7))
    assert gamma == pytest.approx(0.8125, rel=1e-14)
    assert slope == pytest.approx(0.7879025501160736, rel=1e-6)
    assert abs(slope - gamma) <= 0.1
    assert out[0] == (1e-4, 610, 18910)
    assert out[-1] == (1e-7, 28657, 4327207)
    totals = [t for _, _, t in out]
    assert totals == sorted(totals)


def test_degree_sweep_steeper_order():
    out, slope, gamma = degree_sweep(
        GOLDEN, 2.0, 4, 8, (3e-1, 1e-1, 3e-2, 1e-2, 3e-3, 1e-3))
    assert gamma == pytest.approx(1.7053571428571428, rel=1e-14)
    assert slope == pytest.approx(1.7191499205771645, rel=1e-6)
    assert abs(slope - gamma) <= 0.1
    assert out[0] == (0.3, 377, 11687)
    assert out[-1] == (1e-3, 196418, 157330818)


def test_degree_sweep_rejects_empty_grid():
    with pytest.raises(ContractViolation):
        degree_sweep(GOLDEN, 1.0, 4, 8, ())


def test_gamma_identities():
    for r, a, want, boundary in (
            (1.0, 0.75, 0.8125, 0.75),
            (2.0, 0.875, 1.7053571428571428, 1.5)):
        g = gamma_exponent(a, r, 8)
        terms = gamma_decomposition(a, r, 8)
        assert g == pytest.approx(want, rel=1e-14)
        assert sum(terms) == pytest.approx(g, abs=1e-15)
        assert terms[0] == pytest.approx(boundary, rel=1e-14)
        assert 3.0 / (2.0 * (3.0 - r)) == pytest.approx(boundary, rel=1e-14)
        # the exponent exceeds its k -> infinity boundary by the two tail terms
        assert g > boundary


def test_gamma_terms_frozen():
    assert gamma_decomposition(0.75, 1.0, 8) == pytest.approx(
        (0.75, 0.03571428571428571, 0.026785714285714284), rel=1e-14)
    assert gamma_decomposition(0.875, 2.0, 8) == pytest.approx(
        (1.5, 0.14285714285714285, 0.0625), rel=1e-14)
