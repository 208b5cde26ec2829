"""Barrier values, checked twice.

The package realizes a barrier as the excess of the connection pinned at xi
over the free connection through the same gap.  The oracle here recomputes
both connections by pure two-stage dynamic programming on explicit grids,
so the frozen numbers are backed by two solver-free-of-shared-code routes.
"""

import math

import numpy as np
import pytest

from oracles import dp_connection_action, dp_pinned_periodic
from twistlab.minimizer import (MinimizeOptions, advanced_state,
                                brute_force_periodic, mather_set,
                                minimize_periodic)
from twistlab.peierls import (barrier_continuity_scan, barrier_profile,
                              greene_residue, has_invariant_circle,
                              peierls_barrier)
from twistlab.twist_core import (Configuration, ContractViolation,
                                 RotationSymbol, cosine_well_family,
                                 integrable, standard_family)

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
WELL = cosine_well_family(2, 1.0)
PLUS01 = RotationSymbol.plus(0, 1)

# advancing barrier on the single well, frozen against the DP oracle
WELL_BARRIER = {
    0.5: 0.7827732402989209,
    0.3: 0.4754194755602421,
    0.7: 0.47541947556024194,
    0.05: 0.0003067119329169081,
}


@pytest.mark.parametrize("xi", sorted(WELL_BARRIER))
def test_well_barrier_frozen(xi):
    res = peierls_barrier(WELL, PLUS01, xi)
    assert res.value == pytest.approx(WELL_BARRIER[xi], rel=1e-9)
    assert not res.on_set
    assert res.gap is not None


def test_well_barrier_against_dp_oracle():
    L = 8
    lo, hi = np.zeros(2 * L + 1), np.ones(2 * L + 1)
    free = dp_connection_action(WELL, lo, hi, +1)
    for xi in (0.5, 0.3):
        pinned = dp_connection_action(WELL, lo, hi, +1, xi=xi)
        assert peierls_barrier(WELL, PLUS01, xi).value == pytest.approx(
            pinned - free, abs=1e-6)


def test_well_barrier_symmetries():
    # the well is even about 1/2, so P(xi) = P(1 - xi) and both one-sided
    # barriers coincide
    pl = peierls_barrier(WELL, PLUS01, 0.3).value
    pr = peierls_barrier(WELL, PLUS01, 0.7).value
    assert pl == pytest.approx(pr, rel=1e-9)
    mn = peierls_barrier(WELL, RotationSymbol.minus(0, 1), 0.5).value
    assert mn == pytest.approx(WELL_BARRIER[0.5], rel=1e-9)


def test_well_barrier_edge_decay():
    v4 = peierls_barrier(WELL, PLUS01, 1e-4).value
    assert 0.0 < v4 < 1e-8
    on = peierls_barrier(WELL, PLUS01, 0.0)
    assert on.value == 0.0 and on.on_set


def test_barrier_is_periodic_in_xi():
    a = peierls_barrier(WELL, PLUS01, 0.3).value
    b = peierls_barrier(WELL, PLUS01, 1.3).value
    assert a == pytest.approx(b, rel=1e-12)


def test_barrier_never_negative():
    h = standard_family(1.5)
    for sym in (RotationSymbol.plus(1, 2), RotationSymbol.minus(2, 3)):
        prof = barrier_profile(h, sym, (np.arange(16) + 0.5) / 16)
        assert float(prof.min()) >= -1e-12


def test_rational_barrier_matches_pinned_dp():
    h = standard_family(1.5)
    for (p, q) in [(1, 2), (1, 3), (2, 3)]:
        free = brute_force_periodic(h, p, q, 512).action
        sym = RotationSymbol.rational(p, q)
        for xi in (0.19, 0.47):
            pkg = peierls_barrier(h, sym, xi).value
            dp = dp_pinned_periodic(h, p, q, xi) - free
            assert pkg == pytest.approx(dp, abs=1e-6)


def test_rational_barrier_on_set_is_zero():
    h = standard_family(1.5)
    xi = float(mather_set(h, 1, 2).projection[0])
    res = peierls_barrier(h, RotationSymbol.rational(1, 2), xi)
    assert res.on_set and res.value == 0.0


def test_continuum_symbol_reports_zero():
    res = peierls_barrier(integrable(), RotationSymbol.plus(1, 2), 0.37)
    assert res.continuum and res.value == 0.0


PROFILE_SUPS = {
    # (kick, sign): (sup, min) of the one-sided barrier at 2/3 on a 16-grid
    (1.5, +1): (0.002064371832256745, 1.6795988311002485e-06),
    (1.5, -1): (0.0016497686410407164, 2.9656698263824666e-08),
    (0.3, +1): (0.0006563924761464612, 2.596883663108507e-07),
    (0.3, -1): (0.0006667557248667688, 1.7476987876352545e-07),
}


@pytest.mark.parametrize("kick,sign", sorted(PROFILE_SUPS))
def test_profile_sups_frozen(kick, sign):
    sym = RotationSymbol.plus(2, 3) if sign > 0 else RotationSymbol.minus(2, 3)
    prof = barrier_profile(standard_family(kick), sym, (np.arange(16) + 0.5) / 16)
    sup_ref, min_ref = PROFILE_SUPS[(kick, sign)]
    assert float(prof.max()) == pytest.approx(sup_ref, rel=1e-9)
    assert float(prof.min()) == pytest.approx(min_ref, rel=1e-6)


def test_irrational_symbol_carries_convergent_sequence():
    h = standard_family(1.5)
    res = peierls_barrier(h, RotationSymbol.irrational(GOLDEN), 0.19,
                          MinimizeOptions(convergent_depth=7))
    assert res.sequence is not None and len(res.sequence) >= 4
    names = [name for name, _ in res.sequence]
    assert names[0] == "1/2+"                 # below golden, approach from the left
    assert all(v >= 0.0 for _, v in res.sequence)
    assert res.value == res.sequence[-1][1]


def test_circle_check_rejects_rational_frequency():
    with pytest.raises(ContractViolation):
        has_invariant_circle(standard_family(0.3), 0.5)


def test_circle_check_trivial_yes_on_shear():
    ev = has_invariant_circle(integrable(), GOLDEN,
                              MinimizeOptions(convergent_depth=6))
    assert ev.verdict == "yes"
    assert all(v == 0.0 for (_, _, v) in ev.levels)


def test_continuity_scan_settles():
    rep = barrier_continuity_scan(standard_family(1.5), GOLDEN, depth=7)
    assert len(rep.level_sup_diffs) >= 3
    assert rep.monotone_after_two
    assert rep.level_sup_diffs[-1] < rep.level_sup_diffs[0]


def test_advanced_state_monotone_and_pinned():
    h = standard_family(1.5)
    ms = mather_set(h, 1, 2)
    g0, g1 = ms.gaps[0]
    # the (1, 2) orbit passes through both gap edges; index it either way
    lower = Configuration(points=np.array([g0, g1]), period=(1, 2))
    upper = Configuration(points=np.array([g1, g0 + 1.0]), period=(1, 2))
    xi = 0.5
    c = advanced_state(h, 1, 2, +1, xi, lower, upper)
    pts = np.asarray(c.points)
    assert np.all(np.diff(pts) > 0)
    assert pts[-c.start] == pytest.approx(xi)
    assert pts[0] == pytest.approx(lower.point(c.start), abs=1e-9)


RESIDUES = {
    # (kick, p, q): Greene residue on the minimal orbit
    (0.3, 1, 2): -0.022541811287000724,
    (0.3, 8, 13): -5.350327170194902e-08,
    (1.5, 1, 2): -0.5840392088125241,
    (1.5, 8, 13): -124.42843739086085,
}


@pytest.mark.parametrize("kick,p,q", sorted(RESIDUES))
def test_residues_frozen(kick, p, q):
    val = greene_residue(standard_family(kick), p, q)
    assert val == pytest.approx(RESIDUES[(kick, p, q)], rel=1e-8)


def test_residue_trends_split_weak_and_strong_kick():
    pairs = [(1, 2), (2, 3), (3, 5), (5, 8), (8, 13)]
    weak = [abs(greene_residue(standard_family(0.3), p, q)) for p, q in pairs]
    strong = [abs(greene_residue(standard_family(1.5), p, q)) for p, q in pairs]
    assert all(weak[i + 1] < weak[i] for i in range(len(weak) - 1))
    assert all(strong[i + 1] > strong[i] for i in range(len(strong) - 1))
    assert greene_residue(integrable(), 1, 2) == pytest.approx(0.0, abs=1e-12)
