"""Peierls barrier evaluation and the invariant-circle criterion.

The barrier at a pinned point is the excess action of the cheapest admissible
configuration over the gap-edge periodic minimizer.  Rational symbols use the
periodic index set {0..q-1}; one-sided symbols use a truncated window with the
boundary pinned to the gap edges in the advancing or retreating arrangement.
Points on the projected minimal set get barrier zero by definition.  Irrational
frequencies are probed along the convergent sequence of one-sided rational
symbols; `has_invariant_circle` turns that sequence into a thresholded verdict
with an explicit inconclusive outcome.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import logsumexp

from . import cfrac
from .minimizer import (
    MinimizeOptions, MatherSet, advanced_state, chain_dp_min, mather_set,
    window_minimize,
)
from .twist_core import (
    Configuration, ContractViolation, GeneratingFunction, RotationSymbol,
    tangent_matrix,
)

__all__ = [
    "BarrierResult", "CircleEvidence", "ContinuityReport", "InequalityReport",
    "peierls_barrier", "has_invariant_circle", "barrier_continuity_scan",
    "barrier_lower_bound_check", "greene_residue",
]


@dataclass(frozen=True)
class BarrierResult:
    symbol: RotationSymbol
    xi: float
    value: float
    gap: tuple[float, float] | None
    on_set: bool
    continuum: bool
    index_set: str
    minimizer: Configuration | None
    residual: float
    sequence: tuple[tuple[str, float], ...] | None = None


@dataclass(frozen=True)
class CircleEvidence:
    verdict: str                    # "yes" | "no" | "inconclusive"
    omega: float
    levels: tuple[tuple[str, int, float], ...]  # (symbol, q, sup barrier)
    grid_size: int
    refined_sup: float | None
    theta_pos: float
    theta_zero: float
    tail: int


@dataclass(frozen=True)
class ContinuityReport:
    omega: float
    symbols: tuple[str, ...]
    level_sup_diffs: tuple[float, ...]
    monotone_after_two: bool


@dataclass(frozen=True)
class InequalityReport:
    n: int
    a: float
    err_budget: float
    degree: int
    eta: float
    window_halflength: int
    log_v_eta: float
    log_peak_floor: float           # log(e^{-2N} n^-a), the guaranteed peak
    log_sum_v: float                # log sum of v over the free orbit
    log_sum_u: float                # log sum of the well over the same orbit
    quarter_square_sum: float       # sum of (x_{i+1}-x_{i-1})^2 / 4, want <= 1
    log_tail_budget: float          # log(budget^2 e^{-2N})
    margin_pointwise: float         # log(budget^2 e^{-2N} sum u) - log_sum_v
    margin_tail: float              # log_tail_budget - log_sum_v  (>= 0 wanted)
    barrier: float
    log_rhs: float                  # log(v(eta) - sum v), -inf if rhs <= 0
    margin_lower: float             # log(barrier) - log_rhs     (>= 0 wanted)
    threequarters_ok: bool          # barrier >= 0.75 e^{-2N} n^-a


# ------------------------------------------------------------------- plumbing
def _lifted_edge(ms: MatherSet, target: float) -> Configuration:
    """Periodic configuration through the lift `target` at site 0."""
    frac = target - math.floor(target)
    q = ms.q
    for c in ms.configurations:
        vals = np.asarray([c.point(j) for j in range(q)])
        d = np.abs((vals - frac + 0.5) % 1.0 - 0.5)
        j = int(np.argmin(d))
        if d[j] < 1e-7:
            w = np.asarray([c.point(j + i) for i in range(q)])
            shift = round(w[0] - frac)
            pts = w - shift + (target - frac)
            pts[0] = target
            return Configuration(points=pts, start=0, period=(ms.p, ms.q),
                                 symbol=RotationSymbol.rational(ms.p, ms.q))
    raise ContractViolation(f"no minimizer passes through {target}")


def _locate_gap(ms: MatherSet, xi: float, resolution: float
                ) -> tuple[float, float] | None:
    """Gap (lifted) containing xi, or None when xi sits on the projected set."""
    proj = ms.projection
    d = np.abs((proj - xi + 0.5) % 1.0 - 0.5)
    if float(np.min(d)) < resolution:
        return None
    below = proj[proj <= xi]
    left = float(below[-1]) if len(below) else float(proj[-1]) - 1.0
    above = proj[proj > xi]
    right = float(above[0]) if len(above) else float(proj[0]) + 1.0
    return (left, right)


def _window_action_excess(h: GeneratingFunction, x: np.ndarray,
                          ref: np.ndarray) -> float:
    terms = np.asarray(h.h(x[:-1], x[1:]), dtype=float) \
        - np.asarray(h.h(ref[:-1], ref[1:]), dtype=float)
    return float(math.fsum(terms))


# ------------------------------------------------------------ rational symbol
def _pinned_periodic_newton(h: GeneratingFunction, x: np.ndarray,
                            lo: np.ndarray, hi: np.ndarray,
                            tol: float) -> tuple[np.ndarray, float]:
    """Polish the interior of a pinned chain (x[0], x[-1] fixed), boxed."""
    from scipy.linalg import solve_banded
    n = len(x)
    res = 0.0
    for _ in range(80):
        r = np.asarray(h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1]), dtype=float)
        res = float(np.max(np.abs(r))) if len(r) else 0.0
        if res < tol:
            break
        diag = np.asarray(h.d11(x[1:-1], x[2:]) + h.d22(x[:-2], x[1:-1]), dtype=float)
        up = np.asarray(h.d12(x[1:-1], x[2:]), dtype=float)
        lo_band = np.asarray(h.d12(x[:-2], x[1:-1]), dtype=float)
        m = n - 2
        ab = np.zeros((3, m))
        ab[1] = diag
        if m > 1:
            ab[0, 1:] = up[:-1]
            ab[2, :-1] = lo_band[1:]
        try:
            step = solve_banded((1, 1), ab, -r)
        except np.linalg.LinAlgError:
            break
        scale = 1.0
        base = np.linalg.norm(r)
        while scale > 1e-6:
            xn = x.copy()
            xn[1:-1] = np.clip(x[1:-1] + scale * step, lo[1:-1], hi[1:-1])
            rn = np.asarray(h.d1(xn[1:-1], xn[2:]) + h.d2(xn[:-2], xn[1:-1]),
                            dtype=float)
            if np.linalg.norm(rn) <= base * (1.0 - 0.2 * scale) + 1e-15:
                x = xn
                break
            scale *= 0.5
        else:
            break
    return x, res


def _rational_barrier(h: GeneratingFunction, p: int, q: int, xi: float,
                      ms: MatherSet, opts: MinimizeOptions) -> BarrierResult:
    sym = RotationSymbol.rational(p, q)
    gap = _locate_gap(ms, xi, opts.on_set_resolution)
    if gap is None:
        return BarrierResult(sym, xi, 0.0, None, True, False,
                             "I={0..%d}" % (q - 1), None, 0.0)
    left = _lifted_edge(ms, gap[0])
    right = _lifted_edge(ms, gap[1])
    idx = np.arange(q + 1)
    lo = np.array([left.point(i) for i in idx])
    hi = np.array([right.point(i) for i in idx])
    # grids inside the order interval, pinned at both chain ends
    g = max(64, min(opts.grid_states, 512)) | 1
    grids = [np.array([xi])]
    for i in range(1, q):
        grids.append(np.linspace(lo[i], hi[i], g))
    grids.append(np.array([xi + p]))
    cost = [h.h] * q
    _, path = chain_dp_min(cost, grids)
    x, res = _pinned_periodic_newton(h, path, lo, hi, opts.tolerance)
    val = _window_action_excess(h, x, lo[:q + 1])
    cfg = Configuration(points=x[:q], start=0, period=(p, q), symbol=sym)
    return BarrierResult(sym, xi, val, gap, False, False,
                         "I={0..%d}" % (q - 1), cfg, res)


# ----------------------------------------------------------- one-sided symbol
def _window_frame(ms: MatherSet, gap: tuple[float, float], L: int
                  ) -> tuple[np.ndarray, np.ndarray]:
    left = _lifted_edge(ms, gap[0])
    right = _lifted_edge(ms, gap[1])
    idx = np.arange(-L, L + 1)
    lo = np.array([left.point(i) for i in idx], dtype=float)
    hi = np.array([right.point(i) for i in idx], dtype=float)
    return lo, hi


def _edge_weighted_nodes(m: int) -> np.ndarray:
    """Nodes on [0, 1] clustered geometrically toward both endpoints.

    Connection orbits approach the gap edges exponentially, so uniform grids
    cannot represent the tails; the quantization cost then biases a DP toward
    jamming the transition against the window boundary.
    """
    half = np.geomspace(1e-14, 0.5, max(4, m // 2))
    return np.unique(np.concatenate(([0.0], half, 1.0 - half[::-1], [1.0])))


def _free_advanced(h: GeneratingFunction, sign: int, lo: np.ndarray,
                   hi: np.ndarray, opts: MinimizeOptions,
                   dp_states: int = 128) -> np.ndarray:
    """Global free connection across the window (ends pinned per sign).

    A boxed DP over per-site grids supplies the global structure (in
    particular the transition phase mod q, which local descent gets stuck on);
    bounded quasi-Newton polishes it.  A mid-window step and a plain ramp are
    polished as well in case the DP basin is off.
    """
    n = len(lo)
    L = (n - 1) // 2
    ends = {-L: lo[0], L: hi[-1]} if sign > 0 else {-L: hi[0], L: lo[-1]}
    nodes = _edge_weighted_nodes(dp_states)
    grids = [np.array([ends[-L]])]
    for i in range(1, n - 1):
        grids.append(lo[i] + nodes * (hi[i] - lo[i]))
    grids.append(np.array([ends[L]]))
    _, path = chain_dp_min([h.h] * (n - 1), grids)
    idx = np.arange(-L, L + 1)
    s0, s1 = (0.0, 1.0) if sign > 0 else (1.0, 0.0)
    ramp = lo + np.interp(idx, [-L, L], [s0, s1]) * (hi - lo)
    step = np.where(idx < 0, lo + s0 * (hi - lo), lo + s1 * (hi - lo))
    best, best_a = None, None
    for warm in (path, step, ramp):
        x = window_minimize(h, lo, hi, -L, ends, opts, warm=warm)
        a = _window_action_excess(h, x, lo)
        if best_a is None or a < best_a:
            best, best_a = x, a
    return best


def _one_sided_barrier(h: GeneratingFunction, p: int, q: int, sign: int,
                       xi: float, ms: MatherSet, opts: MinimizeOptions,
                       free_x: np.ndarray | None = None) -> BarrierResult:
    """Pinned-minus-free realization of the one-sided barrier.

    Both problems share the window and the sign-appropriate end pins, so the
    truncation and partial-period boundary effects cancel in the difference;
    the value is nonnegative by constraint nesting and vanishes exactly on the
    orbit of the free connection.
    """
    sym = RotationSymbol.plus(p, q) if sign > 0 else RotationSymbol.minus(p, q)
    gap = _locate_gap(ms, xi, opts.on_set_resolution)
    L = max(opts.window_halflength or 0, 8 * q)
    L = (L // q) * q
    if gap is None:
        return BarrierResult(sym, xi, 0.0, None, True, False,
                             f"window[-{L},{L}]", None, 0.0)
    lo, hi = _window_frame(ms, gap, L)
    if free_x is None:
        free_x = _free_advanced(h, sign, lo, hi, opts)
    ends = {-L: lo[0], L: hi[-1]} if sign > 0 else {-L: hi[0], L: lo[-1]}
    xi_lift = gap[0] + ((xi - gap[0]) % 1.0)
    pins = dict(ends)
    pins[0] = xi_lift
    idx = np.arange(-L, L + 1)
    s0, s1 = (0.0, 1.0) if sign > 0 else (1.0, 0.0)
    t0 = (xi_lift - lo[L]) / (hi[L] - lo[L])
    warm_ramp = lo + np.interp(idx, [-L, 0, L], [s0, t0, s1]) * (hi - lo)
    warm_spike = free_x.copy()
    warm_spike[L] = xi_lift
    # translate the free transition by whole periods so its crossing lands
    # near site 0 before pinning; shifts of q sites are exact conjugacies
    t_free = (free_x - lo) / np.maximum(hi - lo, 1e-300)
    c = int(np.argmin(np.abs(t_free - t0))) - L
    k = int(round(c / q)) * q
    j = idx + k + L
    warm_shift = np.where(
        (j >= 0) & (j <= 2 * L),
        np.take(free_x, np.clip(j, 0, 2 * L)) - (k // q) * p,
        lo + (s1 if k > 0 else s0) * (hi - lo))
    warm_shift = np.clip(warm_shift, lo, hi)
    warm_shift[L] = xi_lift
    best_x, best_a = None, None
    for warm in (warm_ramp, warm_spike, warm_shift):
        x = window_minimize(h, lo, hi, -L, pins, opts, warm=warm)
        a = _window_action_excess(h, x, free_x)
        if best_a is None or a < best_a:
            best_x, best_a = x, a
    x = best_x
    val = float(best_a)
    r_int = np.asarray(h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1]), dtype=float)
    interior_free = np.ones(len(x) - 2, dtype=bool)
    interior_free[L - 1] = False
    interior_free &= (x[1:-1] > lo[1:-1] + 1e-12) & (x[1:-1] < hi[1:-1] - 1e-12)
    res = float(np.max(np.abs(r_int[interior_free]))) if np.any(interior_free) else 0.0
    cfg = Configuration(points=x, start=-L, period=None, symbol=sym)
    return BarrierResult(sym, xi, val, gap, False, False,
                         f"window[-{L},{L}]", cfg, res)


# ------------------------------------------------------------------ public op
def peierls_barrier(h: GeneratingFunction, symbol: RotationSymbol, xi: float,
                    opts: MinimizeOptions = MinimizeOptions(),
                    ms: MatherSet | None = None) -> BarrierResult:
    """Barrier value at xi for the given rotation symbol.

    Rational and one-sided symbols are computed directly.  Irrational symbols
    return the sequence of one-sided barriers along the convergents (in
    `sequence`), with `value` the deepest entry.  A configuration counts as on
    the minimal set, with barrier zero, when xi is within opts.on_set_resolution
    of the projected set.  Values are invariant under xi -> xi + 1 because the
    lift is reduced first.
    """
    xi = xi - math.floor(xi)
    if symbol.kind == "rational":
        m = ms or mather_set(h, symbol.p, symbol.q, opts)
        if m.continuum:
            return BarrierResult(symbol, xi, 0.0, None, True, True,
                                 "I={0..%d}" % (symbol.q - 1), None, 0.0)
        return _rational_barrier(h, symbol.p, symbol.q, xi, m, opts)
    if symbol.kind in ("rational_plus", "rational_minus"):
        sign = 1 if symbol.kind == "rational_plus" else -1
        m = ms or mather_set(h, symbol.p, symbol.q, opts)
        L = max(opts.window_halflength or 0, 8 * symbol.q)
        if m.continuum:
            return BarrierResult(symbol, xi, 0.0, None, True, True,
                                 f"window[-{L},{L}]", None, 0.0)
        return _one_sided_barrier(h, symbol.p, symbol.q, sign, xi, m, opts)
    # irrational: probe along convergents with the one-sided symbol facing omega
    omega = symbol.omega
    cf = cfrac.expand(omega, opts.convergent_depth)
    seq: list[tuple[str, float]] = []
    last: BarrierResult | None = None
    for conv in cf.convergents:
        if conv.q < 2:
            continue
        frac = conv.p / conv.q
        if frac == omega:
            continue
        sub = RotationSymbol.plus(conv.p, conv.q) if frac < omega \
            else RotationSymbol.minus(conv.p, conv.q)
        last = peierls_barrier(h, sub, xi, opts)
        seq.append((str(sub), last.value))
    if last is None:
        raise ContractViolation("no usable convergents for the irrational symbol")
    return BarrierResult(symbol, xi, last.value, last.gap, last.on_set,
                         last.continuum, "convergents", last.minimizer,
                         last.residual, sequence=tuple(seq))


def _barrier_profile(h: GeneratingFunction, sym: RotationSymbol,
                     xis: np.ndarray, opts: MinimizeOptions,
                     ms: MatherSet | None = None) -> np.ndarray:
    """Barrier values over a xi grid, reusing the free connection per gap."""
    m = ms or mather_set(h, sym.p, sym.q, opts)
    if sym.kind == "rational":
        return np.array([peierls_barrier(h, sym, float(x), opts, ms=m).value
                         for x in xis])
    sign = 1 if sym.kind == "rational_plus" else -1
    vals = np.zeros(len(xis))
    if m.continuum:
        return vals
    L = max(opts.window_halflength or 0, 8 * sym.q)
    L = (L // sym.q) * sym.q
    cache: dict[tuple[float, float], np.ndarray] = {}
    for k, xi in enumerate(xis):
        gap = _locate_gap(m, float(xi), opts.on_set_resolution)
        if gap is None:
            continue
        key = (round(gap[0], 9), round(gap[1], 9))
        if key not in cache:
            lo, hi = _window_frame(m, gap, L)
            cache[key] = _free_advanced(h, sign, lo, hi, opts)
        vals[k] = _one_sided_barrier(h, sym.p, sym.q, sign, float(xi), m, opts,
                                     free_x=cache[key]).value
    return vals


def barrier_profile(h: GeneratingFunction, symbol: RotationSymbol,
                    xis: np.ndarray, opts: MinimizeOptions = MinimizeOptions()
                    ) -> np.ndarray:
    """Barrier values over a xi grid; one free connection solve per gap."""
    return _barrier_profile(h, symbol, np.asarray(xis, dtype=float), opts)


def _sup_barrier_on_grid(h: GeneratingFunction, sym: RotationSymbol,
                         xis: np.ndarray, opts: MinimizeOptions) -> float:
    return float(np.max(_barrier_profile(h, sym, xis, opts)))


def has_invariant_circle(h: GeneratingFunction, omega: float,
                         opts: MinimizeOptions = MinimizeOptions(),
                         theta_pos: float = 1e-5, theta_zero: float = 1e-9,
                         grid_size: int = 16, tail: int = 3) -> CircleEvidence:
    """Thresholded circle criterion at frequency omega.

    Evaluates the sup of the one-sided barrier over a xi-grid at successive
    convergent symbols.  A fixed-q one-sided barrier is positive somewhere for
    any nonintegrable map, so the zero test applies to the deepest `tail`
    levels, where the sequence has converged toward the irrational limit.
    Verdict "no" needs the two deepest sups above theta_pos and stability of
    the deepest sup under doubling the xi-grid; "yes" needs the tail sups all
    below theta_zero; anything else is inconclusive.
    """
    cf = cfrac.expand(omega, opts.convergent_depth)
    if cf.rational and not cf.exhausted_precision:
        raise ContractViolation("omega is rational to working precision")
    xis = (np.arange(grid_size) + 0.5) / grid_size
    levels: list[tuple[str, int, float]] = []
    syms: list[RotationSymbol] = []
    for conv in cf.convergents:
        if conv.q < 2 or conv.p / conv.q == omega:
            continue
        sym = RotationSymbol.plus(conv.p, conv.q) if conv.p / conv.q < omega \
            else RotationSymbol.minus(conv.p, conv.q)
        syms.append(sym)
        levels.append((str(sym), conv.q, _sup_barrier_on_grid(h, sym, xis, opts)))
    if len(levels) < 2:
        raise ContractViolation("need at least two convergent levels")
    sups = [v for (_, _, v) in levels]
    tail = min(tail, len(levels))
    refined_sup = None
    verdict = "inconclusive"
    if all(v < theta_zero for v in sups[-tail:]):
        verdict = "yes"
    elif sups[-1] > theta_pos and sups[-2] > theta_pos:
        fine = (np.arange(2 * grid_size) + 0.5) / (2 * grid_size)
        refined_sup = _sup_barrier_on_grid(h, syms[-1], fine, opts)
        if refined_sup > theta_pos:
            verdict = "no"
    return CircleEvidence(verdict=verdict, omega=omega, levels=tuple(levels),
                          grid_size=grid_size, refined_sup=refined_sup,
                          theta_pos=theta_pos, theta_zero=theta_zero, tail=tail)


def barrier_continuity_scan(h: GeneratingFunction, omega: float, depth: int,
                            xi_grid: int = 16,
                            opts: MinimizeOptions = MinimizeOptions()
                            ) -> ContinuityReport:
    """Sup distance between consecutive convergent-level barrier profiles.

    After the first two levels the sequence is expected to settle; the report
    flags whether each later difference stays within a 10% wiggle of its
    predecessor (non-increase up to factor 1.1).
    """
    cf = cfrac.expand(omega, depth)
    xis = (np.arange(xi_grid) + 0.5) / xi_grid
    profiles: list[np.ndarray] = []
    names: list[str] = []
    for conv in cf.convergents:
        if conv.q < 2 or conv.p / conv.q == omega:
            continue
        sym = RotationSymbol.plus(conv.p, conv.q) if conv.p / conv.q < omega \
            else RotationSymbol.minus(conv.p, conv.q)
        profiles.append(_barrier_profile(h, sym, xis, opts))
        names.append(str(sym))
    diffs = tuple(float(np.max(np.abs(profiles[i + 1] - profiles[i])))
                  for i in range(len(profiles) - 1))
    ok = all(diffs[i + 1] <= 1.1 * diffs[i] + 1e-15
             for i in range(1, len(diffs) - 1))
    return ContinuityReport(omega=omega, symbols=tuple(names),
                            level_sup_diffs=diffs, monotone_after_two=ok)


# ----------------------------------------------------- lower-bound inequality
def barrier_lower_bound_check(construction, h_n: GeneratingFunction,
                              opts: MinimizeOptions = MinimizeOptions()
                              ) -> InequalityReport:
    """Verify the two-sided bookkeeping behind the barrier lower bound.

    `construction` carries the pipeline pieces: the unperturbed well map
    (h_base), the pointwise log of the localized perturbation (log_v), its
    argmax eta, the approximation error budget, and the achieved degree.  The
    perturbation sum runs over the free advancing orbit of the base map
    through the (0, 1) gap; the chain compares it, in order, against
    budget^2 e^{-2N} times the well sum over the same orbit (pointwise bound,
    sharp only off the support), against the quarter sum of squared double
    steps (spacing bound), against the plain tail budget budget^2 e^{-2N},
    and finally checks the barrier of the full map at eta against the peak
    minus the sum.  Margins are logarithmic, so N in the hundreds stays
    finite.
    """
    h_base: GeneratingFunction = construction.h_base
    eta = float(construction.eta)
    budget = float(construction.err_budget)
    big_n = int(construction.degree)
    n = int(construction.n)
    a = float(construction.a)
    ms = mather_set(h_base, 0, 1, opts)
    if ms.continuum or not ms.gaps:
        raise ContractViolation("base map has no gap to advance through")
    gap = ms.gaps[0]
    # hyperbolic convergence to the gap edges slows as the well gets shallow
    L = max(opts.window_halflength or 0, 8 * max(1, round(n ** (a / 2.0))))
    lo, hi = _window_frame(ms, gap, L)
    x = _free_advanced(h_base, +1, lo, hi, opts)
    log_terms = np.array([construction.log_v(float(t)) for t in x])
    log_sum_v = float(logsumexp(log_terms))
    u_orbit = np.array([float(construction.u(float(t) % 1.0)) for t in x])
    log_sum_u = math.log(float(np.sum(u_orbit))) if np.any(u_orbit > 0) else float("-inf")
    dd = x[2:] - x[:-2]
    quarter = float(np.sum(dd * dd) / 4.0)
    log_budget = 2.0 * math.log(budget) - 2.0 * big_n
    log_v_eta = float(construction.log_v(eta))
    log_floor = -2.0 * big_n - a * math.log(n)
    bar = peierls_barrier(h_n, RotationSymbol.plus(0, 1), eta, opts)
    if log_sum_v < log_v_eta:
        log_rhs = log_v_eta + math.log1p(-math.exp(log_sum_v - log_v_eta))
    else:
        log_rhs = float("-inf")
    log_bar = math.log(bar.value) if bar.value > 0 else float("-inf")
    return InequalityReport(
        n=n, a=a, err_budget=budget,
        degree=big_n, eta=eta, window_halflength=L,
        log_v_eta=log_v_eta, log_peak_floor=log_floor,
        log_sum_v=log_sum_v, log_sum_u=log_sum_u, quarter_square_sum=quarter,
        log_tail_budget=log_budget,
        margin_pointwise=log_budget + log_sum_u - log_sum_v,
        margin_tail=log_budget - log_sum_v,
        barrier=bar.value, log_rhs=log_rhs,
        margin_lower=log_bar - log_rhs,
        threequarters_ok=bool(log_bar >= math.log(0.75) + log_floor),
    )


# -------------------------------------------------------------- residue check
def greene_residue(h: GeneratingFunction, p: int, q: int,
                   opts: MinimizeOptions = MinimizeOptions()) -> float:
    """Residue (2 - trace of the period-q tangent product) / 4 on the minimal orbit."""
    from .minimizer import minimize_periodic
    res = minimize_periodic(h, p, q, opts)
    x = res.configuration.points
    mat = np.eye(2)
    for i in range(q):
        xi = float(x[i])
        xnext = float(x[i + 1]) if i + 1 < q else float(x[0] + p)
        mat = tangent_matrix(h, xi, xnext) @ mat
    return float((2.0 - np.trace(mat)) / 4.0)
