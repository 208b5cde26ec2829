"""Minimal configurations of twist-map action sums.

Periodic (p, q) states are found by damped Newton iteration on the discrete
Euler-Lagrange system with the tridiagonal-plus-corner Jacobian, multi-started
from q + 3 rotated seeds, with a gradient-descent fallback when the Jacobian
loses positivity.  The independent oracle `brute_force_periodic` minimizes the
same action by min-plus dynamic programming (transfer matrix over a grid of
states per site, closed with x_{i+q} = x_i + p) and never trusts the Newton
path.  Advanced states (one-sided rotation symbols) are bounded window
minimizations pinned to the gap-edge periodic states at the window ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import minimize as scipy_minimize

from .twist_core import (
    Configuration, ContractViolation, GeneratingFunction, RotationSymbol,
)

__all__ = [
    "MinimizeOptions", "MinimizeResult", "MatherSet", "DPResult",
    "ConvergenceError", "SaddlePointError", "BudgetExceeded", "WindowError",
    "periodic_action", "minimize_periodic", "brute_force_periodic",
    "mather_set", "advanced_state", "window_minimize", "aubry_crossing_count",
    "chain_dp_min",
]


class ConvergenceError(RuntimeError):
    """Newton and the fallback both stalled; carries the best iterate found."""

    def __init__(self, message: str, best: np.ndarray | None = None,
                 residual: float = float("nan")):
        super().__init__(message)
        self.best = best
        self.residual = residual


class SaddlePointError(RuntimeError):
    """Converged to a stationary point that is not a local minimum."""


class BudgetExceeded(RuntimeError):
    """A configured work cap (grid size, window, degree) is too small."""


class WindowError(RuntimeError):
    """Window truncation is not converged (doubling the window moved the answer)."""


@dataclass(frozen=True)
class MinimizeOptions:
    tolerance: float = 1e-10
    max_iterations: int = 200
    multistart: int | None = None       # default q + 3
    seed: int = 0
    seed_policy: str = "rotational-translates"
    damping: tuple[float, float] = (0.5, 1e-6)   # backtracking factor, floor
    window_halflength: int | None = None  # advanced states; default 8 q
    check_window_doubling: bool = False
    window_tol: float = 1e-8
    grid_states: int = 512              # DP oracle states per site
    on_set_resolution: float = 1e-7     # distance below which xi counts as on the set
    convergent_depth: int = 10          # irrational symbols: convergents evaluated


@dataclass(frozen=True)
class MinimizeResult:
    configuration: Configuration
    action: float
    residual: float
    iterations: int
    n_starts_converged: int
    certificate: str     # "hessian-psd+perturbation" once certified minimal


@dataclass(frozen=True)
class MatherSet:
    p: int
    q: int
    configurations: tuple[Configuration, ...]
    projection: np.ndarray        # sorted points of the set in [0, 1)
    gaps: tuple[tuple[float, float], ...]
    continuum: bool
    action: float


@dataclass(frozen=True)
class DPResult:
    configuration: Configuration
    action: float                 # after the continuous refinement step
    dp_action: float              # raw grid optimum
    grid_states: int


# ----------------------------------------------------------------- utilities
def periodic_action(h: GeneratingFunction, x: np.ndarray, p: int) -> float:
    """Action of one period: sum h(x_i, x_{i+1}) with x_q = x_0 + p."""
    xx = np.concatenate([x, [x[0] + p]])
    return float(math.fsum(np.asarray(h.h(xx[:-1], xx[1:]), dtype=float)))


def _periodic_residual(h: GeneratingFunction, x: np.ndarray, p: int) -> np.ndarray:
    xm = np.concatenate([[x[-1] - p], x[:-1]])
    xp = np.concatenate([x[1:], [x[0] + p]])
    return np.asarray(h.d1(x, xp) + h.d2(xm, x), dtype=float)


def _periodic_jacobian(h: GeneratingFunction, x: np.ndarray, p: int) -> np.ndarray:
    q = len(x)
    xm = np.concatenate([[x[-1] - p], x[:-1]])
    xp = np.concatenate([x[1:], [x[0] + p]])
    diag = np.asarray(h.d11(x, xp) + h.d22(xm, x), dtype=float)
    upper = np.asarray(h.d12(x, xp), dtype=float)      # dr_i / dx_{i+1}
    lower = np.asarray(h.d12(xm, x), dtype=float)      # dr_i / dx_{i-1}
    jac = np.zeros((q, q))
    idx = np.arange(q)
    jac[idx, idx] = diag
    jac[idx, (idx + 1) % q] += upper
    jac[idx, (idx - 1) % q] += lower
    return jac


def _newton_minimize(h: GeneratingFunction, x0: np.ndarray, p: int,
                     opts: MinimizeOptions) -> tuple[np.ndarray, float, int]:
    """Damped Newton on the stationarity system; gradient fallback on action."""
    x = x0.astype(float).copy()
    r = _periodic_residual(h, x, p)
    rn = float(np.max(np.abs(r)))
    for it in range(opts.max_iterations):
        if rn < opts.tolerance:
            return x, rn, it
        jac = _periodic_jacobian(h, x, p)
        w, vec = np.linalg.eigh(0.5 * (jac + jac.T))
        # clip nonpositive curvature so the step is always a descent direction;
        # soft positive modes keep their exact Newton treatment
        scale = max(float(np.max(np.abs(w))), 1e-12)
        floor_w = 1e-8 * scale
        wc = np.where(w > floor_w, w, floor_w)
        step = -vec @ ((vec.T @ r) / wc)
        nrm = float(np.linalg.norm(step))
        if nrm > 2.0:
            step *= 2.0 / nrm
        alpha, accepted = 1.0, False
        shrink, floor = opts.damping
        base = float(np.linalg.norm(r))
        a0 = periodic_action(h, x, p)
        slope = float(r @ step)
        while alpha > floor:
            xn = x + alpha * step
            rn_vec = _periodic_residual(h, xn, p)
            ok_res = np.linalg.norm(rn_vec) <= (1.0 - 0.25 * alpha) * base
            ok_act = slope < 0 and \
                periodic_action(h, xn, p) <= a0 + 1e-4 * alpha * slope
            if ok_res or ok_act:
                x, r = xn, rn_vec
                rn = float(np.max(np.abs(r)))
                accepted = True
                break
            alpha *= shrink
        if not accepted:
            # descend the action directly; the residual is its gradient
            a0 = periodic_action(h, x, p)
            beta = 1.0
            g2 = float(r @ r)
            moved = False
            while beta > 1e-10:
                xn = x - beta * r
                if periodic_action(h, xn, p) <= a0 - 1e-4 * beta * g2:
                    x = xn
                    r = _periodic_residual(h, x, p)
                    rn = float(np.max(np.abs(r)))
                    moved = True
                    break
                beta *= 0.5
            if not moved:
                raise ConvergenceError("Newton and gradient fallback both stalled",
                                       best=x, residual=rn)
    if rn < opts.tolerance:
        return x, rn, opts.max_iterations
    raise ConvergenceError("iteration cap reached before residual tolerance",
                           best=x, residual=rn)


def _descend_action(h: GeneratingFunction, x: np.ndarray, p: int,
                    steps: int) -> np.ndarray:
    """A few backtracking gradient steps on the action (strict descent)."""
    x = x.astype(float).copy()
    a = periodic_action(h, x, p)
    for _ in range(steps):
        g = _periodic_residual(h, x, p)
        g2 = float(g @ g)
        if g2 < 1e-24:
            break
        beta = 1.0
        for _ in range(40):
            xn = x - beta * g
            an = periodic_action(h, xn, p)
            if an <= a - 1e-4 * beta * g2:
                x, a = xn, an
                break
            beta *= 0.5
        else:
            break
    return x


def _lbfgs_descent(h: GeneratingFunction, x0: np.ndarray, p: int) -> np.ndarray:
    from scipy.optimize import minimize as scipy_min

    def fun(z):
        return periodic_action(h, z, p)

    def jac(z):
        return _periodic_residual(h, z, p)

    sol = scipy_min(fun, x0, jac=jac, method="L-BFGS-B",
                    options={"maxiter": 2000, "ftol": 1e-17, "gtol": 1e-12})
    return np.asarray(sol.x, dtype=float)


def _newton_to_minimum(h: GeneratingFunction, x0: np.ndarray, p: int,
                       opts: MinimizeOptions,
                       eig_tol: float = 1e-8) -> tuple[np.ndarray, float, int]:
    """Descend the action into a minimum's basin, then sharpen with Newton.

    Newton root-finding on the stationarity system converges to saddles as
    readily as to minima (the equally-spaced (1, 2) orbit of the standard
    family is the canonical trap, and near-integrable landscapes are crowded
    with weakly hyperbolic stationary points).  Each seed therefore runs a
    descent stage first; Newton only polishes the residual afterwards.  If the
    polished point still has a negative Hessian eigenvalue, it is kicked along
    that eigenvector and re-descended a few times before giving up.
    """
    x = x0.astype(float).copy()
    for attempt in range(4):
        x = _lbfgs_descent(h, x, p)
        x, rn, its = _newton_minimize(h, x, p, opts)
        jac = _periodic_jacobian(h, x, p)
        w, v = np.linalg.eigh(0.5 * (jac + jac.T))
        if w[0] >= -eig_tol:
            return x, rn, its
        x = _descend_action(h, x + 0.05 * (attempt + 1) * v[:, 0], p, 25)
    raise SaddlePointError("descent keeps returning weakly hyperbolic saddles")


def _certify_minimum(h: GeneratingFunction, x: np.ndarray, p: int,
                     grid_step: float, eig_tol: float = 1e-8) -> None:
    jac = _periodic_jacobian(h, x, p)
    w = np.linalg.eigvalsh(0.5 * (jac + jac.T))
    if w[0] < -eig_tol:
        raise SaddlePointError(
            f"stationary point has a descent direction (min Hessian eig {w[0]:.3e})")
    a0 = periodic_action(h, x, p)
    for delta in (grid_step, grid_step / 8.0):
        for i in range(len(x)):
            for sgn in (1.0, -1.0):
                xp = x.copy()
                xp[i] += sgn * delta
                if periodic_action(h, xp, p) < a0 - 1e-12 * max(1.0, abs(a0)):
                    raise SaddlePointError(
                        f"coordinate perturbation at site {i} lowers the action")


def minimize_periodic(h: GeneratingFunction, p: int, q: int,
                      opts: MinimizeOptions = MinimizeOptions()) -> MinimizeResult:
    """Minimal (p, q)-periodic configuration, multi-started and certified.

    Ties between equal-action minimizers are broken lexicographically by the
    normalized first point x_0 in [0, 1).
    """
    if q < 1 or math.gcd(p, q) != 1:
        raise ContractViolation("need q >= 1 and gcd(p, q) = 1")
    n_starts = opts.multistart or (q + 3)
    phases = (np.arange(n_starts) + 0.5) / n_starts
    rng = np.random.default_rng(opts.seed)
    rng.shuffle(phases)
    lin = np.arange(q) * (p / q)
    best: tuple[float, float, np.ndarray, float, int] | None = None
    converged = 0
    last_exc: Exception | None = None
    for phase in phases:
        try:
            x, rn, its = _newton_to_minimum(h, phase + lin, p, opts)
        except (ConvergenceError, SaddlePointError) as exc:
            last_exc = exc
            continue
        converged += 1
        x = x - math.floor(x[0])       # normalize lift so x_0 in [0, 1)
        act = periodic_action(h, x, p)
        if best is None:
            best = (act, x[0], x, rn, its)
            continue
        tol_a = 1e-10 * max(1.0, abs(act), abs(best[0]))
        if act < best[0] - tol_a or (abs(act - best[0]) <= tol_a and x[0] < best[1]):
            best = (act, x[0], x, rn, its)
    if best is None:
        raise ConvergenceError("no start converged", best=getattr(last_exc, "best", None),
                               residual=getattr(last_exc, "residual", float("nan")))
    act, _, x, rn, its = best
    _certify_minimum(h, x, p, grid_step=1.0 / max(64, 4 * q))
    cfg = Configuration(points=x, start=0, period=(p, q),
                        symbol=RotationSymbol.rational(p, q))
    return MinimizeResult(configuration=cfg, action=act, residual=rn,
                          iterations=its, n_starts_converged=converged,
                          certificate="hessian-psd+perturbation")


# ------------------------------------------------------------------ DP oracle
def brute_force_periodic(h: GeneratingFunction, p: int, q: int,
                         grid_states: int = 512, half_width: float = 0.75,
                         budget: float = 2e9) -> DPResult:
    """Exact minimum over a discretized state space, by min-plus DP.

    Site i carries the grid x_0 + i p / q + offsets, offsets spanning
    [-half_width, half_width] with `grid_states` points (minimal configurations
    stay within distance 1 of the linear orbit, so 0.75 is a safe default for
    the potentials this oracle is used on).  x_0 runs over its own grid of the
    same size; the chain closes with x_q = x_0 + p.  One damped-Newton
    refinement step follows, seeded by the DP path.
    """
    g = int(grid_states) | 1          # odd, so the offset grid contains 0
    if q * g * g > budget:
        raise BudgetExceeded(f"DP needs q*G^2 = {q * g * g:.2e} > budget {budget:.2e}")
    offsets = np.linspace(-half_width, half_width, g)
    center = g // 2                    # offsets[center] == 0.0
    rot = p / q
    qmat = 0.5 * (offsets[:, None] - offsets[None, :] - rot) ** 2
    pot = h.potential
    pot0 = (lambda t: np.asarray(pot.eval_deriv(t, 0), dtype=float)) if pot is not None \
        else (lambda t: np.zeros_like(t))

    x0s = np.arange(g) / g
    chunk = max(1, min(64, int(2e8 // (g * g))))
    best_val = np.empty(g)
    for lo in range(0, g, chunk):
        x0c = x0s[lo:lo + chunk]                       # (B,)
        v = qmat[center][None, :] + pot0(x0c[:, None] + rot + offsets[None, :])
        for i in range(1, q):
            v = np.min(v[:, :, None] + qmat[None, :, :], axis=1)
            v += pot0(x0c[:, None] + (i + 1) * rot + offsets[None, :])
        best_val[lo:lo + chunk] = v[:, center]
    j0 = int(np.argmin(best_val))
    x0 = float(x0s[j0])

    # re-run the winning chain with argmin tracking to extract the path
    v = qmat[center] + pot0(x0 + rot + offsets)
    args = []
    for i in range(1, q):
        tot = v[:, None] + qmat
        arg = np.argmin(tot, axis=0)
        v = tot[arg, np.arange(g)] + pot0(x0 + (i + 1) * rot + offsets)
        args.append(arg)
    path = [center]
    for arg in reversed(args):
        path.append(int(arg[path[-1]]))
    path.reverse()                     # offsets chosen at sites 1..q-1, then site q pins 0
    x = np.empty(q)
    x[0] = x0
    for i in range(1, q):
        x[i] = x0 + i * rot + offsets[path[i - 1]]
    dp_action = float(best_val[j0])

    refined, _, _ = _newton_to_minimum(h, x, p, MinimizeOptions(tolerance=1e-11))
    refined = refined - math.floor(refined[0])
    cfg = Configuration(points=refined, start=0, period=(p, q),
                        symbol=RotationSymbol.rational(p, q))
    return DPResult(configuration=cfg, action=periodic_action(h, refined, p),
                    dp_action=dp_action, grid_states=g)


def chain_dp_min(cost_fns: list, grids: list[np.ndarray]) -> tuple[float, np.ndarray]:
    """min over chains of sum_i cost_fns[i](x_i, x_{i+1}) with x_i in grids[i].

    cost_fns[i] takes (column vector of grid i, row vector of grid i+1) and
    returns the cost matrix.  Returns (value, argmin path).
    """
    n_sites = len(grids)
    if len(cost_fns) != n_sites - 1:
        raise ValueError("need one cost function per consecutive pair")
    v = np.zeros(len(grids[0]))
    args: list[np.ndarray] = []
    for i in range(n_sites - 1):
        c = np.asarray(cost_fns[i](grids[i][:, None], grids[i + 1][None, :]), dtype=float)
        tot = v[:, None] + c
        arg = np.argmin(tot, axis=0)
        args.append(arg)
        v = tot[arg, np.arange(c.shape[1])]
    jend = int(np.argmin(v))
    path_idx = [jend]
    for arg in reversed(args):
        path_idx.append(int(arg[path_idx[-1]]))
    path_idx.reverse()
    path = np.array([grids[i][j] for i, j in enumerate(path_idx)])
    return float(v[jend]), path


# ------------------------------------------------------------------ Mather set
def mather_set(h: GeneratingFunction, p: int, q: int,
               opts: MinimizeOptions = MinimizeOptions()) -> MatherSet:
    """Projected minimal (p, q)-set, its gaps, and the continuum flag.

    Multi-start minimizers are deduplicated, all their points projected mod 1,
    and circular gaps measured.  A gap-free set at the multi-start resolution
    (threshold (1/q) sqrt(2/S) for S seeds) is reported as a continuum rather
    than a spurious finite set; this is the degenerate exactly-integrable case.
    """
    n_starts = opts.multistart or (q + 3)
    res = minimize_periodic(h, p, q, opts)
    tol_same = 1e-7
    configs = [res.configuration]
    phases = (np.arange(n_starts) + 0.5) / n_starts
    lin = np.arange(q) * (p / q)
    for phase in phases:
        try:
            x, _, _ = _newton_to_minimum(h, phase + lin, p, opts)
        except (ConvergenceError, SaddlePointError):
            continue
        x = x - math.floor(x[0])
        act = periodic_action(h, x, p)
        if act > res.action + 1e-9 * max(1.0, abs(res.action)):
            continue
        is_new = True
        for c in configs:
            shift = round(float(x[0] - c.points[0]))
            if np.max(np.abs(x - (c.points + shift))) < tol_same:
                is_new = False
                break
            # same orbit hit at a rotated index also counts as a duplicate
            for k in range(1, q):
                w = c.window(k, k + q - 1)
                shift = x[0] - w[0]
                if abs(shift - round(shift)) < tol_same and \
                   np.max(np.abs(x - (w + round(shift)))) < tol_same:
                    is_new = False
                    break
            if not is_new:
                break
        if is_new:
            try:
                _certify_minimum(h, x, p, grid_step=1.0 / max(64, 4 * q))
            except SaddlePointError:
                continue
            configs.append(Configuration(points=x, start=0, period=(p, q),
                                         symbol=RotationSymbol.rational(p, q)))
    proj = np.sort(np.unique(np.concatenate([c.points % 1.0 for c in configs]).round(12)))
    merged = [proj[0]] if len(proj) else []
    for t in proj[1:]:
        if t - merged[-1] > tol_same:
            merged.append(t)
    proj = np.array(merged)
    diffs = np.diff(np.concatenate([proj, [proj[0] + 1.0]]))
    threshold = (1.0 / q) * math.sqrt(2.0 / n_starts)
    continuum = bool(np.max(diffs) < threshold)
    gap_floor = threshold
    if continuum:
        # spacing below the multi-start resolution has two causes: a truly
        # translation-degenerate action (every phase minimal), or a potential
        # with sub-1/q period structure whose discrete set is simply finer
        # than the seed grid.  A generic small translate separates them.
        t = float(np.max(diffs)) * 0.381966
        act_t = periodic_action(h, res.configuration.points + t, p)
        if act_t > res.action + 1e-9 * max(1.0, abs(res.action)):
            continuum = False
            gap_floor = 10.0 * tol_same
    gaps: list[tuple[float, float]] = []
    if not continuum:
        for t, d in zip(proj, diffs):
            if d > gap_floor:
                gaps.append((float(t), float(t + d)))
    return MatherSet(p=p, q=q, configurations=tuple(configs), projection=proj,
                     gaps=tuple(gaps), continuum=continuum, action=res.action)


# ------------------------------------------------------------ advanced states
def window_minimize(h: GeneratingFunction, lower: np.ndarray, upper: np.ndarray,
                    start: int, pins: dict[int, float],
                    opts: MinimizeOptions = MinimizeOptions(),
                    warm: np.ndarray | None = None) -> np.ndarray:
    """Minimize the window action over box constraints [lower_i, upper_i].

    `pins` maps absolute indices to fixed values.  Bounded quasi-Newton
    (L-BFGS-B) with the analytic gradient does the heavy lifting; a short
    projected-Newton polish with the tridiagonal Jacobian sharpens the
    stationarity residual afterwards.
    """
    n = len(lower)
    if len(upper) != n:
        raise ContractViolation("window bounds must have equal length")
    idx_all = np.arange(start, start + n)
    pin_mask = np.isin(idx_all, list(pins.keys()))
    x = warm.copy() if warm is not None else 0.5 * (lower + upper)
    for i, val in pins.items():
        x[i - start] = val
    free = ~pin_mask
    if not np.any(free):
        return x

    def unpack(z):
        xx = x.copy()
        xx[free] = z
        return xx

    def fval(z):
        xx = unpack(z)
        return float(np.sum(h.h(xx[:-1], xx[1:])))

    def grad(z):
        xx = unpack(z)
        g = np.zeros(n)
        g[1:] += np.asarray(h.d2(xx[:-1], xx[1:]), dtype=float)
        g[:-1] += np.asarray(h.d1(xx[:-1], xx[1:]), dtype=float)
        return g[free]

    bounds = list(zip(lower[free], upper[free]))
    sol = scipy_minimize(fval, x[free], jac=grad, method="L-BFGS-B", bounds=bounds,
                         options={"maxiter": 800, "ftol": 1e-17, "gtol": 1e-12})
    x = unpack(sol.x)

    # projected Newton polish on the interior stationarity system
    for _ in range(30):
        r = np.zeros(n)
        r[1:-1] = np.asarray(h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1]), dtype=float)
        r[pin_mask] = 0.0
        at_lo = (x <= lower + 1e-14) & (r > 0)
        at_hi = (x >= upper - 1e-14) & (r < 0)
        r[at_lo | at_hi] = 0.0
        if np.max(np.abs(r)) < opts.tolerance:
            break
        diag = np.zeros(n)
        diag[1:-1] = np.asarray(h.d11(x[1:-1], x[2:]) + h.d22(x[:-2], x[1:-1]), dtype=float)
        up = np.zeros(n)
        up[1:-1] = np.asarray(h.d12(x[1:-1], x[2:]), dtype=float)
        lo_ = np.zeros(n)
        lo_[1:-1] = np.asarray(h.d12(x[:-2], x[1:-1]), dtype=float)
        fixed = pin_mask | at_lo | at_hi
        fixed[0] = fixed[-1] = True
        diag[fixed] = 1.0
        up[fixed] = 0.0
        lo_[fixed] = 0.0
        ab = np.zeros((3, n))
        ab[0, 1:] = up[:-1]
        ab[1] = diag
        ab[2, :-1] = lo_[1:]
        try:
            step = solve_banded((1, 1), ab, -r)
        except np.linalg.LinAlgError:
            break
        x = np.clip(x + step, lower, upper)
        for i, val in pins.items():
            x[i - start] = val
    return x


def advanced_state(h: GeneratingFunction, p: int, q: int, sign: int, xi: float | None,
                   lower: Configuration, upper: Configuration,
                   opts: MinimizeOptions = MinimizeOptions()) -> Configuration:
    """Minimal advancing (sign=+1) or retreating (sign=-1) state through a gap.

    `lower` and `upper` are the gap-edge periodic minimizers, indexed so the
    gap at index 0 is (lower.point(0), upper.point(0)).  The window spans
    [-L, L] with L = max(opts value, 8q); boundary points are pinned to the
    edge states (left edge per the sign), x_0 is pinned to xi when given, and
    every coordinate is boxed between the edge states.
    """
    if sign not in (-1, 1):
        raise ContractViolation("sign must be +1 or -1")
    L = opts.window_halflength or 8 * q
    L = max(L, 8 * q)
    L = (L // q) * q                 # window a whole number of periods
    idx = np.arange(-L, L + 1)
    lo = np.array([lower.point(i) for i in idx])
    hi = np.array([upper.point(i) for i in idx])
    if float(hi[L] - lo[L]) < opts.on_set_resolution:
        raise ContractViolation("no gap to advance through")
    if np.any(hi <= lo):
        raise ContractViolation("gap edges are not strictly ordered on the window")
    sym = RotationSymbol.plus(p, q) if sign > 0 else RotationSymbol.minus(p, q)
    if xi is not None:
        if not lo[L] <= xi <= hi[L]:
            raise ContractViolation("xi lies outside the given gap")
        # degenerate pin on a gap edge: the state is that edge orbit itself
        if xi - lo[L] < opts.on_set_resolution:
            return Configuration(points=lo, start=-L, period=None, symbol=sym)
        if hi[L] - xi < opts.on_set_resolution:
            return Configuration(points=hi, start=-L, period=None, symbol=sym)
    pins = {-L: lo[0] if sign > 0 else hi[0],
            L: hi[-1] if sign > 0 else lo[-1]}
    if xi is not None:
        pins[0] = float(xi)
    s_start, s_end = (0.0, 1.0) if sign > 0 else (1.0, 0.0)
    if xi is None:
        ramp = np.interp(idx, [-L, L], [s_start, s_end])
    else:
        t0 = (xi - lo[L]) / (hi[L] - lo[L])
        ramp = np.interp(idx, [-L, 0, L], [s_start, t0, s_end])
    warm = lo + ramp * (hi - lo)
    x = window_minimize(h, lo, hi, -L, pins, opts, warm=warm)
    if opts.check_window_doubling:
        big = replace(opts, window_halflength=2 * L, check_window_doubling=False)
        x2c = advanced_state(h, p, q, sign, xi, lower, upper, big)
        a1 = _excess_action(h, x, -L, lo, hi)
        idx2 = np.arange(-2 * L, 2 * L + 1)
        lo2 = np.array([lower.point(i) for i in idx2])
        hi2 = np.array([upper.point(i) for i in idx2])
        a2 = _excess_action(h, np.asarray(x2c.points), -2 * L, lo2, hi2)
        if abs(a1 - a2) > opts.window_tol * max(1.0, abs(a1)):
            raise WindowError(f"window doubling moved the excess action by {a1 - a2:.3e}")
    return Configuration(points=x, start=-L, period=None, symbol=sym)


def _excess_action(h: GeneratingFunction, x: np.ndarray, start: int,
                   lo: np.ndarray, hi: np.ndarray) -> float:
    ref = lo
    terms = np.asarray(h.h(x[:-1], x[1:]), dtype=float) \
        - np.asarray(h.h(ref[:-1], ref[1:]), dtype=float)
    return float(math.fsum(terms))


# ------------------------------------------------------------------- crossing
def aubry_crossing_count(c1: Configuration, c2: Configuration) -> int:
    """Number of sign changes of c1 - c2 over the common index window.

    Exact ties at isolated indices are collapsed before counting, so tangency
    without crossing does not count.
    """
    lo = max(c1.start, c2.start)
    hi = min(c1.start + len(c1) - 1, c2.start + len(c2) - 1)
    if c1.period is not None and c2.period is not None:
        qq = c1.period[1] * c2.period[1] // math.gcd(c1.period[1], c2.period[1])
        lo, hi = 0, qq  # one full common period plus the wrap point
    if hi <= lo:
        raise ContractViolation("configurations share no index window")
    d = np.array([c1.point(i) - c2.point(i) for i in range(lo, hi + 1)])
    signs = np.sign(d)
    signs = signs[signs != 0]
    if len(signs) == 0:
        return 0
    return int(np.sum(signs[1:] != signs[:-1]))
