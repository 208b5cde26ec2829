"""Inequality checks on computed minimal configurations.

Three families of checks, each phrased as explicit per-point margins on a
converged configuration:

  * neighbor-step lower bounds near a potential well (a swap argument gives
    x_{i+1} - x_{i-1} >= 2 sqrt(u(x_i)), hence long steps across the well top),
  * counts of configuration points inside intervals that exclude the well
    bottom, which grow like a power of the well sharpness because the steps
    form a geometric ladder away from the bottom,
  * counts of points in sliding unit-scale intervals, pinned to the rotation
    number by the invariant measure of the induced circle map.

Reports never hide a failing margin; pass means every margin clears the
stated tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .trigpoly import TrigPoly
from .twist_core import Configuration, ContractViolation, with_potential
from .minimizer import WindowError
from .twist_core import stationarity_residual


@dataclass(frozen=True)
class LemmaReport:
    """Margin ledger for one inequality check on one configuration."""

    lemma_id: str
    n: float | None
    a: float | None
    delta: float | None
    symbol: str
    margins: np.ndarray
    passed: bool
    worst_margin: float
    worst_location: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.asarray(self.margins, dtype=float)
        m.flags.writeable = False
        object.__setattr__(self, "margins", m)


def _finish(lemma_id, n, a, delta, symbol, margins, locations, tol, details):
    margins = np.asarray(margins, dtype=float)
    if margins.size:
        worst = int(np.argmin(margins))
        worst_margin = float(margins[worst])
        worst_location = float(np.asarray(locations, dtype=float)[worst])
        passed = bool(worst_margin >= -tol)
    else:
        worst_margin = math.inf
        worst_location = math.nan
        passed = True
    return LemmaReport(lemma_id=lemma_id, n=n, a=a, delta=delta, symbol=symbol,
                       margins=margins, passed=passed, worst_margin=worst_margin,
                       worst_location=worst_location, tolerance=tol, details=details)


def linear_orbit(omega: float, length: int, phase: float = 0.0) -> Configuration:
    """Equally advancing configuration x_i = phase + i omega (minimal for h0)."""
    if length < 3:
        raise ContractViolation("need at least three points")
    return Configuration(points=phase + float(omega) * np.arange(length, dtype=float))


def _period_frame(c: Configuration):
    """(x_{i-1}, x_i, x_{i+1}) arrays covering one period, or the interior
    of a plain window."""
    if c.period is not None:
        _, q = c.period
        x = c.window(c.start - 1, c.start + q)
    else:
        if len(c) < 3:
            raise ContractViolation("window too short for interior points")
        x = c.points
    return x[:-2], x[1:-1], x[2:]


def _period_fracs(c: Configuration) -> np.ndarray:
    """Sorted fractional parts of one period (or of the whole plain window).

    Minimal configurations are monotone in the lift, so for a periodic
    configuration the sorted fractional parts of one period enumerate the
    orbit in index order.
    """
    if c.period is not None:
        _, q = c.period
        pts = c.window(c.start, c.start + q - 1)
    else:
        pts = c.points
    return np.sort(np.asarray(pts, dtype=float) % 1.0)


# ------------------------------------------------------------ step lower bound
def verify_step_bound(c: Configuration, n: float, a: float,
                      potential: TrigPoly | None = None,
                      tol: float = 1e-8, stat_tol: float = 1e-6) -> LemmaReport:
    """Check x_{i+1} - x_{i-1} >= 2 sqrt(u(x_i)) at every interior point.

    The default potential is the cosine well of depth 2 n^-a.  The report
    also measures the step constant: the smallest step length, in units of
    n^-a/2, among the steps that meet the middle third [1/4, 3/4].  When no
    point rests inside the middle (small period orbits jump the well top in
    one step) the constant comes from the crossing steps alone.
    """
    if potential is None:
        amp = float(n) ** (-float(a))
        potential = TrigPoly(np.array([amp, -amp]))
    h = with_potential(potential)
    resid = float(np.max(np.abs(stationarity_residual(h, c))))
    if resid > stat_tol:
        raise ContractViolation(
            f"configuration is not stationary (residual {resid:.2e} > {stat_tol:.0e})")

    xm, x0, xp = _period_frame(c)
    u_vals = np.maximum(np.asarray(potential(x0), dtype=float), 0.0)
    margins = (xp - xm) - 2.0 * np.sqrt(u_vals)

    frac = x0 - np.floor(x0)
    steps = xp - x0
    in_mid = (frac >= 0.25) & (frac <= 0.75)
    crosses = (frac <= 0.5) & (xp - np.floor(x0) > 0.5)
    meets_mid = in_mid | crosses
    scale = float(n) ** (-float(a) / 2.0)
    if np.any(meets_mid):
        step_constant = float(np.min(steps[meets_mid]) / scale)
    else:
        step_constant = math.nan
    details = {
        "stationarity_residual": resid,
        "step_constant": step_constant,
        "points_in_middle": int(np.sum(in_mid)),
        "crossing_steps": int(np.sum(crosses)),
    }
    return _finish("step-bound", n, a, None, str(c.symbol), margins, frac, tol, details)


# ------------------------------------------------------- ladder interval count
def verify_counting_rational_gap(c: Configuration, n: float, a: float,
                                 delta: float) -> LemmaReport:
    """Count configuration points at least exp(-n^(a/2+delta/2)) away from
    the well bottom.

    Pure measurement: the geometric growth of steps away from the bottom
    caps this count by a constant times n^(a+delta/2), and the constant is
    checked for stability across an n sweep by fit_count_exponent.  Reports
    with n < 2 are flagged ineligible for the fit (the interval edge passes
    1/4 and no longer isolates the bottom).
    """
    x_minus = math.exp(-float(n) ** (float(a) / 2.0 + float(delta) / 2.0))
    frac = _period_fracs(c)
    count_left = int(np.sum((frac >= x_minus) & (frac <= 0.5)))
    count_right = int(np.sum((frac >= 0.5) & (frac <= 1.0 - x_minus)))
    count_total = int(np.sum((frac >= x_minus) & (frac <= 1.0 - x_minus)))
    details = {
        "x_minus": x_minus,
        "count_left": count_left,
        "count_right": count_right,
        "count_total": count_total,
        "normalized_count": count_total * float(n) ** (-(float(a) + float(delta) / 2.0)),
        "fit_eligible": bool(n >= 2 and x_minus < 0.25),
    }
    return _finish("count-ladder", n, a, delta, str(c.symbol),
                   np.array([]), np.array([]), 0.0, details)


def fit_count_exponent(reports: list[LemmaReport]) -> tuple[float, float]:
    """Log-log slope of total count against n over a sweep, with fit R^2.

    Needs at least three eligible reports with nonzero counts.
    """
    xs, ys = [], []
    for rep in reports:
        if rep.lemma_id != "count-ladder":
            raise ContractViolation("fit expects count-ladder reports")
        if rep.details.get("fit_eligible") and rep.details["count_total"] > 0:
            xs.append(math.log(float(rep.n)))
            ys.append(math.log(float(rep.details["count_total"])))
    if len(xs) < 3:
        raise ContractViolation("need at least three eligible counts to fit")
    xs, ys = np.array(xs), np.array(ys)
    slope, intercept = np.polyfit(xs, ys, 1)
    pred = slope * xs + intercept
    ss_res = float(np.sum((ys - pred) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(r2)


# --------------------------------------------------- rotation-number intervals
def _collapses_to_rational(omega: float, max_den: int = 1000,
                           tol: float = 1e-12) -> bool:
    near = Fraction(omega).limit_denominator(max_den)
    return abs(omega - float(near)) < tol


def verify_counting_irrational(c: Configuration, omega: float, k: int,
                               tol_count: float = 0.0,
                               offsets: int = 2048) -> LemmaReport:
    """Sliding length-k intervals catch between k/omega - 1 and k/omega + 1
    configuration points.

    Exact for true irrational rotation (unique invariant measure); computed
    configurations carry a rational-convergent symbol, absorbed by passing
    tol_count = 1.  Offsets sweep one unit together with graze positions
    where an interval endpoint touches an orbit point.
    """
    if _collapses_to_rational(omega):
        raise ContractViolation(
            f"frequency {omega} collapses to a small rational; the unique "
            "invariant measure argument needs an irrational target")
    k = int(k)
    if k < 1:
        raise ContractViolation("interval length k must be a positive integer")
    if c.period is not None:
        p, q = c.period
        if p < 1:
            raise ContractViolation("need a configuration advancing to the right")
        m = int(math.ceil(q * (k + 4) / p))
        xs = c.window(c.start, c.start + m)
    else:
        xs = np.asarray(c.points, dtype=float)
    if xs[-1] - xs[0] < k + 2:
        raise WindowError(f"window spans {xs[-1] - xs[0]:.2f}, need >= {k + 2}")
    xs = np.sort(xs)

    t0 = xs[0] + 1.0
    if xs[-1] < t0 + k + 1.0:
        raise WindowError("window too short once the sliding range is trimmed")
    t = [t0 + np.arange(offsets) / offsets]
    graze = xs[(xs > t0) & (xs <= t0 + 1.0 + k)]
    for nudge in (-1e-9, 0.0, 1e-9):
        t.append(graze + nudge)
        t.append(graze - k + nudge)
    t = np.unique(np.concatenate(t))
    t = t[(t >= t0) & (t < t0 + 1.0)]

    counts = (np.searchsorted(xs, t + k, side="left")
              - np.searchsorted(xs, t, side="left"))
    lower = k / omega - 1.0 - tol_count
    upper = k / omega + 1.0 + tol_count
    margins = np.concatenate([counts - lower, upper - counts])
    locations = np.concatenate([t, t])
    details = {
        "count_min": int(counts.min()),
        "count_max": int(counts.max()),
        "lower": lower,
        "upper": upper,
        "k": k,
        "omega": float(omega),
        "tol_count": float(tol_count),
    }
    return _finish("count-rotation", None, None, None, str(c.symbol),
                   margins, locations, 0.0, details)


# ----------------------------------------------------- triples near the bottom
def _strict_triple_from_top(vals: np.ndarray):
    """Topmost run of three strictly increasing positive entries."""
    for j in range(len(vals) - 3, -1, -1):
        w = vals[j:j + 3]
        if w[0] > 0.0 and w[0] < w[1] < w[2]:
            return w
    return None


def verify_gap_triples(c: Configuration, n: float, a: float,
                       delta: float, tol: float = 0.0) -> LemmaReport:
    """Three consecutive points inside (0, x-] and inside [1 - x-, 1).

    x- = exp(-n^(a/2+delta/2)).  Requires the configuration frequency to sit
    below n^-(a+delta), the regime where the orbit lingers long enough near
    the well bottom for whole index triples to fit inside the edge intervals.
    """
    if c.period is None:
        raise ContractViolation("need a periodic configuration with a frequency")
    p, q = c.period
    omega = p / q
    bound = float(n) ** (-(float(a) + float(delta)))
    if not 0.0 < omega < bound:
        raise ContractViolation(
            f"frequency {p}/{q} = {omega:.4g} is not below n^-(a+delta) = {bound:.4g}")
    x_minus = math.exp(-float(n) ** (float(a) / 2.0 + float(delta) / 2.0))
    frac = _period_fracs(c)

    left = _strict_triple_from_top(frac[frac <= x_minus])
    # right side: lowest strict triple, the best-resolved end of the ladder
    right = None
    right_vals = frac[frac >= 1.0 - x_minus]
    for j in range(max(0, len(right_vals) - 2)):
        w = right_vals[j:j + 3]
        if w[0] < w[1] < w[2] < 1.0:
            right = w
            break

    margins, locations = [], []
    if left is not None:
        margins += [x_minus - float(left[2]), float(left[0])]
        locations += [float(left[2]), float(left[0])]
    else:
        margins += [-math.inf]
        locations += [x_minus]
    if right is not None:
        margins += [float(right[0]) - (1.0 - x_minus), 1.0 - float(right[2])]
        locations += [float(right[0]), float(right[2])]
    else:
        margins += [-math.inf]
        locations += [1.0 - x_minus]
    details = {
        "x_minus": x_minus,
        "omega": omega,
        "frequency_bound": bound,
        "left_triple": tuple(float(v) for v in left) if left is not None else None,
        "right_triple": tuple(float(v) for v in right) if right is not None else None,
    }
    return _finish("gap-triples", n, a, delta, str(c.symbol),
                   margins, locations, tol, details)
