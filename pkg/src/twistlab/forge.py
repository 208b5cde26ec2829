"""Construction pipeline for localized perturbations of the integrable twist.

Build order: a shallow cosine well scaled by n^-a, a flat-top bump supported
on a sub-interval of [1/4, 3/4] whose length tracks n^-a/2, a trigonometric
approximant of the bump within a measured error budget, the normalized square
of the approximant (peak exactly e^-2N, exponentially small off the support),
and the product perturbation that the barrier machinery probes.  Two search
routes turn the pipeline into explicit destruction packages: one minimizes
the C^r norm of the rescaled package along convergent denominators, the other
minimizes the polynomial degree at a given norm target for constant-type
frequencies.

No a-priori constants anywhere: every inequality in the chain is checked with
measured quantities, and reports carry the measured ratios so scaling laws
are asserted on fitted slopes rather than on constants.

Degrees in the hundreds push e^-2N out of double range.  The pipeline then
keeps the unit-scale factor (`local_unit`, the product before the e^-2N
scale) together with the log of the scale, and all property checks compare
logarithms; the materialized perturbation is only built when representable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bump import SmoothBump
from .cfrac import ContinuedFraction, approximation_exponent, expand, \
    from_quotients, is_badly_approximable
from .jackson import JacksonResult, jackson_approx
from .minimizer import BudgetExceeded
from .trigpoly import TrigPoly
from .twist_core import ContractViolation, GeneratingFunction, with_potential

__all__ = [
    "ConstructionParams", "VReport", "Construction", "RescaledPoly",
    "NormRouteReport", "DegreeRouteReport",
    "well_potential", "choose_support", "build_bump",
    "select_budget_and_degree", "normalize_squared", "localized_perturbation",
    "assemble_generating", "period_rescale", "cr_norm",
    "build_construction", "destroy_with_small_norm", "destroy_with_low_degree",
    "cr_decay_sweep", "degree_sweep",
    "gamma_exponent", "gamma_decomposition", "analytic_growth_check",
]

# materializing a dilated polynomial beyond this many coefficients is refused;
# norms of dilated objects never need it (see RescaledPoly)
MATERIALIZE_CAP = 4_000_000

# e^log_scale underflows double precision beyond this; property checks switch
# to pure log-space comparisons and the literal perturbation stays zero
LOG_SCALE_FLOOR = -700.0


@dataclass(frozen=True)
class ConstructionParams:
    """Knobs of one pipeline run.

    `n` sets the well depth n^-a and the support length scale n^-a/2;
    `delta` is the localization slack and `k` the smoothness order driving
    the approximant degree (the chain needs k > a/delta); `err_budget` and
    `degree` are filled in by select_budget_and_degree.
    """
    n: int
    a: float
    delta: float
    k: int
    err_budget: float | None = None
    degree: int | None = None
    search_budget: int | None = None
    support: tuple[float, float] | None = None
    freq_exponent: float = 0.0
    r_target: float = 2.0
    m: int = 2
    degree_law_ratio: float | None = None

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ContractViolation("n must be a positive integer")
        if not self.a > 0:
            raise ContractViolation("scale exponent a must be positive")
        if not self.delta > 0:
            raise ContractViolation("localization slack delta must be positive")
        if self.k < 1 or int(self.k) != self.k:
            raise ContractViolation("smoothness order k must be a positive integer")
        if self.k * self.delta <= self.a:
            raise ContractViolation(
                f"need k > a/delta (got k={self.k}, a/delta={self.a / self.delta:.3f})")
        if self.support is not None:
            lo, hi = self.support
            if not (0.25 <= lo < hi <= 0.75):
                raise ContractViolation("support must be a nonempty subinterval of [1/4, 3/4]")


@dataclass(frozen=True)
class VReport:
    """Measured constants of the four product-perturbation properties.

    All *_log entries are natural logs of dimensionless ratios, finite even
    when the absolute numbers underflow double precision.
    """
    degree: int
    min_unit_value: float           # grid min of the unit-scale product
    smooth_order: int
    smooth_norm_log: float          # log ||v||_C^s
    smooth_constant_log: float      # log (||v||_C^s * n^a)
    max_location: float
    peak_margin_log: float          # log (max v * e^{2N} * n^a), want >= 0
    off_support_constant_log: float  # log (off-max * e^{2N} n^a / budget^2)
    log_scale: float                # -2N
    materialized: bool


# ---------------------------------------------------------------- ingredients
def well_potential(n: int, a: float) -> TrigPoly:
    """n^-a (1 - cos 2 pi x): zero at the origin, peak 2 n^-a at one half."""
    if n < 1:
        raise ContractViolation("n must be a positive integer")
    amp = float(n) ** (-float(a))
    return TrigPoly(np.array([amp, -amp]))


def choose_support(n: int, a: float, width_scale: float = 1.0) -> tuple[float, float]:
    """Centered support interval of length ~ n^-a/2, clamped into [1/4, 3/4]."""
    w = min(0.5, width_scale * float(n) ** (-float(a) / 2.0))
    if not w > 0:
        raise ContractViolation("support width must be positive")
    return (0.5 - w / 2.0, 0.5 + w / 2.0)


def build_bump(support: tuple[float, float], k_max: int = 8) -> SmoothBump:
    """Flat-top bump with peak 2 on the given subinterval of [1/4, 3/4]."""
    lo, hi = float(support[0]), float(support[1])
    if not (0.25 <= lo < hi <= 0.75):
        raise ContractViolation("support must be a nonempty subinterval of [1/4, 3/4]")
    return SmoothBump(lo, hi, k_max=k_max)


def select_budget_and_degree(params: ConstructionParams, bump: SmoothBump,
                             max_degree: int = 8192,
                             start: int = 8) -> ConstructionParams:
    """Set the error budget to half the support scale and find the degree.

    The budget is n^-a/2 / 2; the degree is the smallest power-of-two-refined
    budget whose measured approximation error meets it.  The stored `degree`
    is the achieved coefficient degree, `search_budget` the search value, and
    `degree_law_ratio` the measured ratio against budget^{-1/k} n^{a/2}.
    """
    sigma = 0.5 * float(params.n) ** (-params.a / 2.0)

    def err(budget: int) -> float:
        return jackson_approx(bump, budget, order=params.k).achieved_error

    hi = start
    while err(hi) > sigma:
        hi *= 2
        if hi > max_degree:
            raise BudgetExceeded(
                f"approximant degree above {max_degree} needed for budget {sigma:.3e}")
    lo = hi // 2 if hi > start else 0
    while hi - lo > 1:                  # smallest budget meeting the target
        mid = (hi + lo) // 2
        if mid < 4 or err(mid) > sigma:
            lo = mid
        else:
            hi = mid
    res = jackson_approx(bump, hi, order=params.k)
    achieved = res.poly.degree
    ratio = achieved / (sigma ** (-1.0 / params.k) * float(params.n) ** (params.a / 2.0))
    return replace(params, err_budget=sigma, degree=achieved,
                   search_budget=hi, degree_law_ratio=ratio)


def normalize_squared(p: TrigPoly, big_n: int) -> TrigPoly:
    """Square of p/max(p), scaled so the peak is exactly e^-2N.

    The squaring is coefficient-level (band-limited product), so the result
    is nonnegative by construction.  Beyond 2N = 700 the scale underflows
    double precision and the caller must keep the unit square and the log
    scale separately; this entry point refuses rather than return zeros.
    """
    if 2 * big_n > -LOG_SCALE_FLOOR:
        raise ContractViolation(
            "e^-2N underflows double precision; carry the unit square and log scale")
    _, mx = p.extremum(maximize=True)
    if mx <= 0:
        raise ContractViolation("approximant has no positive part to normalize")
    unit = p * (1.0 / mx)
    sq = unit * unit
    out = sq * math.exp(-2.0 * big_n)
    peak = out.max_value()
    target = math.exp(-2.0 * big_n)
    if abs(peak - target) > 1e-12 * target:
        raise ContractViolation(f"normalized peak off target by {peak / target - 1.0:.2e}")
    return out


def localized_perturbation(params: ConstructionParams, u: TrigPoly,
                           square_unit: TrigPoly,
                           off_cap: float = 64.0) -> tuple[TrigPoly, TrigPoly, VReport]:
    """Product perturbation u * (unit square scaled by e^-2N), with checks.

    Returns (v, local_unit, report): `local_unit` = u * square_unit carries
    the whole shape at unit scale; `v` is the literal scaled polynomial when
    e^-2N is representable and the zero polynomial otherwise.  Verified here:
    nonnegativity, the peak lower bound against e^-2N n^-a attained on the
    support, and the off-support upper bound against budget^2 e^-2N n^-a.
    """
    if params.support is None or params.err_budget is None or params.degree is None:
        raise ContractViolation("params must carry support, budget and degree")
    n, a, big_n = params.n, params.a, params.degree
    log_scale = -2.0 * big_n
    w = u * square_unit
    m = 1 << int(np.ceil(np.log2(max(4096, 4 * (w.degree + 1)))))
    x = np.arange(m) / m
    wx = w.grid_values(m)
    wmax_loc, wmax = w.extremum(maximize=True)
    wmin = w.min_value()
    if wmin < -1e-10 * max(wmax, 1e-300):
        raise ContractViolation(f"product perturbation dips negative: {wmin:.3e}")
    lo, hi = params.support
    inside = (x >= lo) & (x <= hi)
    if not (lo <= wmax_loc <= hi):
        raise ContractViolation("peak of the product left the support interval")
    # peak bound: max v >= e^-2N n^-a, i.e. log(max w) + a log n >= 0
    peak_margin = math.log(wmax) + a * math.log(n)
    if peak_margin < -1e-9:
        raise ContractViolation(f"peak margin negative: {peak_margin:.3e}")
    off = np.abs(wx[~inside])
    off_max = float(np.max(off)) if len(off) else 0.0
    if off_max > 0:
        off_const = math.log(off_max) + a * math.log(n) - 2.0 * math.log(params.err_budget)
    else:
        off_const = float("-inf")
    if off_const > math.log(off_cap):
        raise ContractViolation(
            f"off-support leakage constant e^{off_const:.2f} above the cap {off_cap}")
    s = min(2, params.k)
    smooth_log = math.log(cr_norm(w, s)) + log_scale
    report = VReport(
        degree=w.degree, min_unit_value=wmin, smooth_order=s,
        smooth_norm_log=smooth_log,
        smooth_constant_log=smooth_log + a * math.log(n),
        max_location=wmax_loc,
        peak_margin_log=peak_margin,
        off_support_constant_log=off_const,
        log_scale=log_scale,
        materialized=log_scale > LOG_SCALE_FLOOR,
    )
    v = w * math.exp(log_scale) if report.materialized else TrigPoly.zero()
    return v, w, report


def assemble_generating(u: TrigPoly, v: TrigPoly) -> GeneratingFunction:
    """Shear plus the combined potential u + v in the second argument."""
    return with_potential(u + v)


# ------------------------------------------------------------------ rescaling
def period_rescale(p: TrigPoly, q: int) -> TrigPoly:
    """q^-2 p(q x), materialized: index m moves to q m, amplitudes / q^2."""
    if q < 1 or int(q) != q:
        raise ContractViolation("rescaling factor must be a positive integer")
    if q * p.degree > MATERIALIZE_CAP:
        raise BudgetExceeded(
            f"rescaled degree {q * p.degree} exceeds the materialization cap")
    return p.dilate(int(q)) * (1.0 / float(q) ** 2)


@dataclass(frozen=True)
class RescaledPoly:
    """scale * base(q x) kept in factored form.

    Dilated packages reach degrees that cannot be materialized, but every
    norm of scale * base(qx) follows from norms of base: differentiation
    brings down a factor q per order, and Holder seminorms gain exactly
    q^beta because x -> qx maps pair spacings bijectively mod 1.
    """
    base: TrigPoly
    q: int
    scale: float

    @property
    def degree(self) -> int:
        return self.q * self.base.degree

    def __call__(self, x):
        return self.scale * self.base(np.asarray(x, dtype=float) * self.q)

    def eval_deriv(self, x, order: int):
        inner = self.base.eval_deriv(np.asarray(x, dtype=float) * self.q, order)
        return self.scale * float(self.q) ** order * inner

    def materialize(self, cap: int = MATERIALIZE_CAP) -> TrigPoly:
        if self.degree > cap:
            raise BudgetExceeded(f"degree {self.degree} exceeds the cap {cap}")
        return self.base.dilate(self.q) * self.scale


def _holder_seminorm(g: TrigPoly, beta: float, min_spacing: float = 1e-4) -> float:
    """sup |g(x+d) - g(x)| / d^beta over a geometric ladder of spacings.

    Roughly 64 candidate separations per octave; the ratio varies slowly in d,
    so the grid bias stays well under a percent and the dilation identity for
    rescaled polynomials survives at test tolerance.
    """
    m = 1 << int(np.ceil(np.log2(max(16384, 4 * (g.degree + 1)))))
    gx = g.grid_values(m)
    lo = max(1, int(min_spacing / 2.0 * m))
    steps = np.unique(np.geomspace(lo, m // 2, num=1024).round().astype(int))
    best = 0.0
    for j in steps:
        diff = float(np.max(np.abs(np.roll(gx, -int(j)) - gx)))
        best = max(best, diff / (j / m) ** beta)
    return best


def cr_norm(p, r: float) -> float:
    """C^r norm: integer orders by polished grid maxima, fractional part as
    the Holder seminorm of the highest integer derivative.

    Accepts TrigPoly and RescaledPoly; the latter is evaluated through the
    dilation identities without materializing.
    """
    if r < 0:
        raise ContractViolation("norm order must be nonnegative")
    j0 = int(math.floor(r))
    beta = r - j0
    if isinstance(p, RescaledPoly):
        vals = [abs(p.scale) * float(p.q) ** j * p.base.derivative(j).sup_norm()
                for j in range(j0 + 1)]
        if beta > 1e-12:
            vals.append(abs(p.scale) * float(p.q) ** (j0 + beta)
                        * _holder_seminorm(p.base.derivative(j0), beta))
        return float(max(vals))
    vals = [p.derivative(j).sup_norm() for j in range(j0 + 1)]
    if beta > 1e-12:
        vals.append(_holder_seminorm(p.derivative(j0), beta))
    return float(max(vals))


def analytic_growth_check(p: TrigPoly, s: int, c: float = 4.0) -> tuple[float, float, bool]:
    """Derivatives of a degree-N polynomial gain at most 2 pi N per order.

    Returns (lhs, rhs, ok) for lhs = log(||p||_C^s / max p) against
    rhs = N + s log(2 pi N) + log c.
    """
    n = max(p.degree, 1)
    mx = p.max_value()
    if mx <= 0:
        raise ContractViolation("growth check needs a positive peak")
    lhs = math.log(cr_norm(p, s) / mx)
    rhs = n + s * math.log(2.0 * math.pi * n) + math.log(c)
    return lhs, rhs, lhs <= rhs


# ------------------------------------------------------------- full pipeline
@dataclass(frozen=True)
class Construction:
    """Everything one pipeline run produced, at unit scale and materialized."""
    params: ConstructionParams
    u: TrigPoly
    bump: SmoothBump
    approx: JacksonResult
    square_unit: TrigPoly          # (p / max p)^2, peak exactly 1
    local_unit: TrigPoly           # u * square_unit, the perturbation shape
    v: TrigPoly                    # literal perturbation (zero if underflowed)
    v_report: VReport
    h_base: GeneratingFunction     # shear + well
    h_full: GeneratingFunction     # shear + well + perturbation
    eta: float                     # peak location of the perturbation

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def err_budget(self) -> float:
        return self.params.err_budget

    @property
    def degree(self) -> int:
        return self.params.degree

    @property
    def log_scale(self) -> float:
        return self.v_report.log_scale

    def log_v(self, x: float) -> float:
        """log of the perturbation at x, finite far below double range."""
        w = float(self.local_unit(x))
        if w <= 0.0:
            return float("-inf")
        return math.log(w) + self.log_scale


def build_construction(n: int, a: float, k: int = 2, delta: float | None = None,
                       width_scale: float = 1.0, max_degree: int = 8192,
                       bump_k_max: int | None = None) -> Construction:
    """One-call pipeline from (n, a) to the assembled maps."""
    if delta is None:
        delta = 2.0 * a / k          # comfortably above the a/k admissibility line
    support = choose_support(n, a, width_scale)
    bump = build_bump(support, k_max=bump_k_max or max(k, 8))
    params = ConstructionParams(n=n, a=a, delta=delta, k=k, support=support)
    params = select_budget_and_degree(params, bump, max_degree=max_degree)
    approx = jackson_approx(bump, params.search_budget, order=k)
    _, mx = approx.poly.extremum(maximize=True)
    if mx <= 0:
        raise ContractViolation("approximant has no positive part to normalize")
    unit = approx.poly * (1.0 / mx)
    square_unit = unit * unit
    u = well_potential(n, a)
    v, local_unit, rep = localized_perturbation(params, u, square_unit)
    h_base = with_potential(u)
    h_full = assemble_generating(u, v)
    eta = rep.max_location
    return Construction(params=params, u=u, bump=bump, approx=approx,
                        square_unit=square_unit, local_unit=local_unit, v=v,
                        v_report=rep, h_base=h_base, h_full=h_full, eta=eta)


# ------------------------------------------------------------- search routes
@dataclass(frozen=True)
class NormRouteReport:
    omega: float
    freq_exponent: float
    r: float
    a: float
    delta: float
    k: int
    eps: float
    rows: tuple[tuple[int, int, float, float], ...]  # (q, degree, budget, cr)
    chosen_q: int | None
    slope: float | None
    slope_bound: float              # r - a - 2


@dataclass(frozen=True)
class DegreeRouteReport:
    omega: float
    r: float
    m: int
    k: int
    a: float
    delta: float
    eps: float
    rows: tuple[tuple[int, int, int, float], ...]   # (q, degree, total_degree, cr)
    chosen_q: int | None
    total_degree: int | None        # (2 deg + 1) q of the chosen package
    support_degree: int | None      # coefficient-support total of the chosen one
    gamma: float
    gamma_terms: tuple[float, float, float]
    gamma_boundary: float           # leading term 3 / (2 (3 - r))


def _unique_denominators(cf: ContinuedFraction, floor_q: int = 1) -> list[tuple[int, int]]:
    seen: set[int] = set()
    out = []
    for conv in cf.convergents:
        if conv.q >= floor_q and conv.q not in seen:
            seen.add(conv.q)
            out.append((conv.p, conv.q))
    return out


def _fit_slope(qs: list[int], norms: list[float]) -> float | None:
    pts = [(math.log(q), math.log(v)) for q, v in zip(qs, norms) if q > 1 and v > 0]
    if len(pts) < 2:
        return None
    xs, ys = np.array([p[0] for p in pts]), np.array([p[1] for p in pts])
    return float(np.polyfit(xs, ys, 1)[0])


def destroy_with_small_norm(omega: float, eps: float, r: float,
                            depth: int | None = None, k: int | None = None,
                            max_degree: int = 8192,
                            quotients: list[int] | None = None,
                            width_scale: float = 1.0
                            ) -> tuple[RescaledPoly, NormRouteReport]:
    """Smallest convergent denominator whose rescaled package has C^r norm < eps.

    The localization exponent comes from the measured approximation exponent
    of omega; admissible only for r below 3 plus that exponent.  The package
    for denominator q is q^-2 (well + perturbation)(q x) built at n = q.
    Beyond depth 34 or so a double-precision omega cannot resolve its own
    convergents; pass exact partial quotients to go deeper.
    """
    if quotients is not None:
        cf = from_quotients(quotients, depth)
    else:
        cf = expand(omega, depth if depth is not None else 30)
    mu = approximation_exponent(cf)
    if r >= 3.0 + mu:
        raise ContractViolation(
            f"norm order {r} needs a frequency with approximation exponent above {r - 3.0:.3f}")
    delta = (3.0 + mu - r) / 2.0
    a = 1.0 + mu - delta
    if a <= 0:
        raise ContractViolation("norm order too small: localization exponent would vanish")
    if k is None:
        # a/delta can land exactly on an integer; nudge before flooring
        k = int(math.floor(a / delta + 1e-9)) + 1
    rows: list[tuple[int, int, float, float]] = []
    chosen: RescaledPoly | None = None
    chosen_q = None
    for _, q in _unique_denominators(cf):
        cons = build_construction(q, a, k=k, delta=delta, width_scale=width_scale,
                                  max_degree=max_degree)
        pkg = RescaledPoly(cons.u + cons.v, q, float(q) ** -2.0)
        val = cr_norm(pkg, r)
        rows.append((q, cons.degree, cons.err_budget, val))
        if val < eps:
            chosen, chosen_q = pkg, q
            break
    report = NormRouteReport(
        omega=float(cf.convergents[-1].p / cf.convergents[-1].q) if quotients is not None else omega,
        freq_exponent=mu, r=r, a=a, delta=delta, k=k, eps=eps,
        rows=tuple(rows), chosen_q=chosen_q,
        slope=_fit_slope([x[0] for x in rows], [x[3] for x in rows]),
        slope_bound=r - a - 2.0)
    if chosen is None:
        raise BudgetExceeded(
            f"no convergent denominator up to {rows[-1][0] if rows else 0} "
            f"meets the norm target", report)
    return chosen, report


def cr_decay_sweep(omega: float, a: float, r: float, depth: int = 12,
                   k: int | None = None, max_degree: int = 8192
                   ) -> tuple[tuple[tuple[int, float], ...], float, float]:
    """Measured C^r norms of the rescaled packages along the convergents.

    Returns ((q, norm), ...), the fitted log-log slope, and the slope bound
    r - a - 2 that the decay must not exceed.
    """
    cf = expand(omega, depth)
    if k is None:
        k = max(2, int(math.floor(2.0 * a)) + 1)
    rows = []
    for _, q in _unique_denominators(cf, floor_q=2):
        cons = build_construction(q, a, k=k, max_degree=max_degree)
        pkg = RescaledPoly(cons.u + cons.v, q, float(q) ** -2.0)
        rows.append((q, cr_norm(pkg, r)))
    slope = _fit_slope([x[0] for x in rows], [x[1] for x in rows])
    if slope is None:
        raise ContractViolation("need at least two usable convergents for the sweep")
    return tuple(rows), slope, r - a - 2.0


def gamma_exponent(a: float, r: float, k: int) -> float:
    """Closed-form degree-growth exponent of the low-degree route."""
    return (a * (k + 1) + 2.0 * k) / (2.0 * k * (2.0 + a - r))


def gamma_decomposition(a: float, r: float, k: int) -> tuple[float, float, float]:
    """Three-term split of the exponent: leading, localization, smoothness."""
    t1 = 3.0 / (2.0 * (3.0 - r))
    t2 = (1.0 - a) * r / (2.0 * (2.0 + a - r) * (3.0 - r))
    t3 = a / (2.0 * (2.0 + a - r) * k)
    return (t1, t2, t3)


def _low_degree_base(q: int, a: float, delta: float, k: int, max_degree: int
                     ) -> tuple[TrigPoly, ConstructionParams, int, int]:
    """Unit package (1 - cos)(1 + normalized square) for one denominator.

    The approximant degree follows the prescribed growth law q^(a/2 + a/2k)
    of the low-degree route (floored at the kernel's minimum degree k + 1);
    the measured-error selection belongs to the norm route only.  Returns the
    base (the e^-2N factor folded in when representable, dropped otherwise:
    relative size below 1e-14 means the perturbation is invisible to double
    coefficients either way, a norm error far below anything measured here),
    the params, the analytic total degree (2N + 1) q, and the
    coefficient-support total degree measured at unit scale.  Support can sit
    below the analytic value when the approximant's top harmonics are within
    the coefficient trim floor of the squaring; it can never exceed it.
    """
    support = choose_support(q, a)
    bump = build_bump(support, k_max=max(k, 8))
    target = max(k + 1, int(math.ceil(float(q) ** (a / 2.0 + a / (2.0 * k)))))
    if target > max_degree:
        raise BudgetExceeded(
            f"prescribed approximant degree {target} exceeds the cap {max_degree}")
    approx = jackson_approx(bump, target, order=k)
    big_n = approx.poly.degree
    sigma = 0.5 * float(q) ** (-a / 2.0)
    params = ConstructionParams(n=q, a=a, delta=delta, k=k, err_budget=sigma,
                                degree=big_n, search_budget=target, support=support)
    _, mx = approx.poly.extremum(maximize=True)
    if mx <= 0:
        raise ContractViolation("approximant has no positive part to normalize")
    unit = approx.poly * (1.0 / mx)
    square_unit = unit * unit
    one_minus_cos = TrigPoly(np.array([1.0, -1.0]))
    support_deg = (one_minus_cos * (1.0 + square_unit)).degree
    if support_deg > 2 * big_n + 1:
        raise ContractViolation(
            f"coefficient support {support_deg} exceeds 2N+1 = {2 * big_n + 1}")
    if 2 * big_n <= -LOG_SCALE_FLOOR:
        ptilde = square_unit * math.exp(-2.0 * big_n)
    else:
        ptilde = TrigPoly.zero()
    return one_minus_cos * (1.0 + ptilde), params, (2 * big_n + 1) * q, support_deg * q


def _degree_route_table(omega: float, r: float, m: int, k: int, depth: int,
                        max_degree: int, bad_bound: int,
                        stop_below: float | None = None
                        ) -> tuple[float, float, list[tuple[int, int, int, float]]]:
    cf = expand(omega, depth)
    if not is_badly_approximable(cf, bad_bound):
        raise ContractViolation(
            f"frequency is not constant-type at partial-quotient bound {bad_bound}")
    if not 0.0 <= r < 3.0:
        raise ContractViolation("norm order must lie in [0, 3) for the degree route")
    delta = (3.0 - r) / (2.0 * m)
    a = 1.0 - delta
    if a <= 0:
        raise ContractViolation("refinement m too small: localization exponent would vanish")
    if k * delta <= a:
        raise ContractViolation(
            f"need k > a/delta = {a / delta:.2f} for this (r, m)")
    rows: list[tuple[int, int, int, float]] = []
    for _, q in _unique_denominators(cf, floor_q=2):
        base, params, total, _ = _low_degree_base(q, a, delta, k, max_degree)
        val = cr_norm(RescaledPoly(base, q, float(q) ** -(2.0 + a)), r)
        rows.append((q, params.degree, total, val))
        if stop_below is not None and val < stop_below:
            break
    return a, delta, rows


def destroy_with_low_degree(omega: float, eps: float, r: float, m: int, k: int,
                            depth: int = 30, max_degree: int = 8192,
                            bad_bound: int = 20
                            ) -> tuple[RescaledPoly, DegreeRouteReport]:
    """Lowest-degree rescaled package with C^r norm below eps.

    Constant-type frequencies only.  The localization exponent is 1 - delta
    with delta = (3 - r) / 2m, the package for denominator q is
    q^-(2+a) (1 - cos 2 pi q x)(1 + normalized square at q x), and the first
    convergent denominator whose measured norm clears eps wins.
    """
    a, delta, rows = _degree_route_table(omega, r, m, k, depth, max_degree,
                                         bad_bound, stop_below=eps)
    gamma = gamma_exponent(a, r, k)
    terms = gamma_decomposition(a, r, k)
    if abs(gamma - sum(terms)) > 1e-12:
        raise ContractViolation("exponent decomposition identity failed")
    chosen = next(((q, big_n, total) for q, big_n, total, val in rows if val < eps), None)
    if chosen is None:
        report = DegreeRouteReport(
            omega=omega, r=r, m=m, k=k, a=a, delta=delta, eps=eps,
            rows=tuple(rows), chosen_q=None, total_degree=None,
            support_degree=None, gamma=gamma, gamma_terms=terms,
            gamma_boundary=3.0 / (2.0 * (3.0 - r)))
        raise BudgetExceeded(
            f"no convergent denominator within depth {depth} meets the norm target", report)
    base, _, total, support_total = _low_degree_base(chosen[0], a, delta, k, max_degree)
    report = DegreeRouteReport(
        omega=omega, r=r, m=m, k=k, a=a, delta=delta, eps=eps,
        rows=tuple(rows), chosen_q=chosen[0], total_degree=total,
        support_degree=support_total, gamma=gamma, gamma_terms=terms,
        gamma_boundary=3.0 / (2.0 * (3.0 - r)))
    return RescaledPoly(base, chosen[0], float(chosen[0]) ** -(2.0 + a)), report


def degree_sweep(omega: float, r: float, m: int, k: int,
                 eps_grid: tuple[float, ...], depth: int = 30,
                 max_degree: int = 8192, bad_bound: int = 20
                 ) -> tuple[tuple[tuple[float, int, int], ...], float, float]:
    """First-hit total degree across a grid of norm targets.

    Returns ((eps, q, total_degree), ...), the fitted slope of log degree
    against log(1/eps), and the closed-form exponent it should match.
    """
    if not eps_grid:
        raise ContractViolation("norm-target grid is empty")
    a, delta, rows = _degree_route_table(omega, r, m, k, depth, max_degree,
                                         bad_bound, stop_below=min(eps_grid))
    out = []
    for eps in sorted(eps_grid, reverse=True):
        hit = next(((q, total) for q, _, total, val in rows if val < eps), None)
        if hit is None:
            raise BudgetExceeded(f"depth {depth} cannot reach the target {eps:.3e}")
        out.append((float(eps), hit[0], hit[1]))
    xs = np.log([1.0 / e for e, _, _ in out])
    ys = np.log([t for _, _, t in out])
    slope = float(np.polyfit(xs, ys, 1)[0])
    return tuple(out), slope, gamma_exponent(1.0 - (3.0 - r) / (2.0 * m), r, k)
