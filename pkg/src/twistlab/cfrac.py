"""Continued fractions, convergents, and approximation exponents.

Partial quotients come from Euclid's algorithm run on the exact rational
value of the input double (fractions.Fraction is arbitrary precision), so
the integer recursion p_n = a_n p_{n-1} + p_{n-2}, q_n likewise, is exact.
The expansion is cut off once |q_n w - p_n| drops to the noise floor
64 * eps * q_n of the double representation of w: quotients past that point
describe the rounding of w, not the underlying number.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "Convergent", "ContinuedFraction", "expand", "from_quotients",
    "approximation_exponent", "is_badly_approximable", "jarnik_dimension",
    "successive_denominator_ratio",
]

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Convergent:
    a: int          # partial quotient producing this convergent
    p: int
    q: int
    error: float    # |q*omega - p|, computed in exact rational arithmetic


@dataclass(frozen=True)
class ContinuedFraction:
    omega: float
    quotients: tuple[int, ...]
    convergents: tuple[Convergent, ...]
    rational: bool            # indistinguishable from its last convergent at working precision
    exhausted_precision: bool # expansion stopped by the noise floor, not by the depth request
    requested_depth: int

    @property
    def depth(self) -> int:
        return len(self.convergents)


def _build(omega_exact: Fraction, omega_float: float, depth: int,
           noise_floor: bool = True) -> ContinuedFraction:
    quots: list[int] = []
    convs: list[Convergent] = []
    p_prev, p_curr = 0, 1   # p_{-2}, p_{-1} convention gives p_0 = a_0, q_0 = 1
    q_prev, q_curr = 1, 0
    x = omega_exact
    rational = False
    exhausted = False
    for _ in range(depth):
        a = int(x)  # floor for nonnegative; handle negatives explicitly
        if x < 0 and x != a:
            a -= 1
        p_next = a * p_curr + p_prev
        q_next = a * q_curr + q_prev
        err_exact = abs(q_next * omega_exact - p_next)
        err = float(err_exact)
        quots.append(a)
        convs.append(Convergent(a=a, p=p_next, q=q_next, error=err))
        p_prev, p_curr = p_curr, p_next
        q_prev, q_curr = q_curr, q_next
        if err_exact == 0:
            rational = True
            break
        if noise_floor and err < 64.0 * _EPS * q_next:
            # at the resolution of the stored double the value equals p/q
            rational = True
            exhausted = True
            break
        x = 1 / (x - a)
    return ContinuedFraction(
        omega=omega_float,
        quotients=tuple(quots),
        convergents=tuple(convs),
        rational=rational,
        exhausted_precision=exhausted,
        requested_depth=depth,
    )


def expand(omega: float, depth: int) -> ContinuedFraction:
    """Continued fraction of omega to at most `depth` convergents.

    Rational input (or input indistinguishable from a rational at double
    precision) is flagged, not treated as an error.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if not np.isfinite(omega):
        raise ValueError("omega must be finite")
    return _build(Fraction(float(omega)), float(omega), depth)


def from_quotients(quotients: list[int], depth: int | None = None) -> ContinuedFraction:
    """Exact continued fraction with the given partial quotients.

    Use this to reach depths beyond what a double-precision omega supports:
    convergents and errors are computed in exact integer arithmetic against
    the exact value of the full quotient list.
    """
    if not quotients:
        raise ValueError("need at least one quotient")
    if any(int(a) != a or (a < 1 and i > 0) for i, a in enumerate(quotients)):
        raise ValueError("partial quotients past the first must be positive integers")
    value = Fraction(int(quotients[-1]))
    for a in reversed(quotients[:-1]):
        value = int(a) + 1 / value
    depth = len(quotients) if depth is None else min(depth, len(quotients))
    return _build(value, float(value), depth, noise_floor=False)


def approximation_exponent(cf: ContinuedFraction) -> float:
    """Largest mu with |q_n w - p_n| < q_n^(-1-mu) over the available convergents.

    Computed as min over n of -ln|q_n w - p_n| / ln q_n - 1.  Convergents with
    q_n < 2 are skipped (ln q_n = 0) and exact-zero errors (rational cutoff)
    carry no exponent information, so they are skipped as well.
    """
    vals = []
    for c in cf.convergents:
        if c.q < 2 or c.error <= 0.0:
            continue
        vals.append(-np.log(c.error) / np.log(c.q) - 1.0)
    if not vals:
        raise ValueError("no usable convergents (q >= 2 with nonzero error)")
    return float(min(vals))


def is_badly_approximable(cf: ContinuedFraction, bound: int) -> bool:
    """True iff all available partial quotients past the integer part are <= bound."""
    return all(a <= bound for a in cf.quotients[1:])


def jarnik_dimension(mu: float) -> float:
    """Hausdorff dimension 2/(2+mu) of the mu-well-approximable numbers."""
    if mu < 0:
        raise ValueError("mu must be nonnegative")
    return 2.0 / (2.0 + mu)


def successive_denominator_ratio(cf: ContinuedFraction) -> float:
    """max over n of q_n / q_{n-1} (bounded by max quotient + 1)."""
    qs = [c.q for c in cf.convergents]
    if len(qs) < 2:
        raise ValueError("need at least two convergents")
    return float(max(qs[i] / qs[i - 1] for i in range(1, len(qs))))
