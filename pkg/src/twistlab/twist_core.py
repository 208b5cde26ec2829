"""Generating functions, orbit configurations, and rotation symbols.

A generating function h(x, x') with d12 h < 0 defines an area-preserving
twist map of the cylinder through

    y = -d1 h(x, x'),        y' = d2 h(x, x').

Configurations are windows of lifted orbit sequences (never reduced mod 1);
a configuration is stationary when d1 h(x_i, x_{i+1}) + d2 h(x_{i-1}, x_i)
vanishes at interior indices, which is exactly the discrete Euler-Lagrange
equation of the action sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .trigpoly import TrigPoly

__all__ = [
    "GeneratingFunction", "Configuration", "RotationSymbol",
    "integrable", "with_potential", "standard_family", "cosine_well_family",
    "stationarity_residual", "twist_map_step", "tangent_matrix",
    "rotation_number_estimate",
    "ContractViolation", "TwistSolveError",
]


class ContractViolation(ValueError):
    """Inputs break a documented precondition."""


class TwistSolveError(RuntimeError):
    """The implicit twist step could not be bracketed or solved."""


# --------------------------------------------------------------------- symbols
@dataclass(frozen=True)
class RotationSymbol:
    """Rotation symbol: an irrational number, p/q, or one-sided p/q+ / p/q-."""

    kind: str                 # "irrational" | "rational" | "rational_plus" | "rational_minus"
    omega: float | None = None
    p: int | None = None
    q: int | None = None

    _KINDS = ("irrational", "rational", "rational_plus", "rational_minus")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ContractViolation(f"unknown symbol kind {self.kind!r}")
        if self.kind == "irrational":
            if self.omega is None or not np.isfinite(self.omega):
                raise ContractViolation("irrational symbol needs a finite omega")
        else:
            if self.p is None or self.q is None:
                raise ContractViolation("rational symbols need integers p, q")
            if self.q < 1:
                raise ContractViolation("q must be >= 1")
            if math.gcd(self.p, self.q) != 1:
                raise ContractViolation("p/q must be in lowest terms")

    @classmethod
    def irrational(cls, omega: float) -> "RotationSymbol":
        return cls("irrational", omega=float(omega))

    @classmethod
    def rational(cls, p: int, q: int) -> "RotationSymbol":
        return cls("rational", p=int(p), q=int(q))

    @classmethod
    def plus(cls, p: int, q: int) -> "RotationSymbol":
        return cls("rational_plus", p=int(p), q=int(q))

    @classmethod
    def minus(cls, p: int, q: int) -> "RotationSymbol":
        return cls("rational_minus", p=int(p), q=int(q))

    @property
    def value(self) -> float:
        return self.omega if self.kind == "irrational" else self.p / self.q

    def __str__(self):
        if self.kind == "irrational":
            return f"{self.omega!r}"
        suffix = {"rational": "", "rational_plus": "+", "rational_minus": "-"}[self.kind]
        return f"{self.p}/{self.q}{suffix}"


# ----------------------------------------------------- generating functions
@dataclass(frozen=True)
class GeneratingFunction:
    """Evaluator bundle for h and its first and second partials."""

    h: Callable
    d1: Callable
    d2: Callable
    d11: Callable
    d12: Callable
    d22: Callable
    tag: str
    potential: object | None = None


def integrable() -> GeneratingFunction:
    """h(x, x') = (x - x')^2 / 2, the exact shear (x, y) -> (x + y, y)."""
    return GeneratingFunction(
        h=lambda x, xp: 0.5 * (np.asarray(x, float) - np.asarray(xp, float)) ** 2,
        d1=lambda x, xp: np.asarray(x, float) - np.asarray(xp, float),
        d2=lambda x, xp: np.asarray(xp, float) - np.asarray(x, float),
        d11=lambda x, xp: np.ones_like(np.asarray(x, float) + np.asarray(xp, float)),
        d12=lambda x, xp: -np.ones_like(np.asarray(x, float) + np.asarray(xp, float)),
        d22=lambda x, xp: np.ones_like(np.asarray(x, float) + np.asarray(xp, float)),
        tag="integrable",
    )


def with_potential(potential) -> GeneratingFunction:
    """h(x, x') = (x - x')^2 / 2 + V(x') for a periodic potential V.

    The potential must expose eval_deriv(x, order); TrigPoly and SmoothBump do.
    """
    v0 = lambda x: potential.eval_deriv(x, 0)
    v1 = lambda x: potential.eval_deriv(x, 1)
    v2 = lambda x: potential.eval_deriv(x, 2)
    return GeneratingFunction(
        h=lambda x, xp: 0.5 * (np.asarray(x, float) - np.asarray(xp, float)) ** 2 + v0(np.asarray(xp, float)),
        d1=lambda x, xp: np.asarray(x, float) - np.asarray(xp, float),
        d2=lambda x, xp: np.asarray(xp, float) - np.asarray(x, float) + v1(np.asarray(xp, float)),
        d11=lambda x, xp: np.ones_like(np.asarray(x, float) + np.asarray(xp, float)),
        d12=lambda x, xp: -np.ones_like(np.asarray(x, float) + np.asarray(xp, float)),
        d22=lambda x, xp: 1.0 + v2(np.asarray(xp, float)),
        tag="integrable-plus-potential",
        potential=potential,
    )


def standard_family(k: float) -> GeneratingFunction:
    """h0 + (k / 4 pi^2) cos(2 pi x'): the standard map at parameter k."""
    return with_potential(TrigPoly.harmonic(1, cos_amp=k / (4.0 * np.pi ** 2)))


def cosine_well_family(n: float, a: float) -> GeneratingFunction:
    """h0 + n^-a (1 - cos(2 pi x')): single potential well of depth 2 n^-a at x = 1/2."""
    amp = float(n) ** (-float(a))
    return with_potential(TrigPoly(np.array([amp, -amp])))


# ------------------------------------------------------------- configurations
@dataclass(frozen=True)
class Configuration:
    """Finite window x_start..x_{start+len-1} of a lifted orbit sequence.

    For periodic configurations (period = (p, q)) the stored window covers at
    least one period and extends by x_{i+q} = x_i + p exactly.
    """

    points: np.ndarray
    start: int = 0
    period: tuple[int, int] | None = None
    symbol: RotationSymbol | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).copy()
        if pts.ndim != 1 or len(pts) < 1:
            raise ContractViolation("configuration needs a one dimensional point window")
        if self.period is not None:
            p, q = self.period
            if q < 1 or math.gcd(p, q) != 1:
                raise ContractViolation("period (p, q) must have q >= 1 and gcd(p, q) = 1")
            if len(pts) < q:
                raise ContractViolation("periodic window must cover at least one period")
            for i in range(len(pts) - q):
                if abs(pts[i + q] - pts[i] - p) > 1e-9:
                    raise ContractViolation("stored window violates x_{i+q} = x_i + p")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.start + len(self.points))

    def point(self, i: int) -> float:
        """x_i, using exact periodic extension outside the stored window."""
        j = i - self.start
        if 0 <= j < len(self.points):
            return float(self.points[j])
        if self.period is None:
            raise ContractViolation(f"index {i} outside stored window")
        p, q = self.period
        shift, j = divmod(j, q)
        return float(self.points[j] + shift * p)

    def window(self, i_lo: int, i_hi: int) -> np.ndarray:
        return np.array([self.point(i) for i in range(i_lo, i_hi + 1)])


# ---------------------------------------------------------------- operations
def stationarity_residual(h: GeneratingFunction, c: Configuration) -> np.ndarray:
    """d1 h(x_i, x_{i+1}) + d2 h(x_{i-1}, x_i) at interior indices.

    Periodic configurations report all q residuals (wraparound via the exact
    periodic extension); plain windows report the len-2 interior ones.
    """
    if c.period is not None:
        p, q = c.period
        x = c.window(c.start - 1, c.start + q)
        xm, x0, xp = x[:-2], x[1:-1], x[2:]
        return np.asarray(h.d1(x0, xp) + h.d2(xm, x0), dtype=float)
    if len(c) < 3:
        raise ContractViolation("window too short for interior residuals")
    x = c.points
    return np.asarray(h.d1(x[1:-1], x[2:]) + h.d2(x[:-2], x[1:-1]), dtype=float)


def twist_map_step(h: GeneratingFunction, x: float, y: float,
                   tol: float = 1e-13, max_span: float = 64.0) -> tuple[float, float]:
    """One twist-map step (x, y) -> (x', y') via the implicit equation.

    x' solves y = -d1 h(x, x'); since d12 h < 0 the residual y + d1 h(x, x')
    is strictly decreasing in x', so a bracket plus bisection and a Newton
    polish is reliable.  The initial bracket is centered at the shear guess
    x + y with width max(4|y|, 4) and doubles until it straddles the root.
    """
    x = float(x)
    y = float(y)
    g = lambda xp: y + h.d1(x, xp)  # decreasing in xp; root wanted
    width = max(4.0 * abs(y), 4.0)
    lo, hi = x + y - 0.5 * width, x + y + 0.5 * width
    glo, ghi = g(lo), g(hi)
    while glo < 0.0 or ghi > 0.0:
        width *= 2.0
        if width > max_span:
            raise TwistSolveError(f"no twist bracket within span {max_span}")
        lo, hi = x + y - 0.5 * width, x + y + 0.5 * width
        glo, ghi = g(lo), g(hi)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9:
            break
    xp = 0.5 * (lo + hi)
    for _ in range(8):
        slope = h.d12(x, xp)
        step = -g(xp) / slope
        xp_new = float(np.clip(xp + step, lo - 1e-6, hi + 1e-6))
        if abs(xp_new - xp) < tol:
            xp = xp_new
            break
        xp = xp_new
    return xp, float(h.d2(x, xp))


def tangent_matrix(h: GeneratingFunction, x: float, xp: float) -> np.ndarray:
    """Derivative of the twist map along the step x -> x'."""
    h11 = float(h.d11(x, xp))
    h12 = float(h.d12(x, xp))
    h22 = float(h.d22(x, xp))
    return np.array([
        [-h11 / h12, -1.0 / h12],
        [h12 - h22 * h11 / h12, -h22 / h12],
    ])


def rotation_number_estimate(c: Configuration) -> float:
    """(x_M - x_m) / (M - m); exact p/q for periodic configurations."""
    if c.period is not None:
        p, q = c.period
        return p / q
    if len(c) < 2:
        raise ContractViolation("window too short for a rotation number estimate")
    return float((c.points[-1] - c.points[0]) / (len(c.points) - 1))
