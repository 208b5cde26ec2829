"""Smooth flat-top bump functions with analytic derivatives of every order.

The profile is built from psi(t) = exp(-1/t) (t > 0).  Derivatives satisfy
psi^(j)(t) = P_j(1/t) exp(-1/t) with integer polynomials P_{j+1}(u) =
u^2 (P_j(u) - P_j'(u)), so derivative values of the smooth step

    S(t) = psi(t) / (psi(t) + psi(1 - t))

follow from the Leibniz rule applied to S * (A + B) = A.  The bump itself is

    phi(x) = 2 * S((x - lo)/w) * S((hi - x)/w),      w = rise_fraction * (hi - lo),

which equals exactly 2 on the plateau [lo + w, hi - w] and vanishes with all
derivatives at the support endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

__all__ = ["SmoothBump", "step_derivatives"]

_T_FLOOR = 1e-8  # below this, exp(-1/t) is far under double underflow


def _psi_polys(order: int) -> list[np.ndarray]:
    """Coefficient arrays (ascending powers of u = 1/t) of P_0..P_order."""
    polys = [np.array([1.0])]
    for _ in range(order):
        p = polys[-1]
        dp = p[1:] * np.arange(1, len(p))
        q = p.copy()
        q[:len(dp)] -= dp
        polys.append(np.concatenate([[0.0, 0.0], q]))
    return polys


def _psi_derivatives(t: np.ndarray, order: int) -> np.ndarray:
    """Array of shape (order+1, len(t)) with psi^(j)(t); zero for t <= floor."""
    t = np.asarray(t, dtype=float)
    out = np.zeros((order + 1, len(t)))
    ok = t > _T_FLOOR
    if not np.any(ok):
        return out
    u = 1.0 / t[ok]
    e = np.exp(-u)
    for j, poly in enumerate(_psi_polys(order)):
        out[j, ok] = np.polynomial.polynomial.polyval(u, poly) * e
    return out


def step_derivatives(t: np.ndarray, order: int) -> np.ndarray:
    """S^(j)(t) for j = 0..order where S is the exp-based smooth step on [0,1]."""
    t = np.asarray(t, dtype=float)
    a = _psi_derivatives(t, order)
    b = _psi_derivatives(1.0 - t, order)
    sgn = (-1.0) ** np.arange(order + 1)
    b = b * sgn[:, None]          # d^j/dt^j psi(1 - t)
    d = a + b                      # always >= psi(1/2) > 0 on [0, 1]
    s = np.zeros_like(a)
    s[0] = np.where(t <= 0.0, 0.0, np.where(t >= 1.0, 1.0, a[0] / np.where(d[0] == 0, 1.0, d[0])))
    inner = (t > 0.0) & (t < 1.0)
    for n in range(1, order + 1):
        acc = a[n].copy()
        for j in range(n):
            acc -= comb(n, j) * s[j] * d[n - j]
        s[n] = np.where(inner, acc / np.where(d[0] == 0, 1.0, d[0]), 0.0)
    return s


@dataclass(frozen=True)
class SmoothBump:
    """Flat-top mollified indicator of [lo, hi] with peak value exactly 2."""

    lo: float
    hi: float
    k_max: int = 8
    rise_fraction: float = 1.0 / 3.0
    measured_ck: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("support interval is empty")
        if not 0.0 < self.rise_fraction < 0.5:
            raise ValueError("rise_fraction must lie in (0, 1/2) to keep a plateau")
        norms = np.array([self._grid_max(j) for j in range(self.k_max + 1)])
        object.__setattr__(self, "measured_ck", norms)

    @property
    def support(self) -> tuple[float, float]:
        return (self.lo, self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def width(self) -> float:
        return self.rise_fraction * self.length

    @property
    def peak(self) -> float:
        return 2.0

    def __call__(self, x):
        return self.eval_deriv(x, 0)

    def eval_deriv(self, x, order: int):
        """Exact order-th derivative values (order 0 is the bump itself)."""
        if order > self.k_max:
            raise ValueError(f"derivatives prepared only up to order {self.k_max}")
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x).astype(float)
        w = self.width
        s_up = step_derivatives((xf - self.lo) / w, order)
        s_dn = step_derivatives((self.hi - xf) / w, order)
        acc = np.zeros_like(xf)
        for j in range(order + 1):
            term = comb(order, j) * s_up[j] * s_dn[order - j] * (-1.0) ** (order - j)
            acc += term
        acc *= 2.0 / w ** order
        if scalar:
            return float(acc[0])
        return acc

    def _grid_max(self, order: int, m: int = 4001) -> float:
        xs = np.linspace(self.lo, self.hi, m)
        return float(np.max(np.abs(self.eval_deriv(xs, order))))

    def ck_norm(self, k: int) -> float:
        """Measured C^k norm (max over derivative orders 0..k of the sup norm)."""
        if k > self.k_max:
            raise ValueError(f"derivatives prepared only up to order {self.k_max}")
        return float(np.max(self.measured_ck[:k + 1]))
