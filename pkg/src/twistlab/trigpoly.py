"""Real trigonometric polynomials with period 1.

A polynomial of degree N is stored as cosine coefficients c_0..c_N and sine
coefficients s_1..s_N in the basis cos(2*pi*m*x), sin(2*pi*m*x).  All grid
work goes through the FFT, which is exact (to rounding) for band-limited
data, so analysis/synthesis round-trips are essentially lossless.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["TrigPoly", "TRIM_REL_TOL"]

# Trailing coefficients below TRIM_REL_TOL * max|coeff| are dropped when
# fixing the stored degree.  The tolerance is relative: polynomials produced
# by exponential normalizations carry uniformly tiny coefficients and an
# absolute cutoff would erase them wholesale.
TRIM_REL_TOL = 1e-14


def _as_array(v) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=float)).copy()
    if a.ndim != 1:
        raise ValueError("coefficient arrays must be one dimensional")
    return a


@dataclass(frozen=True)
class TrigPoly:
    """p(x) = cos_coef[0] + sum_m cos_coef[m] cos(2 pi m x) + sin_coef[m] sin(2 pi m x)."""

    cos_coef: np.ndarray
    sin_coef: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        c = _as_array(self.cos_coef)
        s = self.sin_coef
        s = np.zeros_like(c) if s is None else _as_array(s)
        n = max(len(c), len(s))
        c = np.pad(c, (0, n - len(c)))
        s = np.pad(s, (0, n - len(s)))
        if abs(s[0]) > 0:
            raise ValueError("sin coefficient at index 0 must be zero")
        # trim trailing coefficients so degree == highest surviving index
        mag = max(np.max(np.abs(c)), np.max(np.abs(s)))
        if mag == 0.0:
            c, s = c[:1], s[:1]
        else:
            keep = np.nonzero((np.abs(c) > TRIM_REL_TOL * mag)
                              | (np.abs(s) > TRIM_REL_TOL * mag))[0]
            last = int(keep[-1]) if len(keep) else 0
            c, s = c[:last + 1], s[:last + 1]
        c.flags.writeable = False
        s.flags.writeable = False
        object.__setattr__(self, "cos_coef", c)
        object.__setattr__(self, "sin_coef", s)

    # ------------------------------------------------------------------ basic
    @property
    def degree(self) -> int:
        return len(self.cos_coef) - 1

    @classmethod
    def zero(cls) -> "TrigPoly":
        return cls(np.zeros(1))

    @classmethod
    def constant(cls, c: float) -> "TrigPoly":
        return cls(np.array([float(c)]))

    @classmethod
    def harmonic(cls, m: int, cos_amp: float = 0.0, sin_amp: float = 0.0) -> "TrigPoly":
        c = np.zeros(m + 1)
        s = np.zeros(m + 1)
        c[m] = cos_amp
        if m > 0:
            s[m] = sin_amp
        return cls(c, s)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        out = self._eval(xf)
        return float(out[0]) if scalar else out

    def _eval(self, x: np.ndarray) -> np.ndarray:
        # Horner-style accumulation in the complex exponential; O(deg * len(x))
        # but vectorized and memory-light even for high degree.
        z = np.exp(2j * np.pi * x)
        acc = np.zeros_like(z)
        for m in range(self.degree, 0, -1):
            acc = (acc + (self.cos_coef[m] - 1j * self.sin_coef[m])) * z
        return self.cos_coef[0] + acc.real

    # -------------------------------------------------------------- grid work
    def grid_values(self, m: int) -> np.ndarray:
        """Values at x_j = j/m, computed by inverse FFT (exact synthesis)."""
        n = self.degree
        if m < 2 * n + 2:
            raise ValueError("grid must have at least 2*degree+2 points")
        spec = np.zeros(m // 2 + 1, dtype=complex)
        spec[0] = m * self.cos_coef[0]
        half = (self.cos_coef[1:] - 1j * self.sin_coef[1:]) * (m / 2.0)
        spec[1:n + 1] = half
        return np.fft.irfft(spec, n=m)

    @classmethod
    def from_samples(cls, values: np.ndarray, degree: int) -> "TrigPoly":
        """Discrete Fourier analysis of uniform samples at x_j = j/len(values)."""
        values = np.asarray(values, dtype=float)
        m = len(values)
        if m < 2 * degree + 1:
            raise ValueError("need at least 2*degree+1 samples")
        spec = np.fft.rfft(values) / m
        c = np.zeros(degree + 1)
        s = np.zeros(degree + 1)
        c[0] = spec[0].real
        c[1:] = 2.0 * spec[1:degree + 1].real
        s[1:] = -2.0 * spec[1:degree + 1].imag
        return cls(c, s)

    # ------------------------------------------------------------- arithmetic
    def __add__(self, other):
        if isinstance(other, TrigPoly):
            n = max(self.degree, other.degree) + 1
            c = np.pad(self.cos_coef, (0, n - len(self.cos_coef))) \
                + np.pad(other.cos_coef, (0, n - len(other.cos_coef)))
            s = np.pad(self.sin_coef, (0, n - len(self.sin_coef))) \
                + np.pad(other.sin_coef, (0, n - len(other.sin_coef)))
            return TrigPoly(c, s)
        c = self.cos_coef.copy()
        c[0] += float(other)
        return TrigPoly(c, self.sin_coef)

    __radd__ = __add__

    def __neg__(self):
        return TrigPoly(-self.cos_coef, -self.sin_coef)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TrigPoly) else -float(other))

    def __rsub__(self, other):
        return (-self) + float(other)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            deg = self.degree + other.degree
            m = 1 << int(np.ceil(np.log2(max(2 * deg + 2, 8))))
            vals = self.grid_values(m) * other.grid_values(m)
            return TrigPoly.from_samples(vals, deg)
        f = float(other)
        return TrigPoly(self.cos_coef * f, self.sin_coef * f)

    __rmul__ = __mul__

    def derivative(self, order: int = 1) -> "TrigPoly":
        c, s = self.cos_coef, self.sin_coef
        for _ in range(order):
            m = np.arange(len(c))
            w = 2.0 * np.pi * m
            c, s = w * s, -w * c
            s[0] = 0.0
        return TrigPoly(c, s)

    def eval_deriv(self, x, order: int):
        """Value of the order-th derivative at x (order 0 is the value itself)."""
        return self(x) if order == 0 else self.derivative(order)(x)

    def dilate(self, q: int) -> "TrigPoly":
        """p(q x): coefficient index m maps to q*m, amplitudes unchanged."""
        if q < 1 or q != int(q):
            raise ValueError("dilation factor must be a positive integer")
        q = int(q)
        n = self.degree
        c = np.zeros(q * n + 1)
        s = np.zeros(q * n + 1)
        c[::q] = self.cos_coef
        s[::q] = self.sin_coef
        return TrigPoly(c, s)

    # ------------------------------------------------------------- extrema
    def extremum(self, maximize: bool = True, grid: int | None = None) -> tuple[float, float]:
        """(argmax, max) or (argmin, min) over one period, grid scan + Newton polish."""
        n = self.degree
        m = grid or max(4096, 8 * (n + 1))
        m = 1 << int(np.ceil(np.log2(m)))
        vals = self.grid_values(m)
        j = int(np.argmax(vals) if maximize else np.argmin(vals))
        x = j / m
        if n == 0:
            return x, float(self.cos_coef[0])
        d1 = self.derivative(1)
        d2 = self.derivative(2)
        step_cap = 1.0 / m
        for _ in range(40):
            g, h = d1(x), d2(x)
            if h == 0.0:
                break
            step = -g / h
            # stay near the bracketing grid cell
            step = float(np.clip(step, -step_cap, step_cap))
            x += step
            if abs(step) < 1e-16:
                break
        cand = self(np.array([x, j / m]))
        k = int(np.argmax(cand) if maximize else np.argmin(cand))
        return (x if k == 0 else j / m) % 1.0, float(cand[k])

    def max_value(self) -> float:
        return self.extremum(maximize=True)[1]

    def min_value(self) -> float:
        return self.extremum(maximize=False)[1]

    def sup_norm(self) -> float:
        return max(abs(self.max_value()), abs(self.min_value()))

    # ---------------------------------------------------------- serialization
    def to_json(self) -> str:
        return json.dumps({
            "degree": self.degree,
            "cos": list(self.cos_coef),
            "sin": list(self.sin_coef[1:]),
        })

    @classmethod
    def from_json(cls, text: str) -> "TrigPoly":
        obj = json.loads(text)
        c = np.asarray(obj["cos"], dtype=float)
        s = np.concatenate([[0.0], np.asarray(obj["sin"], dtype=float)])
        return cls(c, s)

    def __repr__(self):
        return f"TrigPoly(degree={self.degree})"
