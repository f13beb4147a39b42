"""Vectorized double-precision evaluators for the bulk sums.

The arbitrary-precision kernels in `kernels` are the reference; these numpy
twins exist because the triple-divisor sums and spectral transforms touch
millions of kernel values.  Products of the two paths are cross-checked in
the test suite on sample grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import loggamma

from .errors import DomainError

__all__ = [
    "ktilde_it",
    "PhiFast",
    "PhiTildeFast",
    "PhiZeroFast",
    "phi_fast_pair",
    "W0Family",
]

LOG_EPS = 38.0

_GL64 = np.polynomial.legendre.leggauss(64)


def composite_gauss(breaks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """64-point Gauss-Legendre nodes/weights tiled over consecutive panels."""
    g, w = _GL64
    breaks = np.asarray(breaks, dtype=np.float64)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    v = (mid[:, None] + half[:, None] * g[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return v, ww


def ktilde_it(t: float, xs: np.ndarray) -> np.ndarray:
    """e^{pi t/2} K_{it}(x) for x > 0 (vectorized), double precision.

    Oscillatory region x < t: contour u = v - i(pi/2 - d) leaves only e^{t d}
    of cancellation; monotone region: plain integrand scaled by e^x.
    """
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    hi = xs >= max(t * 1.02, t + 1.5)
    if hi.any():
        x = xs[hi]
        vmax = float(np.arccosh(1 + (LOG_EPS + 4) / x.min()))
        n_panels = max(3, int(t * vmax / (2 * math.pi) / 8.0) + 1)
        v, w = composite_gauss(np.linspace(0.0, vmax, n_panels + 1))
        ex = np.exp(-np.outer(x, np.cosh(v) - 1.0)) * np.cos(t * v)[None, :]
        out[hi] = math.exp(math.pi * t / 2) * np.exp(-x) * (ex @ w)
    lo = ~hi
    if lo.any():
        x = xs[lo]
        d = min(0.5, 9.0 / max(t, 1.0))
        sind, cosd = math.sin(d), math.cos(d)
        xmin, xmax = float(x.min()), float(x.max())
        vmax = float(np.arccosh(1 + (LOG_EPS + 4) / (xmin * sind)))
        # panel layout follows the worst-case phase x_max sinh(v) cos d - t v
        vs = np.linspace(0.0, vmax, 4001)
        ph = xmax * np.sinh(vs) * cosd - t * vs
        cyc = np.abs(ph - ph[0]) / (2 * math.pi)
        n_panels = max(4, int(cyc[-1] / 6.0) + 1)
        targets = np.linspace(0, cyc[-1], n_panels + 1)
        breaks = vs[np.unique(np.searchsorted(cyc, targets).clip(0, 4000))]
        v, w = composite_gauss(breaks)
        amp = np.exp(-np.outer(x, np.cosh(v) * sind))
        ph = np.outer(x, np.sinh(v) * cosd) - t * v[None, :]
        out[lo] = math.exp(t * d) * ((amp * np.cos(ph)) @ w)
    return out


def _series_eval(x: np.ndarray, ratios: np.ndarray, c0: complex) -> np.ndarray:
    """sum_j c_j x^j with c_{j+1} = c_j ratios[j], c_0 = c0, vectorized in x."""
    total = np.full(x.shape, c0, dtype=np.complex128)
    term = np.full(x.shape, c0, dtype=np.complex128)
    for r in ratios:
        term *= x
        term *= r
        total += term
    return total


@dataclass
class PhiTildeFast:
    """phi_tilde_k(x; a1, a2) for x <= 1/2 at fixed parameters (numpy)."""

    k: int
    a1: complex
    a2: complex
    terms: int = 0

    def __post_init__(self):
        k, a1, a2 = self.k, complex(self.a1), complex(self.a2)
        if self.terms == 0:
            self.terms = 130 + 4 * k
        j = np.arange(self.terms)
        self._ratios = (k - a1 + j) * (1 - k - a1 + j) / ((1 - a1 + a2 + j) * (1 + j))
        s = np.sin(np.pi * (a1 - a2) / 2)
        self._pref = (
            (2 * np.pi) ** (1 + a1 + a2)
            / (2 * s)
            * np.exp(loggamma(k - a1) - loggamma(1 - a1 + a2) - loggamma(k + a1))
        )

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        a1, a2 = complex(self.a1), complex(self.a2)
        body = x ** ((a2 - a1) / 2) * (1 - x) ** (-(a1 + a2) / 2)
        return self._pref * body * _series_eval(x.astype(np.complex128), self._ratios, 1.0)


@dataclass
class PhiFast:
    """Phi_k(x; a1, a2) on (0, 1) at fixed parameters (numpy).

    Direct 2I1 series for x <= 0.55; the 1-x connection formula beyond (valid
    because a1 + a2 is never an integer for the shift sets in play).
    """

    k: int
    a1: complex
    a2: complex

    def __post_init__(self):
        k, a1, a2 = self.k, complex(self.a1), complex(self.a2)
        ab = a1 + a2
        if abs(ab - round(ab.real)) < 1e-9 and abs(ab.imag) < 1e-9:
            raise DomainError("PhiFast connection needs a1+a2 away from integers")
        jd = np.arange(490 + 2 * k)
        self._r_direct = (k - a1 + jd) * (k - a2 + jd) / ((2 * k + jd) * (1 + jd))
        self._c_direct = complex(np.exp(loggamma(k - a1) + loggamma(k - a2) - loggamma(2 * k)))
        j2 = np.arange(260 + 14 * k)
        self._rA = (k - a1 + j2) * (k - a2 + j2) / ((1 - ab + j2) * (1 + j2))
        self._rB = (k + a2 + j2) * (k + a1 + j2) / ((1 + ab + j2) * (1 + j2))
        self._cA = complex(
            np.exp(loggamma(k - a1) + loggamma(k - a2) + loggamma(ab) - loggamma(k + a1) - loggamma(k + a2))
        )
        self._cB = complex(np.exp(loggamma(-ab)))
        self._ab = ab

    def i2f1(self, x: np.ndarray) -> np.ndarray:
        """2I1(k-a1, k-a2, 2k; x) vectorized on (0, 1)."""
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(x.shape, dtype=np.complex128)
        # the direct series has positive coefficients (no cancellation); the
        # 1-x connection cancels like Gamma(a1+a2) * series growth, so it is
        # reserved for x close to 1 where that amplification is harmless
        lo = x <= 0.9
        if lo.any():
            out[lo] = _series_eval(x[lo].astype(np.complex128), self._r_direct, self._c_direct)
        if (~lo).any():
            om = (1 - x[~lo]).astype(np.complex128)
            s1 = _series_eval(om, self._rA, self._cA)
            s2 = _series_eval(om, self._rB, self._cB)
            out[~lo] = s1 + om ** self._ab * s2
        return out

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        ab = self._ab
        pref = 2 * (2 * np.pi) ** ab * np.cos(np.pi * ab / 2)
        return pref * x ** self.k * (1 - x) ** (-ab / 2) * self.i2f1(x)


@dataclass
class PhiZeroFast:
    """Phi_k(x; 0, 0) via the even epsilon-ring (two points, X_k-corrected)."""

    k: int
    rho: float = 1e-3

    def __post_init__(self):
        k, r = self.k, self.rho
        self._p1 = PhiFast(k, r, r)
        self._p2 = PhiFast(k, 1j * r, 1j * r)
        self._x1 = complex(np.exp(2 * r * math.log(2 * math.pi) + loggamma(k - r) - loggamma(k + r)))
        self._x2 = complex(np.exp(2 * 1j * r * math.log(2 * math.pi) + loggamma(k - 1j * r) - loggamma(k + 1j * r)))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        v1 = self._p1(x) / self._x1
        v2 = self._p2(x) / self._x2
        return 0.5 * (v1 + v2)


class PhiTildePairFast:
    """phi_k(x; a1, a2) on (0,1): symmetrized series below 1/2, reflection above."""

    def __init__(self, k: int, a1: complex, a2: complex):
        self.k = k
        self.a1, self.a2 = complex(a1), complex(a2)
        if abs(self.a1 - self.a2) < 1e-4:
            raise DomainError("use phi_fast_pair (epsilon ring) near the diagonal")
        self._t12 = PhiTildeFast(k, self.a1, self.a2)
        self._t21 = PhiTildeFast(k, self.a2, self.a1)
        self._r12 = PhiTildeFast(k, self.a1, -self.a2)
        self._r21 = PhiTildeFast(k, -self.a2, self.a1)
        sign = -1 if k % 2 else 1
        self._xf = sign * complex(
            np.exp(2 * self.a2 * math.log(2 * math.pi) + loggamma(k - self.a2) - loggamma(k + self.a2))
        )

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        out = np.empty(x.shape, dtype=np.complex128)
        lo = x <= 0.5
        if lo.any():
            out[lo] = self._t12(x[lo]) + self._t21(x[lo])
        if (~lo).any():
            y = 1 - x[~lo]
            out[~lo] = self._xf * (self._r12(y) + self._r21(y))
        return out


def phi_fast_pair(k: int, a1: complex, a2: complex, rho: float = 1e-3):
    """phi_k evaluator; epsilon-ring average when the shifts are degenerate."""
    if abs(complex(a1) - complex(a2)) >= 1e-4:
        return PhiTildePairFast(k, a1, a2)
    m = (complex(a1) + complex(a2)) / 2
    e0 = (complex(a1) - complex(a2)) / 2
    f1 = PhiTildePairFast(k, m + rho, m - rho)
    f2 = PhiTildePairFast(k, m + 1j * rho, m - 1j * rho)

    def ev(x):
        g_r = f1(x)
        g_i = f2(x)
        g0 = 0.5 * (g_r + g_i)
        if e0 == 0:
            return g0
        g2 = (g_r - g_i) / (2 * rho ** 2)
        return g0 + g2 * e0 ** 2

    return ev


@dataclass
class I2F1NegFamily:
    """2I1(pa, pb, pc; -1/y) at fixed parameters, vectorized over y > 0.

    Pfaff pullback to argument 1/(1+y) in (0, 1); geometric convergence for
    y above the decomposition-of-unity floor.
    """

    pa: complex
    pb: complex
    pc: complex

    def __post_init__(self):
        pa, pb, pc = complex(self.pa), complex(self.pb), complex(self.pc)
        nterms = 170 + int(3 * abs(pa)) + int(3 * abs(pc))
        j = np.arange(nterms)
        # after Pfaff: 2F1(pa, pc-pb, pc; w)
        self._ratios = (pa + j) * (pc - pb + j) / ((pc + j) * (1 + j))
        self._c0 = complex(np.exp(loggamma(pa) + loggamma(pb) - loggamma(pc)))

    def __call__(self, y: np.ndarray) -> np.ndarray:
        y = np.asarray(y, dtype=np.float64)
        w = (1.0 / (1.0 + y)).astype(np.complex128)
        pref = (1 + 1 / y.astype(np.complex128)) ** (-complex(self.pa))
        return pref * _series_eval(w, self._ratios, self._c0)


def W0Family(alpha, beta, t) -> I2F1NegFamily:
    """The hat-W^0 kernel family 2I1((1+a-b)/2+t, (1-a-b)/2+t, 1+2t; -1/y)."""
    a, b, t = complex(alpha), complex(beta), complex(t)
    return I2F1NegFamily((1 + a - b) / 2 + t, (1 - a - b) / 2 + t, 1 + 2 * t)
