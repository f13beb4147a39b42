"""Smooth decomposition of unity and the four weight functions W_{i,j}.

The partition DU satisfies DU(x) + DU(1/x) = 1 *structurally*: the transition
profile is the normalized integral of the symmetric bump exp(-1/(tau(1-tau)))
on log scale, and the complementary half is defined as one minus the mirrored
value rather than re-integrated, so the defining identity holds to the last
bit in either backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .errors import DomainError
from .kernels import WeightIndex, Phi_kernel, phi_kernel
from .precision import DEFAULT_CTX, PrecisionContext

__all__ = ["SmoothUnity", "SmoothBump", "WeightFunction", "weight_fn", "du"]

_GL = np.polynomial.legendre.leggauss(96)


def _bump(v):
    return np.where((v > 0) & (v < 1), np.exp(-1.0 / np.clip(v * (1 - v), 1e-300, None)), 0.0)


@lru_cache(maxsize=4)
def _bump_mass() -> float:
    g, w = np.polynomial.legendre.leggauss(400)
    v = 0.5 * (g + 1)
    return float(np.sum(_bump(v) * w) * 0.5)


def _ramp_head(tau: np.ndarray) -> np.ndarray:
    """F(tau) = int_0^tau bump / mass for tau <= 1/2, vectorized."""
    tau = np.asarray(tau, dtype=np.float64)
    g, w = _GL
    v = 0.5 * tau[..., None] * (g[None, :] + 1)
    vals = _bump(v) @ w * (0.5 * tau)
    return vals / _bump_mass()


def _ramp(tau):
    """r(tau) = 1 - F(tau) with r(tau) + r(1-tau) = 1 enforced structurally."""
    tau = np.asarray(tau, dtype=np.float64)
    lo = tau < 0.5
    hi = tau > 0.5
    out = np.full_like(tau, 0.5)
    out[lo] = 1.0 - _ramp_head(tau[lo])
    out[hi] = _ramp_head(1.0 - tau[hi])
    return out


@dataclass(frozen=True)
class SmoothUnity:
    """DU: [0, inf) -> [0, 1]; 1 on [0, x0], 0 on (1/x0, inf), C-infinity."""

    x0: float = 0.5

    def __post_init__(self):
        if not 0 < self.x0 < 1:
            raise DomainError("SmoothUnity requires 0 < x0 < 1")

    def __call__(self, x):
        if isinstance(x, (np.ndarray, list)):
            return self.array(np.asarray(x, dtype=np.float64))
        xf = float(x)
        if xf < 0:
            raise DomainError("DU defined on [0, inf)")
        return float(self.array(np.array([xf]))[0])

    def array(self, x: np.ndarray) -> np.ndarray:
        T0 = -math.log(self.x0)
        out = np.zeros_like(x, dtype=np.float64)
        with np.errstate(divide="ignore"):
            t = np.log(np.where(x > 0, x, 1.0))
        out[x <= self.x0] = 1.0
        mid = (x > self.x0) & (x <= 1.0 / self.x0)
        tau = (t[mid] + T0) / (2 * T0)
        out[mid] = _ramp(tau)
        return out

    def derivative_bound(self, order: int, samples: int = 4000) -> float:
        """Numerically sampled sup of |d^order DU/dx^order| on the transition."""
        xs = np.linspace(self.x0 * 0.98, 1 / self.x0 * 1.02, samples)
        vals = self.array(xs)
        h = xs[1] - xs[0]
        for _ in range(order):
            vals = np.gradient(vals, h)
        return float(np.max(np.abs(vals)))


DEFAULT_DU = SmoothUnity()


def du(x, unity: SmoothUnity = DEFAULT_DU):
    """Decomposition-of-unity value at x."""
    return unity(x)


@dataclass(frozen=True)
class SmoothBump:
    """Compactly supported C-infinity test function on [a, b], peak value 1.

    Carries the support and derivative-bound metadata the ADP entry points
    require of a test function.
    """

    a: float = 1.0
    b: float = 4.0

    def __post_init__(self):
        if not 0 < self.a < self.b:
            raise DomainError("SmoothBump requires 0 < a < b")

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.b)

    def __call__(self, y):
        if isinstance(y, np.ndarray):
            tau = (y - self.a) / (self.b - self.a)
            good = (tau > 0) & (tau < 1)
            out = np.zeros_like(y, dtype=np.float64)
            out[good] = np.exp(4.0 - 1.0 / (tau[good] * (1 - tau[good])))
            return out
        yf = float(y)
        tau = (yf - self.a) / (self.b - self.a)
        if not 0 < tau < 1:
            return mpf(0)
        tau = (mpf(y) - self.a) / (self.b - self.a)
        return mpmath.exp(4 - 1 / (tau * (1 - tau)))

    def derivative_bound(self, order: int, samples: int = 4000) -> float:
        xs = np.linspace(self.a, self.b, samples)
        vals = self(xs)
        h = xs[1] - xs[0]
        for _ in range(order):
            vals = np.gradient(vals, h)
        return float(np.max(np.abs(vals)))


@dataclass(frozen=True)
class LogGaussianBump:
    """Analytic test function exp(-(log y - mu)^2 / (2 s^2)), peak 1 at e^mu.

    Analyticity in log y makes its spectral transforms decay like a Gaussian
    in the spectral parameter, which is what the sharp ADP residual targets
    need; the compact SmoothBump cannot match that (its transform decay is
    edge-limited).  Effective support is where the value exceeds the floor.
    """

    mu: float = 0.9162907318741551  # log 2.5
    s: float = 0.25
    floor: float = 1e-26

    @property
    def support(self) -> tuple[float, float]:
        half = self.s * math.sqrt(-2 * math.log(self.floor))
        return (math.exp(self.mu - half), math.exp(self.mu + half))

    def __call__(self, y):
        if isinstance(y, np.ndarray):
            out = np.zeros_like(y, dtype=np.float64)
            pos = y > 0
            u = (np.log(y[pos]) - self.mu) / self.s
            v = np.exp(-u * u / 2)
            out[pos] = np.where(v >= self.floor, v, 0.0)
            return out
        yf = float(y)
        if yf <= 0:
            return mpf(0)
        u = (mpmath.log(mpf(y)) - self.mu) / self.s
        v = mpmath.exp(-u * u / 2)
        return v if v >= self.floor else mpf(0)

    def derivative_bound(self, order: int, samples: int = 4000) -> float:
        lo, hi = self.support
        xs = np.linspace(lo, hi, samples)
        vals = self(xs)
        h = xs[1] - xs[0]
        for _ in range(order):
            vals = np.gradient(vals, h)
        return float(np.max(np.abs(vals)))


@dataclass
class WeightFunction:
    """One of the four W_{i,j} built from DU and the phi/Phi kernels.

    Vanishes for x < x0 by the DU(1/x) factor; the tail exponent records the
    power-law decay of |W(x)| as x -> infinity used for truncation budgets.
    """

    wid: str  # {"W11", "W12", "W21", "W22"}
    shifts4: tuple  # (a1, a2, a3, a4)
    weight: WeightIndex
    unity: SmoothUnity = DEFAULT_DU
    ctx: PrecisionContext = DEFAULT_CTX

    def __post_init__(self):
        if self.wid not in ("W11", "W12", "W21", "W22"):
            raise DomainError(f"unknown weight function id {self.wid}")

    @property
    def support(self) -> tuple[float, float]:
        return (self.unity.x0, math.inf)

    @property
    def tail_exponent(self) -> float:
        """|W(x)| ~ x^(-e) as x -> inf (up to x^eps), from the kernel limits."""
        a1, a2, a3, a4 = [complex(mpc(a)) for a in self.shifts4]
        r1, r2, r3 = a1.real, a2.real, a3.real
        if self.wid == "W11":
            return 1 + r3 + (r1 + r2) / 2 - abs(r1 - r2) / 2
        if self.wid == "W12":
            return 1 + r3 + (r1 - r2) / 2 - abs(r1 + r2) / 2
        if self.wid == "W21":
            return 1 + r3 + (r1 - r2) / 2 - abs(r1 + r2) / 2
        # W22: Phi(1/(1+x)) ~ (1+x)^{-k}; effectively superpolynomial
        return self.weight.k + (r1 + r2) / 2

    def __call__(self, x):
        with self.ctx:
            a1, a2, a3, a4 = [mpc(a) for a in self.shifts4]
            xr = mpf(x)
            if xr <= 0:
                raise DomainError("W_{i,j} defined for x > 0")
            d = mpf(self.unity(1.0 / float(xr)))
            if d == 0:
                return mpc(0)
            if self.wid == "W11":
                ker = phi_kernel(1 / (1 + xr), (a1, a2), self.weight, self.ctx)
                return d * ker / (xr ** ((a1 + a2) / 2) * (1 + xr) ** (1 + a3))
            if self.wid == "W12":
                ker = phi_kernel(xr / (1 + xr), (a1, a2), self.weight, self.ctx)
                return d * ker / (xr ** ((a1 - a2) / 2) * (1 + xr) ** (1 + a3))
            if self.wid == "W21":
                ker = Phi_kernel(xr / (1 + xr), (a1, a2), self.weight, self.ctx)
                return d * ker / ((1 + xr) ** ((a1 - a2) / 2) * xr ** (1 + a3))
            ker = Phi_kernel(1 / (1 + xr), (a1, a2), self.weight, self.ctx)
            return d * ker / ((1 + xr) ** ((a1 - a2) / 2) * xr ** ((a1 + a2) / 2))

    def derivative_bound(self, order: int, samples: int = 4000, x_hi: float = 50.0) -> float:
        """Sampled sup of |W^(order)| over the transition and bulk region."""
        xs = np.linspace(self.unity.x0 * 0.9, x_hi, samples)
        vals = np.abs(self.array(xs))
        h = xs[1] - xs[0]
        for _ in range(order):
            vals = np.gradient(vals, h)
        return float(np.max(np.abs(vals)))

    def array(self, ys: np.ndarray) -> np.ndarray:
        """Vectorized double-precision evaluation (numpy kernel twins)."""
        from .fastkernels import PhiFast, phi_fast_pair

        a1, a2, a3, a4 = [complex(mpc(a)) for a in self.shifts4]
        ys = np.asarray(ys, dtype=np.float64)
        d = self.unity.array(1.0 / ys)
        out = np.zeros(ys.shape, dtype=np.complex128)
        live = d > 0
        if not live.any():
            return out
        y = ys[live]
        yc = y.astype(np.complex128)
        k = self.weight.k
        if self.wid in ("W21", "W22"):
            if abs(a1) < 1e-7 and abs(a2) < 1e-7:
                from .fastkernels import PhiZeroFast

                Phi = PhiZeroFast(k)
            else:
                Phi = PhiFast(k, a1, a2)
        if self.wid == "W11":
            ker = phi_fast_pair(k, a1, a2)(1 / (1 + y))
            out[live] = d[live] * ker / (yc ** ((a1 + a2) / 2) * (1 + yc) ** (1 + a3))
        elif self.wid == "W12":
            ker = phi_fast_pair(k, a1, a2)(y / (1 + y))
            out[live] = d[live] * ker / (yc ** ((a1 - a2) / 2) * (1 + yc) ** (1 + a3))
        elif self.wid == "W21":
            ker = Phi(y / (1 + y))
            out[live] = d[live] * ker / ((1 + yc) ** ((a1 - a2) / 2) * yc ** (1 + a3))
        else:
            ker = Phi(1 / (1 + y))
            out[live] = d[live] * ker / ((1 + yc) ** ((a1 - a2) / 2) * yc ** ((a1 + a2) / 2))
        return out


def weight_fn(wid: str, shifts4, weight: WeightIndex, unity: SmoothUnity = DEFAULT_DU, ctx: PrecisionContext = DEFAULT_CTX) -> WeightFunction:
    return WeightFunction(wid, tuple(shifts4), weight, unity, ctx)
