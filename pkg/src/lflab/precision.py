"""Arbitrary-precision substrate: precision contexts and elementary special functions.

Complex values are plain ``mpmath.mpc``/``mpf`` numbers produced under a
:class:`PrecisionContext`; the context's working precision is the "tag" that
travels with a computation (mpmath numbers remember the precision they were
created at through their mantissa length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
from mpmath import mp, mpc, mpf

from .errors import ConvergenceError, PoleError, PrecisionError

__all__ = [
    "PrecisionContext",
    "DEFAULT_BITS",
    "gamma",
    "loggamma",
    "rgamma",
    "zeta",
    "dfactor",
    "bessel_j",
    "bessel_k",
]

DEFAULT_BITS = 256

# Extra guard bits used inside algorithms relative to the context precision.
_GUARD_BITS = 24


@dataclass(frozen=True)
class PrecisionContext:
    """Working mantissa precision plus the target tolerance derived from it.

    tol defaults to 2**(-bits/2): half the mantissa is reserved for
    cancellation between terms of disparate magnitude.
    """

    bits: int = DEFAULT_BITS
    tol: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("PrecisionContext.bits must be >= 64")
        if self.tol is None:
            object.__setattr__(self, "tol", math.ldexp(1.0, -self.bits // 2))
        if self.tol <= 0:
            raise ValueError("PrecisionContext.tol must be positive")
        if self.tol < math.ldexp(1.0, -self.bits + 8):
            raise ValueError("PrecisionContext.tol below 2**(8-bits) is unreachable")

    @property
    def dps(self) -> int:
        return mpmath.libmp.libmpf.prec_to_dps(self.bits)

    def __enter__(self):
        object.__setattr__(self, "_saved_prec", mp.prec)
        mp.prec = self.bits + _GUARD_BITS
        return self

    def __exit__(self, *exc):
        mp.prec = getattr(self, "_saved_prec", 53)
        return False

    def mpc(self, re, im=0) -> mpc:
        with self:
            return mpc(re, im)

    def mpf(self, x) -> mpf:
        with self:
            return mpf(x)


DEFAULT_CTX = PrecisionContext()


def _is_nonpositive_int(z: mpc, eps=1e-12) -> bool:
    z = mpc(z)
    if abs(z.imag) > eps:
        return False
    r = z.real
    return r <= eps and abs(r - mpmath.nint(r)) <= eps


def gamma(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """Gamma function at context precision.

    Large |Im z| goes through log-Gamma so the result never overflows the
    exponent range before the final exp.
    """
    with ctx:
        z = mpc(z)
        if _is_nonpositive_int(z):
            raise PoleError(f"gamma pole at z={z}")
        if abs(z.imag) > 40:
            return mpmath.exp(mpmath.loggamma(z))
        return mpmath.gamma(z)


def loggamma(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    with ctx:
        z = mpc(z)
        if _is_nonpositive_int(z):
            raise PoleError(f"loggamma pole at z={z}")
        return mpmath.loggamma(z)


def rgamma(z, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """1/Gamma(z); entire, so non-positive integers are allowed (value 0)."""
    with ctx:
        return mpmath.rgamma(mpc(z))


def dfactor(s, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """The functional-equation factor D(s) = 2 (2 pi)^(s-1) Gamma(1-s) sin(pi s / 2).

    Satisfies zeta(s) = D(s) zeta(1-s) and D(s) D(1-s) = 1.  At positive even
    integers the Gamma pole is cancelled by the sine zero; those points are
    evaluated by the reflected product form.
    """
    with ctx:
        s = mpc(s)
        if _is_nonpositive_int(1 - s):
            # s = 1, 2, 3, ...: sin(pi s/2) vanishes at even s and cancels the
            # Gamma pole; odd s >= 3 are fine for Gamma but s=1 must go through
            # the reflection too (D(1) = 1 requires the limit).
            n = int(mpmath.nint(s.real))
            if n % 2 == 0:
                # lim = 2(2pi)^{s-1} * [Gamma(1-s) sin(pi s/2)] with the
                # product regular: Gamma(1-s)sin(pi s/2) -> (-1)^{n/2} pi/2 / Gamma(s)... use
                # reflection: Gamma(1-s) sin(pi s/2) = pi cos(pi s/2)/ (Gamma(s) sin(pi s)) * sin(pi s/2) ... simpler:
                # D(s) = 1/D(1-s) away from poles of the latter.
                return 1 / dfactor(1 - s, ctx)
            if n == 1:
                return mpc(1)
        return 2 * (2 * mpmath.pi) ** (s - 1) * mpmath.gamma(1 - s) * mpmath.sin(mpmath.pi * s / 2)


def zeta(s, ctx: PrecisionContext = DEFAULT_CTX, derivative: int = 0) -> mpc:
    """Riemann zeta via Euler-Maclaurin for Re s > 1/2, else D(s) zeta(1-s).

    Routing the continuation through dfactor exercises the same functional
    equation factor the identity checks use.
    """
    with ctx:
        s = mpc(s)
        if abs(s - 1) < 1e-30:
            raise PoleError("zeta pole at s=1")
        if derivative:
            return mpmath.zeta(s, derivative=derivative)
        if s.real > 0.5:
            return mpmath.zeta(s)
        if abs(s) < 1e-2:
            # D(s) has a zero cancelling the zeta(1-s) pole; avoid the 0*inf
            return mpmath.zeta(s)
        return dfactor(s, ctx) * mpmath.zeta(1 - s)


def bessel_j(order, x, ctx: PrecisionContext = DEFAULT_CTX, max_terms: int = 10_000):
    """J_nu(x) for x > 0 by the ascending series (order may be complex).

    Stops when the term-ratio bound shows the tail is below the working
    precision times the accumulated sum (alternating series with eventually
    decaying terms).
    """
    with ctx:
        nu = mpc(order)
        if abs(nu.imag) == 0:
            nu = nu.real
        x = mpf(x)
        if x <= 0:
            raise PoleError("bessel_j requires x > 0")
        half = x / 2
        q = half * half
        # term_m = (-1)^m q^m / (m! Gamma(nu+m+1)), prefactor half^nu
        term = mpmath.rgamma(nu + 1)
        total = term
        tol = mpf(2) ** (-mp.prec - 4)
        for m in range(1, max_terms):
            term = -term * q / (m * (nu + m))
            total += term
            # once q/(m(nu+m)) < 1/2 the tail is bounded by |term|
            if abs(term) < tol * (abs(total) + tol) and q < m * abs(nu + m) / 2:
                break
        else:
            raise ConvergenceError("bessel_j series budget exhausted")
        return half ** nu * total


def bessel_k(order, x, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """K_nu(x) for complex order and x > 0 via the cosh integral.

    K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, truncated where the
    integrand falls below tol * e^{-x}; the tail is then below tol * e^{-x}
    times a harmless constant because the integrand decays faster than
    exponentially in t.
    """
    with ctx:
        nu = mpc(order)
        x = mpf(x)
        if x <= 0:
            raise PoleError("bessel_k requires x > 0")
        # integrand magnitude ~ exp(-x cosh t + |Re nu| t); find T with
        # x cosh T - |Re nu| T - x > -log(tol) + margin
        a = abs(nu.real)
        logtol = -mp.log(mpf(ctx.tol)) + 10
        T = mpf(1)
        while x * (mpmath.cosh(T) - 1) - a * T < logtol:
            T += mpf(1) / 2
        f = lambda t: mpmath.exp(-x * mpmath.cosh(t)) * mpmath.cosh(nu * t)
        val = mpmath.quad(f, [0, T / 3, T])
        return val


def self_check(ctx: PrecisionContext, values, recompute, bits_boost: int = 64):
    """Recompute `values = recompute(ctx)` at boosted precision and compare.

    Returns the max absolute deviation; raises PrecisionError when it exceeds
    the context tolerance.
    """
    boosted = PrecisionContext(bits=ctx.bits + bits_boost, tol=ctx.tol)
    again = recompute(boosted)
    worst = 0.0
    for a, b in zip(values, again):
        d = abs(mpc(a) - mpc(b))
        worst = max(worst, float(d))
    if worst > ctx.tol:
        raise PrecisionError(f"self-check deviation {worst} above tol {ctx.tol}")
    return worst
