"""Binary additive divisor problem: direct sum, main term, spectral
corrections, and the hat-W transforms.

Precision strategy: the direct sum and the main term are computed in mpmath
(they are exact finite objects up to quadrature), while the three spectral
corrections run in double-precision numpy (the decomposition residual target
is set by the Maass truncation, far above double noise).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .arith import divisors, sigma
from .errors import (
    CrossCheckError,
    DomainError,
    MissingDataError,
    OscillationBudgetError,
    ShiftDegeneracyError,
    TailBudgetError,
)
from .fastkernels import W0Family, composite_gauss
from .hecke import eigenforms, petersson_weights
from .kernels import WeightIndex, i2f1, xk, Phi_kernel
from .lfun import lvalue_afe, maass_lvalue
from .precision import DEFAULT_CTX, PrecisionContext, zeta
from .reports import VerificationReport
from .specdata import MaassRecord

__all__ = [
    "ADPInput",
    "ADPDecomposition",
    "adp_direct",
    "adp_main",
    "hatw0",
    "hatw_pm",
    "hatw_pm_sum",
    "hatw_m",
    "e_h",
    "e_d",
    "e_c",
    "adp_verify",
]

SHIFT_FLOOR = 1e-3


@dataclass
class ADPInput:
    """Arguments of A(l, alpha, beta; W) = sum sigma_a(n) sigma_b(n+l) W(n/l).

    W must expose `support` and `derivative_bound` metadata ("sufficiently
    good" made concrete); test functions lacking them are refused.
    """

    l: int
    alpha: complex
    beta: complex
    W: object
    N: int | None = None

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        if not (-1 - b.real < a.real < 1 + b.real):
            raise DomainError("ADP needs -1 - Re b < Re a < 1 + Re b")
        if self.l < 1:
            raise DomainError("ADP twist l must be >= 1")
        if not hasattr(self.W, "support") or not hasattr(self.W, "derivative_bound"):
            raise DomainError("test function must carry support and derivative-bound metadata")

    @property
    def y_range(self) -> tuple[float, float]:
        lo, hi = self.W.support
        return float(lo), float(hi)


@dataclass
class ADPDecomposition:
    direct: complex
    main: complex
    eh: complex
    ed: complex
    ec: complex
    budgets: dict = field(default_factory=dict)

    @property
    def residual(self) -> complex:
        return self.direct - self.main - self.eh - self.ed - self.ec

    def report(self, inputs: dict, wall_ms: float = 0.0, tolerance=None) -> VerificationReport:
        return VerificationReport.build(
            identity_id="adp-decomposition",
            inputs=inputs,
            lhs=self.direct,
            rhs=self.main + self.eh + self.ed + self.ec,
            parts={"U": self.main, "Eh": self.eh, "Ed": self.ed, "Ec": self.ec},
            budgets=self.budgets,
            wall_ms=wall_ms,
            tolerance=tolerance,
        )


def adp_direct(inp: ADPInput, ctx: PrecisionContext = DEFAULT_CTX) -> mpc:
    """The plain divisor sum; exact (finite) for compactly supported W."""
    with ctx:
        a, b = mpc(inp.alpha), mpc(inp.beta)
        lo, hi = inp.y_range
        n_lo = max(1, int(math.floor(lo * inp.l)) - 1)
        if math.isinf(hi):
            if inp.N is None:
                raise TailBudgetError("unbounded support needs an explicit truncation N")
            n_hi = inp.N
        else:
            n_hi = int(math.ceil(hi * inp.l)) + 1
        total = mpc(0)
        for n in range(n_lo, n_hi + 1):
            w = inp.W(mpf(n) / inp.l)
            if w == 0:
                continue
            total += sigma(a, n, ctx) * sigma(b, n + inp.l, ctx) * w
        return total


def _mu(inp: ADPInput, x, ctx) -> mpc:
    a, b, l = mpc(inp.alpha), mpc(inp.beta), inp.l
    z = lambda s: zeta(s, ctx)
    return (
        sigma(1 + a + b, l, ctx) * z(1 + a) * z(1 + b) / z(2 + a + b) * x ** a * (1 + x) ** b
        + l ** a * sigma(1 - a + b, l, ctx) * z(1 - a) * z(1 + b) / z(2 - a + b) * (1 + x) ** b
        + l ** b * sigma(1 + a - b, l, ctx) * z(1 + a) * z(1 - b) / z(2 + a - b) * x ** a
        + l ** (a + b) * sigma(1 - a - b, l, ctx) * z(1 - a) * z(1 - b) / z(2 - a - b)
    )


def _mu_coefficients(inp: ADPInput, ctx) -> list[tuple[complex, complex, complex]]:
    """The four (coefficient, x-power, (1+x)-power) triples of mu(l, a, b; x)."""
    with ctx:
        a, b, l = mpc(inp.alpha), mpc(inp.beta), inp.l
        z = lambda s: zeta(s, ctx)
        rows = [
            (sigma(1 + a + b, l, ctx) * z(1 + a) * z(1 + b) / z(2 + a + b), a, b),
            (l ** a * sigma(1 - a + b, l, ctx) * z(1 - a) * z(1 + b) / z(2 - a + b), 0, b),
            (l ** b * sigma(1 + a - b, l, ctx) * z(1 + a) * z(1 - b) / z(2 + a - b), a, 0),
            (l ** (a + b) * sigma(1 - a - b, l, ctx) * z(1 - a) * z(1 - b) / z(2 - a - b), 0, 0),
        ]
        return [(complex(c), complex(p), complex(q)) for c, p, q in rows]


def adp_main(inp: ADPInput, ctx: PrecisionContext = DEFAULT_CTX, n_panels: int = 40) -> complex:
    """U(l, a, b; W) = int W(x) mu(l, a, b; x) dx over the support of W.

    The four zeta-coefficient constants are hoisted; the remaining x-moments
    are smooth compactly-supported quadratures.
    """
    a, b = complex(inp.alpha), complex(inp.beta)
    for v, name in ((a, "alpha"), (b, "beta"), (a + b, "alpha+beta"), (a - b, "alpha-beta")):
        if abs(v) < SHIFT_FLOOR:
            raise ShiftDegeneracyError(f"{name} within the degeneracy floor; extrapolate instead")
    lo, hi = inp.y_range
    if math.isinf(hi):
        e = getattr(inp.W, "tail_exponent", None)
        if e is None or e < 1.5:
            raise TailBudgetError("main-term quadrature needs a decaying W")
        hi = max(20.0, (1e20) ** (1 / (e - 1)))
        hi = min(hi, 5e6)
        xs, ws = composite_gauss(np.exp(np.linspace(math.log(lo), math.log(hi), 4 * n_panels + 1)))
    else:
        xs, ws = composite_gauss(np.linspace(lo, hi, n_panels + 1))
    wv = _w_values(inp, xs)
    total = 0.0j
    for coef, p, q in _mu_coefficients(inp, ctx):
        xm = xs.astype(np.complex128)
        total += coef * np.sum(wv * xm ** p * (1 + xm) ** q * ws)
    return complex(total)


# ---------------------------------------------------------------------------
# transforms


def _w_quad_grid(inp: ADPInput, osc_scale: float, per_cycle: float = 10.0):
    """Gauss-Legendre grid over the support of W, resolving ~osc_scale radians."""
    lo, hi = inp.y_range
    if math.isinf(hi):
        e = getattr(inp.W, "tail_exponent", 2.4)
        hi = max(20.0, (1e18) ** (1 / max(e - 1, 0.5)))
        hi = min(hi, 5e6)
    cycles = osc_scale * (math.log(hi) - math.log(lo) + 2) / (2 * math.pi)
    n_panels = max(12, int(cycles / per_cycle * 10) + 1)
    # logarithmic panel layout follows the y^{-it}-type phase
    breaks = np.exp(np.linspace(math.log(lo), math.log(hi), n_panels + 1))
    return composite_gauss(breaks)


def _w_values(inp: ADPInput, ys: np.ndarray) -> np.ndarray:
    W = inp.W
    if hasattr(W, "array"):
        return np.asarray(W.array(ys), dtype=np.complex128)
    try:
        vals = W(ys)
        if isinstance(vals, np.ndarray):
            return vals.astype(np.complex128)
    except Exception:
        pass
    return np.array([complex(W(float(y))) for y in ys], dtype=np.complex128)


def hatw0(inp: ADPInput, t, backend: str = "numpy", ctx: PrecisionContext = DEFAULT_CTX) -> complex:
    """hat-W^0(a, b; t) = int_0^inf W(y) y^{(a+b-1)/2 - t} 2I1(..., 1+2t; -1/y) dy."""
    a, b = complex(inp.alpha), complex(inp.beta)
    t = complex(t)
    if backend == "numpy":
        fam = W0Family(a, b, t)
        ys, ws = _w_quad_grid(inp, osc_scale=abs(t.imag) + 1.0)
        wv = _w_values(inp, ys)
        mask = wv != 0
        if not mask.any():
            return 0.0
        ys, ws, wv = ys[mask], ws[mask], wv[mask]
        integ = wv * ys.astype(np.complex128) ** ((a + b - 1) / 2 - t) * fam(ys)
        return complex(np.sum(integ * ws))
    with ctx:
        am, bm, tm = mpc(a), mpc(b), mpc(t)
        lo, hi = inp.y_range
        if math.isinf(hi):
            hi = 5e6
        pieces = mpmath.linspace(lo, hi, 30)

        def f(y):
            wv = inp.W(y)
            if wv == 0:
                return mpc(0)
            body = i2f1((1 + am - bm) / 2 + tm, (1 - am - bm) / 2 + tm, 1 + 2 * tm, -1 / mpf(y), ctx)
            return wv * mpf(y) ** ((am + bm - 1) / 2 - tm) * body

        return mpc(mpmath.quad(f, pieces))


def hatw_pm(inp: ADPInput, r, backend: str = "numpy", ctx: PrecisionContext = DEFAULT_CTX) -> tuple[complex, complex]:
    """(hat-W^+, hat-W^-)(a, b; r) for a real spectral parameter r."""
    a, b = complex(inp.alpha), complex(inp.beta)
    rr = float(r)
    w_p = hatw0(inp, 1j * rr, backend, ctx)
    w_m = hatw0(inp, -1j * rr, backend, ctx)
    sh = math.sinh(math.pi * rr)
    ca = np.cos(np.pi * a / 2)
    plus = 1j * np.pi * ca / (4 * sh) * (w_p - w_m)
    minus = (
        -1j * np.pi * np.sin(np.pi * (1j * rr - b / 2)) / (4 * sh) * w_p
        - 1j * np.pi * np.sin(np.pi * (1j * rr + b / 2)) / (4 * sh) * w_m
    )
    return complex(plus), complex(minus)


def hatw_pm_sum(inp: ADPInput, xi, backend: str = "numpy", ctx: PrecisionContext = DEFAULT_CTX) -> complex:
    """(hat-W^+ + hat-W^-)(a, b; -i xi) through the trigonometric assembly."""
    a, b = complex(inp.alpha), complex(inp.beta)
    xi = complex(xi)
    w_p = hatw0(inp, xi, backend, ctx)
    w_m = hatw0(inp, -xi, backend, ctx)
    s = np.sin(np.pi * xi)
    one = np.pi * (np.sin(np.pi * (xi - b / 2)) - np.cos(np.pi * a / 2)) / (4 * s) * w_p
    two = np.pi * (np.sin(np.pi * (xi + b / 2)) + np.cos(np.pi * a / 2)) / (4 * s) * w_m
    return complex(one + two)


def hatw_m(inp: ADPInput, m: int, cross_check: bool = True, ctx: PrecisionContext = DEFAULT_CTX, rel_budget: float = 1e-8) -> complex:
    """hat-W(a, b; m) for integer m >= 6 via the 2I1 form, cross-checked
    against the Phi_m representation (two genuinely different evaluations)."""
    from .fastkernels import I2F1NegFamily, PhiFast
    from scipy.special import loggamma as slg

    if m < 6:
        raise DomainError("hat-W(m) defined for m >= 6")
    a, b = complex(inp.alpha), complex(inp.beta)
    sign = -1 if m % 2 else 1
    ys, ws = _w_quad_grid(inp, osc_scale=1.0)
    wv = _w_values(inp, ys)
    mask = wv != 0
    ys, ws, wv = ys[mask], ws[mask], wv[mask]
    yc = ys.astype(np.complex128)
    fam = I2F1NegFamily(m + a - b / 2, m - a - b / 2, 2 * m)
    v1 = np.pi * sign / 2 * np.cos(np.pi * a / 2) * np.sum(wv * yc ** (-(m - (a + b) / 2)) * fam(ys) * ws)
    if not cross_check:
        return complex(v1)
    phi_m = PhiFast(m, a - b / 2, a + b / 2)
    Xm = np.exp((b - 2 * a) * math.log(2 * math.pi) + slg(m - b / 2 + a) - slg(m + b / 2 - a))
    v2 = (
        np.pi
        * sign
        / (4 * (2 * np.pi) ** b)
        * np.cos(np.pi * a / 2)
        / np.cos(np.pi * a)
        * Xm
        * np.sum(wv * yc ** (a / 2) * (1 + yc) ** (b / 2) * phi_m(1 / (1 + ys)) * ws)
    )
    scale = max(abs(v1), abs(v2), 1e-60)
    if abs(v1 - v2) > 10 * rel_budget * scale:
        raise CrossCheckError(f"hat-W({m}) representations disagree: {v1} vs {v2}")
    return complex((v1 + v2) / 2)


# ---------------------------------------------------------------------------
# spectral corrections


def _holo_ladder(m_max: int, ctx: PrecisionContext, tol: float = 1e-12) -> dict[int, list]:
    """Eigen-data with harmonic weights for weights 12..2*m_max, cached."""
    out = {}
    for m in range(6, m_max + 1):
        forms = eigenforms(2 * m, 40, ctx)
        if forms:
            petersson_weights(forms, ctx, tol=tol)
        out[m] = forms
    return out


def e_h(inp: ADPInput, ladder: dict[int, list] | None = None, m_max: int = 13, ctx: PrecisionContext = DEFAULT_CTX) -> tuple[complex, float]:
    """Holomorphic correction; returns (value, heuristic tail = last |increment|)."""
    a, b = complex(inp.alpha), complex(inp.beta)
    if ladder is None:
        ladder = _holo_ladder(m_max, ctx)
    s1 = (1 + a - b) / 2
    s2 = (1 - a - b) / 2
    pref = 2 * (2 * np.pi) ** (b - 1) * inp.l ** ((1 + a + b) / 2)
    total = 0.0j
    last = 0.0
    for m in sorted(ladder):
        forms = ladder[m]
        if not forms:
            continue
        what = hatw_m(inp, m, cross_check=(m <= 7), ctx=ctx)
        inc = 0.0j
        for f in forms:
            lam_l = complex(f.lam(inp.l, ctx))
            Lf1 = complex(lvalue_afe(f, mpc(s1), ctx))
            Lf2 = complex(lvalue_afe(f, mpc(s2), ctx))
            inc += float(f.omega) * lam_l * Lf1 * Lf2
        inc *= (2 * m - 1) / np.pi ** 2 * what
        total += inc
        last = abs(inc)
    return complex(pref * total), float(last)


def e_d(inp: ADPInput, records: list[MaassRecord], ctx: PrecisionContext = DEFAULT_CTX) -> tuple[complex, float]:
    """Maass correction over the supplied records; heuristic tail = |last term|."""
    if not records:
        raise MissingDataError("e_d needs Maass records")
    a, b = complex(inp.alpha), complex(inp.beta)
    s1 = (1 + a - b) / 2
    s2 = (1 - a - b) / 2
    pref = 2 * (2 * np.pi) ** (b - 1) * inp.l ** ((1 + a + b) / 2)
    total = 0.0j
    last = 0.0
    for rec in sorted(records, key=lambda r: r.t):
        wp, wm = hatw_pm(inp, rec.t)
        lam_l = rec.lam_n(inp.l)
        term = rec.omega * lam_l * maass_lvalue(rec, s1) * maass_lvalue(rec, s2) * (wp + rec.parity * wm)
        total += term
        last = abs(term)
    return complex(pref * total), float(last)


def e_c(
    inp: ADPInput,
    height: float = 44.0,
    n_panels: int = 60,
    ctx: PrecisionContext = DEFAULT_CTX,
) -> tuple[complex, float]:
    """Continuous correction: the xi = i tau line integral of the zeta factor
    against (hat-W^+ + hat-W^-)(tau); even integrand, cut off at `height`."""
    a, b = complex(inp.alpha), complex(inp.beta)
    if height > 300:
        raise OscillationBudgetError("e_c height beyond quadrature resolving power")
    taus, ws = composite_gauss(np.linspace(0.0, height, n_panels + 1))
    l = inp.l
    divs = np.array(divisors(l), dtype=np.float64)
    mp_old = mp.dps
    vals = np.empty(len(taus), dtype=np.complex128)
    try:
        mp.dps = 18
        for i, tau in enumerate(taus):
            it = 1j * tau
            sig = np.sum(divs ** (2j * tau))
            z4 = (
                complex(mpmath.zeta((1 - a - b) / 2 + it))
                * complex(mpmath.zeta((1 + a - b) / 2 + it))
                * complex(mpmath.zeta((1 - a - b) / 2 - it))
                * complex(mpmath.zeta((1 + a - b) / 2 - it))
            )
            den = complex(mpmath.zeta(1 + 2 * it)) * complex(mpmath.zeta(1 - 2 * it))
            wp, wm = hatw_pm(inp, tau)
            vals[i] = sig * z4 / (l ** it * den) * (wp + wm)
    finally:
        mp.dps = mp_old
    integral = 2 * np.sum(vals * ws)  # even in tau
    pref = 4 * (2 * np.pi) ** (b - 1) * l ** ((1 + a + b) / 2) / (2 * np.pi)
    tail = float(abs(vals[-1]) * abs(pref) * 2)
    return complex(pref * integral), tail


def adp_verify(
    inp: ADPInput,
    records: list[MaassRecord],
    ladder: dict[int, list] | None = None,
    ctx: PrecisionContext = DEFAULT_CTX,
    ec_height: float = 44.0,
) -> ADPDecomposition:
    """Assemble A = U + E_h + E_d + E_c and report the residual with budgets."""
    t0 = time.perf_counter()
    A = complex(adp_direct(inp, ctx))
    U = complex(adp_main(inp, ctx))
    Eh, eh_tail = e_h(inp, ladder, ctx=ctx)
    Ed, ed_tail = e_d(inp, records, ctx)
    Ec, ec_tail = e_c(inp, height=ec_height, ctx=ctx)
    budgets = {
        "eh_last_increment": eh_tail,
        "ed_last_term": ed_tail,
        "ec_tail": ec_tail,
        "maass_count": len(records),
        "wall_ms": (time.perf_counter() - t0) * 1000,
    }
    return ADPDecomposition(A, U, Eh, Ed, Ec, budgets)
