"""Level-one holomorphic Hecke eigenforms: Victor Miller bases, normalized
eigenvalues, Kloosterman sums, and the Petersson harmonic weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

from .errors import (
    ConsistencyError,
    DegenerateEigenvalueError,
    DomainError,
    SingularSystemError,
)
from .precision import DEFAULT_CTX, PrecisionContext, bessel_j

__all__ = [
    "WeightIndex",
    "HoloForm",
    "dim_cusp_forms",
    "victor_miller_basis",
    "eigenforms",
    "kloosterman",
    "petersson_weights",
]

from .kernels import WeightIndex


def dim_cusp_forms(weight: int) -> int:
    """dim S_w for the full modular group, w even: floor(w/12), minus one when
    w = 2 mod 12."""
    if weight % 2 or weight < 12:
        return 0
    d = weight // 12
    return d - 1 if weight % 12 == 2 else d


def _series_mul(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    for i, ai in enumerate(a):
        if ai == 0 or i >= n:
            continue
        lim = n - i
        for j, bj in enumerate(b[:lim]):
            if bj:
                out[i + j] += ai * bj
    return out


def _series_pow(a: list[int], e: int, n: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    base = list(a[:n]) + [0] * max(0, n - len(a))
    while e:
        if e & 1:
            out = _series_mul(out, base, n)
        e >>= 1
        if e:
            base = _series_mul(base, base, n)
    return out


@lru_cache(maxsize=32)
def _eisenstein(weight: int, n: int) -> tuple[int, ...]:
    """Integer q-expansion of E_4 or E_6 to n terms."""
    from .arith import sigma

    if weight == 4:
        coef, po = 240, 3
    elif weight == 6:
        coef, po = -504, 5
    else:
        raise DomainError("only E4 and E6 are needed")
    out = [1] + [coef * sigma(po, m) for m in range(1, n)]
    return tuple(out)


@lru_cache(maxsize=8)
def _delta(n: int) -> tuple[int, ...]:
    """q-expansion of Delta = (E4^3 - E6^2)/1728, exact integers.

    (The fixture generator builds Delta from the eta product instead, so the
    two sources of tau(n) are independent constructions.)
    """
    e4 = list(_eisenstein(4, n))
    e6 = list(_eisenstein(6, n))
    diff = [a - b for a, b in zip(_series_pow(e4, 3, n), _series_pow(e6, 2, n))]
    out = []
    for c in diff:
        q, r = divmod(c, 1728)
        if r:
            raise ConsistencyError("E4^3 - E6^2 not divisible by 1728")
        out.append(q)
    return tuple(out)


def victor_miller_basis(weight_2k: int, n_terms: int) -> list[list[int]]:
    """Echelonized integer basis of S_{2k}: f_i = q^i + O(q^{d+1}), i = 1..d."""
    if weight_2k % 2 or weight_2k < 0:
        raise DomainError("weight must be a positive even integer")
    d = dim_cusp_forms(weight_2k)
    if d == 0:
        return []
    if n_terms < d + 2:
        raise DomainError("n_terms must be at least dim + 2")
    n = n_terms
    e4 = list(_eisenstein(4, n))
    e6 = list(_eisenstein(6, n))
    delta = list(_delta(n))
    rows = []
    for i in range(1, d + 1):
        r = weight_2k - 12 * i
        if r % 4 == 0:
            a, b = r // 4, 0
        elif r >= 6 and (r - 6) % 4 == 0:
            a, b = (r - 6) // 4, 1
        else:
            # r = 2 mod 12 leftovers: raise the Delta power range instead
            a, b = (r + 6) // 4, 1  # unreachable for valid dims
        form = _series_pow(delta, i, n)
        if a:
            form = _series_mul(form, _series_pow(e4, a, n), n)
        if b:
            form = _series_mul(form, _series_pow(e6, b, n), n)
        rows.append(form)
    # echelonize over Q with exact arithmetic; result is integral
    from fractions import Fraction

    rows = [[Fraction(c) for c in row] for row in rows]
    for i in range(d):
        piv = rows[i][i + 1]
        if piv == 0:
            raise SingularSystemError("victor-miller echelon pivot vanished")
        rows[i] = [c / piv for c in rows[i]]
        for j in range(d):
            if j != i and rows[j][i + 1] != 0:
                fac = rows[j][i + 1]
                rows[j] = [cj - fac * ci for cj, ci in zip(rows[j], rows[i])]
    out = []
    for row in rows:
        ints = []
        for c in row:
            if c.denominator != 1:
                raise ConsistencyError("victor-miller basis not integral")
            ints.append(int(c))
        out.append(ints)
    return out


@dataclass
class HoloForm:
    """A Hecke-normalized holomorphic eigenform of weight 2k, level one."""

    weight: WeightIndex
    an: list[int] | list  # integral Fourier coefficients, a[0]=0, a[1]=1 (or mpf for dim>=2)
    omega: mpf | None = None
    label: str = ""

    @property
    def coeff_count(self) -> int:
        return len(self.an) - 1

    def lam(self, n: int, ctx: PrecisionContext = DEFAULT_CTX):
        """Normalized eigenvalue lambda_f(n) = a(n) n^{-(2k-1)/2}."""
        if n < 1 or n > self.coeff_count:
            raise DomainError(f"coefficient {n} outside stored range")
        with ctx:
            return mpf(self.an[n]) * mpf(n) ** (-(mpf(2 * self.weight.k) - 1) / 2)

    def lam_array(self, nmax: int) -> np.ndarray:
        """lambda_f(n), n = 0..nmax, as float64 (index 0 unused)."""
        if nmax > self.coeff_count:
            raise DomainError("requested more coefficients than stored")
        ns = np.arange(0, nmax + 1, dtype=np.float64)
        ns[0] = 1
        vals = np.array([float(a) for a in self.an[: nmax + 1]], dtype=np.float64)
        return vals * ns ** (-(2 * self.weight.k - 1) / 2)


def eigenforms(weight_2k: int, n_terms: int, ctx: PrecisionContext = DEFAULT_CTX) -> list[HoloForm]:
    """Hecke eigenforms of S_{2k} with a(1) = 1, via T_2 on the Victor Miller basis.

    All lambda(n) derive from the eigen-q-expansions; the returned forms carry
    no omega yet (see petersson_weights).
    """
    d = dim_cusp_forms(weight_2k)
    if d == 0:
        return []
    basis = victor_miller_basis(weight_2k, max(n_terms, 2 * d + 2))
    k = weight_2k // 2
    if d == 1:
        an = basis[0][:n_terms + 1] if len(basis[0]) > n_terms else basis[0]
        return [HoloForm(WeightIndex(k), an, label=f"{weight_2k}.a")]
    # T_2 matrix: T2 f_i has coefficients b(n) = a(2n) + 2^{2k-1} a(n/2)
    with ctx:
        w = weight_2k
        p = 2
        pw = p ** (w - 1)
        T = mp.matrix(d, d)
        for i in range(d):
            a = basis[i]
            for n in range(1, d + 1):
                b = a[p * n] + (pw * a[n // p] if n % p == 0 else 0)
                # echelon basis: coefficient of q^n of sum c_j f_j is c_n
                T[n - 1, i] = mpf(b)
        ev, evec = mp.eig(T)
        # check simplicity
        for i in range(d):
            for j in range(i + 1, d):
                if abs(ev[i] - ev[j]) < mpf(10) ** (-ctx.dps // 2):
                    raise DegenerateEigenvalueError("T_2 spectrum numerically non-simple")
        forms = []
        order = sorted(range(d), key=lambda i: mpf(ev[i].real))
        for idx, i in enumerate(order):
            c = [evec[j, i] for j in range(d)]
            coeffs = []
            for n in range(0, len(basis[0])):
                v = mpf(0)
                for j in range(d):
                    v += c[j].real * basis[j][n]
                coeffs.append(v)
            a1 = coeffs[1]
            if abs(a1) == 0:
                raise SingularSystemError("eigenvector with vanishing a(1)")
            coeffs = [v / a1 for v in coeffs]
            if n_terms + 1 < len(coeffs):
                coeffs = coeffs[: n_terms + 1]
            forms.append(HoloForm(WeightIndex(k), coeffs, label=f"{weight_2k}.{chr(97 + idx)}"))
        return forms


def kloosterman(m: int, n: int, c: int, ctx: PrecisionContext = DEFAULT_CTX) -> mpf:
    """S(m, n; c) = sum_{ad = 1 mod c} e((am + dn)/c), exact residue enumeration.

    The value is real algebraic (generally not a rational integer); the
    imaginary part is asserted to vanish to working precision.
    """
    if c < 1:
        raise DomainError("kloosterman needs c >= 1")
    if c == 1:
        return mpf(1)
    counts: dict[int, int] = {}
    for a in range(1, c):
        if math.gcd(a, c) != 1:
            continue
        d = pow(a, -1, c)
        r = (a * m + d * n) % c
        counts[r] = counts.get(r, 0) + 1
    with ctx:
        total = mpf(0)
        for r, cnt in counts.items():
            total += cnt * mpmath.cos(2 * mpmath.pi * mpf(r) / c)
        return total


def _kloosterman_bessel_side(m: int, n: int, weight_2k: int, tol: float, ctx: PrecisionContext) -> mpf:
    """2 pi i^{-2k} sum_c S(m,n;c)/c J_{2k-1}(4 pi sqrt(mn)/c), truncated where
    the leading series term of J falls below tol."""
    with ctx:
        nu = weight_2k - 1
        x0 = 4 * mpmath.pi * mpmath.sqrt(mpf(m) * n)
        lg = mpmath.loggamma(nu + 1)
        c = 1
        total = mpf(0)
        while True:
            # Weil-bound growth of the neglected Kloosterman terms is folded
            # into the leading-term cutoff (d(c) sqrt(c) ~ c)
            lead = mpmath.exp(nu * mpmath.log(x0 / (2 * c)) - lg) * c * 30
            if c > 16 and lead < tol:
                break
            total += kloosterman(m, n, c, ctx) / c * bessel_j(nu, x0 / c, ctx)
            c += 1
            if c > 100_000:
                raise ConsistencyError("kloosterman sum truncation runaway")
        sign = -1 if (weight_2k // 2) % 2 else 1
        return 2 * mpmath.pi * sign * total


def petersson_weights(
    forms: list[HoloForm],
    ctx: PrecisionContext = DEFAULT_CTX,
    tol: float = 1e-12,
    pair_range: int = 5,
) -> list[HoloForm]:
    """Fill in omega_f by solving the Petersson trace relations

        sum_f omega_f lam_f(m) lam_f(n) = delta_{mn} + (Kloosterman/Bessel side)

    over all pairs m, n <= pair_range (least squares when overdetermined).
    """
    if not forms:
        return forms
    w2k = 2 * forms[0].weight.k
    d = len(forms)
    if d != dim_cusp_forms(w2k):
        raise DomainError("petersson_weights needs the full eigenbasis of the weight")
    with ctx:
        pairs = [(m, n) for m in range(1, pair_range + 1) for n in range(m, pair_range + 1)]
        A = mp.matrix(len(pairs), d)
        b = mp.matrix(len(pairs), 1)
        for r, (m, n) in enumerate(pairs):
            for i, f in enumerate(forms):
                A[r, i] = f.lam(m, ctx) * f.lam(n, ctx)
            rhs = (1 if m == n else 0) + _kloosterman_bessel_side(m, n, w2k, tol, ctx)
            b[r] = rhs
        try:
            x, res = mp.qr_solve(A, b)
        except ZeroDivisionError as e:
            raise SingularSystemError(str(e)) from e
        resid = mpf(0)
        Ax = A * x
        for r in range(len(pairs)):
            resid = max(resid, abs(Ax[r] - b[r]))
        if resid > 10 * mpf(tol):
            raise ConsistencyError(f"petersson consistency residual {resid} > 10*tol")
        for i, f in enumerate(forms):
            f.omega = x[i]
            if not x[i] > 0:
                raise ConsistencyError(f"harmonic weight not positive: {x[i]}")
        return forms
