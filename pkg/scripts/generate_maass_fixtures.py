#!/usr/bin/env python3
"""Generate level-one Maass cusp form fixtures (t_j, parity, lambda_j(n), omega_j).

Automorphy-based solver on two horocycles (double precision, numpy):
sample points on a low horocycle are pulled back into the fundamental domain,
coefficient vectors come from least squares with c(1) = 1, and eigenvalues are
the parameters where two independent horocycles give consistent coefficients.
The L^2 normalization (and hence omega_j = |rho_j(1)|^2 / cosh(pi t_j)) comes
from a 2-D quadrature of |u|^2 over the fundamental domain.

Output: newline-delimited JSON records with decimal-string numerics, plus a
quality report (Hecke residuals, horocycle consistency) per record.

Usage: python3 generate_maass_fixtures.py [--tmax 23.2] [--out PATH]
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

SQ3_2 = math.sqrt(3) / 2
LOG_EPS = 38.0  # exp(-38) ~ 3e-17: double-precision floor for truncations


# ----------------------------------------------------------------------------
# scaled K-Bessel: Ktilde_{it}(x) = e^{pi t / 2} K_{it}(x), vectorized over x


_GL64 = np.polynomial.legendre.leggauss(64)


def _composite_nodes(breaks: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """64-point Gauss-Legendre on each panel [breaks[i], breaks[i+1]]."""
    g, w = _GL64
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    v = (mid[:, None] + half[:, None] * g[None, :]).ravel()
    ww = (half[:, None] * w[None, :]).ravel()
    return v, ww


def _phase_panels(phase_at, vmax: float, per_cycle: float = 6.0) -> np.ndarray:
    """Panel breakpoints so each 64-node panel covers ~10 phase cycles."""
    vs = np.linspace(0.0, vmax, 4000)
    ph = phase_at(vs)
    cyc = np.abs(ph - ph[0]) / (2 * math.pi)
    n_panels = max(4, int(cyc[-1] / per_cycle) + 1)
    targets = np.linspace(0, cyc[-1], n_panels + 1)
    idx = np.searchsorted(cyc, targets)
    idx[-1] = len(vs) - 1
    return vs[np.unique(idx)]


def ktilde(t: float, xs: np.ndarray) -> np.ndarray:
    """e^{pi t/2} K_{it}(x) for an array of x > 0, double precision.

    Oscillatory region (x < t): contour u = v - i(pi/2 - d) gives
        Ktilde = e^{t d} int_0^inf e^{-x cosh v sin d} cos(x sinh v cos d - t v) dv
    with only e^{t d} ~ e^9 of cancellation left.  Monotone region (x >= t):
    plain real-axis integrand scaled by e^x.
    """
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty_like(xs)
    hi = xs >= max(t * 1.02, t + 1.5)
    if hi.any():
        x = xs[hi]
        vmax = float(np.arccosh(1 + (LOG_EPS + 4) / x.min()))
        # resolve cos(t v): ~t vmax / 2pi cycles
        n_panels = max(3, int(t * vmax / (2 * math.pi) / 8.0) + 1)
        v, w = _composite_nodes(np.linspace(0.0, vmax, n_panels + 1))
        ex = np.exp(-np.outer(x, np.cosh(v) - 1.0)) * np.cos(t * v)[None, :]
        out[hi] = math.exp(math.pi * t / 2) * np.exp(-x) * (ex @ w)
    lo = ~hi
    if lo.any():
        x = xs[lo]
        d = min(0.5, 9.0 / max(t, 1.0))
        sind = math.sin(d)
        cosd = math.cos(d)
        xmin, xmax = float(x.min()), float(x.max())
        vmax = float(np.arccosh(1 + (LOG_EPS + 4) / (xmin * sind)))
        breaks = _phase_panels(lambda v: xmax * np.sinh(v) * cosd - t * v, vmax)
        v, w = _composite_nodes(breaks)
        coshv = np.cosh(v)
        sinhv = np.sinh(v)
        amp = np.exp(-np.outer(x, coshv * sind))
        ph = np.outer(x, sinhv * cosd) - t * v[None, :]
        val = (amp * np.cos(ph)) @ w
        out[lo] = math.exp(t * d) * val
    return out


def ktilde_mpmath(t: float, x: float) -> float:
    import mpmath

    mpmath.mp.dps = 30
    return float(mpmath.exp(mpmath.pi * t / 2) * mpmath.besselk(1j * t, x).real)


# ----------------------------------------------------------------------------
# modular pullback


def pullback(x: float, y: float) -> tuple[float, float]:
    for _ in range(200):
        x = x - round(x)
        n2 = x * x + y * y
        if n2 >= 1.0 - 1e-15:
            return x, y
        x, y = -x / n2, y / n2
    raise RuntimeError("pullback did not terminate")


# ----------------------------------------------------------------------------
# Hejhal linear system


class Solver:
    def __init__(self, t: float, parity: int, M: int | None = None, Q: int | None = None, y0: float | None = None):
        self.t = t
        self.parity = parity  # +1 even (cos), -1 odd (sin)
        if y0 is None:
            # keep kappa_M(y0) numerically alive: 2 pi M y0 <= t + margin
            M = M or max(22, int(t / 2) + 16)
            y0 = min(0.43, (t + 26.0) / (2 * math.pi * M))
        self.M = M
        self.y0 = y0
        self.Q = Q or (M + 18)

    def coefficients(self, y0: float | None = None) -> tuple[np.ndarray, float]:
        """Solve for c(1..M) with c(1)=1 on horocycle y0; return (c, lstsq residual)."""
        t, M, Q, par = self.t, self.M, self.Q, self.parity
        y0 = y0 if y0 is not None else self.y0
        xj = (np.arange(1, Q + 1) - 0.5) / (2.0 * Q)
        pts = [pullback(xx, y0) for xx in xj]
        xs_star = np.array([p[0] for p in pts])
        ys_star = np.array([p[1] for p in pts])
        nstar = int((t + 30.0) / (2 * math.pi * ys_star.min())) + 1
        nstar = max(nstar, 3)
        # kappa at the sample horocycle (n = 1..M) and at pullbacks (n = 1..nstar)
        ns = np.arange(1, M + 1)
        kap0 = math.sqrt(y0) * ktilde(t, 2 * math.pi * ns * y0)
        kst = np.empty((Q, nstar))
        xs_flat = (2 * math.pi * np.arange(1, nstar + 1)[None, :] * ys_star[:, None]).ravel()
        kst = (np.sqrt(ys_star)[:, None] * ktilde(t, xs_flat).reshape(Q, nstar))
        cs = np.cos if par > 0 else np.sin
        A = kap0[None, :] * cs(2 * math.pi * np.outer(xj, ns))
        B = np.zeros((Q, M))
        ncommon = min(nstar, M)
        B[:, :ncommon] = kst[:, :ncommon] * cs(2 * math.pi * xs_star[:, None] * np.arange(1, ncommon + 1)[None, :])
        # terms n in (M, nstar] on the pullback side would need unknowns beyond M;
        # with nstar <= M for our y0 choices this does not occur.
        if nstar > M:
            raise RuntimeError("pullback truncation exceeds unknown count; lower y0")
        R = A - B  # R c = 0
        rhs = -R[:, 0]
        sol, res, rank, sv = np.linalg.lstsq(R[:, 1:], rhs, rcond=None)
        c = np.concatenate([[1.0], sol])
        resid = float(np.linalg.norm(R @ c) / math.sqrt(Q))
        return c, resid

    def consistency(self) -> tuple[float, np.ndarray]:
        """Difference of low coefficients computed on two horocycles."""
        c1, r1 = self.coefficients(self.y0)
        c2, r2 = self.coefficients(self.y0 * 0.83)
        ncheck = min(8, self.M)
        g = c1[1:ncheck] - c2[1:ncheck]
        return float(np.sqrt(np.mean(g * g))), c1

    def signed_checks(self) -> np.ndarray:
        """Signed two-horocycle differences of the first few coefficients.

        Each component crosses zero transversally at an eigenvalue, so sign
        changes on a coarse grid cannot step over one.
        """
        c1, _ = self.coefficients(self.y0)
        c2, _ = self.coefficients(self.y0 * 0.83)
        return c1[1:5] - c2[1:5]


def eigen_scan(t_lo: float, t_hi: float, parity: int, step: float = 0.01):
    """Scan; return refined eigenvalues found in (t_lo, t_hi).

    Candidates are sign changes of any coefficient-difference component plus
    local minima of the RMS inconsistency; all are refined, and candidates
    that never reach the consistency floor are discarded as noise.
    """
    ts = np.arange(t_lo, t_hi, step)
    sig = []
    rms = []
    for t in ts:
        s = Solver(float(t), parity)
        v = s.signed_checks()
        sig.append(v)
        rms.append(float(np.sqrt(np.mean(v * v))))
    sig = np.array(sig)
    rms = np.array(rms)
    candidates = set()
    for i in range(len(ts) - 1):
        if np.any(np.sign(sig[i]) != np.sign(sig[i + 1])):
            candidates.add((ts[i] - step / 2, ts[i + 1] + step / 2))
    for i in range(1, len(ts) - 1):
        if rms[i] < rms[i - 1] and rms[i] < rms[i + 1]:
            candidates.add((ts[i - 1], ts[i + 1]))
    found = []
    for a, b in sorted(candidates):
        t_star = refine(a, b, parity)
        if t_star is not None and all(abs(t_star - f) > 1e-6 for f in found):
            found.append(t_star)
    return sorted(found)


def refine(a: float, b: float, parity: int, iters: int = 60) -> float | None:
    """Golden-section minimize the two-horocycle inconsistency on [a, b]."""
    phi = (math.sqrt(5) - 1) / 2

    def g(t):
        return Solver(t, parity).consistency()[0]

    c, d = b - phi * (b - a), a + phi * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if b - a < 1e-11:
            break
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - phi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + phi * (b - a)
            gd = g(d)
    t0 = (a + b) / 2
    gmin = g(t0)
    # genuine eigenvalues drive the inconsistency to the noise floor
    if gmin > 5e-6:
        return None
    return t0


# ----------------------------------------------------------------------------
# normalization: omega = |rho(1)|^2 / cosh(pi t) from the F-domain L2 norm


def omega_from_norm(t: float, parity: int, c: np.ndarray, nx: int = 48, ny: int = 96) -> float:
    """2-D Gauss-Legendre quadrature of |u|^2 over the fundamental domain.

    u here carries the e^{pi t/2}-scaled Bessel values, so
    omega = 2 / (I_scaled (1 + e^{-2 pi t})).
    """
    xg, xw = np.polynomial.legendre.leggauss(nx)
    x = 0.25 * (xg + 1)  # [0, 1/2], use evenness in x
    wx = 0.25 * xw * 2.0
    ylo = np.sqrt(1 - x * x)
    # y = ylo * exp(s), s in [0, S]
    S = (LOG_EPS / (2 * math.pi) + 3.0)
    sg, sw = np.polynomial.legendre.leggauss(ny)
    s = 0.5 * S * (sg + 1)
    ws = 0.5 * S * sw
    total = 0.0
    nmax_all = int((t + 30.0) / (2 * math.pi * ylo.min())) + 1
    nmax_all = min(nmax_all, len(c))
    cs = np.cos if parity > 0 else np.sin
    for ix in range(nx):
        ys = ylo[ix] * np.exp(s)
        args = 2 * math.pi * np.outer(np.arange(1, nmax_all + 1), ys)
        kt = ktilde(t, args.ravel()).reshape(nmax_all, ny)
        u = 2.0 * np.sqrt(ys)[None, :] * kt * cs(2 * math.pi * np.arange(1, nmax_all + 1) * x[ix])[:, None]
        uval = c[:nmax_all] @ u
        # d mu = dx dy / y^2; with y = ylo e^s: dy/y^2 = e^{-s}/ylo ds
        total += wx[ix] * np.sum(uval * uval * np.exp(-s) / ylo[ix] * ws)
    return 2.0 / (total * (1 + math.exp(-2 * math.pi * t)))


# ----------------------------------------------------------------------------
# record assembly


def hecke_residual(c: np.ndarray) -> float:
    """max |c(m)c(n) - sum_{d|(m,n)} c(mn/d^2)| over small coprime-ish pairs."""
    worst = 0.0
    N = len(c) - 1

    def cc(n):
        return c[n - 1]

    for m in range(2, 9):
        for n in range(2, 9):
            if m * n > N:
                continue
            s = 0.0
            g = math.gcd(m, n)
            for d in range(1, g + 1):
                if g % d == 0 and (m * n) % (d * d) == 0:
                    s += cc(m * n // (d * d))
            worst = max(worst, abs(cc(m) * cc(n) - s))
    return worst


def hecke_extend(c: np.ndarray, ncoeff: int) -> np.ndarray:
    """Rebuild composite coefficients from the solved prime(-power) values.

    lambda(p^{j+1}) = lambda(p) lambda(p^j) - lambda(p^{j-1}); multiplicative
    across coprime factors.  Primes keep their solved values, so the output
    satisfies the Hecke relations exactly at data precision.
    """
    lam = np.zeros(ncoeff + 1)
    lam[1] = 1.0
    spf = np.zeros(ncoeff + 1, dtype=int)
    for p in range(2, ncoeff + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    for n in range(2, ncoeff + 1):
        p = spf[n]
        if n == p:
            lam[n] = c[n - 1]
            continue
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        if m > 1:
            lam[n] = lam[m] * lam[n // m]
        else:
            lam[n] = lam[p] * lam[n // p] - lam[n // (p * p)]
    return lam[1:]


def build_record(t: float, parity: int, ncoeff: int) -> dict:
    # final high-resolution solve with enough coefficients
    M = max(ncoeff + 12, int(t / 2) + 20)
    y0 = min(0.35, (t + 24.0) / (2 * math.pi * M))
    s = Solver(t, parity, M=M, y0=y0)
    g, c = s.consistency()
    omega = omega_from_norm(t, parity, c)
    lam = hecke_extend(c, ncoeff)
    rec = {
        "schema": "lflab-maass-v1",
        "t": f"{t:.11f}",
        "parity": parity,
        "lambda": [f"{v:.11e}" for v in lam],
        "omega": f"{omega:.11e}",
        "provenance": {
            "source": "two-horocycle automorphy solve, level 1, double precision",
            "normalization": "lambda(1)=1; omega=|rho(1)|^2/cosh(pi t) with <u,u>_F=1",
            "consistency_rms": f"{g:.3e}",
            "hecke_residual": f"{hecke_residual(c):.3e}",
        },
    }
    return rec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--tmax", type=float, default=23.4)
    ap.add_argument("--tmin", type=float, default=8.8)
    ap.add_argument("--ncoeff", type=int, default=64)
    ap.add_argument("--out", default="src/lflab/data/maass_level1.jsonl")
    ap.add_argument("--selftest", action="store_true")
    args = ap.parse_args()

    if args.selftest:
        for t, x in [(9.5, 3.0), (21.0, 2.2), (14.0, 30.0), (18.0, 19.0)]:
            a = ktilde(t, np.array([x]))[0]
            b = ktilde_mpmath(t, x)
            print(f"ktilde({t},{x}): numpy={a:.12e} mpmath={b:.12e} rel={(a - b) / b:.2e}")
        return

    t0 = time.time()
    records = []
    for parity in (+1, -1):
        pname = "even" if parity > 0 else "odd"
        print(f"scanning {pname} spectrum on [{args.tmin}, {args.tmax}] ...", flush=True)
        found = eigen_scan(args.tmin, args.tmax, parity)
        print(f"  {pname}: {len(found)} eigenvalues: {[round(t, 5) for t in found]}", flush=True)
        for t in found:
            rec = build_record(t, parity, args.ncoeff)
            records.append(rec)
            print(
                f"  t={t:.8f} {pname} omega={rec['omega']} hecke={rec['provenance']['hecke_residual']} "
                f"cons={rec['provenance']['consistency_rms']}",
                flush=True,
            )
    records.sort(key=lambda r: float(r["t"]))
    with open(args.out, "w") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
    print(f"wrote {len(records)} records to {args.out} in {time.time() - t0:.0f}s")


if __name__ == "__main__":
    main()
