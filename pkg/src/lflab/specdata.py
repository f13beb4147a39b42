"""Spectral data client: Maass-form fixtures, caching, and holomorphic
cross-checks.

All numeric payloads are decimal strings in newline-delimited JSON so the
records survive any float-format round trip; the bundled fixtures make the
whole test suite runnable offline.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import time
import warnings
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import MismatchError, MissingDataError, NetworkError, SchemaError

__all__ = ["MaassRecord", "fetch_maass", "load_holo_reference", "crosscheck_holo"]

SCHEMA_MAASS = "lflab-maass-v1"
SCHEMA_HOLO = "lflab-holo-v1"
SCHEMA_CACHE = "lflab-cache-v1"


@dataclass(frozen=True)
class MaassRecord:
    """One level-one Maass cusp form: spectral parameter, parity, eigenvalues,
    harmonic weight, provenance."""

    t: float
    parity: int
    lam: tuple[float, ...]  # lambda(1..N)
    omega: float
    provenance: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        if self.parity not in (-1, 1):
            raise SchemaError("MaassRecord parity must be +-1")
        if not self.t > 0 or not self.omega > 0:
            raise SchemaError("MaassRecord needs t > 0 and omega > 0")
        if abs(self.lam[0] - 1.0) > 1e-12:
            raise SchemaError("MaassRecord requires lambda(1) = 1")

    @property
    def coeff_count(self) -> int:
        return len(self.lam)

    def lam_n(self, n: int) -> float:
        if not 1 <= n <= len(self.lam):
            raise MissingDataError(f"lambda({n}) outside stored range")
        return self.lam[n - 1]

    def hecke_residual(self) -> float:
        """max |lam(m)lam(n) - sum_{d | (m,n)} lam(mn/d^2)| over small pairs."""
        worst = 0.0
        N = len(self.lam)
        for m in range(2, 8):
            for n in range(2, 8):
                if m * n > N:
                    continue
                g = math.gcd(m, n)
                s = sum(
                    self.lam_n(m * n // (d * d))
                    for d in range(1, g + 1)
                    if g % d == 0 and (m * n) % (d * d) == 0
                )
                worst = max(worst, abs(self.lam_n(m) * self.lam_n(n) - s))
        return worst


def _parse_maass_line(line: str) -> MaassRecord:
    obj = json.loads(line)
    if obj.get("schema") != SCHEMA_MAASS:
        raise SchemaError(f"unsupported maass schema {obj.get('schema')}")
    return MaassRecord(
        t=float(obj["t"]),
        parity=int(obj["parity"]),
        lam=tuple(float(v) for v in obj["lambda"]),
        omega=float(obj["omega"]),
        provenance=obj.get("provenance", {}),
    )


def _fixture_text(name: str) -> str:
    ref = resources.files("lflab.data").joinpath(name)
    if not ref.is_file():
        raise MissingDataError(f"bundled fixture {name} missing")
    return ref.read_text()


def _checksum(payload: str) -> str:
    return hashlib.sha256(payload.encode()).hexdigest()


def _cache_write(cache_dir: str, name: str, payload: str):
    os.makedirs(cache_dir, exist_ok=True)
    env = {
        "schema": SCHEMA_CACHE,
        "fetched_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "checksum": _checksum(payload),
        "payload": payload,
    }
    fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=name)
    with os.fdopen(fd, "w") as fh:
        json.dump(env, fh)
    os.replace(tmp, os.path.join(cache_dir, name))


def _cache_read(cache_dir: str, name: str) -> str | None:
    path = os.path.join(cache_dir, name)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        env = json.load(fh)
    if env.get("schema") != SCHEMA_CACHE:
        raise SchemaError("unsupported cache schema")
    if _checksum(env["payload"]) != env["checksum"]:
        raise SchemaError("cache checksum mismatch")
    return env["payload"]


def fetch_maass(
    count: int = 30,
    coeff_count: int = 32,
    endpoint: str | None = None,
    offline: bool = True,
    cache_dir: str | None = None,
    validate: bool = True,
) -> list[MaassRecord]:
    """First `count` Maass records ordered by t, with >= coeff_count eigenvalues.

    offline=True (default) serves the bundled fixtures.  A non-None endpoint
    with offline=False is attempted and falls back to fixtures with a warning
    (NetworkError is raised only when fixtures are absent too).  Fetched
    payloads are persisted write-then-rename when cache_dir is given.
    """
    endpoint = endpoint or os.environ.get("LFLAB_MAASS_ENDPOINT")
    payload = None
    if cache_dir:
        payload = _cache_read(cache_dir, "maass_level1.jsonl")
    if payload is None and not offline and endpoint:
        try:
            import urllib.request

            with urllib.request.urlopen(endpoint, timeout=10) as resp:  # pragma: no cover
                payload = resp.read().decode()
        except Exception as exc:
            warnings.warn(f"maass endpoint unreachable ({exc}); falling back to fixtures")
            payload = None
    if payload is None:
        payload = _fixture_text("maass_level1.jsonl")
    if cache_dir:
        _cache_write(cache_dir, "maass_level1.jsonl", payload)
    records = [_parse_maass_line(l) for l in payload.splitlines() if l.strip()]
    records.sort(key=lambda r: r.t)
    if len(records) < count:
        raise MissingDataError(f"only {len(records)} maass records available, need {count}")
    out = records[:count]
    for rec in out:
        if rec.coeff_count < coeff_count:
            raise MissingDataError(f"record t={rec.t} has {rec.coeff_count} < {coeff_count} coefficients")
        if validate and rec.hecke_residual() > 1e-6:
            raise SchemaError(f"record t={rec.t} fails Hecke validation: {rec.hecke_residual()}")
    return out


def load_holo_reference() -> dict[tuple[int, str], list[float]]:
    """Externally-generated lambda_f(n) reference values keyed by (weight, label)."""
    out = {}
    for line in _fixture_text("holo_lambda.jsonl").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if obj.get("schema") != SCHEMA_HOLO:
            raise SchemaError(f"unsupported holo schema {obj.get('schema')}")
        out[(int(obj["weight"]), obj["label"])] = [float(v) for v in obj["lambda"]]
    return out


def crosscheck_holo(weight_2k: int, ctx=None, tol: float = 1e-8):
    """Compare internal eigenform lambdas (n <= 20) against the reference file.

    Forms are matched by sorting both sides by lambda(2); returns the max
    deviation, raising MismatchError above tol.
    """
    from .hecke import dim_cusp_forms, eigenforms
    from .precision import DEFAULT_CTX

    ctx = ctx or DEFAULT_CTX
    ref = load_holo_reference()
    mine = eigenforms(weight_2k, 21, ctx)
    theirs = [v for (w, lbl), v in sorted(ref.items(), key=lambda kv: kv[0]) if w == weight_2k]
    if dim_cusp_forms(weight_2k) == 0:
        if theirs:
            raise MismatchError(f"reference has forms at weight {weight_2k} but dim = 0")
        return 0.0
    if len(mine) != len(theirs):
        raise MismatchError(f"form count mismatch at weight {weight_2k}")
    mine_sorted = sorted(mine, key=lambda f: float(f.lam(2, ctx)))
    theirs_sorted = sorted(theirs, key=lambda v: v[1])
    worst = 0.0
    for f, v in zip(mine_sorted, theirs_sorted):
        for n in range(1, 21):
            worst = max(worst, abs(float(f.lam(n, ctx)) - v[n - 1]))
    if worst > tol:
        raise MismatchError(f"holo crosscheck deviation {worst} > {tol} at weight {weight_2k}")
    return worst
