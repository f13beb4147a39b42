"""Shared JSON verification-report schema used by moments, adp and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import mpmath
from mpmath import mpc

REPORT_SCHEMA = {
    "type": "object",
    "required": ["identity_id", "inputs", "lhs", "rhs", "residual_abs", "residual_rel", "budgets", "wall_ms"],
    "properties": {
        "identity_id": {"type": "string"},
        "inputs": {"type": "object"},
        "lhs": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        "rhs": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
        "parts": {"type": "object"},
        "residual_abs": {"type": "number"},
        "residual_rel": {"type": "number"},
        "budgets": {"type": "object"},
        "wall_ms": {"type": "number"},
        "passed": {"type": ["boolean", "null"]},
        "tolerance": {"type": ["number", "null"]},
    },
}


def _cstr(z) -> tuple[str, str]:
    z = mpc(z)
    return (mpmath.nstr(z.real, 30), mpmath.nstr(z.imag, 30))


@dataclass
class VerificationReport:
    identity_id: str
    inputs: dict
    lhs: tuple[str, str]
    rhs: tuple[str, str]
    residual_abs: float
    residual_rel: float
    budgets: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict)
    wall_ms: float = 0.0
    tolerance: float | None = None
    passed: bool | None = None

    @classmethod
    def build(cls, identity_id, inputs, lhs, rhs, budgets=None, parts=None, wall_ms=0.0, tolerance=None):
        lhs_c, rhs_c = mpc(lhs), mpc(rhs)
        res = abs(lhs_c - rhs_c)
        scale = max(abs(lhs_c), abs(rhs_c))
        rel = float(res / scale) if scale > 0 else float(res)
        rep = cls(
            identity_id=identity_id,
            inputs=dict(inputs),
            lhs=_cstr(lhs_c),
            rhs=_cstr(rhs_c),
            residual_abs=float(res),
            residual_rel=rel,
            budgets=dict(budgets or {}),
            parts={k: _cstr(v) for k, v in (parts or {}).items()},
            wall_ms=float(wall_ms),
            tolerance=tolerance,
        )
        if tolerance is not None:
            rep.passed = rep.residual_abs <= tolerance or rep.residual_rel <= tolerance
        return rep

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "inputs": self.inputs,
            "lhs": list(self.lhs),
            "rhs": list(self.rhs),
            "parts": {k: list(v) for k, v in self.parts.items()},
            "residual_abs": self.residual_abs,
            "residual_rel": self.residual_rel,
            "budgets": self.budgets,
            "wall_ms": self.wall_ms,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def validate(self):
        import jsonschema

        jsonschema.validate(self.to_dict(), REPORT_SCHEMA)
        return True

    def __str__(self):
        status = "" if self.passed is None else ("PASS " if self.passed else "FAIL ")
        return (
            f"{status}{self.identity_id}: |res|={self.residual_abs:.3e} "
            f"rel={self.residual_rel:.3e} ({self.wall_ms:.0f} ms)"
        )
