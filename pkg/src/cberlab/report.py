"""Canonical JSON reports with exact rational payloads."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def rational(x) -> dict:
    f = Fraction(x)
    return {"num": f.numerator, "den": f.denominator}


def _encode(x: Any) -> Any:
    if isinstance(x, Fraction):
        return rational(x)
    if isinstance(x, bool) or isinstance(x, (int, str)) or x is None:
        return x
    if isinstance(x, float):
        raise TypeError("no floats cross the interface; use Fraction")
    if isinstance(x, dict):
        return {str(k): _encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_encode(v) for v in items]
    return str(x)


@dataclass
class Report:
    scenario: dict
    outcome: str  # "pass" | "fail" | "error"
    metrics: dict = field(default_factory=dict)
    ledger: list = field(default_factory=list)  # (key, lhs, rhs, verdict)
    seed: int | None = None

    def add_constraint(self, key: str, lhs, rhs, verdict: bool) -> None:
        self.ledger.append((key, lhs, rhs, verdict))

    @property
    def all_pass(self) -> bool:
        return all(v for *_, v in self.ledger) and self.outcome == "pass"

    def to_json(self) -> str:
        payload = {
            "scenario": _encode(self.scenario),
            "outcome": self.outcome,
            "metrics": _encode(self.metrics),
            "ledger": [
                {"key": k, "lhs": _encode(l), "rhs": _encode(r), "verdict": v}
                for k, l, r, v in self.ledger
            ],
            "seed": self.seed,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))
