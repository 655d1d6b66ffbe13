"""Check results shared by every verification routine."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS, FAIL, ERRATUM = "pass", "fail", "erratum"


def _plain(x):
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, (str, int, bool)) or x is None:
        return x
    return str(x)


@dataclass
class CheckReport:
    check_id: str
    params: dict = field(default_factory=dict)
    status: str = PASS
    items: list = field(default_factory=list)
    notes: str = ""
    elapsed: float | None = None

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def add(self, key: str, label: Any, residual: Any, passed: bool):
        self.items.append({key: label, "residual": residual, "pass": bool(passed)})
        if not passed and self.status == PASS:
            self.status = FAIL

    def failures(self) -> list:
        return [it for it in self.items if not it.get("pass", True)]

    def as_erratum(self, note: str = "") -> "CheckReport":
        """Downgrade a failure to an erratum entry (printed form disagrees with the oracle)."""
        if self.status == FAIL:
            self.status = ERRATUM
        if note:
            self.notes = (self.notes + " " + note).strip()
        return self

    def to_json(self, max_items: int | None = 50) -> dict:
        items = self.items
        if max_items is not None and len(items) > max_items:
            bad = [it for it in items if not it.get("pass", True)]
            items = bad[:max_items] or items[:max_items]
        out = {
            "check_id": self.check_id,
            "params": _plain(self.params),
            "status": self.status,
            "items": _plain(items),
            "n_items": len(self.items),
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    def __str__(self):
        return f"[{self.status}] {self.check_id} ({len(self.items)} items)"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
