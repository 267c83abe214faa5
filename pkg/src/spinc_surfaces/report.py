"""Suite results and their JSON / CSV serializations."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Literal

from . import __version__

EXACT_ZERO = "0 (exact)"
CSV_COLUMNS = ("name", "mode", "trials", "max_residual", "status")


@dataclass(frozen=True)
class Check:
    name: str
    mode: Literal["exact", "float"]
    trials: int
    max_residual: object  # float, or EXACT_ZERO
    status: Literal["pass", "fail"]
    detail: str = ""

    @classmethod
    def exact(cls, name: str, trials: int, worst, detail: str = "") -> Check:
        """``worst`` is the largest exact residual magnitude seen (0 for a clean run)."""
        if worst == 0:
            return cls(name, "exact", trials, EXACT_ZERO, "pass", detail)
        return cls(name, "exact", trials, float(worst), "fail", detail)

    @classmethod
    def tolerance(cls, name: str, trials: int, worst: float, tol: float, detail: str = "") -> Check:
        worst = float(worst)
        ok = worst <= tol  # NaN fails
        return cls(name, "float", trials, worst, "pass" if ok else "fail", detail)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def row(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "status": self.status,
        }


@dataclass(frozen=True)
class Flag:
    """A printed formula that disagrees with what the computation gives."""

    name: str
    printed: str
    computed: str
    note: str

    def to_dict(self) -> dict:
        return {"name": self.name, "printed": self.printed, "computed": self.computed, "note": self.note}


@dataclass
class SuiteResult:
    suite: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    flags: list[Flag] = field(default_factory=list)
    version: str = __version__

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "version": self.version,
            "checks": [c.row() for c in self.checks],
            "flags": [f.to_dict() for f in self.flags],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for c in self.checks:
            r = c.row()
            w.writerow([r[k] for k in CSV_COLUMNS])
        return buf.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


# JSON Schema of the report (draft 2020-12); flags are informational.
REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "seed", "version", "checks"],
    "properties": {
        "suite": {"type": "string"},
        "seed": {"type": "integer"},
        "version": {"type": "string"},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": list(CSV_COLUMNS),
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "mode": {"enum": ["exact", "float"]},
                    "trials": {"type": "integer", "minimum": 0},
                    "max_residual": {
                        "oneOf": [{"type": "number", "minimum": 0}, {"const": EXACT_ZERO}]
                    },
                    "status": {"enum": ["pass", "fail"]},
                },
            },
        },
        "flags": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "printed", "computed", "note"],
                "properties": {k: {"type": "string"} for k in ("name", "printed", "computed", "note")},
            },
        },
    },
}
