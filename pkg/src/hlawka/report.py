"""Machine-readable trial reports (JSON and CSV).

A report serializes deterministically: identical run configurations with
identical seeds produce byte-identical JSON except for the runtimeMs
field, which is explicitly outside the determinism guarantee.  The CSV
form is a flat key,value table carrying the same numeric content.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class TrialReport:
    family: str
    params: dict
    trials: int
    seed: int
    tolerance_used: float
    min_margin: float | None
    equality_cases: int
    violations: list[dict]
    interpretation_flags: list[str] = field(default_factory=list)
    runtime_ms: int = 0

    def to_dict(self) -> dict:
        return {
            "schemaVersion": SCHEMA_VERSION,
            "family": self.family,
            "params": dict(self.params),
            "trials": self.trials,
            "seed": self.seed,
            "toleranceUsed": self.tolerance_used,
            "minMargin": self.min_margin,
            "equalityCases": self.equality_cases,
            "violations": [dict(v) for v in self.violations],
            "interpretationFlags": list(self.interpretation_flags),
            "runtimeMs": self.runtime_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key, value in _flatten(self.to_dict()):
            writer.writerow([key, _csv_value(value)])
        return buf.getvalue()

    def write(self, path: str | os.PathLike, fmt: str = "json") -> None:
        text = self.to_json() if fmt == "json" else self.to_csv()
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _flatten(obj, prefix: str = ""):
    if isinstance(obj, dict):
        for key, value in obj.items():
            yield from _flatten(value, f"{prefix}{key}.")
    elif isinstance(obj, (list, tuple)):
        for i, value in enumerate(obj):
            yield from _flatten(value, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def _csv_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)
