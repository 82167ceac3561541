"""Tabulated sweep results with deterministic CSV / JSON emission.

The same row shape serves epsilon sweeps against a limiting value, the
delta-lemma check, and the independence probe (there the limit column is 0).
Float cells are written with repr, which is shortest-roundtrip in Python 3,
so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

CSV_COLUMNS = ["epsilon", "n", "value_re", "value_im", "limit_re", "limit_im", "abs_err", "rel_err", "warnings"]


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    value: complex
    limit: complex
    warnings: tuple[str, ...] = ()
    breakdown: Mapping[str, complex] = field(default_factory=dict)

    @property
    def abs_err(self) -> float:
        return abs(self.value - self.limit)

    @property
    def rel_err(self) -> float:
        scale = abs(self.limit)
        return self.abs_err / scale if scale > 0 else math.nan


@dataclass(frozen=True, eq=False)
class ConvergenceReport:
    kind: str
    rows: tuple[SweepRow, ...]
    metadata: dict

    def csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        n = self.metadata.get("n", "")
        for row in self.rows:
            writer.writerow([
                repr(float(row.epsilon)),
                n,
                repr(row.value.real),
                repr(row.value.imag),
                repr(row.limit.real),
                repr(row.limit.imag),
                repr(row.abs_err),
                repr(row.rel_err),
                ";".join(row.warnings),
            ])
        return buf.getvalue()

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "metadata": self.metadata,
            "rows": [
                {
                    "epsilon": row.epsilon,
                    "value": [row.value.real, row.value.imag],
                    "limit": [row.limit.real, row.limit.imag],
                    "abs_err": row.abs_err,
                    "rel_err": row.rel_err,
                    "breakdown": {k: [v.real, v.imag] for k, v in sorted(row.breakdown.items())},
                    "warnings": list(row.warnings),
                }
                for row in self.rows
            ],
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def write(self, path: str, fmt: str = "csv") -> None:
        if fmt == "csv":
            text = self.csv_text()
        elif fmt == "json":
            text = self.json_text()
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        with open(path, "w") as fh:
            fh.write(text)


def write_sidecar(path: str, metadata: dict) -> str:
    """Write the run's metadata next to its table; the sidecar holds enough
    to reproduce the run (full config, symbols, epsilons, package version)."""
    sidecar = path + ".meta.json"
    with open(sidecar, "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar
