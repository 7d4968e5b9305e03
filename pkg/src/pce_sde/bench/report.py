"""Experiment reports: tidy CSV rows plus a JSON metadata sidecar."""

from __future__ import annotations

import csv
import json
import math
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

COLUMNS = ("experiment", "model", "sigma", "method", "param", "metric", "value", "elapsed_s", "seed")
TIMING_COLUMNS = ("elapsed_s",)


@dataclass(frozen=True)
class Row:
    experiment: str
    model: str
    sigma: float
    method: str
    param: object
    metric: str
    value: float
    elapsed_s: float
    seed: int

    def __post_init__(self):
        if not self.elapsed_s >= 0:
            raise ValueError("elapsed time must be non-negative")


@dataclass
class ExperimentReport:
    name: str
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, row: Row) -> None:
        self.rows.append(row)

    def extend(self, rows) -> None:
        self.rows.extend(rows)

    def select(self, **match) -> list:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in match.items())]

    def value(self, **match) -> float:
        found = self.select(**match)
        if len(found) != 1:
            raise KeyError(f"expected one row for {match}, found {len(found)}")
        return found[0].value

    def relative_times(self) -> dict:
        """Elapsed time of every row divided by the largest elapsed time in the report."""
        top = max((r.elapsed_s for r in self.rows), default=0.0)
        if top <= 0:
            return {id(r): 0.0 for r in self.rows}
        return {id(r): r.elapsed_s / top for r in self.rows}

    def write(self, out_dir, stem: Optional[str] = None) -> Path:
        """Write ``<stem>.csv`` and ``<stem>.meta.json``; returns the CSV path."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = stem or self.name
        path = out / f"{stem}.csv"
        write_csv(self.rows, path)
        meta = dict(self.metadata)
        meta.setdefault("python", platform.python_version())
        meta["written_at"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        meta["rows"] = len(self.rows)
        with open(out / f"{stem}.meta.json", "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


    def write_relative_times(self, path) -> None:
        """Accuracy-free timing table with times normalised by the slowest row."""
        rel = self.relative_times()
        seen = set()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("model", "sigma", "method", "param", "elapsed_s", "relative_time"))
            for r in self.rows:
                key = (r.model, r.sigma, r.method, r.param)
                if key in seen:
                    continue
                seen.add(key)
                w.writerow((r.model, _fmt(r.sigma), r.method, _fmt(r.param),
                            f"{r.elapsed_s:.6e}", f"{rel[id(r)]:.6e}"))


def _fmt(v) -> str:
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def write_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([r.experiment, r.model, _fmt(r.sigma), r.method, _fmt(r.param), r.metric,
                        _fmt(float(r.value)), f"{r.elapsed_s:.6e}", r.seed])


def read_csv(path) -> list:
    """Read a report CSV back as a list of dicts with numeric fields converted."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for rec in reader:
            for key in ("sigma", "value", "elapsed_s"):
                rec[key] = float(rec[key])
            try:
                rec["param"] = float(rec["param"])
            except ValueError:
                pass
            rec["seed"] = int(rec["seed"])
            out.append(rec)
    return out


def strip_timing(path) -> str:
    """CSV text with timing columns blanked, for determinism comparisons."""
    idx = [COLUMNS.index(c) for c in TIMING_COLUMNS]
    lines = []
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            for i in idx:
                rec[i] = ""
            lines.append(",".join(rec))
    return "\n".join(lines)
