"""Reading and writing populations, pairings, windows and reports.

Populations and reference fronts are CSV files with one solution per row
and an optional header. Reports are JSON; every float is written with
``repr`` so it reads back bit for bit. Each report also gets a companion
CSV of per-solution grades for external plotting.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path

import numpy as np

from rmf.errors import ParseError
from rmf.metrics import ComparisonResult, EvaluationReport
from rmf.regions import LABELS


def _parse_row(row, path, lineno):
    try:
        values = [float(field) for field in row]
    except ValueError:
        return None
    if not all(math.isfinite(v) for v in values):
        raise ParseError("non-finite value", path, lineno)
    return values


def load_population(path) -> np.ndarray:
    """Read an ``(n, d)`` array of solutions from a CSV file.

    A first row that is not entirely numeric is taken as a header and
    skipped. Blank lines are ignored. Row numbers in errors are 1-based
    line numbers of the file.
    """
    path = Path(path)
    rows = []
    width = None
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            row = [field.strip() for field in row]
            if not any(row):
                continue
            values = _parse_row(row, path, lineno)
            if values is None:
                if not rows and width is None:
                    width = len(row)
                    continue
                raise ParseError(f"non-numeric field in {row!r}", path, lineno)
            if width is None:
                width = len(values)
            if len(values) != width:
                raise ParseError(f"expected {width} fields, got {len(values)}", path, lineno)
            rows.append(values)
    if not rows:
        return np.empty((0, width or 2))
    return np.array(rows, dtype=float)


def write_population(fh, points, header=None) -> None:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(header)
    for p in points:
        writer.writerow([repr(float(v)) for v in p])


def save_population(path, points, header=None) -> None:
    with Path(path).open("w", newline="") as fh:
        write_population(fh, points, header)


def load_pairing(path) -> list[tuple[int, int]]:
    """Read ``i j`` zero-based index pairs, one per line; ``#`` starts a comment."""
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected two indices, got {len(parts)} fields", path, lineno)
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(f"indices must be integers: {line!r}", path, lineno) from None
    return pairs


def load_windows(path) -> list[tuple[float, float]]:
    """Read ``start_f1,end_f1`` observation windows, one per line."""
    windows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        values = _parse_row(parts, path, lineno) if len(parts) == 2 else None
        if values is None:
            raise ParseError(f"expected 'start_f1,end_f1', got {line!r}", path, lineno)
        windows.append((values[0], values[1]))
    return windows


def report_to_dict(report: EvaluationReport | ComparisonResult) -> dict:
    if isinstance(report, ComparisonResult):
        return {
            "kind": "comparison",
            "alpha": report.alpha,
            "beta": report.beta,
            "entries": [asdict(e) for e in report.entries],
            "ranking": list(report.ranking),
        }
    out = {
        "kind": "evaluation",
        "convergence": report.convergence,
        "diversity": report.diversity,
        "cluster_means": list(report.cluster_means),
        "region_histogram": dict(report.region_histogram),
        "local_windows": [
            {
                "window": list(w.window) if w.window is not None else None,
                "clusters": list(w.clusters),
                "convergence": w.convergence,
                "diversity": w.diversity,
            }
            for w in report.local_windows
        ],
    }
    g = report.graded
    if g is not None:
        out["solutions"] = [
            {
                "coords": [float(v) for v in g.points[i]],
                "grade": float(g.values[i]),
                "raw": float(g.raw[i]),
                "region": LABELS[g.region_codes[i]].value,
                "cluster": int(g.cluster_index[i]),
                "degenerate": bool(g.degenerate[i]),
            }
            for i in range(len(g))
        ]
    return out


def plot_data_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".plot.csv")


def save_report(report: EvaluationReport | ComparisonResult, path) -> Path | None:
    """Write ``report`` as JSON to ``path``.

    For evaluation reports with graded solutions a companion
    ``<stem>.plot.csv`` with columns ``f1,f2[,f3],grade,region`` is written
    next to it and its path returned.
    """
    path = Path(path)
    data = report_to_dict(report)
    path.write_text(json.dumps(data, indent=2, allow_nan=False) + "\n")
    g = getattr(report, "graded", None)
    if g is None:
        return None
    plot = plot_data_path(path)
    dim = g.points.shape[1]
    with plot.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{k + 1}" for k in range(dim)] + ["grade", "region"])
        for i in range(len(g)):
            writer.writerow([repr(float(v)) for v in g.points[i]]
                            + [repr(float(g.values[i])), LABELS[g.region_codes[i]].value])
    return plot


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())
