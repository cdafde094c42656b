"""Parameter sweeps behind the gain figures, and their CSV serialisation.

Figure ids are ``<n><letter>``. The number picks the metric and x axis:

====  ============================  ====================================
 n    metric                        x axis, series
====  ============================  ====================================
 1    expected gain per unit        pB; one series per pA
 2    expected gain per unit        Bob's contribution; one per p
 3    conditional relative gain     pB; one series per pA
 4    conditional relative gain     Bob's contribution; one per p
====  ============================  ====================================

The letter picks the membership: ``a`` 10/10, ``b`` 100/100, ``c`` 10 plus a
lone Bob, ``d`` 100 plus a lone Bob. Group A members always contribute 1.
"""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

from .fairness import GainReport
from .hetero import HeterogeneousFund
from .oracle import gain_report

__all__ = [
    "SweepPoint",
    "SweepRow",
    "FIGURE_IDS",
    "figure_points",
    "sweep",
    "format_number",
    "rows_to_csv",
    "write_csv",
]

Metric = Literal["gain", "conditional"]

FIGURE_SIZES = {"a": (10, 10), "b": (100, 100), "c": (10, 1), "d": (100, 1)}
FIGURE_IDS = tuple(f"{n}{s}" for n in "1234" for s in "abcd")

PB_GRID = tuple(round(0.50 + 0.05 * k, 2) for k in range(10))
PA_SERIES = (0.6, 0.75, 0.9)
CONTRIBUTION_GRID = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
P_SERIES = (0.6, 0.9)

CSV_HEADER = ("x", "series", "value", "method")


@dataclass(frozen=True)
class SweepPoint:
    x: float
    series: str
    fund: HeterogeneousFund
    target: int = 1


@dataclass(frozen=True)
class SweepRow:
    x: float
    series: str
    value: float
    method: str
    error: str | None = None


def figure_points(figure: str) -> tuple[Metric, list[SweepPoint]]:
    """Grid of one figure panel, ordered by series then x."""
    if figure not in FIGURE_IDS:
        raise KeyError(figure)
    number, letter = figure[0], figure[1]
    la, lb = FIGURE_SIZES[letter]
    metric: Metric = "gain" if number in "12" else "conditional"
    points = []
    if number in "13":
        for pa in PA_SERIES:
            for pb in PB_GRID:
                fund = HeterogeneousFund.two_group(la, pa, 1.0, lb, pb, 1.0)
                points.append(SweepPoint(pb, f"pA={pa:g}", fund))
    else:
        for p in P_SERIES:
            for fb in CONTRIBUTION_GRID:
                fund = HeterogeneousFund.two_group(la, p, 1.0, lb, p, fb)
                points.append(SweepPoint(fb, f"pA={p:g}/pB={p:g}", fund))
    return metric, points


def _metric_value(report: GainReport, metric: Metric) -> float:
    if metric == "gain":
        return report.gain_per_unit
    return report.conditional_relative_gain_per_unit


def _evaluate(point: SweepPoint, metric: Metric, method: str) -> SweepRow:
    try:
        report = gain_report(point.fund, point.target, method)
    except (ValueError, ArithmeticError) as exc:
        return SweepRow(point.x, point.series, math.nan, "error", f"{type(exc).__name__}: {exc}")
    return SweepRow(point.x, point.series, _metric_value(report, metric), report.method)


def sweep(
    points: Sequence[SweepPoint],
    metric: Metric = "gain",
    method: Literal["exact", "enumerate"] = "exact",
    threads: int = 1,
) -> list[SweepRow]:
    """Evaluate ``metric`` at every point; failing points become error rows."""
    if metric not in ("gain", "conditional"):
        raise ValueError(f"unknown metric {metric!r}")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda pt: _evaluate(pt, metric, method), points))
    return [_evaluate(pt, metric, method) for pt in points]


def format_number(x: float) -> str:
    return f"{x:.12g}"


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow((format_number(r.x), r.series, format_number(r.value), r.method))
    return buf.getvalue()


def write_csv(rows: Iterable[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
