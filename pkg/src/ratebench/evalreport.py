"""Evaluation statistics and report artifacts.

Covers accuracy, 5x5 confusion matrices, population Pearson correlation,
box-plot summaries (linear-interpolation quartiles, 1.5 IQR whiskers),
an ordinary least-squares accuracy-vs-CI fit, and deterministic CSV/SVG
emission. CSVs are the authoritative artifact; the SVG is a minimal
self-contained scatter.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError

STARS = (1, 2, 3, 4, 5)
WHISKER_REACH = 1.5  # times the interquartile range


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed [true star - 1][predicted star - 1]."""

    matrix: np.ndarray  # (5, 5) int64

    @property
    def total(self) -> int:
        return int(self.matrix.sum())

    def trace_accuracy(self) -> float:
        return float(np.trace(self.matrix)) / self.total


@dataclass(frozen=True)
class BoxStats:
    low_whisker: float
    q1: float
    median: float
    q3: float
    high_whisker: float
    outliers: tuple[float, ...] = field(default=())


@dataclass(frozen=True)
class TradeoffRow:
    dataset: str
    pipeline: str
    ci: float
    accuracy: float

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0:
            raise DataError(f"accuracy {self.accuracy} outside [0, 1]")


def accuracy(pred: Sequence[int], truth: Sequence[int]) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if len(pred) != len(truth):
        raise DataError(f"prediction/truth length mismatch: {len(pred)} vs {len(truth)}")
    if len(pred) == 0:
        raise DataError("accuracy undefined for empty label sequences")
    return float(np.mean(pred == truth))


def confusion(pred: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    pred = np.asarray(pred, dtype=np.int64)
    truth = np.asarray(truth, dtype=np.int64)
    if len(pred) != len(truth):
        raise DataError(f"prediction/truth length mismatch: {len(pred)} vs {len(truth)}")
    if len(pred) == 0:
        raise DataError("confusion matrix undefined for empty label sequences")
    for name, arr in (("pred", pred), ("truth", truth)):
        if arr.min() < 1 or arr.max() > 5:
            raise DataError(f"{name} labels must be stars in 1..5")
    matrix = np.zeros((5, 5), dtype=np.int64)
    for t, p in zip(truth, pred):
        matrix[t - 1, p - 1] += 1
    return ConfusionMatrix(matrix=matrix)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Population-form Pearson correlation, in [-1, 1]."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y):
        raise DataError(f"sequence length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DataError("correlation needs at least 2 points")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt(np.mean(dx * dx)))
    sy = float(np.sqrt(np.mean(dy * dy)))
    if sx == 0.0 or sy == 0.0:
        raise DataError("correlation undefined for a constant sequence")
    r = float(np.mean(dx * dy)) / (sx * sy)
    return float(min(1.0, max(-1.0, r)))


def box_stats(values: Sequence[float]) -> BoxStats:
    """Five-number summary with 1.5 IQR whiskers and explicit outliers."""
    arr = np.asarray(values, dtype=np.float64)
    if len(arr) == 0:
        raise DataError("box statistics undefined for an empty group")
    q1, median, q3 = (float(v) for v in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    lo_fence = q1 - WHISKER_REACH * iqr
    hi_fence = q3 + WHISKER_REACH * iqr
    inside = arr[(arr >= lo_fence) & (arr <= hi_fence)]
    outliers = np.sort(arr[(arr < lo_fence) | (arr > hi_fence)])
    # interpolated quartiles can sit beyond every in-fence point; whiskers
    # then collapse onto the quartile so the five-number chain stays ordered
    high = max(float(inside.max()), q3) if len(inside) else q3
    low = min(float(inside.min()), q1) if len(inside) else q1
    return BoxStats(
        low_whisker=low,
        q1=q1,
        median=median,
        q3=q3,
        high_whisker=high,
        outliers=tuple(float(v) for v in outliers),
    )


def box_stats_by_star(groups: Mapping[int, Sequence[float]]) -> dict[int, BoxStats]:
    out = {}
    for star in sorted(groups):
        out[star] = box_stats(groups[star])
    return out


def ols_fit(rows: Sequence[TradeoffRow]) -> tuple[float, float]:
    """Least-squares line of accuracy on CI; returns (slope, intercept)."""
    ci = np.array([r.ci for r in rows], dtype=np.float64)
    acc = np.array([r.accuracy for r in rows], dtype=np.float64)
    if len(ci) < 2 or len(np.unique(ci)) < 2:
        raise DataError("OLS fit needs at least 2 distinct CI values")
    ci_mean = ci.mean()
    acc_mean = acc.mean()
    slope = float(np.sum((ci - ci_mean) * (acc - acc_mean)) / np.sum((ci - ci_mean) ** 2))
    return slope, float(acc_mean - slope * ci_mean)


def _svg_scatter(rows: Sequence[TradeoffRow], slope: float, intercept: float) -> str:
    """640x480 scatter of accuracy vs CI with the fitted line."""
    ci = [r.ci for r in rows]
    lo, hi = min(ci), max(ci)
    pad = 0.05 * (hi - lo) if hi > lo else 0.5
    lo, hi = lo - pad, hi + pad

    def sx(v: float) -> float:
        return 70.0 + (v - lo) / (hi - lo) * 540.0

    def sy(v: float) -> float:
        return 440.0 - v * 400.0

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 640 480">',
        '<rect width="640" height="480" fill="white"/>',
        '<line x1="70" y1="40" x2="70" y2="440" stroke="black"/>',
        '<line x1="70" y1="440" x2="610" y2="440" stroke="black"/>',
        '<text x="320" y="472" text-anchor="middle" font-size="14">interpretability score (CI)</text>',
        '<text x="18" y="240" text-anchor="middle" font-size="14" transform="rotate(-90 18 240)">accuracy</text>',
    ]
    y0 = min(1.0, max(0.0, slope * lo + intercept))
    y1 = min(1.0, max(0.0, slope * hi + intercept))
    parts.append(
        f'<line x1="{sx(lo):.2f}" y1="{sy(y0):.2f}" x2="{sx(hi):.2f}" y2="{sy(y1):.2f}" '
        'stroke="steelblue" stroke-width="1.5"/>'
    )
    for r in sorted(rows, key=lambda r: (r.dataset, r.pipeline)):
        parts.append(
            f'<circle cx="{sx(r.ci):.2f}" cy="{sy(r.accuracy):.2f}" r="4" fill="crimson" '
            f'fill-opacity="0.7"><title>{r.pipeline}</title></circle>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_report(
    rows: Sequence[TradeoffRow],
    out_dir: str | Path,
    confusions: Mapping[tuple[str, str], ConfusionMatrix] | None = None,
    box_groups: Mapping[tuple[str, str], Mapping[int, BoxStats]] | None = None,
    correlations: Mapping[tuple[str, str, str], float] | None = None,
) -> list[Path]:
    """Write the report bundle; returns the created file paths.

    ``box_groups`` maps (dataset, source) to per-star stats and
    ``correlations`` maps (dataset, source, scope) to Pearson r values.
    Output bytes depend only on the inputs.
    """
    if not rows:
        raise DataError("cannot emit a report for zero trade-off rows")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []

    tradeoff = out_dir / "tradeoff.csv"
    with open(tradeoff, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "pipeline", "ci", "accuracy"])
        for r in sorted(rows, key=lambda r: (r.dataset, r.ci, r.pipeline)):
            writer.writerow([r.dataset, r.pipeline, f"{r.ci:.4f}", f"{r.accuracy:.4f}"])
    created.append(tradeoff)

    for (dataset, pipeline), cm in sorted((confusions or {}).items()):
        path = out_dir / f"confusion_{dataset}_{pipeline.replace('+', '_')}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["true\\pred", *STARS])
            for star in STARS:
                writer.writerow([star, *cm.matrix[star - 1].tolist()])
        created.append(path)

    if box_groups:
        path = out_dir / "box_stats.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["dataset", "source", "star", "low_whisker", "q1", "median", "q3",
                 "high_whisker", "outliers"]
            )
            for (dataset, source), by_star in sorted(box_groups.items()):
                for star, stats in sorted(by_star.items()):
                    writer.writerow(
                        [dataset, source, star, f"{stats.low_whisker:.6f}", f"{stats.q1:.6f}",
                         f"{stats.median:.6f}", f"{stats.q3:.6f}", f"{stats.high_whisker:.6f}",
                         ";".join(f"{v:.6f}" for v in stats.outliers)]
                    )
        created.append(path)

    if correlations:
        path = out_dir / "correlations.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["dataset", "source", "scope", "pearson_r"])
            for (dataset, source, scope), r in sorted(correlations.items()):
                writer.writerow([dataset, source, scope, f"{r:.6f}"])
        created.append(path)

    for dataset in sorted({r.dataset for r in rows}):
        ds_rows = [r for r in rows if r.dataset == dataset]
        try:
            slope, intercept = ols_fit(ds_rows)
        except DataError:
            continue  # single-pipeline runs have no fit line
        path = out_dir / f"scatter_{dataset}.svg"
        path.write_text(_svg_scatter(ds_rows, slope, intercept), encoding="utf-8")
        created.append(path)
    return created
