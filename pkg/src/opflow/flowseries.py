"""Daily flow dynamics and template-correlation analysis.

Turns a corpus into a gap-free daily count series, smooths it with a
centered moving average, and scans it against a 9-phase operation
lifecycle template: for every shift l and scale k on a grid, the series
window x[l:l+k] is Pearson-correlated with the template resampled to k
points.  The resulting correlogram localizes operation-like bursts; its
peaks map back to calendar date windows.

Zero-variance windows (or a constant template) have no defined
correlation and are carried as an explicit undefined marker (`None` in
cells, "NA" in CSV exports) so they can never masquerade as real peaks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .corpus import Corpus
from .errors import DataError

DEFAULT_SMOOTHING_WINDOW = 7


class TemplateFormatError(DataError):
    """A template file line does not parse as "position amplitude"."""


@dataclass
class DailySeries:
    """Per-day values over a contiguous date range (no gaps)."""

    start_date: date
    values: list[float]

    def __post_init__(self) -> None:
        if len(self.values) < 1:
            raise ValueError("series must have at least one day")
        self.values = [float(v) for v in self.values]
        if any(v < 0 for v in self.values):
            raise ValueError("series values must be non-negative")

    def __len__(self) -> int:
        return len(self.values)

    def dates(self) -> list[date]:
        return [self.start_date + timedelta(days=i) for i in range(len(self.values))]

    def end_date(self) -> date:
        return self.start_date + timedelta(days=len(self.values) - 1)


@dataclass
class LifecycleTemplate:
    """Piecewise-linear operation lifecycle curve.

    Control points are (position, amplitude) pairs with positions
    strictly increasing from 0 to 1; amplitudes are non-negative.
    """

    control_points: list[tuple[float, float]]
    labels: list[str] | None = None

    def __post_init__(self) -> None:
        pts = [(float(p), float(a)) for p, a in self.control_points]
        if len(pts) < 2:
            raise ValueError("template needs at least 2 control points")
        positions = [p for p, _ in pts]
        if positions[0] != 0.0 or positions[-1] != 1.0:
            raise ValueError("template positions must start at 0 and end at 1")
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("template positions must be strictly increasing")
        if any(a < 0 for _, a in pts):
            raise ValueError("template amplitudes must be non-negative")
        if self.labels is not None and len(self.labels) != len(pts):
            raise ValueError("one label per control point required")
        self.control_points = pts


# Default 9-phase curve: amplitudes are configurable artifact defaults
# (overridable via a template file), phase names follow the standard
# operation lifecycle vocabulary.
DEFAULT_TEMPLATE = LifecycleTemplate(
    control_points=[
        (0.00, 0.10),
        (0.15, 0.08),
        (0.25, 0.30),
        (0.35, 0.10),
        (0.45, 0.15),
        (0.55, 1.00),
        (0.70, 0.25),
        (0.85, 0.45),
        (1.00, 0.30),
    ],
    labels=[
        "background",
        "calm",
        "art preparation",
        "calm",
        "attack trigger",
        "peak of expectations",
        "loss of illusions",
        "public awareness",
        "productivity",
    ],
)


@dataclass
class Peak:
    """A correlogram cell selected by detect_peaks, with its date window."""

    shift: int
    scale: int
    value: float
    window_start: date
    window_end: date


@dataclass
class Correlogram:
    """Correlation values over the (shift, scale) grid.

    ``cells[(l, k)]`` is the correlation for window x[l:l+k], or None
    where the correlation is undefined (zero variance).  Only admissible
    pairs (l + k <= series length) are present.
    """

    shifts: list[int]
    scales: list[int]
    cells: dict[tuple[int, int], float | None]
    start_date: date
    series_length: int = 0

    def defined_cells(self) -> list[tuple[int, int, float]]:
        return [(l, k, v) for (l, k), v in sorted(self.cells.items()) if v is not None]


def build_daily_series(corpus: Corpus) -> DailySeries:
    """Documents per day from the earliest through the latest date."""
    if len(corpus) == 0:
        raise ValueError("cannot build a series from an empty corpus")
    first, last = corpus.date_span
    n = (last - first).days + 1
    values = [0.0] * n
    for doc in corpus:
        values[(doc.day() - first).days] += 1.0
    return DailySeries(start_date=first, values=values)


def smooth(series: DailySeries, window: int = DEFAULT_SMOOTHING_WINDOW) -> DailySeries:
    """Centered moving average; the window shrinks at the series edges.

    ``window`` must be odd so the average is centered on each day.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"smoothing window must be odd and positive, got {window}")
    if window == 1:
        return DailySeries(series.start_date, list(series.values))
    half = window // 2
    vals = np.asarray(series.values, dtype=float)
    n = len(vals)
    out = [float(np.mean(vals[max(0, i - half):min(n, i + half + 1)])) for i in range(n)]
    return DailySeries(series.start_date, out)


def sample_template(template: LifecycleTemplate, k: int) -> list[float]:
    """Resample the template to k points on the uniform grid (i-1)/(k-1)."""
    if k < 2:
        raise ValueError(f"template must be sampled at k >= 2 points, got {k}")
    xs = np.array([p for p, _ in template.control_points])
    ys = np.array([a for _, a in template.control_points])
    positions = np.arange(k, dtype=float) / (k - 1)
    return [float(v) for v in np.interp(positions, xs, ys)]


def _corr_block(values: np.ndarray, k: int, samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Correlations of every length-k window against the template samples.

    Returns (corr, undefined) arrays indexed by shift l = 0..n-k.  The
    same code path serves the scalar and grid entry points, so a grid
    cell is bit-identical to the one-off computation.
    """
    windows = sliding_window_view(values, k)
    p_mean = samples.mean()
    p_centered = samples - p_mean
    p_ss = np.sum(p_centered * p_centered)
    x_mean = windows.mean(axis=1)
    x_centered = windows - x_mean[:, None]
    numerator = np.sum(x_centered * p_centered, axis=1)
    x_ss = np.sum(x_centered * x_centered, axis=1)
    # A window (or template) of identical values has zero variance; the
    # correlation is undefined there, not zero.
    undefined = np.all(windows == windows[:, :1], axis=1)
    if bool(np.all(samples == samples[0])):
        undefined = np.ones_like(undefined)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = numerator / np.sqrt(x_ss * p_ss)
    return corr, undefined


def window_correlation(
    series: DailySeries, l: int, k: int, template_samples: list[float]
) -> float | None:
    """Pearson correlation of x[l:l+k] against the k template samples.

    Both means are taken over the window itself.  Returns None when
    either side has zero variance.
    """
    n = len(series)
    if k < 2:
        raise ValueError(f"scale k must be >= 2, got {k}")
    if l < 0 or l + k > n:
        raise ValueError(f"window (l={l}, k={k}) out of range for series of length {n}")
    if len(template_samples) != k:
        raise ValueError(f"expected {k} template samples, got {len(template_samples)}")
    values = np.asarray(series.values, dtype=float)[l:l + k]
    samples = np.asarray(template_samples, dtype=float)
    corr, undefined = _corr_block(values, k, samples)
    if bool(undefined[0]):
        return None
    return float(corr[0])


def correlogram(
    series: DailySeries,
    template: LifecycleTemplate,
    scales: list[int],
    shifts: list[int],
) -> Correlogram:
    """Evaluate the correlation over the whole (shift, scale) grid.

    Inadmissible pairs (l + k beyond the series end) get no cell.
    """
    if not scales:
        raise ValueError("scale list must not be empty")
    if not shifts:
        raise ValueError("shift list must not be empty")
    if any(k < 2 for k in scales):
        raise ValueError("all scales must be >= 2")
    if any(l < 0 for l in shifts):
        raise ValueError("all shifts must be >= 0")
    scales = sorted(set(int(k) for k in scales))
    shifts = sorted(set(int(l) for l in shifts))
    values = np.asarray(series.values, dtype=float)
    n = len(values)
    cells: dict[tuple[int, int], float | None] = {}
    for k in scales:
        admissible = [l for l in shifts if l + k <= n]
        if not admissible:
            continue
        samples = np.asarray(sample_template(template, k), dtype=float)
        corr, undefined = _corr_block(values, k, samples)
        for l in admissible:
            cells[(l, k)] = None if undefined[l] else float(corr[l])
    return Correlogram(
        shifts=shifts,
        scales=scales,
        cells=cells,
        start_date=series.start_date,
        series_length=n,
    )


def detect_peaks(corr: Correlogram, threshold: float, top_n: int) -> list[Peak]:
    """Defined cells at or above the threshold, best first.

    Ordering is total: value descending, then smaller shift, then
    smaller scale.  Thresholds above 1 are clamped to 1.
    """
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    threshold = min(float(threshold), 1.0)
    hits = [(l, k, v) for (l, k, v) in corr.defined_cells() if v >= threshold]
    hits.sort(key=lambda cell: (-cell[2], cell[0], cell[1]))
    peaks = []
    for l, k, v in hits[:top_n]:
        peaks.append(
            Peak(
                shift=l,
                scale=k,
                value=v,
                window_start=corr.start_date + timedelta(days=l),
                window_end=corr.start_date + timedelta(days=l + k - 1),
            )
        )
    return peaks


def load_template(path: str | Path) -> LifecycleTemplate:
    """Template file: one "position amplitude" pair per line, '#' comments.

    A trailing comment on a data line is kept as the phase label.
    """
    points: list[tuple[float, float]] = []
    labels: list[str] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            data, _, comment = line.partition("#")
            data = data.strip()
            if not data:
                continue
            parts = data.split()
            if len(parts) != 2:
                raise TemplateFormatError(
                    f"line {line_no}: expected 'position amplitude', got {data!r}"
                )
            try:
                points.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise TemplateFormatError(
                    f"line {line_no}: non-numeric control point {data!r}"
                ) from None
            labels.append(comment.strip())
    if not points:
        raise TemplateFormatError(f"template file {path} has no control points")
    named = [lbl for lbl in labels if lbl]
    try:
        return LifecycleTemplate(points, labels if named else None)
    except ValueError as exc:
        raise TemplateFormatError(str(exc)) from None


def _format_value(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_series_csv(series: DailySeries, path: str | Path) -> None:
    """CSV export with header date,value."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("date,value\n")
        for day, value in zip(series.dates(), series.values):
            handle.write(f"{day.isoformat()},{_format_value(value)}\n")


def write_correlogram_csv(corr: Correlogram, path: str | Path) -> None:
    """CSV export with header l,k,c; undefined cells emit the token NA."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("l,k,c\n")
        for (l, k), v in sorted(corr.cells.items()):
            cell = "NA" if v is None else repr(v)
            handle.write(f"{l},{k},{cell}\n")


def write_peaks_csv(peaks: list[Peak], path: str | Path) -> None:
    """CSV export with header l,k,c,window_start,window_end."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("l,k,c,window_start,window_end\n")
        for p in peaks:
            handle.write(
                f"{p.shift},{p.scale},{repr(p.value)},"
                f"{p.window_start.isoformat()},{p.window_end.isoformat()}\n"
            )
