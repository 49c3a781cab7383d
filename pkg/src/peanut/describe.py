"""Descriptive statistics, missingness counts and scatter exports."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frame import ObservationFrame

STAT_FIELDS = ("count", "mean", "std", "min", "p25", "p50", "p75", "max")
_LABELS = {"p25": "25%", "p50": "50%", "p75": "75%"}


@dataclass(frozen=True)
class ColumnStats:
    count: int
    mean: float
    std: float
    min: float
    p25: float
    p50: float
    p75: float
    max: float

    def as_tuple(self):
        return tuple(getattr(self, f) for f in STAT_FIELDS)


def quantile(sorted_values, q):
    """Linear interpolation between closest ranks, ``h = (n - 1) q``."""
    n = len(sorted_values)
    if n == 0:
        return math.nan
    h = (n - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, n - 1)
    return sorted_values[lo] + (h - lo) * (sorted_values[hi] - sorted_values[lo])


def column_stats(values) -> ColumnStats:
    """Summary of a dense vector; NaN marks undefined fields (empty input,
    or ``std`` with a single value)."""
    v = np.sort(np.asarray(values, dtype=np.float64))
    n = len(v)
    if n == 0:
        return ColumnStats(0, *([math.nan] * 7))
    mean = float(v.mean())
    std = float(v.std(ddof=1)) if n > 1 else math.nan
    return ColumnStats(
        n, mean, std, float(v[0]),
        quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), float(v[-1]))


def descriptive_stats(frame: ObservationFrame, columns=None) -> dict:
    """Per-column :class:`ColumnStats` over observed cells only."""
    columns = frame.columns if columns is None else list(columns)
    return {c: column_stats(frame.observed(c)) for c in columns}


@dataclass(frozen=True)
class ColumnMissingness:
    observed: int
    missing: int
    fraction: float


def missingness_summary(frame: ObservationFrame) -> dict:
    """Observed/missing counts per column, straight from the mask."""
    out = {}
    n = len(frame)
    for c in frame.columns:
        obs = int(frame.mask[c].sum())
        out[c] = ColumnMissingness(obs, n - obs, (n - obs) / n if n else 0.0)
    return out


def missingness_bitmap(frame: ObservationFrame) -> dict:
    """Per-date observed flags, ``{"dates": [...], "observed": {col: [0/1...]}}``."""
    return {
        "dates": [d.isoformat() for d in frame.dates],
        "observed": {c: frame.mask[c].astype(int).tolist() for c in frame.columns},
    }


def scatter_export(frame: ObservationFrame, column: str) -> list:
    """``(iso_date, value)`` for each observed cell of ``column``, date ascending."""
    frame._require(column)
    m = frame.mask[column]
    v = frame.values[column]
    return [(d.isoformat(), float(x)) for d, x, ok in zip(frame.dates, v, m) if ok]


def _fmt(x, digits=3):
    return "NaN" if not np.isfinite(x) else f"{x:.{digits}f}"


def render_stats_table(stats: dict, digits=3) -> str:
    """Aligned text table: one row per statistic, one column per variable."""
    cols = list(stats)
    widths = [max(12, len(c) + 2) for c in cols]
    lines = [" " * 8 + "".join(f"{c:>{w}}" for c, w in zip(cols, widths))]
    for f in STAT_FIELDS:
        label = _LABELS.get(f, f)
        cells = "".join(f"{_fmt(float(getattr(stats[c], f)), digits):>{w}}"
                        for c, w in zip(cols, widths))
        lines.append(f"{label:<8}{cells}")
    return "\n".join(lines)


def render_missingness_table(summary: dict) -> str:
    width = max([8] + [len(c) + 2 for c in summary])
    lines = [f"{'column':<{width}}{'observed':>10}{'missing':>10}{'fraction':>10}"]
    for c, s in summary.items():
        lines.append(f"{c:<{width}}{s.observed:>10d}{s.missing:>10d}{s.fraction:>10.3f}")
    return "\n".join(lines)


def stats_to_dict(stats: dict) -> dict:
    def num(x):
        return None if not np.isfinite(x) else float(x)

    return {c: {f: (s.count if f == "count" else num(getattr(s, f))) for f in STAT_FIELDS}
            for c, s in stats.items()}


def missingness_to_dict(summary: dict) -> dict:
    return {c: {"observed": s.observed, "missing": s.missing, "fraction": s.fraction}
            for c, s in summary.items()}
