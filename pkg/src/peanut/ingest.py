"""Reading tracker-style CSV files and the canonical frame document.

Tracker files are plain comma-separated text with a header row, dates split
over ``year, month, day`` columns and ``.`` marking a missing value. A
:class:`ColumnMap` binds whatever the upstream column names are to canonical
names and roles, so renamed upstream columns need no code change.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import re
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ColumnNameClash,
    DuplicateDate,
    MissingHeaderColumn,
    UnknownColumn,
    UnparsableNumber,
    ValidationError,
)
from .frame import ObservationFrame, Role, align_weekly_to_daily

_DECIMAL = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)$")
_SCIENTIFIC = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


@dataclass(frozen=True)
class SourceSpec:
    path: Path
    date_columns: tuple = ("year", "month", "day")
    frequency: str = "daily"

    def __post_init__(self):
        object.__setattr__(self, "path", Path(self.path))
        object.__setattr__(self, "date_columns", tuple(self.date_columns))
        if self.frequency not in ("daily", "weekly"):
            raise ValidationError("frequency", f"unknown frequency {self.frequency!r}")
        if len(self.date_columns) not in (1, 3):
            raise ValidationError(
                "date_columns", "give (year, month, day) columns or one ISO date column")
        if len(set(self.date_columns)) != len(self.date_columns):
            raise ValidationError("date_columns", "date columns must be distinct")


@dataclass(frozen=True)
class ColumnMap:
    """``columns`` maps source column -> ``(canonical name, Role)``."""

    columns: Mapping[str, tuple]
    missing_token: str = "."
    allow_scientific: bool = False

    def __post_init__(self):
        cols = {src: (name, Role(role)) for src, (name, role) in self.columns.items()}
        names = [name for name, _ in cols.values()]
        if len(set(names)) != len(names):
            raise ColumnNameClash(f"canonical names are not unique: {names}")
        object.__setattr__(self, "columns", cols)

    @property
    def roles(self):
        return {name: role for name, role in self.columns.values()}


def parse_number(text, missing_token=".", allow_scientific=False):
    """Parse one cell. Returns ``None`` for a missing cell, raises ValueError if bad."""
    text = text.strip()
    if text == "" or text == missing_token:
        return None
    pattern = _SCIENTIFIC if allow_scientific else _DECIMAL
    if not pattern.match(text):
        raise ValueError(text)
    return float(text)


def _parse_date(row, date_idx):
    if len(date_idx) == 1:
        return dt.date.fromisoformat(row[date_idx[0]].strip())
    y, m, d = (int(row[i]) for i in date_idx)
    return dt.date(y, m, d)


def parse_tracker_csv(spec: SourceSpec, cmap: ColumnMap) -> ObservationFrame:
    """Parse one tracker CSV into a frame with canonical column names.

    Rows are sorted by date; a repeated date raises :class:`DuplicateDate`.
    Errors in a cell name the 1-based data row and the source column.
    """
    with open(spec.path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise MissingHeaderColumn(f"{spec.path}: empty file") from None
        for col in (*spec.date_columns, *cmap.columns):
            if col not in header:
                raise MissingHeaderColumn(f"{spec.path}: header lacks column {col!r}")
        date_idx = [header.index(c) for c in spec.date_columns]
        col_idx = {src: header.index(src) for src in cmap.columns}

        records = []
        for rownum, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < len(header):
                raise UnparsableNumber(rownum, "<row>", ",".join(row))
            try:
                date = _parse_date(row, date_idx)
            except ValueError:
                raise UnparsableNumber(
                    rownum, "/".join(spec.date_columns),
                    "-".join(row[i] for i in date_idx)) from None
            cells = {}
            for src, i in col_idx.items():
                try:
                    cells[src] = parse_number(row[i], cmap.missing_token,
                                              cmap.allow_scientific)
                except ValueError:
                    raise UnparsableNumber(rownum, src, row[i]) from None
            records.append((date, cells))

    records.sort(key=lambda r: r[0])
    for (a, _), (b, _) in zip(records, records[1:]):
        if a == b:
            raise DuplicateDate(f"{spec.path}: duplicate date {a.isoformat()}")

    n = len(records)
    values, mask = {}, {}
    for src, (name, _) in cmap.columns.items():
        v = np.full(n, np.nan)
        m = np.zeros(n, dtype=bool)
        for i, (_, cells) in enumerate(records):
            if cells[src] is not None:
                v[i] = cells[src]
                m[i] = True
        values[name] = v
        mask[name] = m
    return ObservationFrame([r[0] for r in records], values, mask, cmap.roles)


def merge_sources(daily: ObservationFrame, weekly: ObservationFrame) -> ObservationFrame:
    """Attach the columns of ``weekly`` to the date index of ``daily``.

    Each weekly observation lands on the daily row with exactly its date;
    every other daily slot of a weekly column is missing.
    """
    clash = set(daily.columns) & set(weekly.columns)
    if clash:
        raise ColumnNameClash(f"columns present in both sources: {sorted(clash)}")
    merged = daily
    for name in weekly.columns:
        m = weekly.mask[name]
        pairs = [(d, v) for d, v, ok in zip(weekly.dates, weekly.values[name], m) if ok]
        values, mask = align_weekly_to_daily(daily.dates, pairs)
        merged = merged.with_column(name, values, mask, weekly.roles.get(name))
    return merged


def load_sources(sources, base_dir=None) -> ObservationFrame:
    """Parse and merge a list of ``(SourceSpec, ColumnMap)`` pairs.

    The first daily source supplies the date index; every other source is
    aligned onto it by exact date.
    """
    frames = []
    for spec, cmap in sources:
        if base_dir is not None and not spec.path.is_absolute():
            spec = SourceSpec(Path(base_dir) / spec.path, spec.date_columns, spec.frequency)
        frames.append((spec.frequency, parse_tracker_csv(spec, cmap)))
    daily = [f for freq, f in frames if freq == "daily"]
    if not daily:
        raise ValidationError("sources", "at least one daily source is required")
    merged = daily[0]
    first = next(i for i, (freq, _) in enumerate(frames) if freq == "daily")
    for i, (_, f) in enumerate(frames):
        if i != first:
            merged = merge_sources(merged, f)
    targets = [c for c, r in merged.roles.items() if r == Role.TARGET]
    if len(targets) != 1:
        raise ValidationError(
            "sources", f"exactly one column must have role target, found {len(targets)}")
    return merged


# -- canonical frame document ------------------------------------------------

def frame_to_dict(frame: ObservationFrame, provenance=None) -> dict:
    doc = {
        "dates": [d.isoformat() for d in frame.dates],
        "columns": {
            c: [float(v) if ok else None
                for v, ok in zip(frame.values[c], frame.mask[c])]
            for c in frame.columns
        },
        "roles": {c: frame.role(c).value for c in frame.columns},
    }
    if provenance is not None:
        doc["provenance"] = {k: list(v) for k, v in provenance.items()}
    return doc


def frame_from_dict(doc: Mapping) -> ObservationFrame:
    try:
        dates = [dt.date.fromisoformat(s) for s in doc["dates"]]
        columns = doc["columns"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("frame", f"malformed frame document: {exc}") from None
    values, mask = {}, {}
    for name, col in columns.items():
        m = np.array([x is not None for x in col], dtype=bool)
        values[name] = np.array([np.nan if x is None else float(x) for x in col])
        mask[name] = m
    roles = doc.get("roles", {})
    unknown = set(roles) - set(columns)
    if unknown:
        raise UnknownColumn(f"roles name unknown columns: {sorted(unknown)}")
    return ObservationFrame(dates, values, mask, roles)


def dumps(doc) -> str:
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def write_frame(frame: ObservationFrame, path, provenance=None):
    Path(path).write_text(dumps(frame_to_dict(frame, provenance)), encoding="utf-8")


def read_frame(path) -> ObservationFrame:
    return frame_from_dict(read_document(path))


def read_document(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError("frame", f"{path}: line {exc.lineno}: {exc.msg}") from None


def write_tracker_csv(frame: ObservationFrame, path, source_names=None,
                      missing_token="."):
    """Write ``frame`` in tracker layout (year, month, day, columns...).

    ``source_names`` optionally maps canonical names back to source headers.
    Values are written in shortest positional form, so re-parsing is exact.
    """
    source_names = source_names or {}
    cols = frame.columns
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["year", "month", "day"] + [source_names.get(c, c) for c in cols])
        for i, d in enumerate(frame.dates):
            row = [d.year, d.month, d.day]
            for c in cols:
                row.append(np.format_float_positional(frame.values[c][i], trim="-")
                           if frame.mask[c][i]
                           else missing_token)
            w.writerow(row)
