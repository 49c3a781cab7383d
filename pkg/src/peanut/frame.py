"""Date-indexed frames with an explicit missingness mask.

An :class:`ObservationFrame` stores one float vector and one boolean mask per
column. The mask is authoritative: a ``False`` slot holds ``NaN`` as a storage
sentinel, and no numeric code reads it.
"""

from __future__ import annotations

import datetime as _dt
import enum
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DuplicateDate,
    DuplicateWeeklyDate,
    LengthMismatch,
    UnknownColumn,
    UnsortedDates,
)

CalendarDate = _dt.date


class Role(str, enum.Enum):
    TARGET = "target"
    FEATURE = "feature"
    IGNORED = "ignored"


def _readonly(a):
    a.setflags(write=False)
    return a


def _check_dates(dates, dup_error=DuplicateDate):
    for prev, cur in zip(dates, dates[1:]):
        if cur == prev:
            raise dup_error(f"duplicate date {cur.isoformat()}")
        if cur < prev:
            raise UnsortedDates(f"{cur.isoformat()} follows {prev.isoformat()}")


@dataclass(frozen=True)
class ObservationFrame:
    """Immutable table of named float columns indexed by strictly increasing dates.

    Use :func:`build_frame` to construct one from lists with ``None`` markers.
    """

    dates: tuple
    values: Mapping[str, np.ndarray]
    mask: Mapping[str, np.ndarray]
    roles: Mapping[str, Role] = field(default_factory=dict)

    def __post_init__(self):
        dates = tuple(self.dates)
        _check_dates(dates)
        n = len(dates)
        if set(self.values) != set(self.mask):
            raise LengthMismatch("values and mask must name the same columns")
        values, mask = {}, {}
        for name in self.values:
            v = np.array(self.values[name], dtype=np.float64)
            m = np.array(self.mask[name], dtype=bool)
            if v.shape != (n,) or m.shape != (n,):
                raise LengthMismatch(
                    f"column {name!r} has length {len(v)}, expected {n}")
            v[~m] = np.nan
            values[name] = _readonly(v)
            mask[name] = _readonly(m)
        roles = {}
        for name, role in dict(self.roles).items():
            if name not in values:
                raise UnknownColumn(f"role given for unknown column {name!r}")
            roles[name] = Role(role)
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "roles", roles)

    def __len__(self):
        return len(self.dates)

    @property
    def columns(self):
        return list(self.values)

    def role(self, name):
        self._require(name)
        return self.roles.get(name, Role.FEATURE)

    def columns_with_role(self, role):
        return [c for c in self.values if self.role(c) == Role(role)]

    def _require(self, *names):
        for name in names:
            if name not in self.values:
                raise UnknownColumn(f"unknown column {name!r}")

    def observed(self, name):
        """Dense vector of the observed values of ``name``, date order."""
        self._require(name)
        return self.values[name][self.mask[name]]

    def take(self, rows):
        """Sub-frame of the given row positions (boolean mask or sorted indices)."""
        rows = np.asarray(rows)
        if rows.dtype == bool:
            rows = np.flatnonzero(rows)
        return ObservationFrame(
            dates=[self.dates[i] for i in rows],
            values={c: v[rows] for c, v in self.values.items()},
            mask={c: m[rows] for c, m in self.mask.items()},
            roles=self.roles,
        )

    def select(self, names):
        self._require(*names)
        return ObservationFrame(
            dates=self.dates,
            values={c: self.values[c] for c in names},
            mask={c: self.mask[c] for c in names},
            roles={c: r for c, r in self.roles.items() if c in names},
        )

    def with_column(self, name, values, mask, role=None):
        """Copy with ``name`` added or replaced."""
        vals = dict(self.values)
        msk = dict(self.mask)
        roles = dict(self.roles)
        vals[name] = values
        msk[name] = mask
        if role is not None:
            roles[name] = role
        return ObservationFrame(self.dates, vals, msk, roles)

    def with_roles(self, roles):
        return ObservationFrame(self.dates, self.values, self.mask, roles)

    def matrix(self, names):
        """``(n_rows, len(names))`` array of the named columns (NaN where missing)."""
        self._require(*names)
        if not names:
            return np.empty((len(self), 0))
        return np.column_stack([self.values[c] for c in names])

    def observed_all(self, names):
        """Row mask: every named column observed."""
        self._require(*names)
        out = np.ones(len(self), dtype=bool)
        for c in names:
            out &= self.mask[c]
        return out

    def __eq__(self, other):
        if not isinstance(other, ObservationFrame):
            return NotImplemented
        if self.dates != other.dates or self.columns != other.columns:
            return False
        if any(self.role(c) != other.role(c) for c in self.columns):
            return False
        for c in self.columns:
            if not np.array_equal(self.mask[c], other.mask[c]):
                return False
            m = self.mask[c]
            if not np.array_equal(self.values[c][m], other.values[c][m]):
                return False
        return True

    __hash__ = None


def _is_missing(x):
    return x is None or (isinstance(x, float) and math.isnan(x))


def build_frame(dates: Sequence[CalendarDate],
                columns: Mapping[str, Iterable],
                roles: Mapping[str, Role] | None = None) -> ObservationFrame:
    """Build a frame from plain vectors where ``None`` (or NaN) marks a missing cell.

    >>> import datetime as dt
    >>> f = build_frame([dt.date(2020, 1, d) for d in (1, 2, 3)], {"x": [1.0, None, 3.0]})
    >>> f.mask["x"].tolist()
    [True, False, True]
    """
    dates = tuple(dates)
    values, mask = {}, {}
    for name, col in columns.items():
        col = list(col)
        if len(col) != len(dates):
            raise LengthMismatch(
                f"column {name!r} has length {len(col)}, expected {len(dates)}")
        m = np.array([not _is_missing(x) for x in col], dtype=bool)
        v = np.array([float(x) if ok else np.nan for x, ok in zip(col, m)],
                     dtype=np.float64)
        values[name] = v
        mask[name] = m
    return ObservationFrame(dates, values, mask, roles or {})


def align_weekly_to_daily(daily_dates: Sequence[CalendarDate],
                          weekly: Iterable[tuple[CalendarDate, float]]):
    """Place weekly ``(date, value)`` records on a daily index.

    A daily slot is observed only when a weekly record carries exactly that
    date; records outside the daily range are dropped. Returns
    ``(values, mask)``.
    """
    weekly = list(weekly)
    seen = set()
    for d, _ in weekly:
        if d in seen:
            raise DuplicateWeeklyDate(f"duplicate weekly date {d.isoformat()}")
        seen.add(d)
    position = {d: i for i, d in enumerate(daily_dates)}
    values = np.full(len(daily_dates), np.nan)
    mask = np.zeros(len(daily_dates), dtype=bool)
    for d, v in weekly:
        i = position.get(d)
        if i is not None:
            values[i] = v
            mask[i] = True
    return values, mask


def complete_rows(frame: ObservationFrame, required: Iterable[str]) -> ObservationFrame:
    """Rows where every ``required`` column is observed, order preserved."""
    required = list(required)
    if not required:
        return frame
    return frame.take(frame.observed_all(required))


def target_column(frame: ObservationFrame) -> str:
    """The unique column with role TARGET."""
    targets = [c for c, r in frame.roles.items() if r == Role.TARGET]
    if len(targets) != 1:
        raise UnknownColumn(
            f"expected exactly one target column, found {len(targets)}")
    return targets[0]
