"""Ground-truth scenarios for scoring imputers.

A persistent daily feature follows an AR(1) process, the target is a known
function of it plus noise, and the target is then hidden except on every
``weekly_period``-th day. Because the hidden values are kept, an imputer's
error on exactly those cells can be measured.
"""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import FrameMismatch, InvalidSpec
from .frame import ObservationFrame, Role
from .rng import Stream, derive

FORMS = {
    "tanh": np.tanh,
    "sine": np.sin,
}


@dataclass(frozen=True)
class Linear:
    intercept: float = 0.0
    slope: float = 1.0
    kind = "linear"

    def __call__(self, x):
        return self.intercept + self.slope * x


@dataclass(frozen=True)
class Nonlinear:
    """``level + amplitude * form(rate * (x - center))`` with a bounded ``form``."""

    form: str = "tanh"
    level: float = -0.056
    amplitude: float = 0.1
    rate: float = 4.0
    center: float = 0.28
    kind = "nonlinear"

    def __call__(self, x):
        return self.level + self.amplitude * FORMS[self.form](self.rate * (x - self.center))


@dataclass(frozen=True)
class AR1:
    phi: float = 0.98
    noise_sd: float = 0.05
    mean: float = 0.28


@dataclass(frozen=True)
class SimulationSpec:
    n_days: int = 1253
    relation: Linear | Nonlinear = field(default_factory=Nonlinear)
    feature_process: AR1 = field(default_factory=AR1)
    target_noise_sd: float = 0.02
    weekly_period: int = 7
    seed: int = 0
    start: dt.date = dt.date(2020, 1, 13)
    feature_name: str = "spend"
    target_name: str = "merchants"

    def validate(self):
        if self.n_days < 1:
            raise InvalidSpec("n_days must be >= 1")
        if self.weekly_period < 2:
            raise InvalidSpec("weekly_period must be >= 2")
        ar = self.feature_process
        if not -1.0 < ar.phi < 1.0:
            raise InvalidSpec("AR(1) phi must lie in (-1, 1)")
        if ar.noise_sd < 0 or self.target_noise_sd < 0:
            raise InvalidSpec("noise standard deviations must be >= 0")
        if isinstance(self.relation, Nonlinear) and self.relation.form not in FORMS:
            raise InvalidSpec(f"unknown nonlinear form {self.relation.form!r}")
        params = [ar.phi, ar.noise_sd, ar.mean, self.target_noise_sd,
                  *(v for v in asdict(self.relation).values() if not isinstance(v, str))]
        if not all(math.isfinite(v) for v in params):
            raise InvalidSpec("parameters must be finite")
        if self.feature_name == self.target_name:
            raise InvalidSpec("feature and target need distinct names")

    def to_dict(self):
        d = asdict(self)
        d["relation"] = {"kind": self.relation.kind, **asdict(self.relation)}
        d["start"] = self.start.isoformat()
        return d


@dataclass(frozen=True)
class SimulationTruth:
    full: ObservationFrame
    masked: ObservationFrame
    spec: SimulationSpec

    @property
    def target(self):
        return self.spec.target_name


def ar1_path(n, process: AR1, z):
    """AR(1) path started from its stationary distribution, driven by normals ``z``."""
    x = np.empty(n)
    if n == 0:
        return x
    sd0 = process.noise_sd / math.sqrt(1.0 - process.phi ** 2)
    x[0] = process.mean + sd0 * z[0]
    for t in range(1, n):
        x[t] = process.mean + process.phi * (x[t - 1] - process.mean) + process.noise_sd * z[t]
    return x


def generate(spec: SimulationSpec = SimulationSpec()) -> SimulationTruth:
    spec.validate()
    n = spec.n_days
    feature = ar1_path(n, spec.feature_process, Stream(derive(spec.seed, 0)).normal(n))
    noise = Stream(derive(spec.seed, 1)).normal(n)
    target = spec.relation(feature) + spec.target_noise_sd * noise
    dates = [spec.start + dt.timedelta(days=i) for i in range(n)]
    roles = {spec.feature_name: Role.FEATURE, spec.target_name: Role.TARGET}
    everything = np.ones(n, dtype=bool)
    full = ObservationFrame(dates, {spec.feature_name: feature, spec.target_name: target},
                            {spec.feature_name: everything, spec.target_name: everything},
                            roles)
    weekly = np.arange(n) % spec.weekly_period == 0
    masked = full.with_column(spec.target_name, target, weekly)
    return SimulationTruth(full, masked, spec)


def imputation_rmse(truth: SimulationTruth, hybrid) -> float:
    """Root-mean-square error over the cells hidden in ``truth.masked`` only."""
    frame = getattr(hybrid, "frame", hybrid)
    target = truth.target
    if frame.dates != truth.full.dates or target not in frame.values:
        raise FrameMismatch("hybrid frame does not share the truth's dates and target")
    hidden = ~truth.masked.mask[target]
    if not frame.mask[target][hidden].all():
        raise FrameMismatch("hybrid frame leaves hidden target cells missing")
    if not hidden.any():
        return 0.0
    err = frame.values[target][hidden] - truth.full.values[target][hidden]
    return float(np.sqrt(np.mean(err * err)))
