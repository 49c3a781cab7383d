"""The five dataset constructions and per-cell provenance.

Strategies, by benchmark model number:

1. :class:`Passthrough` - the merged data as is.
2. :class:`DropMissing` - rows with a missing target removed.
3. :class:`GlobalMean` - missing target cells set to the observed mean.
4. :class:`MonteCarlo` - missing cells set to the average of normal draws
   around the observed mean and standard deviation.
5. :class:`ModelBased` - a random forest trained on complete rows predicts
   the missing target cells from the feature columns.

Strategies 3-5 never touch an observed cell, and every filled cell is tagged
``synthetic:<strategy>`` in :attr:`HybridFrame.provenance`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientTrainingRows, NoObservedValues, UnknownColumn, ValidationError
from .forest import ForestHyper, fit_forest, with_seed
from .frame import ObservationFrame, Role, complete_rows
from .rng import derive_many, normal_rows

REAL = "real"


def synthetic(name):
    return f"synthetic:{name}"


@dataclass(frozen=True)
class Passthrough:
    name = "passthrough"


@dataclass(frozen=True)
class DropMissing:
    name = "drop"


@dataclass(frozen=True)
class GlobalMean:
    name = "mean"


@dataclass(frozen=True)
class MonteCarlo:
    seed: int
    draws: int = 100
    name = "mc"

    def __post_init__(self):
        if self.draws < 1:
            raise ValidationError("draws", "must be >= 1")


@dataclass(frozen=True)
class ModelBased:
    seed: int
    features: tuple | None = None
    hyper: ForestHyper = field(default_factory=ForestHyper)
    name = "model"

    def __post_init__(self):
        if self.features is not None:
            object.__setattr__(self, "features", tuple(self.features))
            if not self.features:
                raise ValidationError("features", "feature set must be non-empty")


STRATEGIES = {s.name: s for s in (Passthrough, DropMissing, GlobalMean, MonteCarlo, ModelBased)}


@dataclass(frozen=True)
class HybridFrame:
    """A frame whose target cells are each tagged real or synthetic.

    ``provenance[i]`` is ``"real"``, ``"synthetic:<strategy>"``, or ``None``
    for a cell that is still missing.
    """

    frame: ObservationFrame
    target: str
    provenance: tuple
    strategy: str = "passthrough"

    @property
    def n_synthetic(self):
        return sum(1 for p in self.provenance if p is not None and p != REAL)

    @property
    def n_missing(self):
        return int((~self.frame.mask[self.target]).sum())

    def provenance_dict(self):
        return {self.target: list(self.provenance)}


def _tags(mask, filled, strategy):
    return tuple(REAL if m else (synthetic(strategy) if f else None)
                 for m, f in zip(mask, filled))


def _observed_mean(v):
    # a constant column must come back exactly, which summation does not promise
    return float(v[0]) if v.min() == v.max() else float(v.mean())


def global_mean_impute(values, mask):
    """Fill missing slots with the mean of the observed ones."""
    values = np.asarray(values, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise NoObservedValues("no observed values to average")
    out = values.copy()
    out[~mask] = _observed_mean(values[mask])
    return out


def monte_carlo_impute(values, mask, draws, seed):
    """Fill each missing slot with the average of ``draws`` Normal(mean, std) samples.

    Slot ``i`` uses its own stream ``derive(seed, i)``, so a cell's value does
    not depend on which other cells are missing. ``std`` is the sample
    (n - 1) standard deviation of the observed values.
    """
    values = np.asarray(values, dtype=np.float64)
    mask = np.asarray(mask, dtype=bool)
    if draws < 1:
        raise ValidationError("draws", "must be >= 1")
    obs = values[mask]
    if len(obs) < 2:
        raise NoObservedValues(f"need at least 2 observed values, have {len(obs)}")
    out = values.copy()
    missing = np.flatnonzero(~mask)
    if len(missing) == 0:
        return out
    mean = _observed_mean(obs)
    std = 0.0 if obs.min() == obs.max() else float(obs.std(ddof=1))
    z = normal_rows(derive_many(seed, missing), draws)
    out[missing] = mean + std * z.mean(axis=1)
    return out


def _feature_columns(frame, target, features):
    if features is None:
        features = [c for c in frame.columns_with_role(Role.FEATURE) if c != target]
    features = list(features)
    if not features:
        raise ValidationError("features", "no feature columns available")
    if target in features:
        raise ValidationError("features", "feature set must exclude the target")
    frame._require(*features)
    return features


def model_based_impute(frame: ObservationFrame, target: str, features=None,
                       hyper: ForestHyper = ForestHyper(), seed=0) -> HybridFrame:
    """Fill missing target cells with random-forest predictions from ``features``.

    The forest is trained on rows where the target and every feature are
    observed. Rows with a missing target and a missing feature stay missing.
    """
    frame._require(target)
    mask = frame.mask[target]
    if mask.all():
        return HybridFrame(frame, target, _tags(mask, mask, ModelBased.name),
                           ModelBased.name)
    features = _feature_columns(frame, target, features)
    feat_ok = frame.observed_all(features)
    train = mask & feat_ok
    if train.sum() < 2:
        raise InsufficientTrainingRows(
            f"{int(train.sum())} complete rows; at least 2 are needed")
    fill = ~mask & feat_ok
    X = frame.matrix(features)
    model = fit_forest(X[train], frame.values[target][train],
                       with_seed(hyper, seed), feature_names=features)
    values = frame.values[target].copy()
    new_mask = mask.copy()
    if fill.any():
        values[fill] = model.predict(X[fill])
        new_mask[fill] = True
    out = frame.with_column(target, values, new_mask)
    return HybridFrame(out, target, _tags(mask, fill, ModelBased.name), ModelBased.name)


def impute(frame: ObservationFrame, target: str, strategy) -> HybridFrame:
    """Apply one strategy to ``target``; see the module docstring."""
    if target not in frame.values:
        raise UnknownColumn(f"unknown column {target!r}")
    mask = frame.mask[target]
    name = strategy.name
    if isinstance(strategy, Passthrough):
        return HybridFrame(frame, target, _tags(mask, mask, name), name)
    if isinstance(strategy, DropMissing):
        out = complete_rows(frame, [target])
        return HybridFrame(out, target, (REAL,) * len(out), name)
    if isinstance(strategy, ModelBased):
        return model_based_impute(frame, target, strategy.features,
                                  strategy.hyper, strategy.seed)
    values = frame.values[target]
    if isinstance(strategy, GlobalMean):
        filled = global_mean_impute(values, mask)
    elif isinstance(strategy, MonteCarlo):
        filled = monte_carlo_impute(values, mask, strategy.draws, strategy.seed)
    else:
        raise ValidationError("strategy", f"unknown strategy {strategy!r}")
    out = frame.with_column(target, filled, np.ones(len(frame), dtype=bool))
    return HybridFrame(out, target, _tags(mask, ~mask, name), name)
