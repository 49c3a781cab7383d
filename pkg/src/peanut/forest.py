"""CART regression trees and bootstrap-aggregated random forests.

Split search is greedy variance reduction over midpoints between consecutive
distinct feature values; ties go to the lowest feature index, then the lowest
threshold. Tree ``i`` of a forest draws its bootstrap sample and its per-node
feature subsets from a stream keyed by ``(seed, i)``, so the fitted model does
not depend on the order (or thread) in which trees are grown.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import _cart
from .errors import EmptyInput, FeatureCountMismatch, MissingValuesPresent, ValidationError
from .rng import Stream, derive

THREADS_ENV = "PEANUT_THREADS"


def worker_count():
    """Worker cap from ``PEANUT_THREADS`` (unset or 0 means one per CPU)."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(THREADS_ENV, f"not an integer: {raw!r}") from None
    if n < 0:
        raise ValidationError(THREADS_ENV, "must be >= 0")
    return n or (os.cpu_count() or 1)


@dataclass(frozen=True)
class ForestHyper:
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_leaf: int = 1
    min_samples_split: int = 2
    max_features: int | str = "all"
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValidationError("n_trees", "must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ValidationError("max_depth", "must be >= 0 or None")
        if self.min_samples_leaf < 1:
            raise ValidationError("min_samples_leaf", "must be >= 1")
        if self.min_samples_split < 2:
            raise ValidationError("min_samples_split", "must be >= 2")
        mf = self.max_features
        if isinstance(mf, str):
            if mf not in ("all", "sqrt"):
                raise ValidationError("max_features", f"unknown setting {mf!r}")
        elif int(mf) < 1:
            raise ValidationError("max_features", "must be >= 1")

    def n_candidates(self, p):
        if self.max_features == "all":
            return p
        if self.max_features == "sqrt":
            return max(1, int(math.isqrt(p)))
        return min(int(self.max_features), p)


@dataclass(frozen=True)
class Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self):
        return len(self.feature)

    @property
    def depth(self):
        depth = np.zeros(self.n_nodes, dtype=int)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def predict(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _cart.predict_tree(self.feature, self.threshold, self.left,
                                  self.right, self.value, X)

    def to_dict(self):
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(np.asarray(d["feature"], dtype=np.int64),
                   np.asarray(d["threshold"], dtype=np.float64),
                   np.asarray(d["left"], dtype=np.int64),
                   np.asarray(d["right"], dtype=np.int64),
                   np.asarray(d["value"], dtype=np.float64))


def _check_xy(X, y):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] == 0:
        raise EmptyInput("no training rows")
    if X.shape[0] != y.shape[0]:
        raise FeatureCountMismatch(f"X has {X.shape[0]} rows, y has {y.shape[0]}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise MissingValuesPresent("training data")
    return X, y


def _canonical(X, y):
    # row order fixed by the data alone, so permuted inputs grow the same tree
    keys = [y] + [X[:, j] for j in range(X.shape[1] - 1, -1, -1)]
    order = np.lexsort(keys)
    return np.ascontiguousarray(X[order]), np.ascontiguousarray(y[order])


def fit_tree(X, y, hyper: ForestHyper = ForestHyper(), key=0) -> Tree:
    """Grow one tree on all rows of ``(X, y)``; ``key`` seeds feature subsetting."""
    X, y = _check_xy(X, y)
    X, y = _canonical(X, y)
    depth = -1 if hyper.max_depth is None else hyper.max_depth
    arrays = _cart.grow_tree(X, y, depth, hyper.min_samples_leaf,
                             hyper.min_samples_split,
                             hyper.n_candidates(X.shape[1]), np.uint64(key))
    return Tree(*arrays)


def _fit_one(X, y, hyper, i):
    key = derive(hyper.seed, i)
    if hyper.bootstrap:
        rows = Stream(key).integers(len(y), len(y))
        X, y = X[rows], y[rows]
    return fit_tree(X, y, hyper, derive(key, 1))


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    hyper: ForestHyper
    feature_names: tuple
    y_min: float
    y_max: float

    @property
    def n_features(self):
        return len(self.feature_names)

    def predict(self, X):
        return predict(self, X)

    def to_dict(self):
        return {
            "hyper": asdict(self.hyper),
            "feature_names": list(self.feature_names),
            "y_min": self.y_min,
            "y_max": self.y_max,
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(Tree.from_dict(t) for t in d["trees"]),
                   ForestHyper(**d["hyper"]), tuple(d["feature_names"]),
                   float(d["y_min"]), float(d["y_max"]))


def fit_forest(X, y, hyper: ForestHyper = ForestHyper(), feature_names=None,
               threads=None) -> ForestModel:
    """Fit ``hyper.n_trees`` trees, in parallel when ``threads`` allows.

    The result is identical for every thread count.
    """
    X, y = _check_xy(X, y)
    if len(y) < 2:
        raise EmptyInput("a forest needs at least 2 training rows")
    if feature_names is None:
        feature_names = [f"x{i + 1}" for i in range(X.shape[1])]
    if len(feature_names) != X.shape[1]:
        raise FeatureCountMismatch(
            f"{len(feature_names)} names for {X.shape[1]} features")
    threads = worker_count() if threads is None else threads
    work = range(hyper.n_trees)
    if threads > 1 and hyper.n_trees > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trees = list(pool.map(lambda i: _fit_one(X, y, hyper, i), work))
    else:
        trees = [_fit_one(X, y, hyper, i) for i in work]
    return ForestModel(tuple(trees), hyper, tuple(feature_names),
                       float(y.min()), float(y.max()))


def predict(model: ForestModel, X) -> np.ndarray:
    """Mean of the per-tree predictions, summed in tree order."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[1] != model.n_features:
        raise FeatureCountMismatch(
            f"model has {model.n_features} features, input has {X.shape[1]}")
    X = np.ascontiguousarray(X)
    n = X.shape[0]
    total = np.zeros(n)
    lo = np.full(n, np.inf)
    hi = np.full(n, -np.inf)
    for tree in model.trees:
        _cart.accumulate(total, lo, hi, tree.predict(X))
    # when all trees agree the clip returns that value exactly
    return np.clip(total / len(model.trees), lo, hi)


def with_seed(hyper: ForestHyper, seed) -> ForestHyper:
    return replace(hyper, seed=int(seed))
