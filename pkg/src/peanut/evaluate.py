"""Cross-validated metrics and the five-model benchmark.

:func:`run_benchmark` builds one dataset per :class:`ModelConfig`, fits an OLS
table on its complete rows, and cross-validates the config's learner. A
failure in one config becomes an ``NA`` entry carrying the reason; the run
continues with the next config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadK, DataError, EmptyInput, LengthMismatch, MissingValuesPresent, ValidationError
from .forest import ForestHyper, fit_forest, with_seed
from .frame import ObservationFrame, Role, complete_rows, target_column
from .impute import (
    DropMissing,
    GlobalMean,
    HybridFrame,
    ModelBased,
    MonteCarlo,
    Passthrough,
    impute,
)
from .ols import OlsFit, fit_ols, render_ols_table
from .rng import Stream, derive


@dataclass(frozen=True)
class Metrics:
    mae: float
    mse: float
    r2: float

    def to_dict(self):
        return {k: (None if not math.isfinite(v) else float(v))
                for k, v in (("mae", self.mae), ("mse", self.mse), ("r2", self.r2))}


def metrics(y_true, y_pred) -> Metrics:
    """MAE, MSE and out-of-sample R^2 (against the evaluation-set mean).

    R^2 is NaN when the evaluation targets have zero variance.
    """
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"{y_true.shape} targets vs {y_pred.shape} predictions")
    if y_true.size == 0:
        raise EmptyInput("no evaluation rows")
    e = y_true - y_pred
    sse = float(e @ e)
    sst = float(((y_true - y_true.mean()) ** 2).sum())
    r2 = 1.0 - sse / sst if sst > 0 else math.nan
    return Metrics(float(np.abs(e).mean()), sse / len(e), r2)


def kfold_split(n, k, seed):
    """Shuffle ``range(n)`` and cut it into ``k`` folds.

    The first ``n % k`` folds get one extra row. Indices inside a fold are
    sorted.
    """
    if not (isinstance(k, (int, np.integer)) and 2 <= k <= n):
        raise BadK(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = Stream(derive(seed, 0)).permutation(n)
    base, extra = divmod(n, k)
    folds, start = [], 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(np.sort(perm[start:start + size]))
        start += size
    return folds


@dataclass(frozen=True)
class OlsLearner:
    name = "ols"

    def fit(self, X, y, seed):
        return fit_ols(X, y).predict


@dataclass(frozen=True)
class ForestLearner:
    hyper: ForestHyper = field(default_factory=ForestHyper)
    name = "forest"

    def fit(self, X, y, seed):
        return fit_forest(X, y, with_seed(self.hyper, seed)).predict


def _as_frame(frame):
    return frame.frame if isinstance(frame, HybridFrame) else frame


def cross_validate(frame, y, x, learner, k=5, seed=0, per_fold=False):
    """Average fold metrics of ``learner`` predicting ``y`` from columns ``x``.

    Fold ``i`` trains with seed ``derive(seed, i + 1)``. Any missing cell in
    ``y`` or ``x`` raises :class:`MissingValuesPresent`.
    """
    frame = _as_frame(frame)
    x = list(x)
    for col in [y, *x]:
        frame._require(col)
        if not frame.mask[col].all():
            raise MissingValuesPresent(col)
    X = frame.matrix(x)
    target = frame.values[y]
    folds = kfold_split(len(frame), k, seed)
    results = []
    for i, test in enumerate(folds):
        train = np.ones(len(frame), dtype=bool)
        train[test] = False
        predictor = learner.fit(X[train], target[train], derive(seed, i + 1))
        results.append(metrics(target[test], predictor(X[test])))
    mean = Metrics(*(float(np.mean([getattr(m, f) for m in results]))
                     for f in ("mae", "mse", "r2")))
    return (mean, results) if per_fold else mean


# -- benchmark ---------------------------------------------------------------

_STRATEGY_FOR_ID = {1: Passthrough, 2: DropMissing, 3: GlobalMean, 4: MonteCarlo, 5: ModelBased}


@dataclass(frozen=True)
class ModelConfig:
    id: int
    strategy: object
    learner: object = field(default_factory=ForestLearner)

    def __post_init__(self):
        expected = _STRATEGY_FOR_ID.get(self.id)
        if expected is None or not isinstance(self.strategy, expected):
            raise ValidationError(
                "models", f"model {self.id} must use the "
                f"{expected.name if expected else '?'} strategy, got {self.strategy.name}")


def standard_configs(seed, learner=None, draws=100, imputer_hyper=None, features=None):
    """The five standard configs, with strategy seeds derived from ``seed``."""
    learner = ForestLearner() if learner is None else learner
    imputer_hyper = ForestHyper() if imputer_hyper is None else imputer_hyper
    return [
        ModelConfig(1, Passthrough(), learner),
        ModelConfig(2, DropMissing(), learner),
        ModelConfig(3, GlobalMean(), learner),
        ModelConfig(4, MonteCarlo(derive(seed, 4), draws), learner),
        ModelConfig(5, ModelBased(derive(seed, 5), features, imputer_hyper), learner),
    ]


@dataclass
class ModelResult:
    config: ModelConfig
    rows: int = 0
    target_missing: int = 0
    synthetic: int = 0
    ols: OlsFit | None = None
    ols_na: str | None = None
    cv: Metrics | None = None
    cv_na: str | None = None

    def to_dict(self):
        return {
            "id": self.config.id,
            "strategy": self.config.strategy.name,
            "learner": self.config.learner.name,
            "dataset": {"rows": self.rows, "target_missing": self.target_missing,
                        "synthetic": self.synthetic},
            "ols": self.ols.to_dict() if self.ols is not None else None,
            "ols_na": self.ols_na,
            "cv": self.cv.to_dict() if self.cv is not None else None,
            "cv_na": self.cv_na,
        }


@dataclass
class BenchmarkReport:
    seed: int
    folds: int
    target: str
    response: str
    regressors: list
    rows: int
    target_missing: int
    results: list
    caveats: list

    def result(self, model_id):
        return next(r for r in self.results if r.config.id == model_id)

    def to_dict(self):
        return {
            "seed": self.seed, "folds": self.folds, "target": self.target,
            "response": self.response, "regressors": list(self.regressors),
            "input": {"rows": self.rows, "target_missing": self.target_missing},
            "models": [r.to_dict() for r in self.results],
            "caveats": list(self.caveats),
        }


def _reason(exc):
    return f"{type(exc).__name__}: {exc}"


def _default_response(frame, target):
    feats = [c for c in frame.columns_with_role(Role.FEATURE) if c != target]
    if len(feats) != 1:
        raise ValidationError(
            "response", f"cannot infer the response among {feats}; name it explicitly")
    return feats[0]


def run_benchmark(frame: ObservationFrame, configs, k=5, seed=0, *,
                  target=None, response=None, regressors=None) -> BenchmarkReport:
    """Run every config; see the module docstring.

    ``target`` is the column that gets imputed (default: the frame's TARGET
    role), ``regressors`` default to ``[target]`` and ``response`` to the only
    other feature column.
    """
    target = target_column(frame) if target is None else target
    frame._require(target)
    regressors = [target] if regressors is None else list(regressors)
    response = _default_response(frame, target) if response is None else response
    frame._require(response, *regressors)
    if response in regressors:
        raise ValidationError("response", "the response cannot also be a regressor")

    results = []
    caveats = []
    if configs:
        caveats.append(
            "Imputation runs once on the full dataset before cross-validation, so "
            "imputed cells in a test fold were computed with access to training rows.")
    for cfg in configs:
        res = ModelResult(cfg)
        results.append(res)
        try:
            hybrid = impute(frame, target, cfg.strategy)
        except DataError as exc:
            res.ols_na = res.cv_na = _reason(exc)
            continue
        data = hybrid.frame
        res.rows = len(data)
        res.target_missing = hybrid.n_missing
        res.synthetic = hybrid.n_synthetic
        if isinstance(cfg.strategy, ModelBased):
            feats = cfg.strategy.features or [
                c for c in frame.columns_with_role(Role.FEATURE) if c != target]
            if response in feats and target in regressors:
                caveats.append(
                    f"Model {cfg.id} imputes {target} from features that include the "
                    f"response {response}; its regressor is partly a function of the "
                    "response (endogeneity).")
        try:
            cc = complete_rows(data, [response, *regressors])
            res.ols = fit_ols(cc.matrix(regressors), cc.values[response], names=regressors)
        except DataError as exc:
            res.ols_na = _reason(exc)
        try:
            res.cv = cross_validate(data, response, regressors, cfg.learner, k, seed)
        except DataError as exc:
            res.cv_na = _reason(exc)

    return BenchmarkReport(
        seed=seed, folds=k, target=target, response=response, regressors=regressors,
        rows=len(frame), target_missing=int((~frame.mask[target]).sum()),
        results=results, caveats=caveats)


def _num(v, digits):
    return "NA" if v is None or not math.isfinite(v) else f"{v:.{digits}f}"


def render_metrics_table(report: BenchmarkReport) -> str:
    head = f"{'Model':<8}{'Average MAE':>14}{'Average MSE':>14}{'Average R-squared':>20}"
    lines = [head, "-" * len(head)]
    for r in report.results:
        m = r.cv
        lines.append(
            f"{r.config.id:<8}{_num(m and m.mae, 3):>14}{_num(m and m.mse, 3):>14}"
            f"{_num(m and m.r2, 2):>20}")
    return "\n".join(lines)


def render_report(report: BenchmarkReport) -> str:
    out = [
        "Benchmark report",
        f"seed {report.seed}, {report.folds}-fold cross-validation",
        f"response {report.response} ~ {' + '.join(report.regressors)}; "
        f"imputed column {report.target}",
        f"input rows {report.rows}, {report.target} missing {report.target_missing}",
        "",
        "OLS regression results",
    ]
    for r in report.results:
        cfg = r.config
        out.append("")
        out.append(f"Model {cfg.id} ({cfg.strategy.name}): rows {r.rows}, "
                   f"{report.target} missing {r.target_missing}, synthetic {r.synthetic}")
        if r.ols is not None:
            out.append(render_ols_table(r.ols, title=f"Model {cfg.id}"))
        else:
            out.append(f"NA ({r.ols_na})")
    out += ["", "Cross-validated learner results", render_metrics_table(report)]
    notes = [f"Model {r.config.id}: NA ({r.cv_na})" for r in report.results if r.cv is None]
    if notes:
        out += [""] + notes
    if report.caveats:
        out += ["", "Caveats"] + [f"- {c}" for c in report.caveats]
    return "\n".join(out) + "\n"
