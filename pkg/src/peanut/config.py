"""Run configuration files (YAML).

A config either lists tracker ``sources`` to ingest or points at an existing
canonical ``frame`` document::

    sources:
      - path: affinity_daily.csv
        frequency: daily
        date_columns: [year, month, day]
        missing_token: "."
        columns:
          spend_all: {name: daily_spend_19_all, role: feature}
      - path: womply_weekly.csv
        frequency: weekly
        columns:
          merchants_all: {name: merchants_all, role: target}
    response: daily_spend_19_all
    regressors: [merchants_all]
    models: [1, 2, 3, 4, 5]
    learner: forest
    forest: {n_trees: 100, max_features: all}
    draws: 100
    folds: 5
    seed: 42
    output: out

Relative paths resolve against the config file's directory.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .errors import ParseError, ValidationError
from .evaluate import ForestLearner, ModelConfig, OlsLearner
from .forest import ForestHyper
from .impute import DropMissing, GlobalMean, ModelBased, MonteCarlo, Passthrough
from .ingest import ColumnMap, SourceSpec, load_sources, read_frame
from .rng import derive

_KNOWN = {"sources", "frame", "target", "response", "regressors", "features", "models",
          "learner", "forest", "imputer_forest", "draws", "folds", "seed", "output"}
_HYPER_FIELDS = {f.name for f in fields(ForestHyper)} - {"seed"}


@dataclass
class RunConfig:
    sources: list = field(default_factory=list)
    frame: Path | None = None
    target: str | None = None
    response: str | None = None
    regressors: list | None = None
    features: list | None = None
    models: list = field(default_factory=lambda: [1, 2, 3, 4, 5])
    learner: str = "forest"
    forest: ForestHyper = field(default_factory=ForestHyper)
    imputer_forest: ForestHyper = field(default_factory=ForestHyper)
    draws: int = 100
    folds: int = 5
    seed: int | None = None
    output: Path = Path("out")

    @property
    def randomized(self):
        return self.learner == "forest" or any(m in (4, 5) for m in self.models)

    def load_frame(self):
        if self.frame is not None:
            return read_frame(self.frame)
        return load_sources(self.sources)

    def model_configs(self):
        learner = ForestLearner(self.forest) if self.learner == "forest" else OlsLearner()
        seed = 0 if self.seed is None else self.seed
        make = {
            1: lambda: Passthrough(),
            2: lambda: DropMissing(),
            3: lambda: GlobalMean(),
            4: lambda: MonteCarlo(derive(seed, 4), self.draws),
            5: lambda: ModelBased(derive(seed, 5), self.features, self.imputer_forest),
        }
        return [ModelConfig(m, make[m](), learner) for m in self.models]

    def validate(self):
        if not self.sources and self.frame is None:
            raise ValidationError("sources", "give either sources or frame")
        if self.sources and self.frame is not None:
            raise ValidationError("frame", "give either sources or frame, not both")
        if not isinstance(self.folds, int) or self.folds < 2:
            raise ValidationError("folds", f"must be an integer >= 2, got {self.folds!r}")
        if not isinstance(self.draws, int) or self.draws < 1:
            raise ValidationError("draws", f"must be an integer >= 1, got {self.draws!r}")
        if self.learner not in ("forest", "ols"):
            raise ValidationError("learner", f"unknown learner {self.learner!r}")
        bad = [m for m in self.models if m not in (1, 2, 3, 4, 5)]
        if bad or len(set(self.models)) != len(self.models):
            raise ValidationError("models", f"expected distinct ids from 1-5, got {self.models}")
        if self.seed is None and self.randomized:
            raise ValidationError("seed", "a seed is required for randomized steps")
        if self.seed is not None and (not isinstance(self.seed, int) or self.seed < 0):
            raise ValidationError("seed", f"must be a non-negative integer, got {self.seed!r}")
        for path in [s.path for s, _ in self.sources] + ([self.frame] if self.frame else []):
            if not Path(path).exists():
                raise ValidationError("sources", f"file not found: {path}")
        return self


def _hyper(raw, name):
    if raw is None:
        return ForestHyper()
    if not isinstance(raw, dict):
        raise ValidationError(name, "expected a mapping")
    unknown = set(raw) - _HYPER_FIELDS
    if unknown:
        raise ValidationError(f"{name}.{sorted(unknown)[0]}", "unknown setting")
    try:
        return ForestHyper(**raw)
    except ValidationError as exc:
        raise ValidationError(f"{name}.{exc.field}", str(exc).split(": ", 1)[1]) from None
    except TypeError as exc:
        raise ValidationError(name, str(exc)) from None


def _source(raw, i, base):
    where = f"sources[{i}]"
    if not isinstance(raw, dict):
        raise ValidationError(where, "expected a mapping")
    for key in ("path", "columns"):
        if key not in raw:
            raise ValidationError(f"{where}.{key}", "required")
    cols = raw["columns"]
    if not isinstance(cols, dict) or not cols:
        raise ValidationError(f"{where}.columns", "expected a non-empty mapping")
    mapping = {}
    for src, spec in cols.items():
        if not isinstance(spec, dict) or "name" not in spec:
            raise ValidationError(f"{where}.columns.{src}", "expected {name, role}")
        mapping[str(src)] = (str(spec["name"]), spec.get("role", "feature"))
    try:
        cmap = ColumnMap(mapping, str(raw.get("missing_token", ".")),
                         bool(raw.get("allow_scientific", False)))
        spec = SourceSpec(base / raw["path"],
                          raw.get("date_columns", ("year", "month", "day")),
                          raw.get("frequency", "daily"))
    except ValidationError as exc:
        raise ValidationError(f"{where}.{exc.field}", str(exc).split(": ", 1)[1]) from None
    except ValueError as exc:
        raise ValidationError(where, str(exc)) from None
    return spec, cmap


def parse_config(raw, base=Path(".")) -> RunConfig:
    if not isinstance(raw, dict):
        raise ValidationError("config", "top level must be a mapping")
    unknown = set(raw) - _KNOWN
    if unknown:
        raise ValidationError(sorted(unknown)[0], "unknown field")
    base = Path(base)
    cfg = RunConfig()
    cfg.sources = [_source(s, i, base) for i, s in enumerate(raw.get("sources") or [])]
    if raw.get("frame") is not None:
        cfg.frame = base / raw["frame"]
    for key in ("target", "response"):
        if raw.get(key) is not None:
            setattr(cfg, key, str(raw[key]))
    for key in ("regressors", "features"):
        if raw.get(key) is not None:
            if not isinstance(raw[key], list):
                raise ValidationError(key, "expected a list")
            setattr(cfg, key, [str(v) for v in raw[key]])
    if "models" in raw:
        if not isinstance(raw["models"], list):
            raise ValidationError("models", "expected a list of model ids")
        cfg.models = raw["models"]
    for key in ("learner", "draws", "folds", "seed"):
        if key in raw:
            setattr(cfg, key, raw[key])
    cfg.forest = _hyper(raw.get("forest"), "forest")
    cfg.imputer_forest = (_hyper(raw["imputer_forest"], "imputer_forest")
                          if "imputer_forest" in raw else cfg.forest)
    cfg.output = base / raw.get("output", "out")
    return cfg


def load_config(path, overrides=None) -> RunConfig:
    """Read and validate a config file; errors name the first offending field.

    ``overrides`` (e.g. command-line ``folds``/``seed``/``output``) replace
    file values before validation.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ValidationError("config", f"file not found: {path}") from None
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(str(getattr(exc, "problem", exc)),
                         mark.line + 1 if mark is not None else None) from None
    cfg = parse_config(raw or {}, path.parent)
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    return cfg.validate()
