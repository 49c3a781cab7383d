"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or configuration error. Every
failure writes one line ``peanut: error: <Kind>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import describe as desc
from .config import load_config
from .errors import PeanutError
from .evaluate import render_report, run_benchmark
from .forest import ForestHyper, fit_forest
from .frame import complete_rows, target_column
from .impute import DropMissing, GlobalMean, ModelBased, MonteCarlo, Passthrough, impute
from .ingest import dumps, read_frame, write_frame
from .ols import fit_ols, render_ols_table
from .simulate import AR1, Linear, Nonlinear, SimulationSpec, generate

PROG = "peanut"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _columns(text):
    return [c.strip() for c in text.split(",") if c.strip()]


def _max_features(text):
    return text if text in ("all", "sqrt") else int(text)


def _add_forest_flags(p):
    p.add_argument("--n-trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-samples-leaf", type=int, default=1)
    p.add_argument("--min-samples-split", type=int, default=2)
    p.add_argument("--max-features", type=_max_features, default="all",
                   help="all, sqrt, or a count")
    p.add_argument("--no-bootstrap", action="store_true")


def _hyper(args, seed=0):
    return ForestHyper(n_trees=args.n_trees, max_depth=args.max_depth,
                       min_samples_leaf=args.min_samples_leaf,
                       min_samples_split=args.min_samples_split,
                       max_features=args.max_features,
                       bootstrap=not args.no_bootstrap, seed=seed)


def _emit(text, out=None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def build_parser():
    parser = _Parser(prog=PROG, description="Missing-data imputation benchmark toolkit.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse tracker CSVs into a canonical frame")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("describe", help="descriptive statistics and missingness")
    p.add_argument("frame")
    p.add_argument("--columns", type=_columns)
    p.add_argument("--json", action="store_true")
    p.add_argument("--scatter", metavar="COLUMN", help="export observed (date, value) points")
    p.add_argument("--out")

    p = sub.add_parser("impute", help="apply one imputation strategy")
    p.add_argument("frame")
    p.add_argument("--strategy", required=True,
                   choices=["passthrough", "drop", "mean", "mc", "model"])
    p.add_argument("--target")
    p.add_argument("--draws", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--features", type=_columns)
    _add_forest_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit-ols", help="OLS regression table")
    p.add_argument("frame")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True, type=_columns)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("train-forest", help="fit a random forest and save it")
    p.add_argument("frame")
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True, type=_columns)
    p.add_argument("--seed", type=int, required=True)
    _add_forest_flags(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("bench", help="run the five-model benchmark")
    p.add_argument("--config", required=True)
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="generate a ground-truth scenario")
    p.add_argument("--n-days", type=int, default=1253)
    p.add_argument("--relation", choices=["linear", "tanh", "sine"], default="tanh")
    p.add_argument("--intercept", type=float, default=0.0)
    p.add_argument("--slope", type=float, default=1.0)
    p.add_argument("--level", type=float, default=Nonlinear.level)
    p.add_argument("--amplitude", type=float, default=Nonlinear.amplitude)
    p.add_argument("--rate", type=float, default=Nonlinear.rate)
    p.add_argument("--center", type=float, default=Nonlinear.center)
    p.add_argument("--phi", type=float, default=AR1.phi)
    p.add_argument("--feature-noise", type=float, default=AR1.noise_sd)
    p.add_argument("--feature-mean", type=float, default=AR1.mean)
    p.add_argument("--noise", type=float, default=SimulationSpec.target_noise_sd)
    p.add_argument("--period", type=int, default=7)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def cmd_ingest(args):
    cfg = load_config(args.config)
    write_frame(cfg.load_frame(), args.out)


def cmd_describe(args):
    frame = read_frame(args.frame)
    if args.scatter:
        points = desc.scatter_export(frame, args.scatter)
        _emit(dumps([list(p) for p in points]), args.out)
        return
    stats = desc.descriptive_stats(frame, args.columns)
    summary = desc.missingness_summary(frame)
    if args.json:
        doc = {"stats": desc.stats_to_dict(stats),
               "missingness": desc.missingness_to_dict(summary)}
        _emit(dumps(doc), args.out)
    else:
        _emit(desc.render_stats_table(stats) + "\n\n"
              + desc.render_missingness_table(summary), args.out)


def _strategy(args, frame, target):
    name = args.strategy
    if name in ("mc", "model") and args.seed is None:
        raise UsageError(f"--strategy {name} requires --seed")
    if name == "passthrough":
        return Passthrough()
    if name == "drop":
        return DropMissing()
    if name == "mean":
        return GlobalMean()
    if name == "mc":
        return MonteCarlo(args.seed, args.draws)
    return ModelBased(args.seed, args.features, _hyper(args))


def cmd_impute(args):
    frame = read_frame(args.frame)
    target = args.target or target_column(frame)
    hybrid = impute(frame, target, _strategy(args, frame, target))
    write_frame(hybrid.frame, args.out, hybrid.provenance_dict())


def cmd_fit_ols(args):
    frame = complete_rows(read_frame(args.frame), [args.y, *args.x])
    fit = fit_ols(frame.matrix(args.x), frame.values[args.y], names=args.x)
    _emit(dumps(fit.to_dict()) if args.json else render_ols_table(fit), args.out)


def cmd_train_forest(args):
    frame = complete_rows(read_frame(args.frame), [args.y, *args.x])
    model = fit_forest(frame.matrix(args.x), frame.values[args.y],
                       _hyper(args, args.seed), feature_names=args.x)
    _emit(dumps(model.to_dict()), args.out)


def cmd_bench(args):
    overrides = {"folds": args.folds, "seed": args.seed,
                 "output": Path(args.out) if args.out else None}
    cfg = load_config(args.config, overrides)
    frame = cfg.load_frame()
    report = run_benchmark(frame, cfg.model_configs(), cfg.folds,
                           0 if cfg.seed is None else cfg.seed, target=cfg.target,
                           response=cfg.response, regressors=cfg.regressors)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.txt").write_text(render_report(report), encoding="utf-8")
    (out / "report.json").write_text(dumps(report.to_dict()), encoding="utf-8")
    for r in report.results:
        if r.ols is not None:
            (out / f"model_{r.config.id}_ols.txt").write_text(
                render_ols_table(r.ols, title=f"Model {r.config.id}") + "\n",
                encoding="utf-8")
    sys.stdout.write(render_report(report))


def cmd_simulate(args):
    if args.relation == "linear":
        relation = Linear(args.intercept, args.slope)
    else:
        relation = Nonlinear(args.relation, args.level, args.amplitude, args.rate, args.center)
    spec = SimulationSpec(n_days=args.n_days, relation=relation,
                          feature_process=AR1(args.phi, args.feature_noise, args.feature_mean),
                          target_noise_sd=args.noise, weekly_period=args.period,
                          seed=args.seed)
    truth = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_frame(truth.full, out / "full.json")
    write_frame(truth.masked, out / "masked.json")
    (out / "spec.json").write_text(dumps(spec.to_dict()), encoding="utf-8")


COMMANDS = {
    "ingest": cmd_ingest,
    "describe": cmd_describe,
    "impute": cmd_impute,
    "fit-ols": cmd_fit_ols,
    "train-forest": cmd_train_forest,
    "bench": cmd_bench,
    "simulate": cmd_simulate,
}


def _fail(kind, message, code):
    message = " ".join(str(message).split())
    sys.stderr.write(f"{PROG}: error: {kind}: {message}\n")
    return code


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(f"{PROG}: a subcommand is required")
        COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        sys.stderr.write(parser.format_usage())
        return _fail("UsageError", exc, 1)
    except (PeanutError, FileNotFoundError) as exc:
        return _fail(type(exc).__name__, exc, 2)
    except (ValueError, json.JSONDecodeError) as exc:
        return _fail(type(exc).__name__, exc, 2)
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
