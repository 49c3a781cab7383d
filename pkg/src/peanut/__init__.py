"""Benchmarking missing-data imputation strategies for daily economic series.

Five versions of a dataset (raw, complete-case, mean-imputed, Monte Carlo
imputed, random-forest imputed) are built from one frame, then compared with
OLS tables and cross-validated random-forest errors.
"""

from .describe import descriptive_stats, missingness_summary, scatter_export
from .evaluate import (
    BenchmarkReport,
    ForestLearner,
    Metrics,
    ModelConfig,
    OlsLearner,
    cross_validate,
    kfold_split,
    metrics,
    standard_configs,
    render_report,
    run_benchmark,
)
from .forest import ForestHyper, ForestModel, fit_forest, fit_tree, predict
from .frame import (
    CalendarDate,
    ObservationFrame,
    Role,
    align_weekly_to_daily,
    build_frame,
    complete_rows,
)
from .impute import (
    DropMissing,
    GlobalMean,
    HybridFrame,
    ModelBased,
    MonteCarlo,
    Passthrough,
    global_mean_impute,
    impute,
    model_based_impute,
    monte_carlo_impute,
)
from .ingest import ColumnMap, SourceSpec, merge_sources, parse_tracker_csv, read_frame, write_frame
from .ols import OlsFit, fit_ols, render_ols_table, t_quantile, t_sf2
from .simulate import AR1, Linear, Nonlinear, SimulationSpec, generate, imputation_rmse

__version__ = "0.1.0"
