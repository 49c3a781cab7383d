import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peanut.errors import InsufficientTrainingRows, NoObservedValues, UnknownColumn, ValidationError
from peanut.forest import ForestHyper
from peanut.frame import Role, build_frame
from peanut.impute import (
    REAL,
    DropMissing,
    GlobalMean,
    ModelBased,
    MonteCarlo,
    Passthrough,
    global_mean_impute,
    impute,
    monte_carlo_impute,
)
from peanut.ols import fit_ols
from peanut.simulate import SimulationSpec, generate, imputation_rmse

from conftest import days

SMALL_FOREST = ForestHyper(n_trees=20)


def two_column_frame(x, y):
    return build_frame(days(dt.date(2021, 1, 1), len(x)), {"x": x, "y": y},
                       {"x": Role.FEATURE, "y": Role.TARGET})


def test_passthrough_identity(small_frame):
    h = impute(small_frame, "x", Passthrough())
    assert h.frame is small_frame
    assert h.provenance == (REAL, None, REAL)
    assert h.n_synthetic == 0 and h.n_missing == 1


def test_drop_missing(small_frame):
    h = impute(small_frame, "x", DropMissing())
    assert len(h.frame) == 2
    assert h.frame.observed("x").tolist() == [1.0, 3.0]
    assert h.provenance == (REAL, REAL)


def test_global_mean(small_frame):
    h = impute(small_frame, "x", GlobalMean())
    assert h.frame.values["x"].tolist() == [1.0, 2.0, 3.0]
    assert h.frame.mask["x"].all()
    assert h.provenance == (REAL, "synthetic:mean", REAL)


def test_unknown_target(small_frame):
    with pytest.raises(UnknownColumn):
        impute(small_frame, "nope", GlobalMean())


def test_all_missing():
    with pytest.raises(NoObservedValues):
        global_mean_impute([np.nan, np.nan], [False, False])
    with pytest.raises(NoObservedValues):
        monte_carlo_impute([1.0, np.nan], [True, False], 10, 0)


def test_monte_carlo_constant_column():
    v = np.array([0.25, np.nan, 0.25, np.nan, 0.25])
    m = ~np.isnan(v)
    out = monte_carlo_impute(v, m, 100, 7)
    assert (out == 0.25).all()


def test_monte_carlo_concentrates():
    rng = np.random.default_rng(0)
    v = rng.normal(5, 2, 400)
    m = np.ones(400, dtype=bool)
    m[::4] = False
    out = monte_carlo_impute(v, m, 1000, 3)
    obs = v[m]
    filled = out[~m]
    # each cell averages 1000 draws: spread ~ std / sqrt(1000)
    assert abs(filled.mean() - obs.mean()) < 0.05
    assert filled.std() == pytest.approx(obs.std(ddof=1) / np.sqrt(1000), rel=0.2)


def test_monte_carlo_single_draw_spread():
    rng = np.random.default_rng(1)
    v = rng.normal(0, 3, 2000)
    m = np.zeros(2000, dtype=bool)
    m[:1000] = True
    filled = monte_carlo_impute(v, m, 1, 5)[~m]
    assert filled.std() == pytest.approx(v[m].std(ddof=1), rel=0.1)


def test_monte_carlo_cells_independent():
    v = np.arange(10.0)
    m = np.ones(10, dtype=bool)
    m[[3, 6]] = False
    a = monte_carlo_impute(v, m, 50, 11)
    m2 = m.copy()
    m2[8] = False
    b = monte_carlo_impute(v, m2, 50, 11)
    # cell 3 uses stream (seed, 3) in both runs; only the observed stats moved
    za = (a[3] - v[m].mean()) / v[m].std(ddof=1)
    zb = (b[3] - v[m2].mean()) / v[m2].std(ddof=1)
    assert za == pytest.approx(zb, rel=1e-12)


def test_monte_carlo_determinism():
    v = np.array([1.0, np.nan, 2.0, 4.0, np.nan])
    m = ~np.isnan(v)
    assert np.array_equal(monte_carlo_impute(v, m, 20, 1), monte_carlo_impute(v, m, 20, 1))
    assert not np.array_equal(monte_carlo_impute(v, m, 20, 1), monte_carlo_impute(v, m, 20, 2))


def test_invalid_strategies():
    with pytest.raises(ValidationError):
        MonteCarlo(0, draws=0)
    with pytest.raises(ValidationError):
        ModelBased(0, features=[])
    f = two_column_frame([1.0, 2.0, 3.0], [1.0, None, 3.0])
    with pytest.raises(ValidationError):
        impute(f, "y", ModelBased(0, features=["y"]))
    g = two_column_frame([1.0, 2.0, 3.0], [1.0, None, None])
    with pytest.raises(InsufficientTrainingRows):
        impute(g, "y", ModelBased(0))


def masked_strategy():
    return st.sampled_from([GlobalMean(), MonteCarlo(3, 10),
                            ModelBased(4, hyper=ForestHyper(n_trees=3))])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(6, 40), masked_strategy())
def test_observed_cells_preserved(seed, n, strategy):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    y = rng.normal(size=n)
    missing = rng.uniform(size=n) < 0.4
    missing[:2] = False
    f = two_column_frame(x.tolist(), [None if k else v for v, k in zip(y, missing)])
    h = impute(f, "y", strategy)
    obs = f.mask["y"]
    assert np.array_equal(h.frame.values["y"][obs], y[obs])
    assert h.n_synthetic == int(missing.sum())
    assert all(p == REAL for p, o in zip(h.provenance, obs) if o)
    assert h.frame.mask["y"].all()


def test_model_based_all_observed_identity():
    f = two_column_frame([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
    h = impute(f, "y", ModelBased(0))
    assert h.frame == f and h.n_synthetic == 0


def test_model_based_constant_target():
    f = two_column_frame([1.0, 2.0, 3.0, 4.0, 5.0], [0.5, None, 0.5, None, 0.5])
    h = impute(f, "y", ModelBased(1, hyper=SMALL_FOREST))
    assert (h.frame.values["y"] == 0.5).all()


def test_model_based_missing_features_stay_missing():
    f = two_column_frame([1.0, None, 3.0, 4.0, 5.0], [1.0, None, 3.0, None, 5.0])
    h = impute(f, "y", ModelBased(2, hyper=SMALL_FOREST))
    assert h.frame.mask["y"].tolist() == [True, False, True, True, True]
    assert h.provenance[1] is None and h.provenance[3] == "synthetic:model"
    assert h.n_missing == 1


def test_model_based_within_training_range():
    rng = np.random.default_rng(8)
    x = rng.normal(size=60)
    y = 2 * x + rng.normal(size=60)
    cells = [None if i % 3 else v for i, v in enumerate(y)]
    f = two_column_frame((x * 3).tolist(), cells)
    h = impute(f, "y", ModelBased(3, hyper=SMALL_FOREST))
    obs = y[::3]
    filled = h.frame.values["y"][~f.mask["y"]]
    assert filled.min() >= obs.min() and filled.max() <= obs.max()


def test_model_based_beats_mean_on_nonlinear_truth():
    truth = generate(SimulationSpec(seed=0))
    model = impute(truth.masked, truth.target, ModelBased(1))
    mean = impute(truth.masked, truth.target, GlobalMean())
    assert imputation_rmse(truth, model) < imputation_rmse(truth, mean)


def test_global_mean_slope_invariance():
    rng = np.random.default_rng(9)
    x = rng.normal(size=80)
    y = 0.5 + 1.7 * x + rng.normal(size=80)
    miss = rng.uniform(size=80) < 0.5
    cc = fit_ols(x[~miss], y[~miss])
    filled = global_mean_impute(np.where(miss, np.nan, x), ~miss)
    mi = fit_ols(filled, y)
    assert mi.coef[1] == pytest.approx(cc.coef[1], rel=1e-10)
    assert mi.coef[0] != pytest.approx(cc.coef[0], rel=1e-6)
