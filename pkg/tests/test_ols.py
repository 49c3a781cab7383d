import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from peanut.errors import DimensionMismatch, InvalidDf, LengthMismatch, ProbOutOfRange, RankDeficient, TooFewRows
from peanut.ols import OlsFit, betainc_reg, fit_ols, render_ols_table, t_quantile, t_sf2

from oracles import normal_sf2, ols_normal_equations, t_sf2_series


def test_exact_line():
    f = fit_ols([0, 1, 2], [1, 3, 5])
    assert f.coef == pytest.approx([1.0, 2.0], abs=1e-12)
    assert f.rss == pytest.approx(0.0, abs=1e-24)
    assert f.r2 == pytest.approx(1.0)


def test_symmetric_points():
    f = fit_ols([0, 1, 2], [0, 1, 0])
    assert f.coef[1] == pytest.approx(0.0, abs=1e-15)
    assert f.coef[0] == pytest.approx(1 / 3, abs=1e-15)
    assert f.df == 1 and f.n == 3


def test_errors():
    with pytest.raises(DimensionMismatch):
        fit_ols([1, 2, 3], [1, 2])
    with pytest.raises(TooFewRows):
        fit_ols([1, 2], [1, 2])
    with pytest.raises(RankDeficient):
        x = np.arange(10.0)
        fit_ols(np.column_stack([x, 2 * x]), np.arange(10.0) ** 2)
    with pytest.raises(RankDeficient):
        fit_ols(np.ones(10), np.arange(10.0))


def random_problem(rng, n, k):
    X = rng.normal(size=(n, k)) * rng.uniform(0.1, 10, size=k)
    y = X @ rng.normal(size=k) + rng.normal() + rng.normal(size=n)
    return X, y


def test_matches_normal_equations():
    rng = np.random.default_rng(7)
    for _ in range(20):
        X, y = random_problem(rng, 30, 2)
        f = fit_ols(X, y)
        beta, se, t, p = ols_normal_equations(X, y)
        np.testing.assert_allclose(f.coef, beta, rtol=1e-10)
        np.testing.assert_allclose(f.se, se, rtol=1e-10)
        np.testing.assert_allclose(f.p, p, rtol=1e-8, atol=1e-14)


def test_inference_invariants():
    rng = np.random.default_rng(3)
    X, y = random_problem(rng, 40, 2)
    f = fit_ols(X, y)
    np.testing.assert_allclose(f.t, f.coef / f.se)
    q = t_quantile(0.975, f.df)
    np.testing.assert_allclose(f.coef - f.ci_low, q * f.se)
    np.testing.assert_allclose(f.ci_high - f.coef, q * f.se)
    assert ((0 <= f.p) & (f.p <= 1)).all()


def test_residual_orthogonality():
    rng = np.random.default_rng(4)
    X, y = random_problem(rng, 50, 3)
    f = fit_ols(X, y)
    A = np.column_stack([np.ones(50), X])
    r = y - f.predict(X)
    assert np.abs(A.T @ r).max() <= 1e-8 * np.abs(A).max() * np.abs(y).max() * 50


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-100, 100), st.floats(0.01, 100))
def test_shift_and_scale_invariance(seed, c, s):
    rng = np.random.default_rng(seed)
    X, y = random_problem(rng, 25, 2)
    base = fit_ols(X, y)
    shifted = fit_ols(X, y + c)
    assert shifted.coef[0] == pytest.approx(base.coef[0] + c, rel=1e-9, abs=1e-9)
    np.testing.assert_allclose(shifted.coef[1:], base.coef[1:], rtol=1e-8, atol=1e-10)
    Xs = X.copy()
    Xs[:, 0] *= s
    scaled = fit_ols(Xs, y)
    assert scaled.coef[1] == pytest.approx(base.coef[1] / s, rel=1e-10)
    assert scaled.se[1] == pytest.approx(base.se[1] / s, rel=1e-10)
    assert scaled.t[1] == pytest.approx(base.t[1], rel=1e-10)
    assert scaled.p[1] == pytest.approx(base.p[1], rel=1e-10, abs=1e-300)


# -- t distribution ----------------------------------------------------------

def test_t_sf2_at_zero():
    assert t_sf2(0.0, 5) == 1.0


def test_t_sf2_table_value():
    assert t_sf2(2.228, 10) == pytest.approx(0.0500, abs=0.0005)


def test_t_sf2_normal_limit():
    assert t_sf2(1.96, 10**6) == pytest.approx(normal_sf2(1.96), abs=1e-6)
    assert t_sf2(1.96, 10**6) == pytest.approx(0.05, abs=1e-4)


@pytest.mark.parametrize("df", [1, 2, 3, 4, 5, 7, 10, 15, 30])
@pytest.mark.parametrize("t", [0.01, 0.5, 1.0, 2.0, 3.5, 8.0, 40.0])
def test_t_sf2_against_series(t, df):
    assert t_sf2(t, df) == pytest.approx(t_sf2_series(t, df), abs=1e-10)


def test_t_sf2_invalid_df():
    with pytest.raises(InvalidDf):
        t_sf2(1.0, 0)


def test_betainc_symmetry():
    for a, b, x in [(2.0, 3.0, 0.3), (0.5, 7.0, 0.9), (50.0, 0.5, 0.99)]:
        assert betainc_reg(a, b, x) + betainc_reg(b, a, 1 - x) == pytest.approx(1.0, abs=1e-13)


def test_t_quantile_values():
    assert t_quantile(0.5, 3) == 0.0
    assert t_quantile(0.975, 10) == pytest.approx(2.228, abs=0.001)
    assert t_quantile(0.975, 10**6) == pytest.approx(1.960, abs=0.001)
    assert t_quantile(0.025, 10) == pytest.approx(-t_quantile(0.975, 10))


def test_t_quantile_errors():
    with pytest.raises(ProbOutOfRange):
        t_quantile(1.0, 5)
    with pytest.raises(InvalidDf):
        t_quantile(0.9, 0.5)


@given(st.floats(0.5, 0.9999), st.integers(1, 500))
def test_t_quantile_round_trip(p, df):
    q = t_quantile(p, df)
    assert 1 - t_sf2(q, df) / 2 == pytest.approx(p, abs=1e-8)


# -- table rendering ---------------------------------------------------------

def fit_from_table(names, coef, t, df):
    """An OlsFit rebuilt from a published table's coef and t columns."""
    coef = np.array(coef)
    t = np.array(t)
    se = coef / t
    q = t_quantile(0.975, df)
    p = np.array([t_sf2(v, df) for v in t])
    return OlsFit(tuple(names), coef, se, t, p, coef - q * se, coef + q * se,
                  df + 2, df, math.nan, math.nan, math.nan)


def rows(text):
    return [" ".join(line.split()) for line in text.splitlines()]


# n = 109 complete rows -> df 107; n = 1253 rows -> df 1251
@pytest.mark.parametrize("coef,t,df,expected", [
    ([0.0582, 1.6710], [3.369, 8.430], 107,
     ["const 0.0582*** 0.017 3.369 0.001 0.024 0.092",
      "merchants_all 1.6710*** 0.198 8.430 0.000 1.278 2.064"]),
    ([0.3737, 1.6710], [16.473, 4.382], 1251,
     ["const 0.3737*** 0.023 16.473 0.000 0.329 0.418",
      "merchants_all 1.6710*** 0.381 4.382 0.000 0.923 2.419"]),
    ([0.3302, 4.2133], [51.379, 25.588], 1251,
     ["const 0.3302*** 0.006 51.379 0.000 0.318 0.343",
      "merchants_all 4.2133*** 0.165 25.588 0.000 3.890 4.536"]),
])
def test_published_tables_reproduce(coef, t, df, expected):
    fit = fit_from_table(["const", "merchants_all"], coef, t, df)
    body = rows(render_ols_table(fit))
    for line in expected:
        assert line in body


def test_zero_coefficient_row():
    f = fit_ols([0, 1, 2, 3, 4], [1, -1, 0, -1, 1])
    f = OlsFit(f.names, np.array([f.coef[0], 0.0]), f.se, np.array([f.t[0], 0.0]),
               np.array([f.p[0], 1.0]), f.ci_low, f.ci_high, f.n, f.df, f.r2, f.sigma2, f.rss)
    line = rows(render_ols_table(f))[4]
    assert line.split()[1] == "0.0000"
    assert line.split()[4] == "1.000"


def test_render_label_mismatch():
    f = fit_ols([0, 1, 2], [0, 1, 0])
    with pytest.raises(LengthMismatch):
        render_ols_table(f, names=["a"])


def test_to_dict_fields():
    d = fit_ols([0, 1, 2, 3], [0, 1, 1, 3]).to_dict()
    assert set(d) >= {"coef", "se", "t", "p", "ci_low", "ci_high", "n", "df", "r2", "sigma2"}
