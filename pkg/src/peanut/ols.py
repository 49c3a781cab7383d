"""Ordinary least squares with classical inference.

Coefficients come from a QR decomposition of the column-equilibrated design
matrix; Student-t tail probabilities and quantiles are computed here from the
regularized incomplete beta function rather than taken from a stats package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import brentq

from .errors import (
    DimensionMismatch,
    InvalidDf,
    LengthMismatch,
    MissingValuesPresent,
    ProbOutOfRange,
    RankDeficient,
    TooFewRows,
)

RANK_TOL = 1e-12
_EPS = 1e-16
_TINY = 1e-300
_LOG_SQRT_PI = 0.5 * math.log(math.pi)


# -- Student t ---------------------------------------------------------------

def _lgamma_half_ratio(a):
    """log(Gamma(a + 1/2) / Gamma(a)) without cancellation for large ``a``."""
    if a < 20.0:
        return math.lgamma(a + 0.5) - math.lgamma(a)
    return (0.5 * math.log(a) - 1.0 / (8 * a) + 1.0 / (192 * a ** 3)
            - 1.0 / (640 * a ** 5) + 17.0 / (14336 * a ** 7))


def _lbeta(a, b):
    if b == 0.5:
        return _LOG_SQRT_PI - _lgamma_half_ratio(a)
    if a == 0.5:
        return _LOG_SQRT_PI - _lgamma_half_ratio(b)
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x, max_iter=200000):
    # modified Lentz evaluation of the incomplete beta continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = 1.0 / (d if abs(d) > _TINY else _TINY)
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (d if abs(d) > _TINY else _TINY)
        c = 1.0 + aa / c
        c = c if abs(c) > _TINY else _TINY
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc_reg(a, b, x, y=None):
    """Regularized incomplete beta ``I_x(a, b)``.

    ``y`` may carry ``1 - x`` computed without cancellation by the caller.
    """
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_x = math.log1p(-y) if y < 0.5 else math.log(x)
    log_y = math.log1p(-x) if x < 0.5 else math.log(y)
    front = math.exp(a * log_x + b * log_y - _lbeta(a, b))
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, y) / b


def t_sf2(t_abs, df):
    """Two-sided tail probability ``P(|T| >= t_abs)`` for Student's t with ``df``.

    >>> round(t_sf2(2.228, 10), 4)
    0.05
    """
    if not df >= 1:
        raise InvalidDf(f"degrees of freedom must be >= 1, got {df}")
    t = abs(float(t_abs))
    if math.isnan(t):
        return math.nan
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    t2 = t * t
    x = df / (df + t2)
    y = t2 / (df + t2)
    return min(1.0, max(0.0, betainc_reg(0.5 * df, 0.5, x, y)))


def t_quantile(prob, df):
    """Inverse CDF of Student's t: the ``t`` with ``P(T <= t) = prob``."""
    if not df >= 1:
        raise InvalidDf(f"degrees of freedom must be >= 1, got {df}")
    if not 0.0 < prob < 1.0:
        raise ProbOutOfRange(f"probability must be in (0, 1), got {prob}")
    if prob == 0.5:
        return 0.0
    if prob < 0.5:
        return -t_quantile(1.0 - prob, df)
    target = 2.0 * (1.0 - prob)
    hi = 1.0
    while t_sf2(hi, df) > target:
        hi *= 2.0
    return brentq(lambda t: t_sf2(t, df) - target, 0.0, hi,
                  xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)


# -- least squares -----------------------------------------------------------

@dataclass(frozen=True)
class OlsFit:
    """Fitted coefficients (intercept first) with their inference columns."""

    names: tuple
    coef: np.ndarray
    se: np.ndarray
    t: np.ndarray
    p: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    n: int
    df: int
    r2: float
    sigma2: float
    rss: float

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[:, None]
        if X.shape[1] != len(self.coef) - 1:
            raise DimensionMismatch(
                f"expected {len(self.coef) - 1} regressors, got {X.shape[1]}")
        return self.coef[0] + X @ self.coef[1:]

    def to_dict(self):
        def vec(a):
            return [None if not np.isfinite(v) else float(v) for v in a]

        def num(v):
            return None if not np.isfinite(v) else float(v)

        return {
            "names": list(self.names),
            "coef": vec(self.coef), "se": vec(self.se), "t": vec(self.t),
            "p": vec(self.p), "ci_low": vec(self.ci_low), "ci_high": vec(self.ci_high),
            "n": self.n, "df": self.df, "r2": num(self.r2),
            "sigma2": num(self.sigma2), "rss": num(self.rss),
        }


def fit_ols(X, y, names=None) -> OlsFit:
    """Regress ``y`` on the columns of ``X`` plus an intercept.

    ``X`` excludes the intercept column; ``names`` labels its columns and
    defaults to ``x1, x2, ...``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"X has shape {X.shape}, y has shape {y.shape}")
    n, k0 = X.shape
    k = k0 + 1
    if n <= k:
        raise TooFewRows(f"{n} rows cannot identify {k} coefficients with df >= 1")
    if not np.isfinite(X).all():
        raise MissingValuesPresent("X")
    if not np.isfinite(y).all():
        raise MissingValuesPresent("y")
    if names is None:
        names = [f"x{i + 1}" for i in range(k0)]
    if len(names) != k0:
        raise LengthMismatch(f"{len(names)} names for {k0} regressors")

    A = np.column_stack([np.ones(n), X])
    scale = np.sqrt((A * A).sum(axis=0))
    if (scale == 0).any():
        raise RankDeficient("a regressor column is identically zero")
    Q, R = np.linalg.qr(A / scale)
    diag = np.abs(np.diag(R))
    if diag.min() <= RANK_TOL * diag.max():
        raise RankDeficient("design matrix columns are collinear")

    coef = solve_triangular(R, Q.T @ y) / scale
    resid = y - A @ coef
    rss = float(resid @ resid)
    df = n - k
    sigma2 = rss / df
    r_inv = solve_triangular(R, np.eye(k))
    unscaled = (r_inv * r_inv).sum(axis=1) / scale ** 2
    se = np.sqrt(sigma2 * unscaled)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = coef / se
    p = np.array([t_sf2(abs(v), df) for v in t])
    q = t_quantile(0.975, df)
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / sst if sst > 0 else math.nan
    return OlsFit(
        names=("const", *names), coef=coef, se=se, t=t, p=p,
        ci_low=coef - q * se, ci_high=coef + q * se,
        n=n, df=df, r2=r2, sigma2=sigma2, rss=rss,
    )


def stars(p):
    if not p < 0.1:
        return ""
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    return "*"


def render_ols_table(fit: OlsFit, names=None, title=""):
    """Regression table in the usual ``coef std err t P>|t| [0.025 0.975]`` layout.

    Coefficients carry 4 decimals and significance stars; the other columns 3.
    """
    names = list(fit.names if names is None else names)
    if len(names) != len(fit.coef):
        raise LengthMismatch(f"{len(names)} labels for {len(fit.coef)} coefficients")
    width = max(16, len(title) + 2, *(len(s) + 2 for s in names))
    head = (f"{title:<{width}}{'coef':>12}{'std err':>10}{'t':>10}"
            f"{'P>|t|':>10}{'[0.025':>10}{'0.975]':>10}")
    rule = "=" * len(head)
    lines = [rule, head, "-" * len(head)]
    for i, name in enumerate(names):
        coef = f"{fit.coef[i]:.4f}{stars(fit.p[i])}"
        lines.append(
            f"{name:<{width}}{coef:>12}{fit.se[i]:>10.3f}{fit.t[i]:>10.3f}"
            f"{fit.p[i]:>10.3f}{fit.ci_low[i]:>10.3f}{fit.ci_high[i]:>10.3f}")
    lines.append(rule)
    return "\n".join(lines)
