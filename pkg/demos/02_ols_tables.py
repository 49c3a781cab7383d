"""OLS with classical standard errors, and the regression table layout."""

import numpy as np

from peanut.ols import fit_ols, render_ols_table, t_quantile, t_sf2

rng = np.random.default_rng(0)

# %% A noisy line: y = 0.06 + 1.67 x + e
x = rng.normal(-0.056, 0.067, 109)
y = 0.06 + 1.67 * x + rng.normal(0, 0.2, 109)
fit = fit_ols(x, y, names=["merchants_all"])
print(render_ols_table(fit, title="Simulated complete-case fit"))
print()

# %% Every column of the table follows from coef, se and the residual df.
q = t_quantile(0.975, fit.df)
print("df", fit.df, " t critical", round(q, 4))
print("recomputed CI:", fit.coef - q * fit.se, fit.coef + q * fit.se)
print("recomputed p:", [t_sf2(abs(t), fit.df) for t in fit.t])

# %% Collinear designs are refused instead of returning arbitrary numbers.
try:
    fit_ols(np.column_stack([x, 2 * x]), y)
except Exception as exc:
    print(type(exc).__name__, "-", exc)
