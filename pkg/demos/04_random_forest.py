"""Random forest regression: determinism, bounds, and a smooth target."""

import os

import numpy as np

from peanut.forest import ForestHyper, fit_forest

rng = np.random.default_rng(3)
x = rng.uniform(0, 2 * np.pi, 1500)
y = np.sin(x) + rng.normal(0, 0.1, 1500)
train, test = slice(0, 1000), slice(1000, None)

hyper = ForestHyper(n_trees=100, seed=7)
model = fit_forest(x[train], y[train], hyper)
pred = model.predict(x[test])
r2 = 1 - np.sum((y[test] - pred) ** 2) / np.sum((y[test] - y[test].mean()) ** 2)
print(f"held-out R^2 {r2:.3f}")

# %% Same seed, any thread count: the same trees.
a = fit_forest(x[train], y[train], hyper, threads=1).predict(x[test])
b = fit_forest(x[train], y[train], hyper, threads=4).predict(x[test])
print("identical across thread counts:", np.array_equal(a, b))
print("PEANUT_THREADS =", os.environ.get("PEANUT_THREADS", "unset (one worker per CPU)"))

# %% Predictions never leave the training range, even far outside the data.
far = model.predict(np.array([-100.0, 100.0]))
print("far predictions", far, "training range", y[train].min(), y[train].max())

# %% One unpruned tree without bootstrap reproduces its training targets.
single = fit_forest(x[train], y[train], ForestHyper(n_trees=1, bootstrap=False))
print("memorizes:", np.array_equal(single.predict(x[train]), y[train]))
