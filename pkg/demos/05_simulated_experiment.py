# %% [markdown]
# Simulated coincidence experiment
# ================================
# Poisson counts at every joint setting, the count-based estimators, and a
# check that the propagated errors describe the spread over many runs.

# %%
import math

import numpy as np

from wernersteer import experiment
from wernersteer.states import StateParams

# %%
state = StateParams(0.5, 0.9, 0.96, math.pi)
cfg = experiment.SimConfig(mean_total_counts=5500, rng_seed=1)
rec = experiment.simulate_experiment(state, cfg)
for name in ("vz", "vx", "s", "f_i", "f_ii"):
    est, exact = getattr(rec, name), getattr(rec.exact, name)
    print(f"{name:5} {est.value:.4f} +- {est.sigma:.4f}   exact {exact:.4f}")

# %% Fit (p, eta) back from the two visibilities.
print(experiment.fit_params(rec.vz, rec.vx, 0.5, experiment.SignHint.PHI_PI))

# %% Spread over 500 repetitions against the propagated error.
plan = experiment.plan_experiment(state)
pred = experiment.predicted_sigmas(state, plan=plan)
runs = [experiment.simulate_experiment(state, cfg, np.random.default_rng(c), plan, rec.exact)
        for c in np.random.SeedSequence(7).spawn(500)]
for name in pred:
    spread = np.std([getattr(r, name).value for r in runs], ddof=1)
    print(f"{name:5} empirical {spread:.5f}  propagated {pred[name]:.5f}")
