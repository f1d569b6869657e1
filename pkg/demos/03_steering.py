# %% [markdown]
# Fine-grained steering
# =====================
# Scenario I fixes Bob to sz and sx.  In scenario II Bob's pair is unknown to
# Alice, so it is chosen to make F as small as possible; without dephasing
# that is theta_P = pi/4.

# %%
import math

import numpy as np

from wernersteer import steering
from wernersteer.states import StateParams

# %%
for alpha in (0.35, 0.5):
    state = StateParams(alpha, 0.9, 0.96, math.pi)
    r1, r2 = steering.scenario_I(state), steering.scenario_II(state)
    print(f"alpha = {alpha}: F_I = {r1.f_value:.4f} (limit {steering.F_LIM_I:.4f}), "
          f"F_II = {r2.f_value:.4f} (limit {steering.F_LIM_II})")
    print("   Alice's angles for scenario I:", r1.alice_angles[r1.chosen_outcome][:2])

# %% F after Alice's optimisation, as a function of Bob's theta_P.
state = StateParams(0.8, 0.8, 1.0)
thetas, f = steering.thetap_profile(state, grid_resolution=math.pi / 16)
for t, v in zip(thetas, f):
    print(f"theta_P = {t:.3f}  F = {v:.4f}")
print("minimum at", steering.min_over_thetap(state))

# %% A scenario-I violation bounds a one-sided device-independent key rate.
print("key rate at F_I = 0.935:", steering.keyrate(0.935))
