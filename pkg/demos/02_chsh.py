# %% [markdown]
# CHSH violation
# ==============
# The maximal CHSH value has a closed form; we compare it with a brute-force
# scan over Bob's angles and print the optimal settings.

# %%
import math

import numpy as np

from wernersteer import chsh
from wernersteer.states import StateParams

# %%
state = StateParams(alpha=0.5, p=0.9, eta=0.96, phi=math.pi)
res = chsh.max_chsh(state)
print("S max         ", res.s_value, "violates:", res.violates)
print("Bob's angles  ", chsh.optimal_bob_angles(state))
s_grid, tb, tbp = chsh.chsh_grid_search(state)
print("grid search   ", s_grid, (tb, tbp))

# %% S as a function of alpha at the experimental noise level.
for alpha in np.linspace(0.0, 1.0, 11):
    s = chsh.max_chsh_value(StateParams(alpha, 0.9, 0.96, math.pi))
    print(f"alpha = {alpha:.1f}  S = {s:.4f}  {'*' if s > chsh.CHSH_LIMIT else ''}")
