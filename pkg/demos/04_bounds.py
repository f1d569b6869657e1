# %% [markdown]
# The correlation hierarchy
# =========================
# For each alpha, the smallest p at which the state is entangled, steerable
# (scenarios II and I) or CHSH non-local.

# %%
import numpy as np

from wernersteer import bounds

# %%
grid = np.linspace(0.0, 1.0, 11)
for eta in (1.0, 0.96):
    print(f"eta = {eta}")
    curves = bounds.hierarchy_curves(eta, grid)
    print("alpha  " + "  ".join(f"{c.kind.value:>12}" for c in curves))
    for i, a in enumerate(grid):
        cells = ("unreachable" if c.points[i][1] is None else f"{c.points[i][1]:.4f}" for c in curves)
        print(f"{a:5.2f}  " + "  ".join(f"{x:>12}" for x in cells))
    print()

# %% Grothendieck's constant of order 3 brackets the Werner locality threshold.
print("Werner states are Bell local for p <", bounds.grothendieck_window()[0])
