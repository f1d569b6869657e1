# %% [markdown]
# Zones and the command line
# ==========================
# The same computations from the shell.  Each call below is equivalent to
# running ``wernersteer ...`` in a terminal.

# %%
from wernersteer import cli

cli.main(["state", "--alpha", "0.35", "--p", "0.9", "--eta", "0.96", "--phi", "pi"])

# %% Thresholds on a coarse grid.
cli.main(["bounds", "--eta", "0.96", "--grid", "0:1:5"])

# %% Zone labels for a few noise levels of the Werner state.
cli.main(["zones", "--alpha", "0.5", "--p-grid", "0.3:0.9:4"])

# %% One simulated sweep over the half-wave-plate angle.
cli.main(["simulate", "--p", "0.9", "--eta", "0.96", "--phi", "pi", "--chi", "0deg:22.5deg:4",
          "--scenario", "I", "--seed", "3"])

# %% Key rate from a measured F_I.
cli.main(["keyrate", "--f", "0.935"])
