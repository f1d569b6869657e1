# %% [markdown]
# Generalized Werner states
# =========================
# Build the two-qubit state for a few parameter choices and look at its
# concurrence and the two visibilities that an experiment would measure.

# %%
import math

import numpy as np

from wernersteer import states

np.set_printoptions(precision=4, suppress=True)

# %% The Bell state and the fully mixed state sit at the two ends of p.
for p in (1.0, 0.0):
    rho = states.build_state(states.werner(p))
    print(f"p = {p}:\n{rho.real}\n")

# %% The experimental point: alpha = 1/2, p = 0.9, eta = 0.96, phi = pi.
experiment = states.StateParams(alpha=0.5, p=0.9, eta=0.96, phi=math.pi)
states.check_density_matrix(states.build_state(experiment))
print("concurrence", states.concurrence(experiment))
print("V_z, V_x   ", states.visibilities(experiment))

# %% The closed-form joint probabilities agree with the trace of the projectors.
a = states.MeasurementSetting(0.4)
b = states.MeasurementSetting(1.9, 0.3)
print(states.joint_probabilities(experiment, a, b).as_tuple())
print(states.joint_probabilities_trace(experiment, a, b).as_tuple())

# %% A half-wave plate at chi sets alpha = cos^2(2 chi).
for chi_deg in (0, 10, 22.5, 35, 45):
    chi = math.radians(chi_deg)
    alpha = states.hwp_to_alpha(chi)
    c = states.concurrence(experiment.replace(alpha=alpha))
    print(f"chi = {chi_deg:5.1f} deg  alpha = {alpha:.3f}  C = {c:.3f}")
