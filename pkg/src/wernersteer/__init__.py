"""Entanglement, steering and Bell non-locality of generalized Werner states."""

__version__ = "0.1.0"

from .errors import (AngleMismatchError, EmptyCountsError, InconsistentVisibilitiesError,
                     InvalidParameterError, UndefinedConditionalError, UnsupportedSettingError)
from .states import (JointProbabilities, MeasurementSetting, StateParams, build_state,
                     check_density_matrix, concurrence, correlation, hwp_to_alpha,
                     joint_probabilities, joint_probabilities_trace, visibilities, werner)
from .chsh import (CHSH_LIMIT, ChshResult, ChshSettings, chsh_value, max_chsh,
                   max_chsh_value, optimal_bob_angles)
from .steering import (F_LIM_I, F_LIM_II, Scenario, SteeringResult, SteeringSettings,
                       keyrate, min_over_thetap, optimal_alice_angles, scenario_I,
                       scenario_II, steering_f_ab, steering_f_unified)
from .bounds import BoundCurve, BoundKind, hierarchy_curves, p_threshold, threshold_curve
from .experiment import (CoincidenceCounts, EstimateWithError, SimConfig, estimate_chsh,
                         estimate_correlation, estimate_steering, estimate_visibility,
                         fit_params, simulate_counts, simulate_experiment, simulate_sweep)
