"""Simulated photon-coincidence experiment and count-based estimators.

Each joint setting A x B is recorded as four coincidence counts with the
polarizers at {theta_A/2, theta_A/2 + pi/2} x {theta_B/2, theta_B/2 + pi/2},
the observable angles being measured in the x-z plane of the Bloch sphere.
Uncertainties propagate Poisson errors sqrt(C) on every count.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import steering
from .chsh import canonical_settings, max_chsh_value
from .errors import (AngleMismatchError, EmptyCountsError, InconsistentVisibilitiesError,
                     InvalidParameterError, UndefinedConditionalError, UnsupportedSettingError)
from .states import (SIGMA_X, SIGMA_Z, JointProbabilities, MeasurementSetting, StateParams,
                     joint_probabilities, visibilities)

#: Mean coincidence total per joint setting in the reference experiment.
DEFAULT_MEAN_COUNTS = 5500.0
ONE_DEGREE = math.pi / 180.0

_ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class SimConfig:
    mean_total_counts: float = DEFAULT_MEAN_COUNTS
    rng_seed: int = 0
    #: Draw a fixed total (multinomial) instead of four independent Poisson counts.
    fixed_total: bool = False
    #: Seconds per setting; metadata only.
    integration_time: float = 3.0

    def __post_init__(self):
        if not self.mean_total_counts > 0:
            raise InvalidParameterError("mean_total_counts must be positive")

    def rng(self):
        return np.random.default_rng(self.rng_seed)


@dataclass(frozen=True)
class CoincidenceCounts:
    """Counts for outcomes (0,0), (0,1), (1,0), (1,1) of one joint setting.

    ``theta_a`` and ``theta_b`` are signed observable angles in the x-z plane;
    the polarizers sit at half these angles.
    """

    c00: int
    c01: int
    c10: int
    c11: int
    theta_a: float = 0.0
    theta_b: float = 0.0

    def __post_init__(self):
        for name in ("c00", "c01", "c10", "c11"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise InvalidParameterError(f"{name}={v!r} is not a non-negative integer")
            object.__setattr__(self, name, int(v))

    @property
    def total(self):
        return self.c00 + self.c01 + self.c10 + self.c11

    def __getitem__(self, ab):
        a, b = ab
        return (self.c00, self.c01, self.c10, self.c11)[2 * a + b]

    def as_tuple(self):
        return (self.c00, self.c01, self.c10, self.c11)

    def polarizer_angles(self):
        """Polarizer pairs (Alice, Bob) for outcomes 00, 01, 10, 11."""
        ha, hb = self.theta_a / 2.0, self.theta_b / 2.0
        q = math.pi / 2.0
        return ((ha, hb), (ha, hb + q), (ha + q, hb), (ha + q, hb + q))

    def scaled(self, factor: int):
        return CoincidenceCounts(*(factor * c for c in self.as_tuple()), self.theta_a, self.theta_b)


@dataclass(frozen=True)
class EstimateWithError:
    value: float
    sigma: float
    #: True when the propagated error vanishes because some counts are zero.
    degenerate: bool = False
    #: Outcome pair used, for steering estimates.
    outcome: tuple | None = None

    def __post_init__(self):
        if self.sigma < 0:
            raise InvalidParameterError("sigma must be non-negative")


class SignHint(str, enum.Enum):
    PHI_ZERO = "PhiZero"
    PHI_PI = "PhiPi"


def plane_angle(setting: MeasurementSetting) -> float:
    """Signed angle of an x-z plane setting; raises for axes with a sy component."""
    th, ph = setting.theta, setting.phi_axis
    if math.sin(th) < _ANGLE_TOL or min(ph, 2 * math.pi - ph) < _ANGLE_TOL:
        return th
    if abs(ph - math.pi) < _ANGLE_TOL:
        return -th
    raise UnsupportedSettingError(
        f"axis azimuth {ph!r} is outside the x-z plane reachable with a polarizer")


def _same_angle(x, y):
    return abs(math.remainder(x - y, 2.0 * math.pi)) < _ANGLE_TOL


# --- simulation --------------------------------------------------------------

def expected_counts(state: StateParams, a: MeasurementSetting, b: MeasurementSetting,
                    mean_total=DEFAULT_MEAN_COUNTS):
    """Mean counts (floats) for one joint setting."""
    return tuple(mean_total * q for q in joint_probabilities(state, a, b).as_tuple())


def simulate_counts(state: StateParams, a: MeasurementSetting, b: MeasurementSetting,
                    cfg: SimConfig, rng=None) -> CoincidenceCounts:
    """Draw coincidence counts for Alice measuring ``a`` and Bob ``b``.

    Counts are independent Poisson variates with means ``mean_total_counts * P(a, b)``
    (or one multinomial draw when ``cfg.fixed_total``).  Without ``rng`` the
    generator is seeded from ``cfg.rng_seed``.
    """
    ta, tb = plane_angle(a), plane_angle(b)
    rng = cfg.rng() if rng is None else rng
    probs = np.array(joint_probabilities(state, a, b).as_tuple())
    if cfg.fixed_total:
        counts = rng.multinomial(int(round(cfg.mean_total_counts)), probs / probs.sum())
    else:
        counts = rng.poisson(cfg.mean_total_counts * probs)
    return CoincidenceCounts(*(int(c) for c in counts), theta_a=ta, theta_b=tb)


# --- estimators --------------------------------------------------------------

def estimate_probabilities(counts: CoincidenceCounts) -> JointProbabilities:
    """P(a, b) = C(a, b) / C_tot."""
    n = counts.total
    if n == 0:
        raise EmptyCountsError("no coincidences recorded")
    return JointProbabilities(*(c / n for c in counts.as_tuple()))


def correlation_sigma(c00, c01, c10, c11):
    """Poisson error on E: 2 sqrt([C00 + C11][C01 + C10] / C_tot^3)."""
    same, diff = c00 + c11, c01 + c10
    n = same + diff
    if n <= 0:
        raise EmptyCountsError("no coincidences recorded")
    return 2.0 * math.sqrt(same * diff / n ** 3)


def conditional_variance(hit, miss):
    """Poisson variance of hit / (hit + miss): hit miss / (hit + miss)^3."""
    n = hit + miss
    if n <= 0:
        raise UndefinedConditionalError("conditional has no counts")
    return hit * miss / n ** 3


def estimate_correlation(counts: CoincidenceCounts) -> EstimateWithError:
    n = counts.total
    if n == 0:
        raise EmptyCountsError("no coincidences recorded")
    e = (counts.c00 + counts.c11 - counts.c01 - counts.c10) / n
    sigma = correlation_sigma(*counts.as_tuple())
    return EstimateWithError(e, sigma, degenerate=sigma == 0.0)


def estimate_visibility(counts: CoincidenceCounts) -> EstimateWithError:
    """V = |E| from counts taken in the sz x sz or sx x sx basis."""
    ta, tb = counts.theta_a, counts.theta_b
    if not (_same_angle(ta, tb) and (_same_angle(ta, 0.0) or _same_angle(ta, math.pi / 2.0))):
        raise AngleMismatchError(
            f"visibility needs both observables at 0 or pi/2, got {ta!r}, {tb!r}")
    e = estimate_correlation(counts)
    return EstimateWithError(abs(e.value), e.sigma, e.degenerate)


def estimate_chsh(counts_list) -> EstimateWithError:
    """S = |E(A,B) - E(A,B') + E(A',B) + E(A',B')| from counts in that order.

    The error adds the four correlation errors in quadrature.
    """
    ab, abp, apb, apbp = counts_list
    if not (_same_angle(ab.theta_a, abp.theta_a) and _same_angle(apb.theta_a, apbp.theta_a)
            and _same_angle(ab.theta_b, apb.theta_b) and _same_angle(abp.theta_b, apbp.theta_b)):
        raise AngleMismatchError("counts are not ordered as (A,B), (A,B'), (A',B), (A',B')")
    es = [estimate_correlation(c) for c in counts_list]
    value = abs(es[0].value - es[1].value + es[2].value + es[3].value)
    sigma = math.sqrt(sum(e.sigma ** 2 for e in es))
    return EstimateWithError(value, sigma, degenerate=sigma == 0.0)


def _steering_branch(counts_p, counts_q, outcome):
    a, b = outcome
    hits = (counts_p[a, b], counts_q[a, b])
    misses = (counts_p[a, 1 - b], counts_q[a, 1 - b])
    if any(h + m == 0 for h, m in zip(hits, misses)):
        raise UndefinedConditionalError(f"no counts for Alice's outcome {a}")
    value = 0.5 * sum(h / (h + m) for h, m in zip(hits, misses))
    sigma = 0.5 * math.sqrt(sum(conditional_variance(h, m) for h, m in zip(hits, misses)))
    return EstimateWithError(value, sigma, degenerate=sigma == 0.0, outcome=tuple(outcome))


def estimate_steering(counts_p: CoincidenceCounts, counts_q: CoincidenceCounts,
                      outcome=None) -> EstimateWithError:
    """F^{a,b} from counts at (S, P) and (T, Q).

    With ``outcome=None`` both F^{0,0} and F^{1,1} are formed and the larger is
    returned together with its own error.
    """
    if not _same_angle(counts_q.theta_b - counts_p.theta_b, math.pi / 2.0):
        raise AngleMismatchError("Bob's Q must sit at theta_P + pi/2")
    if outcome is not None:
        return _steering_branch(counts_p, counts_q, tuple(outcome))
    best = None
    for o in steering.OUTCOMES:
        try:
            est = _steering_branch(counts_p, counts_q, o)
        except UndefinedConditionalError:
            continue
        if best is None or est.value > best.value:
            best = est
    if best is None:
        raise UndefinedConditionalError("neither outcome pair has counts")
    return best


def fit_params(vz, vx, alpha: float, sign_hint=SignHint.PHI_ZERO, tol=0.02) -> StateParams:
    """Invert V_z = p and V_x = 2 p (2 eta - 1) sqrt(alpha (1 - alpha)).

    ``sign_hint`` supplies the sign of E(sx x sx), which the visibility drops.
    """
    vz = getattr(vz, "value", vz)
    vx = getattr(vx, "value", vx)
    if not 0.0 < alpha < 1.0:
        raise InvalidParameterError("alpha must lie in (0, 1)")
    if not 0.0 < vz <= 1.0:
        raise InvalidParameterError("V_z must lie in (0, 1]")
    p = vz
    eta = 0.5 * (1.0 + vx / (2.0 * p * math.sqrt(alpha * (1.0 - alpha))))
    if eta < -tol or eta > 1.0 + tol:
        raise InconsistentVisibilitiesError(f"visibilities imply eta = {eta:.4f}")
    phi = math.pi if SignHint(sign_hint) is SignHint.PHI_PI else 0.0
    return StateParams(alpha=alpha, p=p, eta=min(1.0, max(0.0, eta)), phi=phi)


def alpha_error(chi: float, delta_chi: float = ONE_DEGREE) -> float:
    """delta alpha = 2 |sin(4 chi)| delta chi for alpha = cos^2(2 chi)."""
    if delta_chi < 0:
        raise InvalidParameterError("delta_chi must be non-negative")
    return 2.0 * abs(math.sin(4.0 * chi)) * delta_chi


# --- full experiment ---------------------------------------------------------

@dataclass(frozen=True)
class ExperimentPlan:
    """Joint settings measured at one state, in acquisition order."""

    z: tuple
    x: tuple
    chsh: tuple
    steering_i: tuple
    steering_ii: tuple
    outcome_i: tuple
    outcome_ii: tuple

    def all_settings(self):
        return (self.z, self.x) + self.chsh + self.steering_i + self.steering_ii


def plan_experiment(state: StateParams) -> ExperimentPlan:
    st = canonical_settings(state)
    res_i = steering.scenario_I(state)
    res_ii = steering.scenario_II(state)

    def pairs(res):
        s = res.settings
        return ((s.s_setting, s.p_setting), (s.t_setting, s.q_setting))

    return ExperimentPlan(
        z=(SIGMA_Z, SIGMA_Z), x=(SIGMA_X, SIGMA_X),
        chsh=((st.a, st.b), (st.a, st.b_prime), (st.a_prime, st.b), (st.a_prime, st.b_prime)),
        steering_i=pairs(res_i), steering_ii=pairs(res_ii),
        outcome_i=res_i.chosen_outcome, outcome_ii=res_ii.chosen_outcome)


@dataclass(frozen=True)
class ExactValues:
    vz: float
    vx: float
    s: float
    f_i: float
    f_ii: float


def exact_values(state: StateParams) -> ExactValues:
    vz, vx = visibilities(state)
    return ExactValues(vz, vx, max_chsh_value(state),
                       steering.scenario_I(state).f_value, steering.scenario_II(state).f_value)


@dataclass(frozen=True)
class ExperimentRecord:
    state: StateParams
    vz: EstimateWithError
    vx: EstimateWithError
    s: EstimateWithError
    f_i: EstimateWithError
    f_ii: EstimateWithError
    exact: ExactValues
    counts: tuple = field(repr=False, default=())

    def residuals(self):
        """(estimate - exact) / sigma for each quantity; nan where sigma is 0."""
        out = {}
        for name in ("vz", "vx", "s", "f_i", "f_ii"):
            est, ex = getattr(self, name), getattr(self.exact, name)
            out[name] = (est.value - ex) / est.sigma if est.sigma > 0 else math.nan
        return out


def simulate_experiment(state: StateParams, cfg: SimConfig, rng=None,
                        plan: ExperimentPlan | None = None, exact: ExactValues | None = None
                        ) -> ExperimentRecord:
    """Simulate every joint setting at one state and run all estimators."""
    rng = cfg.rng() if rng is None else rng
    plan = plan_experiment(state) if plan is None else plan
    exact = exact_values(state) if exact is None else exact
    counts = [simulate_counts(state, a, b, cfg, rng) for a, b in plan.all_settings()]
    cz, cx, c0, c1, c2, c3, si_p, si_q, sii_p, sii_q = counts
    return ExperimentRecord(
        state=state,
        vz=estimate_visibility(cz), vx=estimate_visibility(cx),
        s=estimate_chsh((c0, c1, c2, c3)),
        f_i=estimate_steering(si_p, si_q, plan.outcome_i),
        f_ii=estimate_steering(sii_p, sii_q, plan.outcome_ii),
        exact=exact, counts=tuple(counts))


def predicted_sigmas(state: StateParams, mean_total=DEFAULT_MEAN_COUNTS,
                     plan: ExperimentPlan | None = None):
    """Propagated errors evaluated at the expected (mean) counts."""
    plan = plan_experiment(state) if plan is None else plan
    ex = [expected_counts(state, a, b, mean_total) for a, b in plan.all_settings()]
    cz, cx, c0, c1, c2, c3, si_p, si_q, sii_p, sii_q = ex

    def f_sigma(cp, cq, outcome):
        a, b = outcome
        idx_hit, idx_miss = 2 * a + b, 2 * a + 1 - b
        return 0.5 * math.sqrt(conditional_variance(cp[idx_hit], cp[idx_miss])
                               + conditional_variance(cq[idx_hit], cq[idx_miss]))

    return {
        "vz": correlation_sigma(*cz),
        "vx": correlation_sigma(*cx),
        "s": math.sqrt(sum(correlation_sigma(*c) ** 2 for c in (c0, c1, c2, c3))),
        "f_i": f_sigma(si_p, si_q, plan.outcome_i),
        "f_ii": f_sigma(sii_p, sii_q, plan.outcome_ii),
    }


def simulate_sweep(states, cfg: SimConfig):
    """One simulated experiment per state, with independent child seeds.

    Point ``i`` always uses the ``i``-th child of ``cfg.rng_seed``, so results
    do not depend on evaluation order.
    """
    children = np.random.SeedSequence(cfg.rng_seed).spawn(len(states))
    return [simulate_experiment(s, cfg, np.random.default_rng(c)) for s, c in zip(states, children)]
