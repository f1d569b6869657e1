"""Fine-grained steering parameter F for generalized Werner states.

Bob measures P or Q (maximally incompatible, theta_Q = theta_P + pi/2 in the
same azimuthal plane); Alice answers with S or T.  For an outcome pair
(a, b) the steering parameter is

    F^{a,b} = [P(b_P | a_S) + P(b_Q | a_T)] / 2,

and F = max(F^{0,0}, F^{1,1}) once Alice's angles are optimised.  Scenario I
fixes P = sz, Q = sx; scenario II uses theta_P = pi/4, the choice that
minimises F over Bob's maximally incompatible pairs.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, UndefinedConditionalError
from .optimize import DEFAULT_RESOLUTION, grid_maximize, grid_minimize, grid_points
from .states import (MeasurementSetting, StateParams, joint_probabilities,
                     joint_probability_array)


class Scenario(str, enum.Enum):
    I = "I"
    II = "II"
    CUSTOM = "Custom"


F_LIM_I = (1.0 + 1.0 / math.sqrt(2.0)) / 2.0
F_LIM_II = 0.75

THETA_P_I = 0.0
THETA_P_II = math.pi / 4.0

OUTCOMES = ((0, 0), (1, 1))

_TIE_TOL = 1e-12


def lhs_limit(scenario) -> float:
    """Local-hidden-state bound on F for the given scenario."""
    scenario = Scenario(scenario)
    if scenario is Scenario.I:
        return F_LIM_I
    if scenario is Scenario.II:
        return F_LIM_II
    raise InvalidParameterError("only scenarios I and II have an LHS limit")


def _bloch(setting):
    st = math.sin(setting.theta)
    return np.array([st * math.cos(setting.phi_axis), st * math.sin(setting.phi_axis),
                     math.cos(setting.theta)])


@dataclass(frozen=True)
class SteeringSettings:
    """Bob's P, Q and Alice's S, T.

    Q must be P rotated by +pi/2 in P's azimuthal plane.
    """

    p_setting: MeasurementSetting
    q_setting: MeasurementSetting
    s_setting: MeasurementSetting
    t_setting: MeasurementSetting

    def __post_init__(self):
        p, q = self.p_setting, self.q_setting
        expected = MeasurementSetting(p.theta + math.pi / 2.0, p.phi_axis)
        if np.max(np.abs(_bloch(expected) - _bloch(q))) > 1e-9:
            raise InvalidParameterError(
                "Q must satisfy theta_Q = theta_P + pi/2 and phi_Q = phi_P")

    @classmethod
    def from_angles(cls, theta_p, theta_s, theta_t, phi_s=0.0, phi_t=0.0, phi_p=0.0):
        return cls(MeasurementSetting(theta_p, phi_p),
                   MeasurementSetting(theta_p + math.pi / 2.0, phi_p),
                   MeasurementSetting(theta_s, phi_s),
                   MeasurementSetting(theta_t, phi_t))


@dataclass(frozen=True)
class SteeringResult:
    f_value: float
    f00: float
    f11: float
    chosen_outcome: tuple
    settings: SteeringSettings
    scenario: Scenario
    theta_p: float
    #: Optimal (theta_S, theta_T, phi_S, phi_T) for each outcome pair.
    alice_angles: dict = field(default_factory=dict, compare=False)

    @property
    def violates(self):
        if self.scenario is Scenario.CUSTOM:
            return False
        return self.f_value > lhs_limit(self.scenario)


# --- conditional-probability route -----------------------------------------

def conditional_probability(jp, a, b):
    """P(b | a) = P(a, b) / (P(a, b) + P(a, 1 - b))."""
    num = jp[a, b]
    den = num + jp[a, 1 - b]
    if den <= 0.0:
        raise UndefinedConditionalError(f"Alice's outcome {a} has zero probability")
    return num / den


def steering_f_ab(state: StateParams, settings: SteeringSettings, a: int, b: int) -> float:
    """F^{a,b} built from joint probabilities and conditionals."""
    jp_p = joint_probabilities(state, settings.s_setting, settings.p_setting)
    jp_q = joint_probabilities(state, settings.t_setting, settings.q_setting)
    return 0.5 * (conditional_probability(jp_p, a, b) + conditional_probability(jp_q, a, b))


# --- closed-form route -----------------------------------------------------

def _half(state, g, theta_a, phi_a, bob: MeasurementSetting):
    # (1 + p[g cB + (g + cB) cA + K sB sA]) / (4 (1 + p g cA))
    c0, s0 = math.cos(bob.theta), math.sin(bob.theta)
    k = 2.0 * state.coherence * math.cos(state.phi - phi_a - bob.phi_axis)
    ca, sa = math.cos(theta_a), math.sin(theta_a)
    den = 4.0 * (1.0 + state.p * g * ca)
    if den <= 0.0:
        raise UndefinedConditionalError("Alice's outcome has zero probability")
    return (1.0 + state.p * (g * c0 + (g + c0) * ca + k * s0 * sa)) / den


def _signed_imbalance(state, outcome):
    if outcome == (0, 0):
        return state.imbalance
    if outcome == (1, 1):
        return -state.imbalance
    raise InvalidParameterError(f"closed form covers outcomes (0,0) and (1,1), got {outcome}")


def steering_f_closed(state: StateParams, settings: SteeringSettings, outcome) -> float:
    """Closed-form F^{0,0} or F^{1,1}; (1,1) is (0,0) with 2 alpha - 1 -> 1 - 2 alpha."""
    g = _signed_imbalance(state, tuple(outcome))
    st = settings
    return (_half(state, g, st.s_setting.theta, st.s_setting.phi_axis, st.p_setting)
            + _half(state, g, st.t_setting.theta, st.t_setting.phi_axis, st.q_setting))


def branch_sign(theta_p) -> int:
    """sign(cos(theta_P + pi/4)), with the boundary theta_P = pi/4 counted as +1."""
    c = math.cos(theta_p + math.pi / 4.0)
    if abs(c) < 1e-15:
        return 1
    return 1 if c > 0 else -1


def sigma_branch(state: StateParams, theta_p) -> tuple:
    """Outcome pair selected by xi = sigma |2 alpha - 1|; (0, 0) at alpha = 1/2."""
    xi = branch_sign(theta_p) * abs(state.imbalance)
    return (0, 0) if xi == state.imbalance else (1, 1)


def steering_f_unified(state: StateParams, theta_p, theta_s, theta_t, phi_s=None, phi_t=None):
    """Single-expression F with xi = sigma |2 alpha - 1| and sigma from :func:`branch_sign`.

    Bob is in the x-z plane (phi_P = phi_Q = 0).  Alice's azimuths default to
    the state phase.  Returns ``(F, outcome)`` where ``outcome`` is the pair
    whose F^{a,b} the expression coincides with.
    """
    phi_s = state.phi if phi_s is None else phi_s
    phi_t = state.phi if phi_t is None else phi_t
    xi = branch_sign(theta_p) * abs(state.imbalance)
    p = state.p
    x2 = 2.0 * state.coherence
    cp, sp = math.cos(theta_p), math.sin(theta_p)
    cs, ss = math.cos(theta_s), math.sin(theta_s)
    ct, st = math.cos(theta_t), math.sin(theta_t)
    zeta_s = x2 * math.cos(state.phi - phi_s)
    zeta_t = x2 * math.cos(state.phi - phi_t)
    first = (1.0 + p * (xi * cp + (xi + cp) * cs + zeta_s * sp * ss)) / (4.0 * (1.0 + p * xi * cs))
    second = (1.0 + p * (-xi * sp + (xi - sp) * ct + zeta_t * cp * st)) / (4.0 * (1.0 + p * xi * ct))
    return first + second, sigma_branch(state, theta_p)


# --- optimal Alice angles --------------------------------------------------

def _half_values(p, g, x2, c0, s0, theta):
    ca, sa = np.cos(theta), np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = (1.0 + p * (g * c0 + (g + c0) * ca + x2 * s0 * sa)) / (4.0 * (1.0 + p * g * ca))
    return np.where(1.0 + p * g * ca > 0.0, v, -np.inf)


def _best_half(p, g, x, c0, s0):
    """Maximise one half of F^{a,b} over Alice's polar angle (vectorised over c0, s0).

    Stationary points solve X s0 (cos th + p g) + Y c0 sin th = 0 with
    Y = (p g^2 - 1)/2.  In t = tan(th/2) this is

        X s0 (1 - p g) t^2 - 2 Y c0 t - X s0 (1 + p g) = 0,

    whose '+' root is the textbook optimum.  Both roots and the poles 0, pi
    are evaluated and the best kept, which also covers X < 0.  When X s0 = 0
    the half is monotone in cos th and the optimum sits at th = 0 or pi.
    """
    c0, s0 = np.broadcast_arrays(np.asarray(c0, dtype=float), np.asarray(s0, dtype=float))
    y = (p * g * g - 1.0) / 2.0
    d = p * g
    lead = x * s0 * (1.0 - d)
    yc = y * c0
    disc = np.sqrt(np.maximum(yc * yc + (x * s0) ** 2 * (1.0 - d * d), 0.0))
    degenerate = (x * s0 == 0.0) | (lead == 0.0)
    safe_lead = np.where(degenerate, 1.0, lead)
    # t+ t- = -(1 + d)/(1 - d); take the non-cancelling root first.
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        prod = np.where(degenerate, 0.0, -(1.0 + d) / np.where(degenerate, 1.0, 1.0 - d))
        plus_direct = (yc + disc) / safe_lead
        minus_direct = (yc - disc) / safe_lead
        t_plus = np.where(yc >= 0.0, plus_direct,
                          np.where(minus_direct != 0.0, prod / minus_direct, plus_direct))
        t_minus = np.where(yc < 0.0, minus_direct,
                           np.where(plus_direct != 0.0, prod / plus_direct, minus_direct))
    th_plus = np.where(degenerate, 0.0, 2.0 * np.arctan(t_plus))
    th_minus = np.where(degenerate, math.pi, 2.0 * np.arctan(t_minus))
    x2 = 2.0 * x
    # The poles 0 and pi join the stationary points: near X s0 = 0 the roots
    # can fall where Alice's outcome has vanishing probability.
    cands = np.stack([th_plus, th_minus, np.zeros_like(th_plus), np.full_like(th_plus, math.pi)])
    vals = _half_values(p, g, x2, c0, s0, cands)
    best = np.argmax(vals, axis=0)
    pick = np.take_along_axis
    return pick(cands, best[None], 0)[0], pick(vals, best[None], 0)[0]


def optimal_alice_angles(state: StateParams, theta_p: float, outcome=(0, 0)):
    """Alice's (theta_S, theta_T, phi_S, phi_T) maximising F^{a,b} for Bob's theta_P.

    Bob measures in the x-z plane; Alice's azimuths are set to the state
    phase, which makes the coherence term fully effective.  For
    theta_P in {0, pi} the result reduces to theta_S = theta_P and
    theta_T = +-acos(-p xi).
    """
    g = _signed_imbalance(state, tuple(outcome))
    x = state.coherence
    # P at theta_P, Q at theta_P + pi/2: (cos, sin) of Bob's axis for each half.
    cp, sp = math.cos(theta_p), math.sin(theta_p)
    (theta_s,), _ = _best_half(state.p, g, x, [cp], [sp])
    (theta_t,), _ = _best_half(state.p, g, x, [-sp], [cp])
    return float(theta_s), float(theta_t), state.phi, state.phi


def optimized_f(state: StateParams, theta_p):
    """max over Alice of F^{0,0} and F^{1,1} for Bob at ``theta_p`` (array-friendly).

    Returns
    -------
    f00, f11 : ndarray
    """
    theta_p = np.asarray(theta_p, dtype=float)
    cp, sp = np.cos(theta_p), np.sin(theta_p)
    x = state.coherence
    out = []
    for outcome in OUTCOMES:
        g = _signed_imbalance(state, outcome)
        _, v_s = _best_half(state.p, g, x, cp, sp)
        _, v_t = _best_half(state.p, g, x, -sp, cp)
        out.append(v_s + v_t)
    return out[0], out[1]


def optimized_f_max(state: StateParams, theta_p):
    f00, f11 = optimized_f(state, theta_p)
    return np.maximum(f00, f11)


def steering_for_bob(state: StateParams, theta_p: float, scenario=Scenario.CUSTOM) -> SteeringResult:
    """Optimise Alice for Bob's pair (theta_P, theta_P + pi/2) in the x-z plane."""
    angles = {o: optimal_alice_angles(state, theta_p, o) for o in OUTCOMES}
    values = {}
    for o, (ts, tt, ps, pt) in angles.items():
        settings = SteeringSettings.from_angles(theta_p, ts, tt, ps, pt)
        try:
            values[o] = steering_f_closed(state, settings, o)
        except UndefinedConditionalError:
            values[o] = -math.inf
    if all(math.isinf(v) for v in values.values()):
        raise UndefinedConditionalError("no outcome pair has a defined F for this state")
    f00, f11 = values[(0, 0)], values[(1, 1)]
    if abs(f11 - f00) <= _TIE_TOL:
        # theta_P = pi/4 ties for every alpha; keep the branch with Alice's likelier outcome.
        chosen = sigma_branch(state, theta_p)
    else:
        chosen = (1, 1) if f11 > f00 else (0, 0)
    ts, tt, ps, pt = angles[chosen]
    return SteeringResult(
        f_value=max(f00, f11), f00=f00, f11=f11, chosen_outcome=chosen,
        settings=SteeringSettings.from_angles(theta_p, ts, tt, ps, pt),
        scenario=Scenario(scenario), theta_p=float(theta_p), alice_angles=angles)


def scenario_I(state: StateParams) -> SteeringResult:
    """Bob fixed to P = sz, Q = sx."""
    return steering_for_bob(state, THETA_P_I, Scenario.I)


def scenario_II(state: StateParams, verify=False, resolution=DEFAULT_RESOLUTION,
                tol=1e-9) -> SteeringResult:
    """Bob at theta_P = pi/4, theta_Q = 3 pi/4.

    This pair minimises the Alice-optimised F over theta_P for eta = 1.  With
    dephasing V_x < V_z and the minimum moves towards theta_P = 0, so the
    fixed pair overstates F; at eta = 1/2 even a separable state exceeds 3/4.
    :func:`min_over_thetap` gives the true minimum.

    With ``verify=True`` the full minimum over theta_P is also computed and a
    ``RuntimeError`` is raised if the pi/4 choice exceeds it by more than ``tol``.
    """
    res = steering_for_bob(state, THETA_P_II, Scenario.II)
    if verify:
        _, f_min = min_over_thetap(state, resolution)
        if res.f_value > f_min + tol:
            raise RuntimeError(
                f"theta_P = pi/4 gives F = {res.f_value!r}, above grid minimum {f_min!r}")
    return res


def min_over_thetap(state: StateParams, grid_resolution=DEFAULT_RESOLUTION):
    """Minimum over Bob's theta_P in [0, pi] of the Alice-optimised F.

    Returns
    -------
    theta_p_min, f_min : float
    """
    if grid_resolution <= 0:
        raise InvalidParameterError("grid_resolution must be positive")
    return grid_minimize(lambda t: optimized_f_max(state, t), 0.0, math.pi, grid_resolution)


def thetap_profile(state: StateParams, grid_resolution=DEFAULT_RESOLUTION):
    """(theta_P grid, Alice-optimised F) over [0, pi]."""
    thetas = grid_points(0.0, math.pi, grid_resolution)
    return thetas, optimized_f_max(state, thetas)


def keyrate(f_i: float) -> float:
    """Key-rate bound log2[F_I / (2 F_lim(I) - F_I)], clamped to 0 at or below F_lim(I)."""
    if not (0.0 <= f_i <= 1.0):
        raise InvalidParameterError(f"F_I={f_i!r} outside [0, 1]")
    if f_i <= F_LIM_I:
        return 0.0
    return math.log2(f_i / (2.0 * F_LIM_I - f_i))


# --- brute-force oracle ----------------------------------------------------

def alice_grid_search(state: StateParams, theta_p: float, outcome=(0, 0),
                      resolution=DEFAULT_RESOLUTION):
    """Grid-plus-polish maximum of F^{a,b} over (theta_S, theta_T) from conditionals.

    Alice's azimuths equal the state phase, Bob is in the x-z plane.  The two
    halves of F depend on different angles, so each is scanned in 1-D.

    Returns
    -------
    f, theta_s, theta_t : float
    """
    a, b = outcome

    def half(bob_theta):
        def cond(thetas):
            pr = joint_probability_array(state, thetas, bob_theta, state.phi, 0.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                v = pr[..., a, b] / (pr[..., a, b] + pr[..., a, 1 - b])
            return np.where(np.isfinite(v), 0.5 * v, -np.inf)
        return cond

    ts, fs = grid_maximize(half(theta_p), -math.pi, math.pi, resolution)
    tt, ft = grid_maximize(half(theta_p + math.pi / 2.0), -math.pi, math.pi, resolution)
    return fs + ft, ts, tt
