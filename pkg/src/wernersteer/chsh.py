"""CHSH Bell parameter: arbitrary settings, analytic maximum and its angles."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optimize import DEFAULT_RESOLUTION, grid_maximize
from .states import (MeasurementSetting, StateParams, correlation,
                     joint_probabilities, joint_probability_array)

#: Local-hidden-variable bound of the CHSH inequality.
CHSH_LIMIT = 2.0
TSIRELSON = 2.0 * math.sqrt(2.0)

_PHASE_TOL = 1e-12


@dataclass(frozen=True)
class ChshSettings:
    a: MeasurementSetting
    a_prime: MeasurementSetting
    b: MeasurementSetting
    b_prime: MeasurementSetting

    @classmethod
    def from_angles(cls, theta_a, theta_a_prime, theta_b, theta_b_prime, phi_b=0.0):
        """Alice in the x-z plane, Bob at azimuth ``phi_b``."""
        return cls(MeasurementSetting(theta_a), MeasurementSetting(theta_a_prime),
                   MeasurementSetting(theta_b, phi_b), MeasurementSetting(theta_b_prime, phi_b))


@dataclass(frozen=True)
class ChshResult:
    s_value: float
    settings: ChshSettings

    @property
    def violates(self):
        return self.s_value > CHSH_LIMIT


def _e(state, x, y):
    return correlation(joint_probabilities(state, x, y))


def chsh_value(state: StateParams, settings: ChshSettings) -> float:
    """S = |E(A,B) - E(A,B') + E(A',B) + E(A',B')|."""
    st = settings
    return abs(_e(state, st.a, st.b) - _e(state, st.a, st.b_prime)
               + _e(state, st.a_prime, st.b) + _e(state, st.a_prime, st.b_prime))


def chsh_value_swapped(state: StateParams, settings: ChshSettings) -> float:
    """Alternative arrangement |E(A,B) - E(A',B) + E(A,B') + E(A',B')|.

    Equals :func:`chsh_value` with the parties' roles exchanged, so both
    arrangements share the same maximum.
    """
    st = settings
    return abs(_e(state, st.a, st.b) - _e(state, st.a_prime, st.b)
               + _e(state, st.a, st.b_prime) + _e(state, st.a_prime, st.b_prime))


def max_chsh_value(state: StateParams) -> float:
    """2 p sqrt(1 + 4 (2 eta - 1)^2 alpha (1 - alpha))."""
    k = 2.0 * state.coherence
    return 2.0 * state.p * math.sqrt(1.0 + k * k)


def _bob_azimuth(phi):
    # Phases 0 and pi stay in the x-z plane; any other phase is absorbed by Bob.
    if abs(math.sin(phi)) <= _PHASE_TOL:
        return 0.0
    return phi


def optimal_bob_angles(state: StateParams):
    """Bob's polar angles maximising S with A = sz and A' = sx.

    The closed form

        theta_{B,B'} = 2 atan[(sqrt(K^2 + 1) +- 1) / K],  K = 2 (2 eta - 1) sqrt(alpha (1 - alpha)),

    maximises S when the sx x sx correlation is negative (cos phi = -1 for
    Bob in the x-z plane).  For a positive correlation the maximising pair is
    the mirror image theta -> pi - theta.  At K = 0 the state is a product in
    the x-z plane and (0, pi) attains S = 2p.

    The angles do not depend on p.  Bob's azimuth is 0 for phi in {0, pi}
    and phi otherwise (see :func:`max_chsh`).

    Returns
    -------
    theta_b, theta_b_prime : float
        In (-pi, pi].
    """
    k = 2.0 * state.coherence
    phi_b = _bob_azimuth(state.phi)
    sign = math.cos(state.phi - phi_b)
    if k == 0.0 or abs(k * sign) < 1e-15:
        return 0.0, math.pi
    r = math.sqrt(k * k + 1.0)
    theta_b = 2.0 * math.atan((r + 1.0) / k)
    theta_bp = 2.0 * math.atan((r - 1.0) / k)
    if sign > 0.0:
        theta_b, theta_bp = math.pi - theta_b, math.pi - theta_bp
    return _wrap(theta_b), _wrap(theta_bp)


def _wrap(theta):
    t = math.remainder(theta, 2.0 * math.pi)
    return math.pi if t == -math.pi else t


def canonical_settings(state: StateParams) -> ChshSettings:
    theta_b, theta_bp = optimal_bob_angles(state)
    return ChshSettings.from_angles(0.0, math.pi / 2.0, theta_b, theta_bp,
                                    phi_b=_bob_azimuth(state.phi))


def max_chsh(state: StateParams) -> ChshResult:
    """Maximal CHSH value and the settings attaining it."""
    return ChshResult(max_chsh_value(state), canonical_settings(state))


def chsh_grid_search(state: StateParams, resolution=DEFAULT_RESOLUTION, phi_b=None):
    """Brute-force max of S over Bob's angles with A = sz, A' = sx.

    S splits as |u(theta_B) + v(theta_B')|, so two 1-D scans suffice.
    Used as an oracle for :func:`optimal_bob_angles`.

    Returns
    -------
    s_max, theta_b, theta_b_prime : float
    """
    if phi_b is None:
        phi_b = _bob_azimuth(state.phi)

    def corr(theta_a, thetas):
        pr = joint_probability_array(state, theta_a, thetas, 0.0, phi_b)
        return pr[..., 0, 0] + pr[..., 1, 1] - pr[..., 0, 1] - pr[..., 1, 0]

    def u(t):
        return corr(0.0, t) + corr(math.pi / 2.0, t)

    def v(t):
        return -corr(0.0, t) + corr(math.pi / 2.0, t)

    lo, hi = -math.pi, math.pi
    tb_hi, u_hi = grid_maximize(u, lo, hi, resolution)
    tbp_hi, v_hi = grid_maximize(v, lo, hi, resolution)
    tb_lo, u_lo = grid_maximize(lambda t: -u(t), lo, hi, resolution)
    tbp_lo, v_lo = grid_maximize(lambda t: -v(t), lo, hi, resolution)
    if u_hi + v_hi >= u_lo + v_lo:
        return u_hi + v_hi, tb_hi, tbp_hi
    return u_lo + v_lo, tb_lo, tbp_lo
