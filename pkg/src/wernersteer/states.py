"""Generalized Werner states and their projective-measurement statistics.

The state family is

    rho = p (eta |Phi+><Phi+| + (1 - eta) |Phi-><Phi-|) + (1 - p) I/4,
    |Phi+-> = sqrt(alpha)|00> +- exp(i phi) sqrt(1 - alpha)|11>,

in the basis order |00>, |01>, |10>, |11>.  Every quantity here has two
routes: a closed form (used by the rest of the package) and an explicit
4x4 matrix evaluation kept alongside it as an oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError

TWO_PI = 2.0 * math.pi

#: Tolerances for the density-matrix invariants.
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
#: Largest negative rounding error silently clamped to zero in probabilities.
CLAMP_TOL = 1e-12

_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
_SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_unit(name, value):
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise InvalidParameterError(f"{name}={value!r} outside [0, 1]")


@dataclass(frozen=True)
class StateParams:
    """Parameters (alpha, p, eta, phi) of a generalized Werner state.

    ``alpha`` weights the |00> component, ``p`` is the non-white-noise
    fraction, ``eta`` the dephasing weight between the two phase-related
    pure states and ``phi`` their relative phase (stored in [0, 2pi)).
    """

    alpha: float
    p: float
    eta: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "p", "eta"):
            _check_unit(name, float(getattr(self, name)))
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)

    @property
    def coherence(self):
        """(2 eta - 1) sqrt(alpha (1 - alpha)), the off-diagonal amplitude per unit p."""
        return (2.0 * self.eta - 1.0) * math.sqrt(self.alpha * (1.0 - self.alpha))

    @property
    def imbalance(self):
        """2 alpha - 1."""
        return 2.0 * self.alpha - 1.0

    def replace(self, **changes):
        fields = dict(alpha=self.alpha, p=self.p, eta=self.eta, phi=self.phi)
        fields.update(changes)
        return StateParams(**fields)


def werner(p):
    """Plain Werner state: alpha = 1/2, eta = 1, phi = 0."""
    return StateParams(alpha=0.5, p=p, eta=1.0, phi=0.0)


@dataclass(frozen=True)
class MeasurementSetting:
    """Observable cos(theta) sz + sin(theta) (cos(phi_axis) sx + sin(phi_axis) sy).

    Any (theta, phi_axis) pair is accepted and mapped onto the same Bloch
    direction with theta in [0, pi] and phi_axis in [0, 2pi).
    """

    theta: float
    phi_axis: float = 0.0

    def __post_init__(self):
        theta = float(self.theta) % TWO_PI
        phi_axis = float(self.phi_axis)
        if theta > math.pi:
            theta = TWO_PI - theta
            phi_axis += math.pi
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi_axis", phi_axis % TWO_PI)

    def operator(self):
        """2x2 observable matrix."""
        st = math.sin(self.theta)
        return (math.cos(self.theta) * _SIGMA_Z
                + st * math.cos(self.phi_axis) * _SIGMA_X
                + st * math.sin(self.phi_axis) * _SIGMA_Y)

    def eigenvectors(self):
        """(|0_U>, |1_U>), the +1 and -1 eigenvectors of the observable."""
        c, s = math.cos(self.theta / 2.0), math.sin(self.theta / 2.0)
        ph = np.exp(1j * self.phi_axis)
        return (np.array([c, s * ph]), np.array([-s, c * ph]))


SIGMA_Z = MeasurementSetting(0.0)
SIGMA_X = MeasurementSetting(math.pi / 2.0)


@dataclass(frozen=True)
class JointProbabilities:
    """Outcome probabilities P(a, b) for one joint setting, a for Alice and b for Bob."""

    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        for name in ("p00", "p01", "p10", "p11"):
            v = float(getattr(self, name))
            if v < 0.0:
                if v < -CLAMP_TOL:
                    raise InvalidParameterError(f"{name}={v!r} is negative")
                v = 0.0
            if v > 1.0 + CLAMP_TOL:
                raise InvalidParameterError(f"{name}={v!r} exceeds 1")
            object.__setattr__(self, name, min(v, 1.0))
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) > 1e-12:
            raise InvalidParameterError(f"probabilities sum to {total!r}")

    def __getitem__(self, ab):
        a, b = ab
        return (self.p00, self.p01, self.p10, self.p11)[2 * a + b]

    def as_tuple(self):
        return (self.p00, self.p01, self.p10, self.p11)


def build_state(params: StateParams) -> np.ndarray:
    """Explicit 4x4 density matrix of the state."""
    a, p, eta = params.alpha, params.p, params.eta
    ph = np.exp(1j * params.phi)
    plus = np.array([math.sqrt(a), 0, 0, ph * math.sqrt(1 - a)])
    minus = np.array([math.sqrt(a), 0, 0, -ph * math.sqrt(1 - a)])
    rho = p * (eta * np.outer(plus, plus.conj())
               + (1 - eta) * np.outer(minus, minus.conj()))
    return rho + (1 - p) / 4.0 * np.eye(4)


def x_state_eigenvalues(rho):
    """Eigenvalues of an X-shaped 4x4 Hermitian matrix via its two 2x2 blocks.

    The outer block couples |00> and |11>, the inner one |01> and |10>.
    """
    out = []
    for i, j in ((0, 3), (1, 2)):
        a, d = rho[i, i].real, rho[j, j].real
        w = abs(rho[i, j])
        mean, half = (a + d) / 2.0, math.hypot((a - d) / 2.0, w)
        out.extend((mean - half, mean + half))
    return np.array(sorted(out))


def check_density_matrix(rho):
    """Raise if ``rho`` is not Hermitian, unit trace, X-shaped and PSD."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise InvalidParameterError(f"expected a 4x4 matrix, got {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITIAN_TOL:
        raise InvalidParameterError(f"not Hermitian (deviation {herm:.3g})")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidParameterError(f"trace {tr!r} != 1")
    mask = np.ones((4, 4), dtype=bool)
    mask[np.arange(4), np.arange(4)] = False
    mask[np.arange(4), 3 - np.arange(4)] = False
    if np.any(np.abs(rho[mask]) > HERMITIAN_TOL):
        raise InvalidParameterError("matrix is not X-shaped")
    low = x_state_eigenvalues(rho)[0]
    if low < -PSD_TOL:
        raise InvalidParameterError(f"negative eigenvalue {low:.3g}")
    return rho


def joint_probabilities(state: StateParams, a: MeasurementSetting,
                        b: MeasurementSetting) -> JointProbabilities:
    """Closed-form outcome probabilities for Alice measuring ``a`` and Bob ``b``.

    With e_a, e_b = +1 for outcome 0 and -1 for outcome 1,

        P(a, b) = [1 + p (e_a g cA + e_b g cB
                          + e_a e_b (cA cB + K cos(phi - phiA - phiB) sA sB))] / 4

    where g = 2 alpha - 1 and K = 2 (2 eta - 1) sqrt(alpha (1 - alpha)).
    """
    g = state.imbalance
    k = 2.0 * state.coherence * math.cos(state.phi - a.phi_axis - b.phi_axis)
    ca, sa = math.cos(a.theta), math.sin(a.theta)
    cb, sb = math.cos(b.theta), math.sin(b.theta)
    corr = ca * cb + k * sa * sb
    p = state.p
    probs = []
    for ea in (1.0, -1.0):
        for eb in (1.0, -1.0):
            probs.append(0.25 * (1.0 + p * (ea * g * ca + eb * g * cb + ea * eb * corr)))
    return JointProbabilities(*probs)


def joint_probabilities_trace(state: StateParams, a: MeasurementSetting,
                              b: MeasurementSetting) -> JointProbabilities:
    """Same probabilities as :func:`joint_probabilities`, from <ab|rho|ab>."""
    rho = build_state(state)
    probs = []
    for va in a.eigenvectors():
        for vb in b.eigenvectors():
            v = np.kron(va, vb)
            probs.append(float(np.real(v.conj() @ rho @ v)))
    return JointProbabilities(*probs)


def correlation(jp: JointProbabilities) -> float:
    """E = P(0,0) + P(1,1) - P(0,1) - P(1,0)."""
    e = jp.p00 + jp.p11 - jp.p01 - jp.p10
    return min(1.0, max(-1.0, e))


def visibilities(state: StateParams):
    """(V_z, V_x): absolute correlations in the sz x sz and sx x sx bases.

    For phi in {0, pi} these equal p and 2 p (2 eta - 1) sqrt(alpha (1 - alpha));
    for other phases V_x carries an extra |cos phi|.
    """
    vz = abs(correlation(joint_probabilities(state, SIGMA_Z, SIGMA_Z)))
    vx = abs(correlation(joint_probabilities(state, SIGMA_X, SIGMA_X)))
    return vz, vx


def concurrence(state: StateParams) -> float:
    """Concurrence 2 max(0, p |2 eta - 1| sqrt(alpha (1 - alpha)) - (1 - p)/4).

    The absolute value only matters for eta < 1/2, where the dephased
    mixture is the eta -> 1 - eta, phi -> phi + pi state.
    """
    c = state.p * abs(state.coherence) - (1.0 - state.p) / 4.0
    return 2.0 * c if c > 0.0 else 0.0


def x_state_concurrence(rho) -> float:
    """Concurrence of an X-shaped two-qubit density matrix.

    C = 2 max(0, |z| - sqrt(a d), |w| - sqrt(b c)) with w = rho[0, 3] and
    z = rho[1, 2].
    """
    rho = np.asarray(rho)
    a, b, c, d = (rho[i, i].real for i in range(4))
    w, z = abs(rho[0, 3]), abs(rho[1, 2])
    best = max(0.0, z - math.sqrt(max(a * d, 0.0)), w - math.sqrt(max(b * c, 0.0)))
    return 2.0 * best


def hwp_to_alpha(chi: float) -> float:
    """alpha = cos^2(2 chi) for a pump half-wave plate at angle ``chi``."""
    return math.cos(2.0 * chi) ** 2


def joint_probability_array(state: StateParams, theta_a, theta_b, phi_a=0.0, phi_b=0.0):
    """Vectorised :func:`joint_probabilities` over broadcastable angle arrays.

    Returns an array of shape ``broadcast_shape + (2, 2)`` indexed ``[..., a, b]``.
    No clamping or validation; meant for dense grid scans.
    """
    theta_a, theta_b = np.asarray(theta_a, dtype=float), np.asarray(theta_b, dtype=float)
    g = state.imbalance
    k = 2.0 * state.coherence * np.cos(state.phi - np.asarray(phi_a) - np.asarray(phi_b))
    ca, sa = np.cos(theta_a), np.sin(theta_a)
    cb, sb = np.cos(theta_b), np.sin(theta_b)
    corr = ca * cb + k * sa * sb
    out = np.empty(np.broadcast(theta_a, theta_b, k).shape + (2, 2))
    for i, ea in enumerate((1.0, -1.0)):
        for j, eb in enumerate((1.0, -1.0)):
            out[..., i, j] = 0.25 * (1.0 + state.p * (ea * g * ca + eb * g * cb + ea * eb * corr))
    return out
