"""Lower bounds on the noise parameter p for each level of the correlation hierarchy.

A threshold is the p above which the state is entangled, CHSH non-local, or
detected as steerable (scenario I or II).  ``None`` marks a level that is
not reached even at p = 1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import steering
from .chsh import CHSH_LIMIT, max_chsh_value
from .errors import InvalidParameterError
from .states import StateParams

#: Published bounds on Grothendieck's constant K_G(3).
K_G3_LOWER = 1.4261
K_G3_UPPER = 1.4644

DEFAULT_ALPHA_POINTS = 201
_XTOL = 1e-14


class BoundKind(str, enum.Enum):
    ENTANGLEMENT = "entanglement"
    STEERING_II = "steering_II"
    STEERING_I = "steering_I"
    CHSH = "chsh"


#: Hierarchy order, weakest correlation first.
HIERARCHY = (BoundKind.ENTANGLEMENT, BoundKind.STEERING_II, BoundKind.STEERING_I, BoundKind.CHSH)


@dataclass(frozen=True)
class BoundCurve:
    kind: BoundKind
    eta: float
    points: tuple  # ((alpha, threshold_or_None), ...)

    def __post_init__(self):
        alphas = [a for a, _ in self.points]
        if any(b <= a for a, b in zip(alphas, alphas[1:])):
            raise InvalidParameterError("alpha grid must be strictly increasing")
        for a, t in self.points:
            if t is not None and not (0.0 <= t <= 1.0):
                raise InvalidParameterError(f"threshold {t!r} at alpha={a!r} outside [0, 1]")

    @property
    def alphas(self):
        return np.array([a for a, _ in self.points])

    @property
    def thresholds(self):
        """Thresholds as floats with ``inf`` for unreachable points."""
        return np.array([math.inf if t is None else t for _, t in self.points])


def _validate(alpha, eta):
    for name, v in (("alpha", alpha), ("eta", eta)):
        if not (0.0 <= v <= 1.0):
            raise InvalidParameterError(f"{name}={v!r} outside [0, 1]")


def witness(kind, alpha, eta):
    """Function of p that is positive exactly where ``kind`` is detected."""
    kind = BoundKind(kind)
    if kind is BoundKind.ENTANGLEMENT:
        x = abs((2.0 * eta - 1.0) * math.sqrt(alpha * (1.0 - alpha)))
        return lambda p: p * x - (1.0 - p) / 4.0
    if kind is BoundKind.CHSH:
        return lambda p: max_chsh_value(StateParams(alpha, p, eta)) - CHSH_LIMIT
    if kind is BoundKind.STEERING_I:
        return lambda p: (steering.scenario_I(StateParams(alpha, p, eta)).f_value
                          - steering.F_LIM_I)
    return lambda p: (steering.scenario_II(StateParams(alpha, p, eta)).f_value
                      - steering.F_LIM_II)


def _bisect(w):
    if w(1.0) <= 0.0:
        return None
    if w(0.0) > 0.0:
        return 0.0
    return brentq(w, 0.0, 1.0, xtol=_XTOL, rtol=4 * np.finfo(float).eps)


def p_threshold(kind, alpha: float, eta: float = 1.0):
    """Smallest p at which ``kind`` is detected, or ``None`` if unreachable.

    Entanglement and CHSH use the closed forms 1/(1 + 4|2 eta - 1| sqrt(alpha (1 - alpha)))
    and 1/sqrt(1 + 4 (2 eta - 1)^2 alpha (1 - alpha)).  Steering thresholds
    are roots of F(p) = F_lim, found by bracketing since F grows with p.
    """
    kind = BoundKind(kind)
    _validate(alpha, eta)
    x = (2.0 * eta - 1.0) * math.sqrt(alpha * (1.0 - alpha))
    if kind is BoundKind.ENTANGLEMENT:
        t = 1.0 / (1.0 + 4.0 * abs(x))
        return None if t >= 1.0 else t
    if kind is BoundKind.CHSH:
        t = 1.0 / math.sqrt(1.0 + 4.0 * x * x)
        return None if t >= 1.0 else t
    return _bisect(witness(kind, alpha, eta))


def p_threshold_numeric(kind, alpha: float, eta: float = 1.0):
    """Root-finding threshold for any kind; oracle for the closed forms."""
    _validate(alpha, eta)
    return _bisect(witness(kind, alpha, eta))


def default_alpha_grid(n=DEFAULT_ALPHA_POINTS):
    return np.linspace(0.0, 1.0, n)


def threshold_curve(kind, eta, alpha_grid=None) -> BoundCurve:
    grid = default_alpha_grid() if alpha_grid is None else alpha_grid
    pts = tuple((float(a), p_threshold(kind, float(a), eta)) for a in grid)
    return BoundCurve(BoundKind(kind), float(eta), pts)


def hierarchy_curves(eta: float, alpha_grid=None, kinds=HIERARCHY):
    """Threshold curves for each kind over the alpha grid."""
    return [threshold_curve(k, eta, alpha_grid) for k in kinds]


def grothendieck_window():
    """Werner-state p window (p_low, p_high) = (1/K_G upper, 1/K_G lower) from K_G(3) bounds.

    Below p_low a Werner state is certainly Bell local for arbitrary projective measurements.
    """
    return 0.6829, 0.7012
