import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wernersteer import bounds, steering
from wernersteer.bounds import BoundKind, hierarchy_curves, p_threshold, p_threshold_numeric
from wernersteer.chsh import max_chsh_value
from wernersteer.errors import InvalidParameterError
from wernersteer.states import StateParams, concurrence


def test_werner_thresholds():
    assert p_threshold(BoundKind.ENTANGLEMENT, 0.5) == pytest.approx(1 / 3, abs=1e-12)
    assert p_threshold(BoundKind.CHSH, 0.5) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert p_threshold(BoundKind.STEERING_II, 0.5) == pytest.approx(0.5, abs=1e-9)
    assert p_threshold(BoundKind.STEERING_I, 0.5) == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_invalid():
    with pytest.raises(InvalidParameterError):
        p_threshold("chsh", 1.2)
    with pytest.raises(InvalidParameterError):
        p_threshold("chsh", 0.5, -0.1)


@pytest.mark.parametrize("kind", list(BoundKind))
def test_unreachable_at_product_states(kind):
    assert p_threshold(kind, 0.0) is None
    assert p_threshold(kind, 1.0, eta=0.7) is None


@pytest.mark.parametrize("kind", [BoundKind.ENTANGLEMENT, BoundKind.CHSH, BoundKind.STEERING_I])
def test_unreachable_for_classical_correlations(kind):
    assert p_threshold(kind, 0.5, eta=0.5) is None


def test_fixed_pi_over_4_flags_classical_state():
    # eta = 1/2 leaves only z correlations; Bob's pi/4, 3pi/4 pair then gives
    # F = cos^2(pi/8) at p = 1, above 3/4, although the state is separable.
    s = StateParams(0.5, 1.0, 0.5)
    assert steering.scenario_II(s).f_value == pytest.approx(math.cos(math.pi / 8) ** 2)
    assert p_threshold(BoundKind.STEERING_II, 0.5, eta=0.5) == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert steering.min_over_thetap(s)[1] == pytest.approx(0.75, abs=1e-9)


@given(st.floats(0.01, 0.99), st.floats(0.6, 1.0))
@settings(max_examples=30, deadline=None)
def test_closed_forms_match_root_finding(a, eta):
    for kind in (BoundKind.ENTANGLEMENT, BoundKind.CHSH):
        closed, numeric = p_threshold(kind, a, eta), p_threshold_numeric(kind, a, eta)
        assert (closed is None) == (numeric is None)
        if closed is not None:
            assert abs(closed - numeric) < 1e-9


@given(st.floats(0.01, 0.99), st.floats(0.6, 1.0))
@settings(max_examples=30, deadline=None)
def test_threshold_is_on_the_limit(a, eta):
    for kind, fn, lim in ((BoundKind.STEERING_I, steering.scenario_I, steering.F_LIM_I),
                          (BoundKind.STEERING_II, steering.scenario_II, steering.F_LIM_II)):
        t = p_threshold(kind, a, eta)
        if t is not None and t > 0:
            assert abs(fn(StateParams(a, t, eta)).f_value - lim) < 1e-8
    t = p_threshold(BoundKind.CHSH, a, eta)
    if t is not None:
        assert abs(max_chsh_value(StateParams(a, t, eta)) - 2.0) < 1e-12
    t = p_threshold(BoundKind.ENTANGLEMENT, a, eta)
    if t is not None:
        assert concurrence(StateParams(a, t, eta)) == pytest.approx(0.0, abs=1e-12)


def test_hierarchy_without_dephasing():
    grid = np.linspace(0.0, 1.0, 101)
    curves = hierarchy_curves(1.0, grid)
    th = np.array([c.thresholds for c in curves])
    assert np.all(th[:-1] <= th[1:] + 1e-12)
    inner = (grid > 0) & (grid < 1) & (np.abs(grid - 0.5) > 1e-9)
    assert np.all(th[2][inner] < th[3][inner])
    i = np.argmin(np.abs(grid - 0.5))
    assert th[2][i] == pytest.approx(th[3][i], abs=1e-9)


def test_dephasing_raises_thresholds():
    grid = np.linspace(0.0, 1.0, 41)
    for kind in bounds.HIERARCHY:
        hi = bounds.threshold_curve(kind, 0.96, grid).thresholds
        lo = bounds.threshold_curve(kind, 1.0, grid).thresholds
        assert np.all(hi >= lo - 1e-12)


def test_mirror_symmetry():
    grid = np.linspace(0.0, 1.0, 41)
    for c in hierarchy_curves(0.96, grid):
        t = c.thresholds
        finite = np.isfinite(t)
        assert np.array_equal(finite, finite[::-1])
        assert np.max(np.abs(t[finite] - t[::-1][finite])) < 1e-9


def test_steering_i_above_chsh_at_half_with_dephasing():
    # closed forms: F_I(1/2) = 1/2 + p eta / 2 and S = 2 p sqrt(1 + (2 eta - 1)^2)
    eta = 0.96
    t_i = p_threshold(BoundKind.STEERING_I, 0.5, eta)
    t_chsh = p_threshold(BoundKind.CHSH, 0.5, eta)
    assert t_i == pytest.approx(1 / (math.sqrt(2) * eta), abs=1e-9)
    assert t_chsh == pytest.approx(1 / math.sqrt(1 + (2 * eta - 1) ** 2), abs=1e-12)
    assert t_i > t_chsh


def test_curve_validation():
    with pytest.raises(InvalidParameterError):
        bounds.BoundCurve(BoundKind.CHSH, 1.0, ((0.5, 0.7), (0.4, 0.7)))
    with pytest.raises(InvalidParameterError):
        bounds.BoundCurve(BoundKind.CHSH, 1.0, ((0.5, 1.7),))


def test_grothendieck():
    lo, hi = bounds.grothendieck_window()
    assert (lo, hi) == (0.6829, 0.7012)
    assert lo == pytest.approx(1 / bounds.K_G3_UPPER, abs=1e-4)
    assert hi == pytest.approx(1 / bounds.K_G3_LOWER, abs=1e-4)
    assert lo < 1 / math.sqrt(2) < hi + 0.01
    assert 1 / math.sqrt(2) > hi
