import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wernersteer.chsh import (TSIRELSON, ChshSettings, canonical_settings, chsh_grid_search,
                              chsh_value, chsh_value_swapped, max_chsh, max_chsh_value,
                              optimal_bob_angles)
from wernersteer.states import SIGMA_Z, StateParams, werner

unit = st.floats(0.0, 1.0)
states = st.builds(StateParams, unit, unit, unit, st.floats(0.0, 2 * math.pi))


def test_tsirelson_for_bell_state():
    s = ChshSettings.from_angles(0, math.pi / 2, math.pi / 4, 3 * math.pi / 4)
    assert chsh_value(werner(1.0), s) == pytest.approx(TSIRELSON)
    assert max_chsh(werner(1.0)).s_value == pytest.approx(TSIRELSON)


def test_fully_mixed_is_zero():
    s = ChshSettings.from_angles(0.1, 1.2, 2.0, -0.5)
    assert chsh_value(werner(0.0), s) == pytest.approx(0.0, abs=1e-15)


def test_all_sigma_z():
    s = ChshSettings(SIGMA_Z, SIGMA_Z, SIGMA_Z, SIGMA_Z)
    assert chsh_value(werner(0.9), s) == pytest.approx(1.8)


def test_bob_angles_werner():
    # negative sx-sx correlation (phi = pi): the 2 atan[(sqrt(2) +- 1)] pair as is
    tb, tbp = optimal_bob_angles(StateParams(0.5, 1.0, 1.0, math.pi))
    assert tb == pytest.approx(3 * math.pi / 4)
    assert tbp == pytest.approx(math.pi / 4)
    # positive correlation (phi = 0): mirrored pair theta -> pi - theta
    tb, tbp = optimal_bob_angles(werner(1.0))
    assert tb == pytest.approx(math.pi / 4)
    assert tbp == pytest.approx(3 * math.pi / 4)


@pytest.mark.parametrize("p", [0.2, 0.7, 1.0])
def test_werner_value_scales_with_p(p):
    st_ = werner(p)
    assert chsh_value(st_, canonical_settings(st_)) == pytest.approx(2 * math.sqrt(2) * p)


def test_max_values():
    assert max_chsh_value(StateParams(0.5, 1, 1)) == pytest.approx(TSIRELSON)
    assert max_chsh_value(StateParams(0.5, 0.9, 0.96)) == pytest.approx(1.8 * math.sqrt(1.8464))
    assert max_chsh_value(StateParams(0.5, 0.9, 0.96)) == pytest.approx(2.446, abs=5e-4)
    assert max_chsh_value(StateParams(0.0, 1, 1)) == pytest.approx(2.0)


def test_product_state_angles():
    st_ = StateParams(0.0, 0.8, 1.0)
    assert optimal_bob_angles(st_) == (0.0, math.pi)
    assert chsh_value(st_, canonical_settings(st_)) == pytest.approx(1.6)


@given(states)
@settings(max_examples=200, deadline=None)
def test_canonical_settings_attain_max(s):
    res = max_chsh(s)
    assert abs(chsh_value(s, res.settings) - res.s_value) < 1e-9


@given(states)
@settings(max_examples=30, deadline=None)
def test_grid_oracle_does_not_beat_closed_form(s):
    s_grid, _, _ = chsh_grid_search(s)
    assert abs(s_grid - max_chsh_value(s)) < 1e-6


@pytest.mark.parametrize("phi", [0.0, math.pi, 1.0, 4.0])
def test_phase_branches(phi):
    s = StateParams(0.3, 0.9, 0.96, phi)
    assert chsh_value(s, canonical_settings(s)) == pytest.approx(max_chsh_value(s), abs=1e-12)


@given(states, st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4), st.floats(-4, 4))
@settings(deadline=None)
def test_no_settings_exceed_max(s, a, ap, b, bp):
    stt = ChshSettings.from_angles(a, ap, b, bp)
    assert chsh_value(s, stt) <= max_chsh_value(s) + 1e-12
    assert chsh_value_swapped(s, stt) <= max_chsh_value(s) + 1e-12


@given(unit, unit, unit)
def test_alpha_flip_symmetry(a, p, eta):
    assert abs(max_chsh_value(StateParams(a, p, eta)) - max_chsh_value(StateParams(1 - a, p, eta))) < 1e-12


def test_violates_flag():
    assert max_chsh(werner(0.8)).violates
    assert not max_chsh(werner(0.7)).violates
