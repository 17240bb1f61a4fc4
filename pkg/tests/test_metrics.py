"""Figure-of-merit arithmetic checks.

Everything in the metrics module is closed-form, so the oracle is hand
arithmetic: cooperativity endpoints, the threshold-power Lorentzian, the
Bose factor and its Rayleigh-Jeans limit.
"""

import math

import pytest
from hypothesis import given, strategies as st

from slotbrillouin.constants import CONSTANTS
from slotbrillouin.errors import DomainError
from slotbrillouin.metrics import (
    coherence_check,
    cooperativity,
    lasing_threshold,
    sideband_resolved,
    thermal_occupancy,
)

_TWO_PI = 2.0 * math.pi

# reference rates used across the endpoint checks
_G0 = _TWO_PI * 250e3
_KAPPA = _TWO_PI * 1e9
_OMEGA_M = _TWO_PI * 400e6
_OMEGA_OPT = _TWO_PI * CONSTANTS.c0 / 1.55e-6


def _gamma(q: float) -> float:
    return _OMEGA_M / q


def test_cooperativity_endpoints():
    assert cooperativity(_G0, _KAPPA, _gamma(1e5)) == pytest.approx(0.0625, abs=1e-6)
    assert cooperativity(_G0, _KAPPA, _gamma(1e8)) == pytest.approx(62.5, abs=1e-3)


def test_cooperativity_scales_quadratically_in_g0():
    base = cooperativity(_G0, _KAPPA, _gamma(1e5))
    assert cooperativity(2.0 * _G0, _KAPPA, _gamma(1e5)) == pytest.approx(4.0 * base)


def test_cooperativity_validation():
    with pytest.raises(DomainError):
        cooperativity(-1.0, _KAPPA, _gamma(1e5))
    with pytest.raises(DomainError):
        cooperativity(_G0, 0.0, _gamma(1e5))
    with pytest.raises(DomainError):
        cooperativity(_G0, _KAPPA, 0.0)


def test_threshold_power_reference_point():
    p = lasing_threshold(_G0, _KAPPA, _gamma(1e4), _OMEGA_OPT)
    assert p == pytest.approx(64.4e-9, rel=1e-2)
    assert 30e-9 < p < 300e-9


def test_doubling_g0_quarters_threshold():
    base = lasing_threshold(_G0, _KAPPA, _gamma(1e4), _OMEGA_OPT)
    assert lasing_threshold(2.0 * _G0, _KAPPA, _gamma(1e4), _OMEGA_OPT) == pytest.approx(
        base / 4.0
    )


def test_half_linewidth_detuning_doubles_threshold():
    base = lasing_threshold(_G0, _KAPPA, _gamma(1e4), _OMEGA_OPT)
    detuned = lasing_threshold(
        _G0, _KAPPA, _gamma(1e4), _OMEGA_OPT, detuning=_KAPPA / 2.0
    )
    assert detuned == pytest.approx(2.0 * base)


@given(st.floats(min_value=1e3, max_value=1e8))
def test_threshold_times_cooperativity_is_g0_free(g0_over_2pi):
    # P_th C0 = hbar omega ((kappa/2)^2 + Delta^2) / kappa_ext regardless of g0
    g0 = _TWO_PI * g0_over_2pi
    product = lasing_threshold(g0, _KAPPA, _gamma(1e4), _OMEGA_OPT) * cooperativity(
        g0, _KAPPA, _gamma(1e4)
    )
    expected = CONSTANTS.hbar * _OMEGA_OPT * (_KAPPA / 2.0) ** 2 / (_KAPPA / 2.0)
    assert product == pytest.approx(expected, rel=1e-9)


def test_zero_g0_threshold_undefined():
    with pytest.raises(DomainError):
        lasing_threshold(0.0, _KAPPA, _gamma(1e4), _OMEGA_OPT)


def test_occupancy_reference_point():
    n = thermal_occupancy(_OMEGA_M, 20e-3)
    assert n == pytest.approx(0.62, abs=0.02)
    assert n < 1.0


def test_occupancy_zero_temperature_is_empty():
    assert thermal_occupancy(_OMEGA_M, 0.0) == 0.0
    with pytest.raises(DomainError):
        thermal_occupancy(_OMEGA_M, -1.0)
    with pytest.raises(DomainError):
        thermal_occupancy(0.0, 1.0)


def test_occupancy_classical_limit():
    # k_B T >> hbar Omega: n_m approaches k_B T / hbar Omega
    classical = CONSTANTS.k_B * 4.0 / (CONSTANTS.hbar * _OMEGA_M)
    assert thermal_occupancy(_OMEGA_M, 4.0) == pytest.approx(classical, rel=0.05)


@given(
    st.floats(min_value=1e6, max_value=1e11),
    st.floats(min_value=1e-3, max_value=300.0),
)
def test_occupancy_positive_and_monotone_in_temperature(omega_m, temperature):
    n = thermal_occupancy(omega_m, temperature)
    # hbar omega / k_B T reaches ~764 at the corner of these ranges; past
    # ~745 the true occupation lies below the smallest subnormal and 0.0
    # is the correctly rounded value, so strict positivity applies only
    # where a positive double exists
    assert n >= 0.0
    if CONSTANTS.hbar * omega_m < 700.0 * CONSTANTS.k_B * temperature:
        assert n > 0.0
    assert thermal_occupancy(omega_m, 2.0 * temperature) > n


def test_coherence_reference_point():
    ok, margin = coherence_check(60.0, 1.0, 0.62)
    assert ok
    assert margin == pytest.approx(97.0, abs=1.0)


def test_coherence_edge_cases():
    assert coherence_check(60.0, 0.0, 0.62) == (False, 0.0)
    ok, margin = coherence_check(60.0, 1.0, 0.0)
    assert ok
    assert margin == math.inf
    # equality loses: the inequality is strict
    assert coherence_check(1.0, 1.0, 1.0)[0] is False
    with pytest.raises(DomainError):
        coherence_check(60.0, -1.0, 0.62)


def test_sideband_resolution_is_strict():
    assert not sideband_resolved(_OMEGA_M, _KAPPA)
    assert sideband_resolved(_OMEGA_M, _TWO_PI * 300e6)
    assert not sideband_resolved(_KAPPA, _KAPPA)
    with pytest.raises(DomainError):
        sideband_resolved(_OMEGA_M, 0.0)
