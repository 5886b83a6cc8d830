"""Trajectory assembly and the general negativity pipeline."""

import math

import numpy as np
import pytest

from cavneg.bogoliubov import check_identities
from cavneg.closedform import (
    kickstart_deficit,
    massive_limit_deficit,
    one_way_deficit,
    round_trip_deficit,
    two_way_deficit,
)
from cavneg.scenario import (
    Accelerated,
    Inertial,
    NegativityResult,
    Scenario,
    alpha_centauri_scenario,
    clear_caches,
    effective_transform,
    kickstart_scenario,
    log_negativity,
    negativity_general,
    one_way_scenario,
    round_trip_scenario,
    scenario_negativity,
)
from cavneg.spectrum import CavityConfig, acceleration_period, rindler_frequency


@pytest.fixture(scope="module")
def cfg():
    return CavityConfig(h=1.0, n_max=400)


def u_to_tau(u, cfg):
    return u / rindler_frequency(1, cfg)


def test_builders_compose_expected_segments(cfg):
    s = round_trip_scenario(0.5, 0.3, 0.2, cfg)
    kinds = [type(seg).__name__ for seg in s.segments]
    assert kinds == [
        "Accelerated",
        "Inertial",
        "Accelerated",
        "Inertial",
        "Accelerated",
        "Inertial",
        "Accelerated",
    ]
    signs = [seg.sign for seg in s.segments if isinstance(seg, Accelerated)]
    assert signs == [1, -1, -1, 1]
    assert not s.kickstart
    assert kickstart_scenario(0.5, cfg).kickstart


def test_segment_validation(cfg):
    with pytest.raises(ValueError):
        Accelerated(2, 0.5)
    with pytest.raises(ValueError):
        Accelerated(1, -0.5)
    with pytest.raises(ValueError):
        Inertial(-1.0)
    with pytest.raises(ValueError):
        Scenario((Inertial(1.0),), cfg, kickstart=True)
    with pytest.raises(ValueError):
        Scenario((), cfg, kickstart=True)


def test_zero_duration_trip_is_identity(cfg):
    t = effective_transform(one_way_scenario(0.0, cfg))
    res = negativity_general(t, 1, cfg.h)
    assert res.deficit_scaled == pytest.approx(0.0, abs=1e-15)
    assert res.negativity == 0.5


def test_half_period_matches_closed_maximum(cfg):
    tau = u_to_tau(math.pi, cfg)
    res = scenario_negativity(one_way_scenario(tau, cfg))
    assert res.deficit_scaled == pytest.approx(0.16525145161591603, rel=1e-9)


@pytest.mark.parametrize("u", [0.7, 2.0, 4.4])
def test_one_way_matches_closed_form(cfg, u):
    res = scenario_negativity(one_way_scenario(u_to_tau(u, cfg), cfg))
    closed = float(one_way_deficit(1, np.exp(1j * u)))
    assert abs(res.deficit_scaled - closed) < res.truncation_tail + 1e-12


def test_two_way_matches_closed_form(cfg):
    u, v = 1.1, 0.7
    s = alpha_centauri_scenario(u_to_tau(u, cfg), v / math.pi, cfg)
    res = scenario_negativity(s)
    closed = float(two_way_deficit(1, np.exp(1j * u), np.exp(1j * v)))
    assert abs(res.deficit_scaled - closed) < res.truncation_tail + 1e-12


def test_round_trip_matches_closed_form(cfg):
    u, v, w = 1.1, 0.7, 2.3
    s = round_trip_scenario(u_to_tau(u, cfg), v / math.pi, w / math.pi, cfg)
    res = scenario_negativity(s)
    closed = float(
        round_trip_deficit(1, np.exp(1j * u), np.exp(1j * v), np.exp(1j * w))
    )
    assert abs(res.deficit_scaled - closed) < res.truncation_tail + 1e-12


def test_kickstart_ignores_duration(cfg):
    a = scenario_negativity(kickstart_scenario(0.4, cfg))
    b = scenario_negativity(kickstart_scenario(1.9, cfg))
    assert a.deficit_scaled == pytest.approx(b.deficit_scaled, abs=1e-12)
    assert a.deficit_scaled == pytest.approx(kickstart_deficit(1), abs=1e-10)


def test_effective_transform_stays_bogoliubov(cfg):
    s = round_trip_scenario(0.8, 0.45, 0.3, cfg)
    res = check_identities(effective_transform(s))
    assert res.order0_residual < 1e-14
    assert res.order1_residual < 1e-12
    assert res.order2_diag_residual < res.tail_estimate + 1e-12


def test_one_way_periodicity(cfg):
    period = acceleration_period(cfg)
    a = scenario_negativity(one_way_scenario(0.9, cfg))
    b = scenario_negativity(one_way_scenario(0.9 + period, cfg))
    assert abs(a.deficit_scaled - b.deficit_scaled) < 1e-12


def test_heavy_field_one_way_close_to_limit_form():
    M = 1000.0
    cfg = CavityConfig(M=M, h=1e-5, n_max=300)
    tau = 0.25 * M
    res = scenario_negativity(one_way_scenario(tau, cfg))
    closed = float(massive_limit_deficit(1, M, tau, 1.0, 300))
    # the limit form keeps only the leading M**4 piece
    assert res.deficit_scaled == pytest.approx(closed, rel=2e-4)


def test_negativity_general_bounds_k(cfg):
    t = effective_transform(one_way_scenario(0.5, cfg))
    with pytest.raises(ValueError):
        negativity_general(t, 0, cfg.h)
    with pytest.raises(ValueError):
        negativity_general(t, cfg.n_max // 2 + 1, cfg.h)


def test_result_invariant_and_log(cfg):
    res = scenario_negativity(one_way_scenario(0.6, cfg))
    assert res.negativity == 0.5 - res.h_used**2 * res.deficit_scaled
    assert log_negativity(res) == pytest.approx(math.log1p(res.negativity), rel=1e-15)
    bad = NegativityResult(
        negativity=-0.1,
        deficit_scaled=0.0,
        h_used=1.0,
        k_used=1,
        validity=res.validity,
        truncation_tail=0.0,
    )
    with pytest.raises(ValueError):
        log_negativity(bad)


def test_higher_k_column(cfg):
    u = 2.2
    res = scenario_negativity(
        one_way_scenario(u_to_tau(u, cfg), CavityConfig(h=1.0, k=3, n_max=400))
    )
    closed = float(one_way_deficit(3, np.exp(1j * u)))
    assert abs(res.deficit_scaled - closed) < res.truncation_tail + 1e-11


def test_clear_caches_keeps_results(cfg):
    before = scenario_negativity(one_way_scenario(0.77, cfg)).deficit_scaled
    clear_caches()
    after = scenario_negativity(one_way_scenario(0.77, cfg)).deficit_scaled
    assert before == after


def test_validity_flags_propagate():
    cfg = CavityConfig(h=1.0, k=1, n_max=64)
    res = scenario_negativity(one_way_scenario(0.3, cfg))
    assert not res.validity.perturbative_ok  # |k h| = 1 is far out of regime
    assert res.validity.h_bound_ok
