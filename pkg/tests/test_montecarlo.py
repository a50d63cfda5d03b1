import math

import pytest

from cellplan.channel import ACCESS_MODEL, LinkGain, PowerConfig, dbm_to_watts, path_gain
from cellplan.geometry import Point, build_layout, distance
from cellplan.montecarlo import McConfig, mc_report, mc_success_probability
from cellplan.throughput import (
    Architecture,
    RadioConfig,
    ResourceSharing,
    conventional_throughputs,
    proposed_access_throughputs,
    success_probability,
)

RADIO = RadioConfig()
POWERS = PowerConfig()
EQUAL = LinkGain(1e-10, 1e-6)


def test_mc_config_validation():
    with pytest.raises(ValueError):
        McConfig(trials=0)
    with pytest.raises(ValueError):
        McConfig(trials=10, batch=3)
    with pytest.raises(ValueError):
        McConfig(seed=-1)
    assert McConfig(trials=100, batch=25).n_batches == 4


def test_no_interference_always_succeeds():
    est = mc_success_probability(EQUAL, [], 0.0, 10.0, McConfig(trials=10_000, seed=3))
    assert est.mean == 1.0
    assert est.std_error == 0.0


def test_equal_interferer_ratio_of_exponentials():
    cfg = McConfig(trials=1_000_000, seed=11, batch=100_000)
    est = mc_success_probability(EQUAL, [EQUAL], 0.0, 10.0, cfg)
    assert est.agrees_with(1 / 11, 3.0)


def test_cell_edge_link_matches_closed_form():
    # UE 300 m from its BTS, 24 tier-2 interferers, S = P/W on every link
    lay = build_layout(600, tiers=2)
    ue = Point(300, 0)
    psd = dbm_to_watts(46) / 9e6
    serving = LinkGain(path_gain(ACCESS_MODEL, distance(ue, lay.serving_bts)), psd)
    assert serving.gain == pytest.approx(10 ** -13.24398, rel=1e-4)
    interf = [LinkGain(path_gain(ACCESS_MODEL, distance(ue, a)), psd) for a in lay.interferer_bts]
    eta = dbm_to_watts(-174)
    p = success_probability(serving, interf, eta, 10.0)
    est = mc_success_probability(serving, interf, eta, 10.0, McConfig(trials=100_000, seed=5))
    assert est.agrees_with(p, 3.0)


def test_deterministic_for_fixed_seed():
    cfg = McConfig(trials=20_000, seed=42, batch=5_000)
    a = mc_success_probability(EQUAL, [EQUAL, EQUAL], 1e-17, 2.0, cfg)
    b = mc_success_probability(EQUAL, [EQUAL, EQUAL], 1e-17, 2.0, cfg)
    c = mc_success_probability(EQUAL, [EQUAL, EQUAL], 1e-17, 2.0,
                               McConfig(trials=20_000, seed=42, batch=5_000, workers=4))
    assert a == b == c
    d = mc_success_probability(EQUAL, [EQUAL, EQUAL], 1e-17, 2.0,
                               McConfig(trials=20_000, seed=43, batch=5_000))
    assert d != a


def test_single_trial_report_reproducible():
    lay = build_layout(500, tiers=1)
    cfg = McConfig(trials=1, seed=9)
    a = mc_report(lay, POWERS, None, RADIO, Architecture.CONVENTIONAL, cfg)
    b = mc_report(lay, POWERS, None, RADIO, Architecture.CONVENTIONAL, cfg)
    assert a.as_report() == b.as_report()


def test_standard_error_shrinks_with_root_trials():
    s, i = LinkGain(1e-10, 1e-6), LinkGain(5e-11, 1e-6)
    small = mc_success_probability(s, [i], 0.0, 1.0, McConfig(trials=25_000, seed=1))
    large = mc_success_probability(s, [i], 0.0, 1.0, McConfig(trials=100_000, seed=1))
    assert large.std_error / small.std_error == pytest.approx(0.5, rel=0.2)


def test_conventional_report_brackets_closed_form(layout300):
    rep = mc_report(layout300, POWERS, None, RADIO, Architecture.CONVENTIONAL,
                    McConfig(trials=100_000, seed=2))
    closed = conventional_throughputs(layout300, POWERS, RADIO)
    assert rep.rates["routine"].closed_form == pytest.approx(closed.routine_bps, rel=1e-12)
    assert rep.rates["incident"].closed_form == pytest.approx(closed.incident_bps, rel=1e-12)
    assert rep.agrees(3.0)
    assert rep.as_report().backhaul_bps is None


def test_tdrs_report_brackets_closed_form(layout900):
    sharing = ResourceSharing.tdrs(9e6, 4.5e6, 0.4)
    rep = mc_report(layout900, POWERS, sharing, RADIO, Architecture.TDRS,
                    McConfig(trials=100_000, seed=4))
    closed = proposed_access_throughputs(layout900, POWERS, sharing, RADIO)
    assert set(rep.rates) == {"routine", "incident", "backhaul"}
    for name, value in closed.rates().items():
        assert rep.rates[name].closed_form == pytest.approx(value, rel=1e-12)
    assert rep.agrees(3.0)
