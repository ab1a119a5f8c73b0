"""Volume profiles and the growth-integral diagnostic.

Synthetic closed forms: V = exp(r^2) gives integrand 1/r whose integral
is log(r_max/r_min) and whose log-log tail slope is -1 (diverging side);
V = exp(r^3) gives 1/r^2, integral 1/r_min - 1/r_max, slope -2.
"""

import math

import numpy as np
import pytest

from sclab.families import birth_death
from sclab.graph import WeightedGraph, full_window
from sclab.growth import (
    GrowthFit,
    VolumeProfile,
    grigoryan_integral,
    growth_fit,
    load_profile,
    save_profile,
    volume_profile,
    volume_profile_metric,
)
from sclab.metrics import EdgeLengths, PathMetric
from sclab.metric_graph import build


def measured_path(n, mu=2.0):
    return WeightedGraph.from_edges([(i, i + 1, 1.0) for i in range(n - 1)],
                                    {i: mu for i in range(n)})


def test_volume_profile_hand_values():
    g = measured_path(21)
    prof = volume_profile(g, None, 0, r_max=5.0, steps=5)
    assert prof.rs == (1.0, 2.0, 3.0, 4.0, 5.0)
    assert prof.volumes == (4.0, 6.0, 8.0, 10.0, 12.0)
    assert prof.metric == "unit"
    assert not prof.truncated


def test_volume_profile_fractional_radii():
    g = measured_path(21)
    prof = volume_profile(g, None, 0, r_max=2.5, steps=5)
    # radii 0.5, 1.0, ...: volume jumps only at integer distances
    assert prof.volumes == (2.0, 4.0, 4.0, 6.0, 6.0)


def test_volume_profile_truncation_flag():
    g = birth_death(1.0)
    prof = volume_profile(g, None, 0, r_max=100.0, steps=10, cap=20)
    assert prof.truncated
    assert prof.volumes[-1] <= 21.0   # lower bound from the capped search


def test_volume_profile_input_validation():
    g = measured_path(5)
    with pytest.raises(ValueError):
        volume_profile(g, None, 0, r_max=0.0)
    with pytest.raises(ValueError):
        volume_profile(g, None, 0, r_max=1.0, steps=0)


def test_volume_profile_metric_dominated_by_graph_profile():
    # domination needs an adapted metric, same d on both sides
    from sclab.graph import ball_window
    from sclab.metrics import degree_metric

    g = birth_death(2.0)
    pm = PathMetric(g, degree_metric(g, c0=1.0))
    window = ball_window(g, pm, 0, 3.0)
    X = build(g, pm, window)
    mp = volume_profile_metric(X, 0, r_max=2.0, steps=16)
    gp = volume_profile(g, pm, 0, r_max=2.0, steps=16)
    assert mp.metric == "metric_graph"
    for mv, gv in zip(mp.volumes, gp.volumes):
        assert mv <= gv + 1e-12


def test_profile_invariants_enforced():
    with pytest.raises(ValueError, match="strictly increasing"):
        VolumeProfile(0, "unit", (1.0, 1.0), (1.0, 2.0))
    with pytest.raises(ValueError, match="nondecreasing"):
        VolumeProfile(0, "unit", (1.0, 2.0), (2.0, 1.0))
    with pytest.raises(ValueError, match="nonnegative"):
        VolumeProfile(0, "unit", (1.0,), (-1.0,))
    with pytest.raises(ValueError, match="length"):
        VolumeProfile(0, "unit", (1.0, 2.0), (1.0,))


def _synthetic(expo, r_lo, r_hi, steps):
    rs = np.linspace(r_lo, r_hi, steps)
    vols = np.exp(rs ** expo)
    return VolumeProfile(0, "synthetic", tuple(rs), tuple(vols))


def test_grigoryan_exp_r2_diverging():
    prof = _synthetic(2, 1.0, 10.0, 256)
    rep = grigoryan_integral(prof, r_min=1.0)
    assert rep.diagnostic == "diverging_trend"
    assert rep.value == pytest.approx(math.log(10.0), rel=0.02)
    assert rep.tail_slope == pytest.approx(-1.0, abs=0.02)


def test_grigoryan_exp_r3_converging():
    prof = _synthetic(3, 1.0, 3.0, 256)
    rep = grigoryan_integral(prof, r_min=1.0)
    assert rep.diagnostic == "converging_trend"
    assert rep.value == pytest.approx(1.0 - 1.0 / 3.0, rel=0.02)
    assert rep.tail_slope == pytest.approx(-2.0, abs=0.02)


def test_grigoryan_monotone_in_growth():
    # faster volume growth shrinks the integral
    slow = grigoryan_integral(_synthetic(2, 1.0, 6.0, 128)).value
    fast = grigoryan_integral(_synthetic(3, 1.0, 6.0, 128)).value
    assert fast < slow


def test_grigoryan_few_points_indeterminate():
    rep = grigoryan_integral(VolumeProfile(0, "unit", (1.0,), (5.0,)))
    assert rep.diagnostic == "indeterminate"
    assert math.isnan(rep.value)
    rep2 = grigoryan_integral(VolumeProfile(0, "unit", (1.0, 2.0), (5.0, 6.0)))
    assert rep2.diagnostic == "indeterminate"
    assert not math.isnan(rep2.value)


def test_grigoryan_r_min_filters():
    prof = _synthetic(2, 0.5, 10.0, 128)
    full = grigoryan_integral(prof, r_min=0.0)
    tail = grigoryan_integral(prof, r_min=5.0)
    assert tail.value < full.value
    # clamp keeps the small-ball region finite: log V < 1 there
    assert math.isfinite(full.value)


def test_growth_fit_recovers_exponent():
    fit = growth_fit(_synthetic(1.7, 1.0, 12.0, 64))
    assert fit.b == pytest.approx(1.7, abs=1e-6)
    assert fit.a == pytest.approx(1.0, abs=1e-6)
    assert fit.flag == "completeness_regime"
    fast = growth_fit(_synthetic(2.6, 1.0, 12.0, 64))
    assert fast.b == pytest.approx(2.6, abs=1e-6)
    assert fast.flag == "fast_growth"


def test_growth_fit_polynomial_volume_flags_completeness_regime():
    rs = np.linspace(1.0, 40.0, 64)
    prof = VolumeProfile(0, "unit", tuple(rs), tuple(rs ** 4))
    fit = growth_fit(prof)
    assert fit.flag == "completeness_regime"
    assert fit.b < 1.0


def test_growth_fit_needs_points_above_e():
    prof = VolumeProfile(0, "unit", (1.0, 2.0, 3.0, 4.0, 5.0, 6.0),
                         (1.0, 1.5, 2.0, 2.2, 2.5, 2.7))
    fit = growth_fit(prof)
    assert fit.flag == "fit_failed"
    assert math.isnan(fit.b)


def test_profile_csv_roundtrip(tmp_path):
    prof = _synthetic(2, 1.0, 5.0, 16)
    p = tmp_path / "prof.csv"
    save_profile(prof, p)
    assert p.read_text().splitlines()[0] == "r,volume"
    back = load_profile(p, center=0, metric="synthetic")
    assert back.rs == pytest.approx(prof.rs)
    assert back.volumes == pytest.approx(prof.volumes)


def test_load_profile_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("radius,volume\n1.0,2.0\n")
    with pytest.raises(ValueError, match="header"):
        load_profile(bad)
    bad2 = tmp_path / "bad2.csv"
    bad2.write_text("r,volume\n1.0\n")
    with pytest.raises(ValueError, match="line 2"):
        load_profile(bad2)
