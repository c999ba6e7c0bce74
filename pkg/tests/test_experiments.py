import math

import numpy as np
import pytest

from nlqw import (
    CoinParams,
    CollisionScenario,
    EdgeClass,
    SolitonKind,
    TimeSeries,
    edge_perturbation,
    make_soliton,
    point_source,
    run_collision,
    run_decay,
    scenario_catalog,
    soliton_amplitude,
    soliton_spec,
    sup_distance,
    superpose,
    total_variation_profile,
    track_peaks,
)
from nlqw.experiments import fit_loglog

PI = math.pi
PI4 = math.pi / 4
PLUS = CoinParams(1.0)
MINUS = CoinParams(-1.0)


# -- series and fits -----------------------------------------------------------


def test_time_series_validation():
    with pytest.raises(ValueError):
        TimeSeries(np.array([0, 0, 1]), np.array([1.0, 2.0, 3.0]))
    with pytest.raises(ValueError):
        TimeSeries(np.array([0, 1]), np.array([1.0]))


def test_fit_loglog_recovers_exact_power_law():
    ts = np.arange(1, 2001)
    values = 0.398 * ts ** (-1.0 / 3.0)
    fit = fit_loglog(TimeSeries(ts, values), (10, 2000))
    assert fit.slope == pytest.approx(-1.0 / 3.0, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log10(0.398), abs=1e-12)
    assert fit.pinned_intercept == pytest.approx(math.log10(0.398), abs=1e-12)
    assert fit.residual < 1e-12


def test_fit_loglog_degenerate():
    ts = TimeSeries(np.array([1, 2, 3]), np.array([1.0, 0.5, 0.25]))
    with pytest.raises(ValueError):
        fit_loglog(ts, (10, 20))
    with pytest.raises(ValueError):
        fit_loglog(ts, (0, 3))


def test_run_decay_small_data_slope():
    series, fit = run_decay(PLUS, point_source(0, 1, 0.2), 600, (10, 600))
    assert len(series) == 601
    assert -0.45 < fit.slope < -0.2  # approaching the -1/3 regime


def test_run_decay_soliton_is_flat():
    a = soliton_amplitude(MINUS, SolitonKind.TRAVELING, 0)
    series, fit = run_decay(MINUS, point_source(0, 1, a), 300, (10, 300))
    assert abs(fit.slope) < 1e-6
    assert np.max(np.abs(series.values - a)) < 1e-12


def test_run_decay_requires_covering_range():
    with pytest.raises(ValueError):
        run_decay(PLUS, point_source(0, 1, 0.2), 100, (10, 200))


# -- peak tracking ---------------------------------------------------------------


def test_track_peaks_traveling_line():
    a = soliton_amplitude(MINUS, SolitonKind.TRAVELING, 0)
    track = track_peaks(MINUS, point_source(10, 1, a), 50)
    by_time = {}
    for p in track.points:
        by_time.setdefault(p.time, []).append(p)
    for t in range(51):
        assert len(by_time[t]) == 1
        pt = by_time[t][0]
        assert pt.site == 10 - t and pt.component == 1
        assert pt.magnitude == pytest.approx(a, abs=1e-12)


def test_track_peaks_zero_field_empty():
    track = track_peaks(MINUS, point_source(0, 1, 0.0), 20)
    assert track.points == []


def test_track_peaks_threshold_validation():
    with pytest.raises(ValueError):
        track_peaks(MINUS, point_source(0, 1, 1.0), 5, threshold=0.0)


def test_tracked_peaks_respect_light_cone():
    track = track_peaks(MINUS, point_source(600, 1, 0.6), 200)
    for p in track.points:
        assert abs(p.site - 600) <= p.time or p.time == 0


def test_main_rightward_part_slower_than_light():
    # the right-going bulk of a sub-soliton state lags behind speed one
    track = track_peaks(MINUS, point_source(600, 1, 0.6), 300)
    late = [p for p in track.points if p.time >= 50]
    assert late
    assert all(p.site - 600 < p.time for p in late)


# -- collisions -------------------------------------------------------------------


def test_catalog_contents():
    cat = scenario_catalog()
    assert len(cat) == 8
    names = [s.name for s in cat]
    assert names == [
        "I-rot-plus",
        "I-trav-plus",
        "II-plus",
        "II-minus",
        "III-plus",
        "III-minus",
        "IV-plus",
        "IV-minus",
    ]
    for s in cat:
        assert s.collision_time == 150
    by_name = {s.name: s for s in cat}
    itrav = by_name["I-trav-plus"]
    assert itrav.left_walker.amplitude == pytest.approx(2.344736, abs=1e-6)
    assert itrav.left_walker.position == 450 and itrav.left_walker.component == 2
    assert itrav.right_walker.position == 750 and itrav.right_walker.component == 1
    iii_minus = by_name["III-minus"]
    assert iii_minus.right_walker.kind is SolitonKind.PERIODIC
    assert iii_minus.right_walker.position == 600
    assert iii_minus.right_walker.amplitude == pytest.approx(1.534990, abs=1e-6)
    assert iii_minus.left_walker.amplitude == pytest.approx(1.981664, abs=1e-6)


def test_scenario_validation():
    spec_l = soliton_spec(PLUS, SolitonKind.TRAVELING, 1, 700, 2)
    spec_r = soliton_spec(PLUS, SolitonKind.TRAVELING, 1, 400, 1)
    with pytest.raises(ValueError):
        CollisionScenario("bad", PLUS, spec_l, spec_r, horizon=100)


def _same_soliton_scenario(kind, branch):
    left = soliton_spec(PLUS, kind, branch, 450, 2)
    right = soliton_spec(PLUS, kind, branch, 750, 1)
    return CollisionScenario(
        "test", PLUS, left, right, horizon=160, snapshot_times=(150, 151, 152)
    )


@pytest.mark.parametrize("kind,branch", [(SolitonKind.TRAVELING, 1), (SolitonKind.ROTATING, 1)])
def test_same_soliton_collision_snapshots(kind, branch):
    # merge at the midpoint, fuse to sqrt(2)*a one site left, then split with
    # a sign flip on the right mover
    scenario = _same_soliton_scenario(kind, branch)
    a = scenario.left_walker.amplitude
    res = run_collision(scenario)
    want150 = superpose([point_source(600, 1, a), point_source(600, 2, a)])
    want151 = point_source(599, 1, math.sqrt(2.0) * a)
    want152 = superpose([point_source(598, 1, a), point_source(600, 2, -a)])
    assert sup_distance(res.snapshots[150], want150) < 1e-9
    assert sup_distance(res.snapshots[151], want151) < 1e-9
    assert sup_distance(res.snapshots[152], want152) < 1e-9


def test_traveling_collision_elastic_track():
    scenario = _same_soliton_scenario(SolitonKind.TRAVELING, 1)
    scenario = CollisionScenario(
        scenario.name,
        scenario.coin,
        scenario.left_walker,
        scenario.right_walker,
        horizon=500,
        snapshot_times=(500,),
    )
    a = scenario.left_walker.amplitude
    res = run_collision(scenario)
    snap = res.snapshots[500]
    # left mover unshifted; right mover lags two sites and flips sign
    assert snap.amplitude(250, 1) == pytest.approx(a, abs=1e-9)
    assert snap.amplitude(948, 2) == pytest.approx(-a, abs=1e-9)
    assert abs(snap.amplitude(950, 2)) < 1e-9
    # pre- and post-collision tracks are straight speed-one lines
    pre = [p for p in res.track.points if p.time < 140]
    post = [p for p in res.track.points if p.time > 160]
    for p in pre:
        assert p.site in (450 + p.time, 750 - p.time)
    for p in post:
        assert p.site in (600 - (p.time - 150), 600 + (p.time - 150) - 2)


def test_mixed_amplitude_collision_row():
    # distinct traveling amplitudes: the merged site splits as
    # (beta+gamma)/sqrt2 leftward and (gamma-beta)/sqrt2 rightward
    beta = soliton_amplitude(PLUS, SolitonKind.TRAVELING, 1)
    gamma = soliton_amplitude(PLUS, SolitonKind.TRAVELING, 2)
    left = soliton_spec(PLUS, SolitonKind.TRAVELING, 2, 450, 2)
    right = soliton_spec(PLUS, SolitonKind.TRAVELING, 1, 750, 1)
    scenario = CollisionScenario(
        "mixed", PLUS, left, right, horizon=151, snapshot_times=(150, 151)
    )
    res = run_collision(scenario)
    want150 = superpose(
        [point_source(600, 1, beta), point_source(600, 2, gamma)]
    )
    s2 = math.sqrt(2.0)
    want151 = superpose(
        [
            point_source(599, 1, (beta + gamma) / s2),
            point_source(601, 2, (gamma - beta) / s2),
        ]
    )
    assert sup_distance(res.snapshots[150], want150) < 1e-9
    assert sup_distance(res.snapshots[151], want151) < 1e-9


def _case_ii_minus_expected():
    """Literal evaluation of the two-peak split at t=151 and t=152."""
    beta = math.sqrt(5 * PI) / 2
    gamma = math.sqrt(PI) / 2
    s2 = math.sqrt(2.0)
    A = -(beta + gamma) / s2  # site 599, component 1 at t=151
    B = (beta - gamma) / s2  # site 601, component 2 at t=151
    u151 = superpose([point_source(599, 1, A), point_source(601, 2, B)])
    th_a = PI4 - (beta + gamma) ** 2 / 2
    th_b = PI4 - (beta - gamma) ** 2 / 2
    u152 = superpose(
        [
            point_source(598, 1, A * math.cos(th_a)),
            point_source(600, 2, A * math.sin(th_a)),
            point_source(600, 1, -B * math.sin(th_b)),
            point_source(602, 2, B * math.cos(th_b)),
        ]
    )
    return u151, u152


def test_case_ii_minus_exact_steps():
    cat = {s.name: s for s in scenario_catalog()}
    res = run_collision(cat["II-minus"])
    u151, u152 = _case_ii_minus_expected()
    assert sup_distance(res.snapshots[151], u151) < 1e-9
    assert sup_distance(res.snapshots[152], u152) < 1e-9
    # dominant magnitudes are the split amplitudes times cos(theta)
    beta = math.sqrt(5 * PI) / 2
    gamma = math.sqrt(PI) / 2
    theta = (math.sqrt(5.0) - 2.0) / 4.0 * PI
    assert math.cos(theta) == pytest.approx(0.982861, abs=1e-5)
    big = (beta + gamma) / math.sqrt(2.0)
    small = (beta - gamma) / math.sqrt(2.0)
    assert small == pytest.approx(0.774591, abs=1e-6)
    assert big == pytest.approx(2.0279049, abs=1e-6)
    snap = res.snapshots[152]
    assert abs(snap.amplitude(598, 1)) == pytest.approx(
        big * math.cos(theta), abs=1e-5
    )
    assert abs(snap.amplitude(602, 2)) == pytest.approx(
        small * math.cos(theta), abs=1e-5
    )


def test_case_ii_minus_150():
    cat = {s.name: s for s in scenario_catalog()}
    res = run_collision(cat["II-minus"])
    beta = math.sqrt(5 * PI) / 2
    gamma = math.sqrt(PI) / 2
    want = superpose([point_source(600, 1, beta), point_source(600, 2, gamma)])
    assert sup_distance(res.snapshots[150], want) < 1e-9


# -- perturbation -----------------------------------------------------------------


def test_edge_perturbation_shrunk_amplitude_decays():
    series, orbit = edge_perturbation(MINUS, 0.886227, 0.01, -1, 10**6)
    assert orbit.classification is EdgeClass.ZERO
    assert orbit.limit == 0.0
    assert series.values[0] == pytest.approx((0.886227 * 0.99) ** 2, rel=1e-12)


def test_edge_perturbation_grown_amplitude_locks_on():
    series, orbit = edge_perturbation(MINUS, 0.886227, 0.01, +1, 10**6)
    assert orbit.classification is EdgeClass.POSITIVE
    assert abs(orbit.limit - PI4) < 1e-6


def test_edge_perturbation_zero_eps_constant():
    a = math.sqrt(PI4)
    series, orbit = edge_perturbation(MINUS, a, 0.0, +1, 100)
    assert orbit.classification is EdgeClass.POSITIVE
    assert np.max(np.abs(series.values - a * a)) < 1e-14


def test_edge_perturbation_validation():
    with pytest.raises(ValueError):
        edge_perturbation(MINUS, 1.0, 1.5, 1, 10)
    with pytest.raises(ValueError):
        edge_perturbation(MINUS, 1.0, 0.1, 0, 10)


# -- oscillation statistic -----------------------------------------------------


def test_total_variation_profile():
    ts = TimeSeries(np.arange(6), np.array([1.0, 3.0, 2.0, 2.0, 5.0, 4.0]))
    tv = total_variation_profile(ts, window=3)
    assert tv.times.tolist() == [2, 3, 4, 5]
    assert tv.values.tolist() == [3.0, 1.0, 3.0, 4.0]
    with pytest.raises(ValueError):
        total_variation_profile(ts, window=1)


def test_oscillating_case_has_larger_variation():
    # the negative coin's mid-amplitude run oscillates; the positive one decays
    _, fit_m = 0, 0
    series_m, _ = run_decay(MINUS, point_source(0, 1, 0.8), 400, (10, 400))
    series_p, _ = run_decay(PLUS, point_source(0, 1, 0.8), 400, (10, 400))
    tv_m = total_variation_profile(series_m, window=50)
    tv_p = total_variation_profile(series_p, window=50)
    assert tv_m.values[-1] > tv_p.values[-1]
