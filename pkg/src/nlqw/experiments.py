"""Scripted numerical studies: sup-norm decay fits, peak tracking,
soliton collisions with golden snapshots, and edge perturbation runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coin import CoinParams
from .edge import iterate_edge
from .evolution import DEFAULT_MAX_WINDOW, evolve
from .solitons import SolitonKind, SolitonSpec, soliton_spec, make_soliton
from .state import SpinorField, superpose

__all__ = [
    "TimeSeries",
    "PeakPoint",
    "PeakTrack",
    "DecayFit",
    "CollisionScenario",
    "CollisionResult",
    "run_decay",
    "track_peaks",
    "run_collision",
    "scenario_catalog",
    "edge_perturbation",
    "total_variation_profile",
]

PINNED_SLOPE = -1.0 / 3.0  # reference decay exponent for the small-data regime


@dataclass
class TimeSeries:
    """Ordered (t, value) samples with strictly increasing times."""

    times: np.ndarray
    values: np.ndarray
    label: str = "value"

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")

    @property
    def entries(self):
        return list(zip(self.times.tolist(), self.values.tolist()))

    def __len__(self):
        return int(self.times.size)


@dataclass(frozen=True)
class PeakPoint:
    time: int
    site: int
    component: int
    magnitude: float


@dataclass
class PeakTrack:
    """Sites whose component magnitude reached the threshold, per step."""

    threshold: float
    points: list

    def __post_init__(self):
        if self.threshold <= 0:
            raise ValueError("threshold must be positive")


@dataclass(frozen=True)
class DecayFit:
    """Log-log line fit of a sup-norm series.

    ``slope``/``intercept`` are the free least-squares line through
    (log10 t, log10 value) over ``t_range``.  ``pinned_intercept`` is the
    least-squares intercept with the slope held at -1/3, the position of the
    reference decay line for the weakly nonlinear regime.
    """

    slope: float
    intercept: float
    t_range: tuple
    residual: float
    pinned_intercept: float


def fit_loglog(series: TimeSeries, t_range) -> DecayFit:
    """Base-10 log-log least squares over integer times in ``t_range``."""
    tmin, tmax = int(t_range[0]), int(t_range[1])
    if tmin < 1:
        raise ValueError("t_range must start at t >= 1 (log scale)")
    mask = (series.times >= tmin) & (series.times <= tmax) & (series.values > 0)
    if mask.sum() < 2:
        raise ValueError("degenerate fit: fewer than 2 usable points in range")
    x = np.log10(series.times[mask].astype(float))
    y = np.log10(series.values[mask])
    design = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - (slope * x + intercept)
    pinned = float(np.mean(y - PINNED_SLOPE * x))
    return DecayFit(
        slope=float(slope),
        intercept=float(intercept),
        t_range=(tmin, tmax),
        residual=float(math.sqrt(np.mean(resid**2))),
        pinned_intercept=pinned,
    )


def run_decay(
    params: CoinParams,
    initial: SpinorField,
    steps: int,
    t_range,
    *,
    max_window: int = DEFAULT_MAX_WINDOW,
):
    """Evolve, record the sup norm each step, and fit the log-log line."""
    if steps < int(t_range[1]):
        raise ValueError("steps must cover the fit range")
    times = np.arange(0, steps + 1)
    values = np.empty(steps + 1)
    values[0] = initial.linf_norm()

    def rec(t, f):
        values[t - initial.time] = f.linf_norm()

    evolve(params, initial, steps, rec, max_window=max_window)
    series = TimeSeries(times + initial.time, values, label="linf")
    return series, fit_loglog(series, t_range)


def track_peaks(
    params: CoinParams,
    initial: SpinorField,
    steps: int,
    threshold: float = 0.3,
    *,
    max_window: int = DEFAULT_MAX_WINDOW,
) -> PeakTrack:
    """Record every (t, site, component) whose magnitude reaches threshold."""
    track = PeakTrack(threshold=threshold, points=[])

    def collect(t, f):
        for j in (1, 2):
            mag = np.abs(f.component(j))
            for i in np.flatnonzero(mag >= threshold):
                track.points.append(
                    PeakPoint(t, f.origin + int(i), j, float(mag[i]))
                )

    collect(initial.time, initial)
    evolve(params, initial, steps, collect, max_window=max_window)
    return track


@dataclass(frozen=True)
class CollisionScenario:
    """Two solitons launched toward each other.

    The left walker starts on component 2 (right-mover); the right walker
    starts on component 1 (left-mover for traveling/rotating kinds, or a
    stationary two-site orbit for the periodic kind, in which case the
    collision happens when the mover reaches it).
    """

    name: str
    coin: CoinParams
    left_walker: SolitonSpec
    right_walker: SolitonSpec
    horizon: int
    snapshot_times: tuple = ()

    def __post_init__(self):
        if self.left_walker.position >= self.right_walker.position:
            raise ValueError("walkers must start on disjoint ordered sites")
        if any(t > self.horizon for t in self.snapshot_times):
            raise ValueError("snapshot times must not exceed the horizon")

    def initial_state(self) -> SpinorField:
        return superpose(
            [
                make_soliton(self.coin, self.left_walker),
                make_soliton(self.coin, self.right_walker),
            ]
        )

    @property
    def collision_time(self) -> int:
        gap = self.right_walker.position - self.left_walker.position
        closing = 1 + (0 if self.right_walker.kind is SolitonKind.PERIODIC else 1)
        return gap // closing


@dataclass
class CollisionResult:
    track: PeakTrack
    snapshots: dict


def run_collision(
    scenario: CollisionScenario,
    threshold: float = 0.3,
    *,
    max_window: int = DEFAULT_MAX_WINDOW,
) -> CollisionResult:
    """Evolve the scenario, tracking peaks and capturing exact snapshots."""
    initial = scenario.initial_state()
    snaps = {}
    want = set(scenario.snapshot_times)
    track = PeakTrack(threshold=threshold, points=[])

    def rec(t, f):
        for j in (1, 2):
            mag = np.abs(f.component(j))
            for i in np.flatnonzero(mag >= threshold):
                track.points.append(PeakPoint(t, f.origin + int(i), j, float(mag[i])))
        if t in want:
            snaps[t] = f.trimmed()

    if 0 in want:
        snaps[0] = initial.trimmed()
    for j in (1, 2):
        mag = np.abs(initial.component(j))
        for i in np.flatnonzero(mag >= threshold):
            track.points.append(PeakPoint(0, initial.origin + int(i), j, float(mag[i])))
    evolve(scenario.coin, initial, scenario.horizon, rec, max_window=max_window)
    return CollisionResult(track=track, snapshots=snaps)


def scenario_catalog() -> list:
    """The eight collision studies: same-kind pairs, rotating vs traveling,
    and periodic targets hit by rotating/traveling movers, for both coins."""
    plus = CoinParams(1.0)
    minus = CoinParams(-1.0)
    snaps = (0, 150, 151, 152, 500)

    def spec(coin, kind, branch, position, component):
        return soliton_spec(coin, kind, branch, position, component)

    out = []
    # same-soliton collisions (the unit-strength positive coin case; the
    # negative coin behaves identically)
    out.append(
        CollisionScenario(
            "I-rot-plus",
            plus,
            spec(plus, SolitonKind.ROTATING, 1, 450, 2),
            spec(plus, SolitonKind.ROTATING, 1, 750, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    out.append(
        CollisionScenario(
            "I-trav-plus",
            plus,
            spec(plus, SolitonKind.TRAVELING, 1, 450, 2),
            spec(plus, SolitonKind.TRAVELING, 1, 750, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    # rotating against traveling
    out.append(
        CollisionScenario(
            "II-plus",
            plus,
            spec(plus, SolitonKind.TRAVELING, 1, 450, 2),
            spec(plus, SolitonKind.ROTATING, 1, 750, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    out.append(
        CollisionScenario(
            "II-minus",
            minus,
            spec(minus, SolitonKind.TRAVELING, 0, 450, 2),
            spec(minus, SolitonKind.ROTATING, 0, 750, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    # periodic soliton at 600 hit by a mover from 450
    out.append(
        CollisionScenario(
            "III-plus",
            plus,
            spec(plus, SolitonKind.ROTATING, 1, 450, 2),
            spec(plus, SolitonKind.PERIODIC, 0, 600, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    out.append(
        CollisionScenario(
            "III-minus",
            minus,
            spec(minus, SolitonKind.ROTATING, 0, 450, 2),
            spec(minus, SolitonKind.PERIODIC, 0, 600, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    out.append(
        CollisionScenario(
            "IV-plus",
            plus,
            spec(plus, SolitonKind.TRAVELING, 1, 450, 2),
            spec(plus, SolitonKind.PERIODIC, 0, 600, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    out.append(
        CollisionScenario(
            "IV-minus",
            minus,
            spec(minus, SolitonKind.TRAVELING, 0, 450, 2),
            spec(minus, SolitonKind.PERIODIC, 0, 600, 1),
            horizon=500,
            snapshot_times=snaps,
        )
    )
    return out


def edge_perturbation(
    params: CoinParams,
    a: float,
    eps: float,
    sign: int,
    steps: int,
):
    """Iterate the edge map from the perturbed amplitude a*(1 + sign*eps).

    Returns the squared-norm trace as a TimeSeries together with the full
    orbit result (limit and classification).
    """
    if not (0 <= eps < 1):
        raise ValueError("eps must lie in [0, 1)")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    r0 = (a * (1.0 + sign * eps)) ** 2
    orbit = iterate_edge(params, r0, t_max=steps)
    ts = TimeSeries(
        np.arange(orbit.series.size), orbit.series, label="edge_norm_sq"
    )
    return ts, orbit


def total_variation_profile(series: TimeSeries, window: int) -> TimeSeries:
    """Sliding-window total variation of a series (an oscillation measure;
    no binary oscillating/non-oscillating verdict is attached)."""
    if window < 2:
        raise ValueError("window must span at least 2 samples")
    dv = np.abs(np.diff(series.values))
    csum = np.concatenate([[0.0], np.cumsum(dv)])
    out_t = []
    out_v = []
    for i in range(window - 1, len(series)):
        out_t.append(series.times[i])
        out_v.append(csum[i] - csum[i - window + 1])
    return TimeSeries(np.array(out_t), np.array(out_v), label="total_variation")
