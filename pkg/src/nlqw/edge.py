"""Scalar dynamical system for the left-edge squared amplitude.

For a single left-moving excitation the squared norm at the advancing edge
obeys the closed recursion

    r_{t+1} = f(r_t),   f(r) = r * cos(pi/4 + g*r**p)**2

which satisfies 0 <= f(r) <= r.  This module provides the map, its fixed
and critical points (fixed points and minima in closed form, maxima by
bracketed root-finding), level-set solving on monotone branches, the
decomposition of solitonic initial data into intervals, and a certified
iteration classifier used as the membership oracle.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .coin import QUARTER_PI, CoinParams, _pow
from .errors import RootFindingError

__all__ = [
    "edge_map",
    "amplitude_edge_map",
    "edge_map_derivative",
    "EdgeClass",
    "EdgeOrbit",
    "iterate_edge",
    "FixedPointSet",
    "fixed_points",
    "critical_points",
    "solve_level",
    "BasinDecomposition",
    "basin_intervals",
    "BasinLocation",
    "Membership",
    "in_basin",
]

DEFAULT_TMAX = 10**6
DEFAULT_TOL = 1e-14
DEFAULT_EPS_POS = 1e-8
DEFAULT_GUARD = 1e-6

_XTOL = 1e-13
_NODE_VTOL = 1e-11  # |f(node) - c| below this counts as a tangency root


# -- the map ----------------------------------------------------------------


def edge_map(params: CoinParams, r: float) -> float:
    """One edge step: r * cos(pi/4 + g*r**p)**2, always in [0, r]."""
    if r < 0:
        raise ValueError(f"edge value must be nonnegative, got {r}")
    c = math.cos(QUARTER_PI + params.g * _pow(r, params.p))
    return r * c * c


def amplitude_edge_map(params: CoinParams, x: float) -> float:
    """Amplitude form h(x) = x * cos(pi/4 + g*x**(2p)); h(x)**2 = f(x**2)."""
    if x < 0:
        raise ValueError(f"amplitude must be nonnegative, got {x}")
    return x * math.cos(QUARTER_PI + params.g * _pow(x * x, params.p))


def edge_map_derivative(params: CoinParams, x: float) -> float:
    """Analytic f'(x) = cos(th)**2 - g*p*x**p * sin(2*th)."""
    g, p = params.g, params.p
    xp = _pow(x, p)
    th = QUARTER_PI + g * xp
    c = math.cos(th)
    return c * c - g * p * xp * math.sin(2.0 * th)


# -- closed-form point families ----------------------------------------------


def _closed_form_points(params: CoinParams, xmax: float, residue: int):
    """Positive solutions of g*x**p = (4k + residue)*pi/4, ascending, <= xmax."""
    g, p = params.g, params.p
    if g == 0:
        return []
    out = []
    m = 0
    while True:
        k = m if g > 0 else -(m + 1)
        arg = (4 * k + residue) * math.pi / (4.0 * g)
        if arg <= 0:  # only for the first indices of one sign
            m += 1
            continue
        x = arg ** (1.0 / p)
        if x > xmax:
            return out
        out.append(x)
        m += 1


@dataclass(frozen=True)
class FixedPointSet:
    """Positive fixed points of the edge map, ascending."""

    points: tuple

    def x(self, m: int) -> float:
        """m-th smallest positive fixed point (1-indexed)."""
        if not (1 <= m <= len(self.points)):
            raise ValueError(f"fixed point index {m} out of range 1..{len(self.points)}")
        return self.points[m - 1]

    def __len__(self) -> int:
        return len(self.points)


def fixed_points(params: CoinParams, xmax: float) -> FixedPointSet:
    """All positive fixed points in (0, xmax], in closed form."""
    if xmax <= 0:
        raise ValueError("xmax must be positive")
    pts = _closed_form_points(params, xmax, residue=3)
    for x in pts:
        if abs(edge_map(params, x) - x) > 1e-12 * max(1.0, x):
            raise RootFindingError(f"closed-form fixed point {x} fails f(x)=x check")
    return FixedPointSet(tuple(pts))


def _minima(params: CoinParams, xmax: float):
    return _closed_form_points(params, xmax, residue=1)


def critical_points(params: CoinParams, xmax: float):
    """(maxima, minima) of the edge map in (0, xmax].

    Minima are closed-form (the map value there is 0).  Each maximum is the
    unique zero of f' between the preceding fixed point (or 0) and the next
    minimum, found by bracketed root-finding.
    """
    if xmax <= 0:
        raise ValueError("xmax must be positive")
    # one extra minimum beyond xmax so a maximum below xmax is still bracketed
    minima_ext = _closed_form_points(params, xmax * 1.0 + 4.0 * math.pi, residue=1)
    fixed = _closed_form_points(params, xmax + 4.0 * math.pi, residue=3)
    maxima = []
    for mn in minima_ext:
        preceding = [x for x in fixed if x < mn]
        a = preceding[-1] if preceding else 0.0
        if a > xmax:
            break
        fa = edge_map_derivative(params, a)
        if fa <= 0:
            raise RootFindingError(f"expected f' > 0 at bracket start {a}")
        span = mn - a
        b = None
        for frac in (1e-9, 1e-6, 1e-3, 0.05):
            cand = mn - frac * span
            if edge_map_derivative(params, cand) < 0:
                b = cand
                break
        if b is None:
            raise RootFindingError(
                f"could not bracket the maximum between {a} and {mn}"
            )
        root = brentq(
            lambda x: edge_map_derivative(params, x), a, b, xtol=_XTOL, maxiter=200
        )
        if root <= xmax:
            maxima.append(float(root))
    minima = [x for x in minima_ext if x <= xmax]
    return maxima, minima


# -- level-set solving ---------------------------------------------------------


def solve_level(params: CoinParams, c: float, bracket) -> list:
    """All roots of f(x) = c inside ``bracket``, via monotone sub-branches.

    Branches are delimited by the critical points; a node whose map value
    is within 1e-11 of the level counts as a (tangency) root.  Every
    returned root satisfies |f(root) - c| < 1e-10.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if c < 0:
        raise ValueError("level must be nonnegative")
    if lo < 0 or hi < lo:
        raise ValueError(f"bad bracket {bracket}")
    maxima, minima = critical_points(params, hi) if hi > 0 else ([], [])
    nodes = [lo] + [x for x in sorted(maxima + minima) if lo < x < hi] + [hi]
    roots = []
    for x in nodes:
        if abs(edge_map(params, x) - c) <= _NODE_VTOL:
            roots.append(x)
    for a, b in zip(nodes[:-1], nodes[1:]):
        va = edge_map(params, a) - c
        vb = edge_map(params, b) - c
        if va == 0.0 or vb == 0.0 or va * vb > 0:
            continue
        roots.append(
            float(
                brentq(
                    lambda x: edge_map(params, x) - c, a, b, xtol=_XTOL, maxiter=200
                )
            )
        )
    roots.sort()
    dedup = []
    for r in roots:
        if not dedup or r - dedup[-1] > 1e-9:
            dedup.append(r)
    for r in dedup:
        if abs(edge_map(params, r) - c) >= 1e-10:
            raise RootFindingError(f"level-set root {r} misses level {c}")
    return dedup


# -- basin decomposition -------------------------------------------------------


@dataclass(frozen=True)
class BasinDecomposition:
    """First-generation interval family feeding the fixed point x^(m).

    ``intervals`` starts with the core [x_m, y_m]; subsequent intervals are
    the preimage pairs on the rising/falling flanks of later humps of the
    map, alternating [x_n, y_n], [y_{n+1}, x_{n+1}], truncated at xmax.
    """

    m: int
    x_m: float
    y_m: float
    intervals: tuple


def basin_intervals(params: CoinParams, m: int, xmax: float) -> BasinDecomposition:
    """Paper-pattern decomposition for branch ``m``, truncated at ``xmax``."""
    fps = fixed_points(params, xmax)
    if m < 1 or m > len(fps):
        raise ValueError(f"x^({m}) not available below xmax={xmax}")
    x_m = fps.x(m)
    sep = 1e-9 * max(1.0, x_m)
    roots_x = solve_level(params, x_m, (0.0, xmax))
    above = [r for r in roots_x if r > x_m + sep]
    if not above:
        raise RootFindingError(f"y^({m}) not found below xmax={xmax}")
    y_m = above[0]
    p_family = [r for r in roots_x if abs(r - x_m) > sep and abs(r - y_m) > sep]
    q_family = solve_level(params, y_m, (0.0, xmax))
    intervals = [(x_m, y_m)]
    for i in range(min(len(p_family), len(q_family))):
        xi, yi = p_family[i], q_family[i]
        if (i + 1) % 2 == 1:  # rising flank: x-level crossed first
            lo_i, hi_i = xi, yi
        else:  # falling flank: y-level crossed first
            lo_i, hi_i = yi, xi
        if not (lo_i < hi_i and lo_i > intervals[-1][1]):
            raise RootFindingError(
                f"preimage ordering contradicts the alternating pattern near "
                f"index {i + 1} of branch {m}: {(xi, yi)}"
            )
        intervals.append((lo_i, hi_i))
    return BasinDecomposition(m=m, x_m=x_m, y_m=y_m, intervals=tuple(intervals))


# -- iteration oracle ---------------------------------------------------------


class EdgeClass(Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    UNDECIDED = "undecided"


@dataclass
class EdgeOrbit:
    """Result of iterating the edge map from one initial value."""

    series: np.ndarray
    limit: float
    classification: EdgeClass
    steps: int


@lru_cache(maxsize=64)
def _trap_table(params: CoinParams, xceil: int):
    """Fixed points <= xceil with validated one-sided trap windows.

    Any orbit value in [x*, x* + eta] can never fall below x* again (the map
    exceeds x* throughout the window), so it converges to x* from above.
    """
    pts = _closed_form_points(params, float(xceil), residue=3)
    etas = []
    for x in pts:
        eta = 1e-4 * max(1.0, x)
        while eta > 1e-12:
            if (
                edge_map(params, x + eta) >= x
                and edge_map(params, x + 0.5 * eta) >= x
            ):
                break
            eta *= 0.5
        else:
            eta = 0.0
        etas.append(eta)
    return tuple(pts), tuple(etas)


def iterate_edge(
    params: CoinParams,
    r0: float,
    t_max: int = DEFAULT_TMAX,
    tol: float = DEFAULT_TOL,
    eps_pos: float = DEFAULT_EPS_POS,
    record: bool = True,
) -> EdgeOrbit:
    """Iterate the edge map until the orbit's fate is certified.

    Stopping rules, in order of precedence each step:

    * decay threshold: r <= eps_pos classifies ZERO (the only positive limits
      are fixed points, all far above eps_pos at study scales);
    * step convergence: successive difference below ``tol``;
    * trap window: the orbit entered [x*, x* + eta] for a closed-form fixed
      point x*, so the limit is exactly x* (POSITIVE).

    Reaching ``t_max`` classifies ZERO when the value sits below the smallest
    positive fixed point (no positive limit is reachable from there) and
    UNDECIDED otherwise.  Convergence to a tangent fixed point is slow
    (error ~ 1/t), so UNDECIDED is a real outcome for tight budgets.
    """
    if r0 < 0:
        raise ValueError(f"r0 must be nonnegative, got {r0}")
    if t_max < 1 or tol <= 0:
        raise ValueError("t_max must be >= 1 and tol > 0")
    pts, etas = _trap_table(params, int(math.ceil(r0)) + 2)
    floor = pts[0] if pts else math.inf
    g, p = params.g, params.p

    series = [r0] if record else None
    r = r0
    for t in range(1, t_max + 1):
        c = math.cos(QUARTER_PI + g * _pow(r, p))
        rn = r * c * c
        if record:
            series.append(rn)
        delta = r - rn
        r = rn
        if r <= eps_pos:
            return _orbit(series, r0, 0.0, EdgeClass.ZERO, t)
        if delta < tol:
            cls = EdgeClass.POSITIVE if r > eps_pos else EdgeClass.ZERO
            return _orbit(series, r0, r if cls is EdgeClass.POSITIVE else 0.0, cls, t)
        i = bisect_right(pts, r + 1e-12) - 1
        if i >= 0 and etas[i] > 0 and -1e-12 <= r - pts[i] <= etas[i]:
            return _orbit(series, r0, pts[i], EdgeClass.POSITIVE, t)
    if r < floor:
        return _orbit(series, r0, 0.0, EdgeClass.ZERO, t_max)
    return _orbit(series, r0, r, EdgeClass.UNDECIDED, t_max)


def _orbit(series, r0, limit, cls, steps) -> EdgeOrbit:
    arr = np.array(series) if series is not None else np.array([r0])
    return EdgeOrbit(series=arr, limit=limit, classification=cls, steps=steps)


# -- basin membership ----------------------------------------------------------


class BasinLocation(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class Membership:
    location: BasinLocation
    branch: Optional[int] = None


@lru_cache(maxsize=32)
def _basin_tables(params: CoinParams, xceil: int):
    """Decompositions for every branch whose core fits below xceil.

    A branch is included only when the minimum following its fixed point is
    below the ceiling (the core's right endpoint always precedes that
    minimum), so truncation never masks a real structure failure.
    """
    fps = fixed_points(params, float(xceil))
    minima = _closed_form_points(params, float(xceil) + 4.0 * math.pi, residue=1)
    decomps = []
    for m in range(1, len(fps) + 1):
        x_m = fps.x(m)
        following = [mn for mn in minima if mn > x_m]
        if not following or following[0] > xceil:
            break
        decomps.append(basin_intervals(params, m, float(xceil)))
    endpoints = sorted(e for d in decomps for iv in d.intervals for e in iv)
    return tuple(decomps), tuple(endpoints)


def _locate(decomps, r: float):
    for d in decomps:
        if r < d.x_m:
            return None  # intervals of every branch lie at or above x_m
        for lo, hi in d.intervals:
            if lo <= r <= hi:
                return d.m
    return None


def in_basin(
    params: CoinParams,
    r0: float,
    guard: float = DEFAULT_GUARD,
    xmax: Optional[float] = None,
    t_max: int = DEFAULT_TMAX,
) -> Membership:
    """Decide whether the edge orbit of ``r0`` keeps a positive limit.

    Membership is decided by interval containment.  The first-generation
    decomposition under-covers the solitonic set: later preimages of each
    core produce further (ever thinner) intervals inside the gaps, so points
    not resolved by the first generation are reduced forward through the map
    until they land in a known interval or below the smallest fixed point.
    Returns Boundary for points within ``guard`` of a first-generation
    endpoint (no claim is made there) or if the reduction budget runs out.
    """
    if r0 < 0:
        raise ValueError(f"r0 must be nonnegative, got {r0}")
    if guard <= 0:
        raise ValueError("guard must be positive")
    xceil = int(math.ceil(max(r0, xmax or 0.0))) + 4
    decomps, endpoints = _basin_tables(params, xceil)
    i = bisect_right(endpoints, r0)
    for j in (i - 1, i):
        if 0 <= j < len(endpoints) and abs(r0 - endpoints[j]) <= guard:
            return Membership(BasinLocation.BOUNDARY)
    if not decomps or r0 < decomps[0].x_m:
        return Membership(BasinLocation.OUTSIDE)
    m = _locate(decomps, r0)
    if m is not None:
        return Membership(BasinLocation.INSIDE, m)
    r = r0
    floor = decomps[0].x_m
    for _ in range(t_max):
        r = edge_map(params, r)
        if r < floor:
            return Membership(BasinLocation.OUTSIDE)
        m = _locate(decomps, r)
        if m is not None:
            return Membership(BasinLocation.INSIDE, m)
    return Membership(BasinLocation.BOUNDARY)
