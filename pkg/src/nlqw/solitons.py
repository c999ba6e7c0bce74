"""Closed-form soliton families of the walk and their initial data.

A single-site state a*delta_{j,x} is non-scattering exactly when its coin
angle pi/4 + g*a**(2p) lands on one of three angle lattices:

    traveling:  multiples of 2*pi        (amplitude translates unchanged)
    rotating:   pi + multiples of 2*pi   (translates, sign flips each step)
    periodic:   pi/2 + multiples of pi   (two-site orbit of period 4)

Branch indexing follows the sign of g: each family enumerates the lattice
points on the reachable side, and a branch with no positive amplitude root
is an error rather than a remapped index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .coin import QUARTER_PI, CoinParams
from .errors import BranchRootError
from .state import SpinorField, point_source

__all__ = [
    "SolitonKind",
    "SolitonSpec",
    "target_angle",
    "soliton_amplitude",
    "soliton_spec",
    "make_soliton",
    "classify_angle",
]

TWO_PI = 2.0 * math.pi


class SolitonKind(Enum):
    TRAVELING = "traveling"
    ROTATING = "rotating"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class SolitonSpec:
    """One catalog entry: family, branch, amplitude, launch site, component.

    Component 1 moves left, component 2 moves right; periodic solitons stay
    inside a two-site region, so for them the component only fixes which
    two-site orbit is produced.
    """

    kind: SolitonKind
    branch: int
    amplitude: float
    position: int
    component: int = 1


def target_angle(kind: SolitonKind, branch: int, g: float) -> float:
    """Angle-lattice point selected by ``branch`` on the side reachable for g."""
    if g == 0:
        raise BranchRootError("the linear coin (g = 0) has no soliton branches")
    sign = 1.0 if g > 0 else -1.0
    if kind is SolitonKind.TRAVELING:
        return sign * TWO_PI * branch
    if kind is SolitonKind.ROTATING:
        # positive side enumerates pi, 3*pi, ... from n=1; negative side
        # enumerates -pi, -3*pi, ... from n=0
        if g > 0:
            return (2 * branch - 1) * math.pi
        return -(2 * branch + 1) * math.pi
    if kind is SolitonKind.PERIODIC:
        return sign * (0.5 * math.pi + TWO_PI * branch)
    raise TypeError(f"unknown soliton kind {kind!r}")


def soliton_amplitude(params: CoinParams, kind: SolitonKind, branch: int) -> float:
    """Positive amplitude whose coin angle hits the branch's lattice point."""
    tau = target_angle(kind, branch, params.g)
    a2p = (tau - QUARTER_PI) / params.g
    if a2p <= 0:
        raise BranchRootError(
            f"no positive root for {kind.value} soliton, branch {branch}, "
            f"g={params.g}"
        )
    return a2p ** (1.0 / (2.0 * params.p))


def soliton_spec(
    params: CoinParams,
    kind: SolitonKind,
    branch: int,
    position: int = 0,
    component: int = 1,
) -> SolitonSpec:
    """Catalog entry with the amplitude solved from the branch equation."""
    a = soliton_amplitude(params, kind, branch)
    return SolitonSpec(kind, branch, a, position, component)


def make_soliton(params: CoinParams, spec: SolitonSpec) -> SpinorField:
    """Initial data for a catalog entry; amplitude is cross-checked."""
    a = soliton_amplitude(params, spec.kind, spec.branch)
    if abs(spec.amplitude - a) > 1e-9:
        raise ValueError(
            f"amplitude {spec.amplitude!r} inconsistent with branch value {a!r}"
        )
    return point_source(spec.position, spec.component, spec.amplitude)


def _lattice_distance(theta: float, offset: float, spacing: float) -> float:
    r = math.fmod(theta - offset, spacing)
    if r < 0:
        r += spacing
    return min(r, spacing - r)


def classify_angle(theta: float, tol: float):
    """Family whose angle lattice contains ``theta`` within ``tol``, else None.

    The three lattices are pairwise at least pi/2 apart, so any tol < pi/4
    gives a unique answer; larger tolerances are rejected as ambiguous.
    """
    if not (0 < tol < QUARTER_PI):
        raise ValueError(f"tol must lie in (0, pi/4), got {tol}")
    candidates = [
        (SolitonKind.TRAVELING, _lattice_distance(theta, 0.0, TWO_PI)),
        (SolitonKind.ROTATING, _lattice_distance(theta, math.pi, TWO_PI)),
        (SolitonKind.PERIODIC, _lattice_distance(theta, 0.5 * math.pi, math.pi)),
    ]
    kind, dist = min(candidates, key=lambda kd: kd[1])
    return kind if dist <= tol else None
