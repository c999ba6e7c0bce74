"""One-step map (shift after coin), multi-step evolution, exact inversion,
and the nonlinearity-strength rescaling transform.

The stepping kernel is the hot path: it runs over a double-buffered pair of
contiguous component arrays preallocated for the exact light cone (one extra
cell per side per step), so a long run does no per-step reallocation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .coin import QUARTER_PI, CoinParams, _pow_array
from .errors import WindowOverflowError
from .state import SpinorField, zero_field

__all__ = [
    "DEFAULT_MAX_WINDOW",
    "shift",
    "step",
    "evolve",
    "step_back",
    "gauge_rescale",
    "Observation",
    "Trajectory",
]

DEFAULT_MAX_WINDOW = 2_000_000

Recorder = Callable[[int, SpinorField], None]


def shift(field: SpinorField) -> SpinorField:
    """Move component 1 one site left and component 2 one site right."""
    n = len(field)
    if n == 0:
        return field
    out = np.zeros((n + 2, 2), np.complex128)
    out[0:n, 0] = field.cells[:, 0]
    out[2 : n + 2, 1] = field.cells[:, 1]
    return SpinorField(field.origin - 1, out, field.time)


def _window_field(origin: int, a1, a2, lo: int, hi: int, time: int) -> SpinorField:
    cells = np.empty((hi - lo + 1, 2), np.complex128)
    cells[:, 0] = a1[lo : hi + 1]
    cells[:, 1] = a2[lo : hi + 1]
    return SpinorField(origin, cells, time)


def evolve(
    params: CoinParams,
    field: SpinorField,
    steps: int,
    recorder: Optional[Recorder] = None,
    *,
    max_window: int = DEFAULT_MAX_WINDOW,
) -> SpinorField:
    """Apply the one-step map ``steps`` times.

    ``recorder(t, field)`` is invoked after each step with the step index and
    a snapshot of the current window; the snapshot is an independent copy and
    may be retained.  Exceeding ``max_window`` sites raises
    :class:`WindowOverflowError` instead of silently truncating (truncation
    would corrupt norm conservation).
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    n0 = len(field)
    if steps == 0:
        return field
    if n0 == 0:
        out = zero_field(field.time + steps)
        if recorder is not None:
            for k in range(1, steps + 1):
                recorder(field.time + k, zero_field(field.time + k))
        return out
    n = n0 + 2 * steps
    if n > max_window:
        raise WindowOverflowError(
            f"evolution window {n} exceeds maximum {max_window} sites"
        )

    a1 = np.zeros(n, np.complex128)
    a2 = np.zeros(n, np.complex128)
    b1 = np.zeros(n, np.complex128)
    b2 = np.zeros(n, np.complex128)
    a1[steps : steps + n0] = field.cells[:, 0]
    a2[steps : steps + n0] = field.cells[:, 1]
    lo = steps
    hi = steps + n0 - 1
    origin_work = field.origin - steps

    g = params.g
    p = params.p
    for k in range(1, steps + 1):
        u1 = a1[lo : hi + 1]
        u2 = a2[lo : hi + 1]
        s = u1.real**2 + u1.imag**2 + u2.real**2 + u2.imag**2
        th = QUARTER_PI + g * _pow_array(s, p)
        c = np.cos(th)
        sn = np.sin(th)
        v1 = c * u1
        v1 -= sn * u2
        v2 = sn * u1
        v2 += c * u2
        # new support: c1 shifts left, c2 shifts right; cells just outside the
        # write ranges were last touched two steps ago and are already zero
        b1[lo - 1 : hi] = v1
        b2[lo + 1 : hi + 2] = v2
        a1, b1 = b1, a1
        a2, b2 = b2, a2
        lo -= 1
        hi += 1
        if recorder is not None:
            recorder(
                field.time + k,
                _window_field(origin_work + lo, a1, a2, lo, hi, field.time + k),
            )
    return _window_field(origin_work + lo, a1, a2, lo, hi, field.time + steps)


def step(
    params: CoinParams,
    field: SpinorField,
    *,
    max_window: int = DEFAULT_MAX_WINDOW,
) -> SpinorField:
    """One application of the walk map: coin, then shift."""
    return evolve(params, field, 1, max_window=max_window)


def step_back(params: CoinParams, field: SpinorField) -> SpinorField:
    """Exact inverse of :func:`step`.

    The coin preserves every site norm, so the forward angle is recoverable
    from the post-coin state: undo the shift, read the local norm, rotate by
    the negated angle.
    """
    n = len(field)
    if n == 0:
        return zero_field(max(field.time - 1, 0))
    y = np.zeros((n + 2, 2), np.complex128)
    y[2 : n + 2, 0] = field.cells[:, 0]  # c1 back one site right
    y[0:n, 1] = field.cells[:, 1]  # c2 back one site left
    u1 = y[:, 0]
    u2 = y[:, 1]
    s = u1.real**2 + u1.imag**2 + u2.real**2 + u2.imag**2
    th = QUARTER_PI + params.g * _pow_array(s, params.p)
    c = np.cos(th)
    sn = np.sin(th)
    out = np.empty_like(y)
    v1 = c * u1
    v1 += sn * u2
    v2 = c * u2
    v2 -= sn * u1
    out[:, 0] = v1
    out[:, 1] = v2
    return SpinorField(field.origin - 1, out, max(field.time - 1, 0))


def gauge_rescale(g: float, p: float, field: SpinorField):
    """Absorb the nonlinearity strength into the amplitude scale.

    Returns ``(v0, prefactor)`` with ``v0 = |g|**(1/(2p)) * field`` and
    ``prefactor = |g|**(-1/(2p))``: evolving ``v0`` under the unit-strength
    coin with the same sign, ``CoinParams(copysign(1, g), p)``, and
    multiplying by ``prefactor`` reproduces the evolution of ``field`` under
    ``CoinParams(g, p)``.
    """
    if g == 0:
        raise ValueError("g must be nonzero")
    lam = abs(g) ** (1.0 / (2.0 * p))
    rescaled = SpinorField(field.origin, field.cells * lam, field.time)
    return rescaled, 1.0 / lam


@dataclass
class Observation:
    """One recorded point of a trajectory."""

    time: int
    linf: float
    l2: float
    snapshot: Optional[SpinorField] = None


class Trajectory:
    """Evolution run that records norms (and optional snapshots) per step."""

    def __init__(self, params: CoinParams, initial: SpinorField):
        self.params = params
        self.initial = initial
        self.recorded: list[Observation] = []

    def run(
        self,
        steps: int,
        record_every: int = 1,
        snapshot_times=(),
        max_window: int = DEFAULT_MAX_WINDOW,
    ) -> SpinorField:
        """Evolve and record; recorded times strictly increase from 0."""
        snaps = set(snapshot_times)
        final_t = self.initial.time + steps
        self.recorded = [
            Observation(
                self.initial.time,
                self.initial.linf_norm(),
                self.initial.l2_norm(),
                self.initial.trimmed() if self.initial.time in snaps else None,
            )
        ]

        def record(t: int, f: SpinorField):
            want_row = record_every > 0 and (t % record_every == 0 or t == final_t)
            want_snap = t in snaps
            if want_row or want_snap:
                self.recorded.append(
                    Observation(
                        t,
                        f.linf_norm(),
                        f.l2_norm(),
                        f.trimmed() if want_snap else None,
                    )
                )

        return evolve(
            self.params, self.initial, steps, record, max_window=max_window
        )

    def series(self, what: str = "linf"):
        """(times, values) arrays for a recorded quantity."""
        ts = np.array([o.time for o in self.recorded])
        vs = np.array([getattr(o, what) for o in self.recorded])
        return ts, vs

    def snapshots(self) -> dict[int, SpinorField]:
        return {o.time: o.snapshot for o in self.recorded if o.snapshot is not None}
