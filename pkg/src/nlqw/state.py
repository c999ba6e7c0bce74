"""Two-component complex amplitudes on the integer lattice.

The walker state is a finitely supported map from sites in Z to C^2, stored
as a dense window of cells plus an integer origin offset.  Sites outside the
window are implicitly zero.  Fields are immutable value snapshots: the cell
array is frozen at construction, so instances can be shared freely across
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ComponentError

__all__ = [
    "Spinor",
    "SpinorField",
    "point_source",
    "superpose",
    "zero_field",
    "sup_distance",
]


class Spinor(NamedTuple):
    """Amplitude pair at a single site."""

    c1: complex
    c2: complex

    @property
    def norm_sq(self) -> float:
        return abs(self.c1) ** 2 + abs(self.c2) ** 2


@dataclass(eq=False)
class SpinorField:
    """Dense window of two-component amplitudes.

    ``cells[i]`` holds ``(c1, c2)`` for site ``origin + i``.  The stored
    window may carry zero padding; :meth:`support_bounds` reports the tight
    nonzero extent (threshold exactly zero, no epsilon trimming).
    """

    origin: int
    cells: np.ndarray  # shape (n, 2), complex128, read-only
    time: int = 0

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.complex128)
        if cells.ndim != 2 or cells.shape[1] != 2:
            raise ValueError(f"cells must have shape (n, 2), got {cells.shape}")
        if self.time < 0:
            raise ValueError("time must be nonnegative")
        cells.setflags(write=False)
        self.cells = cells

    def __len__(self) -> int:
        return self.cells.shape[0]

    # -- accessors ---------------------------------------------------------

    def component(self, j: int) -> np.ndarray:
        """Read-only view of component ``j`` (1 or 2) over the window."""
        if j not in (1, 2):
            raise ComponentError(f"component index must be 1 or 2, got {j}")
        return self.cells[:, j - 1]

    def sites(self) -> np.ndarray:
        return np.arange(self.origin, self.origin + len(self))

    def amplitude(self, x: int, j: int) -> complex:
        """Amplitude of component ``j`` at site ``x`` (zero outside window)."""
        if j not in (1, 2):
            raise ComponentError(f"component index must be 1 or 2, got {j}")
        i = x - self.origin
        if 0 <= i < len(self):
            return complex(self.cells[i, j - 1])
        return 0j

    def spinor(self, x: int) -> Spinor:
        return Spinor(self.amplitude(x, 1), self.amplitude(x, 2))

    # -- norms ---------------------------------------------------------------

    def site_norms_sq(self) -> np.ndarray:
        """Per-site squared C^2 norms over the window."""
        c = self.cells
        return (
            c[:, 0].real ** 2
            + c[:, 0].imag ** 2
            + c[:, 1].real ** 2
            + c[:, 1].imag ** 2
        )

    def site_norm_sq(self, x: int) -> float:
        i = x - self.origin
        if 0 <= i < len(self):
            v = self.cells[i]
            return (
                v[0].real ** 2 + v[0].imag ** 2 + v[1].real ** 2 + v[1].imag ** 2
            )
        return 0.0

    def l2_norm(self) -> float:
        if len(self) == 0:
            return 0.0
        return math.sqrt(float(self.site_norms_sq().sum()))

    def linf_norm(self) -> float:
        if len(self) == 0:
            return 0.0
        return math.sqrt(float(self.site_norms_sq().max()))

    # -- structure -----------------------------------------------------------

    def support_bounds(self):
        """Tight ``(min_site, max_site)`` of nonzero cells, or None if empty."""
        nz = np.flatnonzero((self.cells != 0).any(axis=1))
        if nz.size == 0:
            return None
        return (self.origin + int(nz[0]), self.origin + int(nz[-1]))

    def trimmed(self) -> "SpinorField":
        """Copy restricted to the tight support window (canonical form)."""
        b = self.support_bounds()
        if b is None:
            return SpinorField(0, np.zeros((0, 2), np.complex128), self.time)
        lo, hi = b[0] - self.origin, b[1] - self.origin
        return SpinorField(b[0], self.cells[lo : hi + 1].copy(), self.time)

    def translated(self, dx: int) -> "SpinorField":
        return SpinorField(self.origin + dx, self.cells, self.time)

    def copy(self) -> "SpinorField":
        return SpinorField(self.origin, self.cells.copy(), self.time)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        """Snapshot dict ``{"time", "origin", "cells"}`` over the tight support.

        Each cell serializes as ``[re1, im1, re2, im2]``.
        """
        t = self.trimmed()
        quads = np.empty((len(t), 4))
        quads[:, 0] = t.cells[:, 0].real
        quads[:, 1] = t.cells[:, 0].imag
        quads[:, 2] = t.cells[:, 1].real
        quads[:, 3] = t.cells[:, 1].imag
        return {"time": t.time, "origin": t.origin, "cells": quads.tolist()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "SpinorField":
        quads = np.asarray(d["cells"], dtype=float).reshape(-1, 4)
        cells = np.empty((quads.shape[0], 2), np.complex128)
        cells[:, 0] = quads[:, 0] + 1j * quads[:, 1]
        cells[:, 1] = quads[:, 2] + 1j * quads[:, 3]
        return cls(int(d["origin"]), cells, int(d["time"]))


def zero_field(time: int = 0) -> SpinorField:
    return SpinorField(0, np.zeros((0, 2), np.complex128), time)


def point_source(x: int, j: int, a: complex) -> SpinorField:
    """``a`` times the point mass of component ``j`` at site ``x``."""
    if j not in (1, 2):
        raise ComponentError(f"component index must be 1 or 2, got {j}")
    cells = np.zeros((1, 2), np.complex128)
    cells[0, j - 1] = a
    return SpinorField(x, cells)


def superpose(fields) -> SpinorField:
    """Pointwise complex sum; overlapping supports add."""
    fields = list(fields)
    fields = [f for f in fields if len(f) > 0]
    if not fields:
        return zero_field()
    lo = min(f.origin for f in fields)
    hi = max(f.origin + len(f) for f in fields)
    cells = np.zeros((hi - lo, 2), np.complex128)
    for f in fields:
        i = f.origin - lo
        cells[i : i + len(f)] += f.cells
    return SpinorField(lo, cells, fields[0].time)


def sup_distance(a: SpinorField, b: SpinorField) -> float:
    """Max over sites of the C^2 norm of the pointwise difference."""
    if len(a) == 0 and len(b) == 0:
        return 0.0
    lo = min((f.origin for f in (a, b) if len(f)), default=0)
    hi = max((f.origin + len(f) for f in (a, b) if len(f)), default=0)
    diff = np.zeros((hi - lo, 2), np.complex128)
    if len(a):
        diff[a.origin - lo : a.origin - lo + len(a)] += a.cells
    if len(b):
        diff[b.origin - lo : b.origin - lo + len(b)] -= b.cells
    ns = (
        diff[:, 0].real ** 2
        + diff[:, 0].imag ** 2
        + diff[:, 1].real ** 2
        + diff[:, 1].imag ** 2
    )
    return math.sqrt(float(ns.max())) if ns.size else 0.0
