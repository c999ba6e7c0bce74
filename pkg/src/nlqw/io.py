"""Initial-state specification strings and deterministic CSV/JSON output.

Spec grammar:  term ("+" term)* with term := AMP "d" COMP "@" POS, e.g.

    0.886227 d1@0 + 2.344736 d2@450

AMP is a float or a parenthesized complex ("(1+2j) d1@0"); COMP is 1 or 2;
POS is a signed integer.  Output files are byte-stable for identical inputs:
fixed column order, 12 significant digits in CSV, shortest round-trip floats
in JSON.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InitSpecError
from .evolution import Trajectory
from .experiments import PeakTrack, TimeSeries
from .state import SpinorField, point_source, superpose

__all__ = [
    "InitSpec",
    "parse_init_spec",
    "format_init_spec",
    "write_series",
    "write_csv",
    "write_json",
]


@dataclass(frozen=True)
class InitSpec:
    """Parsed initial state: tuple of (amplitude, component, site) terms."""

    terms: tuple

    def to_field(self) -> SpinorField:
        return superpose(point_source(x, j, a) for a, j, x in self.terms)

    def canonical(self) -> str:
        return format_init_spec(self)


def _parse_amplitude(text: str, pos: int) -> complex:
    s = text.strip()
    if not s:
        raise InitSpecError("missing amplitude", pos)
    try:
        return complex(float(s))
    except ValueError:
        pass
    try:
        return complex(s.replace(" ", ""))
    except ValueError:
        raise InitSpecError(f"bad amplitude {s!r}", pos) from None


def parse_init_spec(text: str) -> InitSpec:
    """Parse a superposition string into an InitSpec (round-trips through
    :func:`format_init_spec`)."""
    terms = []
    i = 0
    n = len(text)
    while True:
        j = text.find("d", i)
        if j < 0:
            raise InitSpecError("expected 'd<component>@<site>' term", i)
        amp = _parse_amplitude(text[i:j], i)
        j += 1
        if j >= n or text[j] not in "0123456789":
            raise InitSpecError("expected component digit after 'd'", j)
        comp = int(text[j])
        if comp not in (1, 2):
            raise InitSpecError(f"component must be 1 or 2, got {comp}", j)
        j += 1
        if j >= n or text[j] != "@":
            raise InitSpecError("expected '@' after component", j)
        j += 1
        k = j
        if k < n and text[k] in "+-":
            k += 1
        while k < n and text[k].isdigit():
            k += 1
        if k == j or (k == j + 1 and text[j] in "+-"):
            raise InitSpecError("expected integer site after '@'", j)
        site = int(text[j:k])
        terms.append((amp, comp, site))
        while k < n and text[k].isspace():
            k += 1
        if k == n:
            break
        if text[k] != "+":
            raise InitSpecError(f"expected '+' between terms, got {text[k]!r}", k)
        i = k + 1
    if not terms:
        raise InitSpecError("empty specification", 0)
    return InitSpec(tuple(terms))


def format_init_spec(spec: InitSpec) -> str:
    """Canonical printer; parse(format(spec)) == spec."""
    parts = []
    for a, j, x in spec.terms:
        if a.imag == 0.0:
            amp = repr(a.real)
        else:
            amp = repr(a)  # complex repr is parenthesized when re != 0
            if not amp.startswith("("):
                amp = f"({amp})"
        parts.append(f"{amp} d{j}@{x}")
    return " + ".join(parts)


# -- deterministic writers ----------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def write_csv(path, header, rows):
    """Rows of numbers with fixed 12-significant-digit formatting."""
    with open(path, "w", newline="\n") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def write_json(path, obj):
    with open(path, "w", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


def _series_rows(obj):
    if isinstance(obj, TimeSeries):
        return ["t", obj.label], list(zip(obj.times.tolist(), obj.values.tolist()))
    if isinstance(obj, PeakTrack):
        return (
            ["t", "site", "component", "amplitude"],
            [(p.time, p.site, p.component, p.magnitude) for p in obj.points],
        )
    if isinstance(obj, Trajectory):
        return (
            ["t", "linf", "l2"],
            [(o.time, o.linf, o.l2) for o in obj.recorded],
        )
    raise TypeError(f"no CSV schema for {type(obj).__name__}")


def _json_payload(obj):
    if isinstance(obj, TimeSeries):
        return {"label": obj.label, "entries": [[int(t), v] for t, v in obj.entries]}
    if isinstance(obj, PeakTrack):
        return {
            "threshold": obj.threshold,
            "points": [
                {
                    "t": p.time,
                    "site": p.site,
                    "component": p.component,
                    "amplitude": p.magnitude,
                }
                for p in obj.points
            ],
        }
    if isinstance(obj, Trajectory):
        return {
            "series": [
                {"t": o.time, "linf": o.linf, "l2": o.l2} for o in obj.recorded
            ],
            "snapshots": [s.to_json_dict() for s in obj.snapshots().values()],
        }
    if isinstance(obj, SpinorField):
        return obj.to_json_dict()
    if isinstance(obj, dict):
        return {str(k): _json_payload(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_payload(v) for v in obj]
    return obj


def write_series(obj, path, fmt: str = "csv"):
    """Serialize a series-like object (TimeSeries, PeakTrack, Trajectory,
    SpinorField snapshot, or containers of those) to ``path``."""
    path = Path(path)
    if fmt == "json":
        write_json(path, _json_payload(obj))
        return
    if fmt != "csv":
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    if isinstance(obj, SpinorField):
        t = obj.trimmed()
        rows = [
            (
                t.origin + i,
                t.cells[i, 0].real,
                t.cells[i, 0].imag,
                t.cells[i, 1].real,
                t.cells[i, 1].imag,
            )
            for i in range(len(t))
        ]
        write_csv(path, ["site", "c1_re", "c1_im", "c2_re", "c2_im"], rows)
        return
    header, rows = _series_rows(obj)
    write_csv(path, header, rows)
