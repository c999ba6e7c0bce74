"""Command-line front end.

Subcommands: evolve, soliton, edge, decay, peaks, collide, perturb.
Exit codes: 0 success, 2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import experiments
from .coin import CoinParams
from .edge import basin_intervals, fixed_points, iterate_edge
from .errors import NumericsError, WalkError
from .evolution import DEFAULT_MAX_WINDOW, Trajectory, evolve
from .io import parse_init_spec, write_csv, write_json, write_series, _fmt, _json_payload
from .solitons import SolitonKind, make_soliton, soliton_spec

USAGE_EXIT = 2
NUMERIC_EXIT = 3


def _coin_args(sp):
    sp.add_argument("--g", type=float, required=True, help="nonlinearity strength")
    sp.add_argument("--p", type=float, default=1.0, help="nonlinearity exponent (>= 1)")


def _io_args(sp):
    sp.add_argument("--out", default=None, help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument(
        "--seed", type=int, default=0,
        help="seed for randomized operations (reserved; accepted everywhere)",
    )


def _parse_times(text):
    return tuple(int(t) for t in text.split(",")) if text else ()


def _emit_rows(args, header, rows):
    if args.out:
        write_csv(args.out, header, rows)
    else:
        print(",".join(header))
        for row in rows:
            print(",".join(_fmt(v) for v in row))


def _emit(args, obj):
    if args.out:
        write_series(obj, args.out, args.format)
    elif args.format == "json":
        import json

        print(json.dumps(_json_payload(obj), indent=2))
    else:
        from .io import _series_rows

        header, rows = _series_rows(obj)
        print(",".join(header))
        for row in rows:
            print(",".join(_fmt(v) for v in row))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nlqw",
        description="Nonlinear quantum walk simulator and analysis toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("evolve", help="run the walk and record norms/snapshots")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--init", required=True, help='e.g. "0.886227 d1@0 + 1 d2@5"')
    sp.add_argument("--record-every", type=int, default=1)
    sp.add_argument("--snapshot-at", default="", help="comma-separated times")
    sp.add_argument("--max-window", type=int, default=DEFAULT_MAX_WINDOW)

    sp = sub.add_parser("soliton", help="solve a soliton branch and verify its orbit")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument(
        "--kind", required=True, choices=tuple(k.value for k in SolitonKind)
    )
    sp.add_argument("--branch", type=int, required=True)
    sp.add_argument("--position", type=int, default=0)
    sp.add_argument("--component", type=int, choices=(1, 2), default=1)

    sp = sub.add_parser("edge", help="edge-map analysis: fixed points, basins, orbits")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument("--fixed-points", type=float, metavar="XMAX")
    sp.add_argument("--basin", type=int, metavar="M")
    sp.add_argument("--xmax", type=float, default=None)
    sp.add_argument("--iterate", type=float, metavar="R0")
    sp.add_argument("--steps", type=int, default=10**6)

    sp = sub.add_parser("decay", help="sup-norm decay run with log-log fit")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument("--init", default="0.2 d1@0")
    sp.add_argument("--steps", type=int, default=10000)
    sp.add_argument("--fit-from", type=int, default=10)
    sp.add_argument("--fit-to", type=int, default=None)

    sp = sub.add_parser("peaks", help="track sites above an amplitude threshold")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument("--init", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--threshold", type=float, default=0.3)

    sp = sub.add_parser("collide", help="run a cataloged soliton collision")
    _io_args(sp)
    sp.add_argument(
        "--case", required=True, choices=("I-rot", "I-trav", "II", "III", "IV")
    )
    sp.add_argument("--coin", required=True, choices=("plus", "minus"))
    sp.add_argument("--threshold", type=float, default=0.3)

    sp = sub.add_parser("perturb", help="edge trace of a perturbed soliton amplitude")
    _coin_args(sp)
    _io_args(sp)
    sp.add_argument("--amplitude", type=float, required=True)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--sign", type=int, choices=(-1, 1), required=True)
    sp.add_argument("--steps", type=int, default=10**6)
    return ap


def _cmd_evolve(args) -> int:
    params = CoinParams(args.g, args.p)
    initial = parse_init_spec(args.init).to_field()
    traj = Trajectory(params, initial)
    traj.run(
        args.steps,
        record_every=args.record_every,
        snapshot_times=_parse_times(args.snapshot_at),
        max_window=args.max_window,
    )
    if args.format == "json" or not args.out:
        _emit(args, traj)
    else:
        write_series(traj, args.out, "csv")
        snaps = traj.snapshots()
        if snaps:
            write_json(
                str(args.out) + ".snapshots.json",
                [s.to_json_dict() for s in snaps.values()],
            )
    return 0


def _cmd_soliton(args) -> int:
    params = CoinParams(args.g, args.p)
    spec = soliton_spec(
        params, SolitonKind(args.kind), args.branch, args.position, args.component
    )
    field = make_soliton(params, spec)
    final = evolve(params, field, 8)
    probe = [evolve(params, field, t) for t in range(1, 5)]
    drift = max(abs(f.linf_norm() - spec.amplitude) for f in probe + [final])
    if spec.kind is SolitonKind.PERIODIC:
        motion = f"period-4 orbit on sites {{{spec.position}, {spec.position + 1}}}"
    else:
        direction = "left" if spec.component == 1 else "right"
        flavor = "sign-flipping" if spec.kind is SolitonKind.ROTATING else "constant"
        motion = f"moves {direction} one site per step, {flavor} amplitude"
    print(f"kind={spec.kind.value} branch={spec.branch} amplitude={spec.amplitude!r}")
    print(f"orbit: {motion}")
    print(f"verified over 8 steps: max sup-norm drift {drift:.3e}")
    return 0


def _cmd_edge(args) -> int:
    params = CoinParams(args.g, args.p)
    chosen = [
        args.fixed_points is not None,
        args.basin is not None,
        args.iterate is not None,
    ]
    if sum(chosen) != 1:
        raise ValueError("choose exactly one of --fixed-points, --basin, --iterate")
    if args.fixed_points is not None:
        fps = fixed_points(params, args.fixed_points)
        _emit_rows(args, ["m", "x"], list(enumerate(fps.points, start=1)))
        return 0
    if args.basin is not None:
        xmax = args.xmax
        if xmax is None:
            fps = fixed_points(params, 1e9)  # generous scan window
            xmax = fps.x(min(3, len(fps))) + 1.0 if len(fps) else 1.0
        dec = basin_intervals(params, args.basin, xmax)
        rows = [(i, lo, hi) for i, (lo, hi) in enumerate(dec.intervals)]
        _emit_rows(args, ["interval", "lo", "hi"], rows)
        return 0
    orbit = iterate_edge(params, args.iterate, t_max=args.steps)
    _emit_rows(
        args, ["t", "r"], list(zip(range(orbit.series.size), orbit.series.tolist()))
    )
    print(
        f"classification={orbit.classification.value} "
        f"limit={orbit.limit!r} steps={orbit.steps}",
        file=sys.stderr,
    )
    return 0


def _cmd_decay(args) -> int:
    params = CoinParams(args.g, args.p)
    initial = parse_init_spec(args.init).to_field()
    fit_to = args.fit_to if args.fit_to is not None else args.steps
    series, fit = experiments.run_decay(
        params, initial, args.steps, (args.fit_from, fit_to)
    )
    mask = series.times >= 1
    rows = [
        (int(t), v, float(np.log10(t)), float(np.log10(v)) if v > 0 else float("nan"))
        for t, v in zip(series.times[mask], series.values[mask])
    ]
    if args.format == "json":
        payload = {
            "series": [[int(t), v] for t, v in series.entries],
            "fit": {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "pinned_intercept": fit.pinned_intercept,
                "residual": fit.residual,
                "t_range": list(fit.t_range),
            },
        }
        if args.out:
            write_json(args.out, payload)
        else:
            import json

            print(json.dumps(payload, indent=2))
    else:
        _emit_rows(args, ["t", "linf", "log10t", "log10linf"], rows)
    print(
        f"fit: slope={fit.slope:.6f} intercept={fit.intercept:.6f} "
        f"pinned_intercept={fit.pinned_intercept:.6f} residual={fit.residual:.6f}",
        file=sys.stderr,
    )
    return 0


def _cmd_peaks(args) -> int:
    params = CoinParams(args.g, args.p)
    initial = parse_init_spec(args.init).to_field()
    track = experiments.track_peaks(params, initial, args.steps, args.threshold)
    _emit(args, track)
    return 0


def _cmd_collide(args) -> int:
    name = f"{args.case}-{args.coin}"
    catalog = {s.name: s for s in experiments.scenario_catalog()}
    if name not in catalog:
        raise ValueError(
            f"no cataloged scenario {name!r} (available: {', '.join(sorted(catalog))})"
        )
    scenario = catalog[name]
    result = experiments.run_collision(scenario, threshold=args.threshold)
    if args.format == "json" or not args.out:
        payload = {
            "scenario": scenario.name,
            "peaks": _json_payload(result.track),
            "snapshots": {str(t): f.to_json_dict() for t, f in sorted(result.snapshots.items())},
        }
        if args.out:
            write_json(args.out, payload)
        else:
            import json

            print(json.dumps(payload, indent=2))
    else:
        write_series(result.track, args.out, "csv")
        write_json(
            str(args.out) + ".snapshots.json",
            {str(t): f.to_json_dict() for t, f in sorted(result.snapshots.items())},
        )
    return 0


def _cmd_perturb(args) -> int:
    params = CoinParams(args.g, args.p)
    series, orbit = experiments.edge_perturbation(
        params, args.amplitude, args.eps, args.sign, args.steps
    )
    _emit(args, series)
    print(
        f"classification={orbit.classification.value} limit={orbit.limit!r}",
        file=sys.stderr,
    )
    return 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "soliton": _cmd_soliton,
    "edge": _cmd_edge,
    "decay": _cmd_decay,
    "peaks": _cmd_peaks,
    "collide": _cmd_collide,
    "perturb": _cmd_perturb,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return _COMMANDS[args.command](args)
    except NumericsError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return NUMERIC_EXIT
    except (WalkError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
