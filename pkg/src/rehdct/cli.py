"""Command-line interface: ``rehdct <command> [options]``.

Exit codes: 0 success, 1 a validation check failed, 2 bad usage or input.
CSV output starts with a ``#`` metadata line followed by a header row.
"""

import argparse
import csv
import io as _io
import json
import math
import sys

import numpy as np

from . import __version__, analytics, montecarlo, validation
from .channels import KINDS, compose_f, identity_channel, make_channel
from .engines import BRUTE_MAX_D, perfect_basis_check, teleport_brute, teleport_cjks
from .errors import RehdctError
from .io import load_channel, load_state, state_to_json, write_atomic
from .states import (
    child_rng,
    engineer_phases,
    noisy_singlet,
    sample_haar_pure,
    sample_hs_mixed,
    uniform_superposition,
)

DEFAULT_SEED = 42
PRESETS = ("max-coherent", "diagonal", "random-haar", "random-hs")
ENSEMBLE_FLAGS = {"pure": ("pure-haar",), "mixed": ("mixed-hs",), "both": montecarlo.ENSEMBLES}


class UsageError(Exception):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.9g}"
    return str(v)


def _emit(args, columns, rows, meta):
    if args.format == "json":
        text = json.dumps({"meta": meta, "rows": [dict(zip(columns, r)) for r in rows]}, indent=2) + "\n"
    else:
        buf = _io.StringIO()
        buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(v) for v in r])
        text = buf.getvalue()
    _write(args, text)


def _write(args, text):
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _meta(args, **extra):
    meta = {"rehdct": __version__, "command": args.command, "seed": args.seed}
    meta.update(extra)
    return meta


def _noise(kind, d, p):
    if kind is None or kind.lower() == "none":
        return None, None
    chan = make_channel(kind, d, p)
    return chan, compose_f(chan, chan)


def _check_p(p):
    if not 0.0 <= p <= 1.0:
        raise UsageError(f"noise strength must lie in [0, 1], got {p}")


def _check_x(d, *idx):
    for i in idx:
        if not 0 <= i < d:
            raise UsageError(f"measurement index {i} out of range for d={d}")


def cmd_validate(args):
    extra = [load_channel(path, tol=None) for path in args.channel_file]
    results = validation.run_all(extra)
    if args.format == "json":
        payload = [
            {"check": r.name, "max_deviation": r.max_deviation, "tol": r.tol, "passed": r.passed, "detail": r.detail}
            for r in results
        ]
        _write(args, json.dumps(payload, indent=2) + "\n")
    else:
        lines = [
            f"{'PASS' if r.passed else 'FAIL'}  {r.name:<28} max_dev={r.max_deviation:.3e}  tol={r.tol:.0e}  {r.detail}"
            for r in results
        ]
        _write(args, "\n".join(lines) + "\n")
    return 0 if all(r.passed for r in results) else 1


def sweep_rows(kind, d_list, points=101, x=0):
    """Rows ``(d, p, eta_analytic, eta_simulated, eta_classical, p_threshold)``.

    The simulated column runs the CJKS engine on the engineered maximally
    coherent target; each threshold point is inserted into the grid.
    """
    kind = kind.upper()
    rows, notes = [], []
    for d in d_list:
        _check_x(d, x)
        try:
            p_th = analytics.threshold(kind, d, x).p_th
        except RehdctError as exc:
            p_th = None
            notes.append(f"{kind} d={d}: no threshold ({exc})")
        grid = set(np.linspace(0.0, 1.0, points).tolist())
        if p_th is not None and p_th < 1:
            grid.add(p_th)
        target = engineer_phases(uniform_superposition(d), x)
        for p in sorted(grid):
            _, noise = _noise(kind, d, p)
            sim = teleport_cjks(target, noise, x=x, y=0).efficiency
            if kind == "DF" and x and math.gcd(x, d) != 1:
                analytic = analytics.eta_df(uniform_superposition(d), p, x)
            else:
                analytic = analytics.eta_closed_form(kind, d, p, x)
            rows.append((d, p, analytic, sim, analytics.eta_classical(d), p_th))
    return rows, notes


def cmd_sweep(args):
    rows, notes = sweep_rows(args.noise, args.d, args.points, args.x)
    for n in notes:
        print(f"note: {n}", file=sys.stderr)
    cols = ["d", "p", "eta_analytic", "eta_simulated", "eta_classical", "p_threshold"]
    _emit(args, cols, rows, _meta(args, noise=args.noise.upper(), x=args.x, tol=1e-9))
    return 0


def cmd_robustness(args):
    sem = 1e-4 if args.fast else args.sem_target
    reports = montecarlo.table1_report(
        args.d,
        args.delta,
        ENSEMBLE_FLAGS[args.ensemble],
        seed=args.seed,
        sem_target=sem,
        max_samples=args.max_samples,
        workers=args.workers,
    )
    cols = [
        "d", "ensemble", "delta_phi", "mean_eta", "sem", "samples", "converged",
        "rejected", "nonpositive", "spot_checks", "spot_check_max_dev",
    ]
    rows = [tuple(r.as_dict()[c] for c in cols) for r in reports]
    _emit(args, cols, rows, _meta(args, sem_target=sem, max_samples=args.max_samples, spot_check_tol=montecarlo.SPOT_CHECK_TOL))
    for r in reports:
        if not r.converged:
            print(f"warning: d={r.d} {r.ensemble} delta={r.delta_phi} did not converge", file=sys.stderr)
    return 0


def _make_target(args):
    if args.state:
        target = load_state(args.state)
        if args.engineer:
            target = engineer_phases(target.magnitudes, args.x)
        return target
    d = args.d
    if args.preset == "max-coherent":
        return engineer_phases(uniform_superposition(d), args.x)
    if args.preset == "diagonal":
        return engineer_phases(np.eye(d) / d, args.x)
    rng = child_rng(args.seed, 0)
    target = sample_haar_pure(d, rng) if args.preset == "random-haar" else sample_hs_mixed(d, rng)
    if args.engineer:
        target = engineer_phases(target.magnitudes, args.x)
    return target


def outcome_record(o):
    return {
        "d": o.d,
        "x": o.x,
        "y": o.y,
        "probability": o.probability,
        "coherence_in": o.coherence_in,
        "coherence_out": o.coherence_out,
        "efficiency": o.efficiency,
        "bob_state": state_to_json(o.bob_state),
    }


def cmd_teleport(args):
    target = _make_target(args)
    d = target.d
    _check_x(d, args.x, args.y)
    _check_p(args.p)
    if args.engine in ("brute", "both") and d > BRUTE_MAX_D:
        raise UsageError(f"the brute-force engine is capped at d <= {BRUTE_MAX_D}; got d={d}")
    chan, noise = _noise(args.noise, d, args.p)
    out = {"noise": args.noise.upper(), "p": args.p, "engine": args.engine}
    results = {}
    if args.engine in ("brute", "both"):
        results["brute"] = teleport_brute(target, chan_a=chan, chan_b=chan, x=args.x, y=args.y)
    if args.engine in ("cjks", "both"):
        results["cjks"] = teleport_cjks(target, noise, x=args.x, y=args.y)
    for name, o in results.items():
        out[name] = outcome_record(o)
    if args.engine == "both":
        out["max_deviation"] = float(np.max(np.abs(results["brute"].bob_state - results["cjks"].bob_state)))
    _write(args, json.dumps(out, indent=2) + "\n")
    return 0


def cmd_thresholds(args):
    rows = []
    for d in range(3, args.d_max + 1):
        t = analytics.threshold(args.noise, d, args.x)
        rows.append((d, t.p_th, t.classical_bound, t.consistency))
    cols = ["d", "p_threshold", "eta_classical", "consistency"]
    _emit(args, cols, rows, _meta(args, noise=args.noise.upper(), tol=analytics.THRESHOLD_TOL))
    return 0


def cmd_classical(args):
    d = args.d
    target = engineer_phases(uniform_superposition(d), 0)
    rows = []
    for r in args.r_grid:
        if not 0 <= r <= 1:
            raise UsageError(f"r must lie in [0, 1], got {r}")
        pair = noisy_singlet(d, r)
        o = teleport_brute(target, pair=pair, x=0, y=0) if d <= BRUTE_MAX_D else None
        if o is None:
            raise UsageError(f"noisy-singlet runs use the brute-force engine (d <= {BRUTE_MAX_D})")
        rows.append((r, pair.separable, analytics.eta_classical(d), o.coherence_in, o.coherence_out, o.efficiency))
    cols = ["r", "separable", "eta_classical", "coherence_in", "coherence_out", "coherence_ratio"]
    _emit(args, cols, rows, _meta(args, d=d, tol=1e-10))
    return 0


def cmd_perfect_basis(args):
    _check_p(args.p)
    _check_x(args.d, args.x)
    _, noise = _noise(args.noise, args.d, args.p)
    if noise is None:
        eye = identity_channel(args.d)
        noise = compose_f(eye, eye)
    rep = perfect_basis_check(noise, args.x)
    payload = {
        "noise": args.noise.upper(), "d": args.d, "p": args.p, "x": args.x,
        "holds": rep.holds, "max_deviation": rep.max_deviation, "tol": rep.tol,
    }
    if args.format == "csv":
        _emit(args, list(payload), [tuple(payload.values())], _meta(args))
    else:
        _write(args, json.dumps(payload, indent=2) + "\n")
    return 0


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED})")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format (csv unless noted)")
    common.add_argument("--out", help="output path (default: stdout); written atomically")

    parser = argparse.ArgumentParser(prog="rehdct", description="Qudit coherence teleportation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    noise_kinds = list(KINDS) + [k.lower() for k in KINDS]

    p = sub.add_parser("validate", parents=[common], help="run the cross-module invariant checks")
    p.add_argument("--channel-file", action="append", default=[], help="also check a custom channel JSON file")
    p.set_defaults(func=cmd_validate, default_format="text")

    p = sub.add_parser("sweep", parents=[common], help="efficiency vs noise strength")
    p.add_argument("--noise", required=True, choices=noise_kinds)
    p.add_argument("--d", type=int, nargs="+", default=[2, 3, 4, 8])
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--x", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("robustness", parents=[common], help="Monte Carlo efficiency under phase deviations")
    p.add_argument("--d", type=int, nargs="+", default=list(montecarlo.TABLE_DIMS))
    p.add_argument("--delta", type=float, nargs="+", default=list(montecarlo.TABLE_DELTAS))
    p.add_argument("--ensemble", choices=tuple(ENSEMBLE_FLAGS), default="both")
    p.add_argument("--sem-target", type=float, default=montecarlo.DEFAULT_SEM_TARGET)
    p.add_argument("--max-samples", type=int, default=montecarlo.DEFAULT_MAX_SAMPLES)
    p.add_argument("--fast", action="store_true", help="SEM target 1e-4")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_robustness)

    p = sub.add_parser("teleport", parents=[common], help="single teleportation run, JSON output")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--state", help="state JSON file")
    src.add_argument("--preset", choices=PRESETS, default="max-coherent")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--noise", default="none", choices=["none"] + noise_kinds)
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--x", type=int, default=0)
    p.add_argument("--y", type=int, default=0)
    p.add_argument("--engine", choices=("brute", "cjks", "both"), default="cjks")
    p.add_argument("--engineer", action="store_true", help="phase-engineer the state's magnitudes for family x")
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("thresholds", parents=[common], help="noise thresholds for d = 3..d_max")
    p.add_argument("--noise", required=True, choices=noise_kinds)
    p.add_argument("--d-max", type=int, default=32)
    p.add_argument("--x", type=int, default=1, help="POVM family (DF only)")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("classical", parents=[common], help="noisy-singlet teleportation vs purity r")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--r-grid", type=_float_list, default=[round(0.1 * k, 10) for k in range(11)],
                   help="comma-separated r values (default 0,0.1,...,1)")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("perfect-basis", parents=[common], help="is family x immune to the noise?")
    p.add_argument("--noise", required=True, choices=["none"] + noise_kinds)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--x", type=int, default=0)
    p.set_defaults(func=cmd_perfect_basis, default_format="json")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "default_format", "csv")
    try:
        return args.func(args)
    except (UsageError, RehdctError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
