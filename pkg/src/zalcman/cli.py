"""Command-line front end.

Every command prints a JSON (or CSV) envelope

    {"schema_version": "1", "command": ..., "params_echo": {...},
     "payload": {...}, "generated_at": "<RFC 3339 UTC>"}

Exit codes: 0 success, 1 verification failure, 2 argument error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import extremal, surface, verify
from .optimize import first_argmax
from .regimes import DomainError, ProblemParams, classify, theorem_bound, thresholds

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits, '.' decimal point, no grouping."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


@dataclass
class OutputEnvelope:
    command: str
    params_echo: dict
    payload: dict
    generated_at: str
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema_version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {self.schema_version!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default)

    @classmethod
    def from_json(cls, text: str) -> "OutputEnvelope":
        d = json.loads(text)
        return cls(
            command=d["command"],
            params_echo=d["params_echo"],
            payload=d["payload"],
            generated_at=d["generated_at"],
            schema_version=d["schema_version"],
        )

    def to_csv(self) -> str:
        """Flat ``key,value`` view of the envelope; nested keys are dotted."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for k in ("schema_version", "command", "generated_at"):
            w.writerow([k, getattr(self, k)])
        for prefix, d in (("params", self.params_echo), ("payload", self.payload)):
            for k, v in _flatten(d, prefix):
                w.writerow([k, fmt(v)])
        return buf.getvalue()


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _flatten(d, prefix):
    if isinstance(d, dict):
        for k in sorted(d):
            yield from _flatten(d[k], f"{prefix}.{k}")
    elif isinstance(d, (list, tuple)):
        for i, v in enumerate(d):
            yield from _flatten(v, f"{prefix}.{i}")
    else:
        yield prefix, d


def _params(args) -> ProblemParams:
    return ProblemParams(args.n, args.lam)


def _echo(args) -> dict:
    skip = {"func", "format", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# -- commands: each returns (payload, exit code) --


def cmd_bound(args):
    p = _params(args)
    th = thresholds(p.n)
    return {
        "regime": classify(p).value,
        "bound": theorem_bound(p),
        "thresholds": {k: v for k, v in vars(th).items() if k != "n"},
    }, EXIT_OK


def surface_lattice(params: ProblemParams, grid: int, which: str):
    """Row-major lattice over linspace(-1, 1, grid)^2: u varies slowest."""
    if grid < 2:
        raise UsageError(f"--grid must be >= 2, got {grid}")
    axis = np.linspace(-1.0, 1.0, grid)
    U, V = np.meshgrid(axis, axis, indexing="ij")
    fn = surface.eval_F if which == "F" else surface.eval_G
    return U, V, np.asarray(fn(params, U, V), dtype=float)


def write_surface_csv(stream, U, V, Z):
    stream.write("u,v,value\n")
    data = np.column_stack([U.ravel(), V.ravel(), Z.ravel()])
    np.savetxt(stream, data, fmt="%.17g", delimiter=",")


def cmd_surface(args):
    p = _params(args)
    U, V, Z = surface_lattice(p, args.grid, args.which)
    imax = first_argmax(Z)
    imin = first_argmax(-Z)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_surface_csv(fh, U, V, Z)
    else:
        write_surface_csv(sys.stdout, U, V, Z)
    return {
        "which": args.which,
        "grid": args.grid,
        "rows": int(Z.size),
        "max": float(Z[imax]),
        "max_u": float(U[imax]),
        "max_v": float(V[imax]),
        "min": float(Z[imin]),
        "min_u": float(U[imin]),
        "min_v": float(V[imin]),
        "data_path": args.out,
    }, EXIT_OK


def cmd_critical(args):
    p = _params(args)
    cs = surface.critical_points(p)
    return {
        "regime": classify(p).value,
        "in_window": surface.in_critical_window(p),
        "note": cs.regime_note,
        "count": len(cs.points),
        "points": [
            {"u": q.u, "v": q.v, "value": q.f_value, "gradient_residual": q.gradient_residual, "kind": q.kind}
            for q in cs.points
        ],
    }, EXIT_OK


def cmd_sweep(args):
    p = _params(args)
    if args.grid < 8:
        raise UsageError(f"--grid must be >= 8, got {args.grid}")
    r = extremal.sweep_extreme_points(p, args.grid, args.functional, workers=args.workers)
    b = theorem_bound(p)
    return {
        "functional": r.functional,
        "sweep_max": r.max_value,
        "argmax_s": r.argmax.s,
        "argmax_t": r.argmax.t,
        "koebe_rotation": extremal.is_koebe_rotation(r.argmax, p.n),
        "bound": b,
        "gap": b - r.max_value,
        "regime": classify(p).value,
    }, EXIT_OK


def cmd_verify(args):
    if args.n_min < 3:
        raise UsageError(f"--n-min must satisfy n >= 3, got {args.n_min}")
    if args.n_min > args.n_max:
        raise UsageError(f"--n-min ({args.n_min}) exceeds --n-max ({args.n_max})")
    if args.lambda_samples < 0 or args.grid < 8:
        raise UsageError("--lambda-samples must be >= 0 and --grid >= 8")
    out = Path(args.out)
    json_path = out.with_name(out.name + ".json")
    # fail on an unwritable destination before the long run, not after
    for path in (out, json_path):
        with open(path, "a"):
            pass
    cfg = verify.VerifyConfig(
        n_min=args.n_min,
        n_max=args.n_max,
        lambda_samples=args.lambda_samples,
        grid=args.grid,
        seed=args.seed,
        workers=args.workers,
    )
    report = verify.run_full(cfg)
    out.write_text(report.to_text())
    json_path.write_text(report.to_json())
    code = EXIT_OK if report.failures == 0 else EXIT_VERIFY_FAILED
    return {
        "summary": report.summary,
        "flags": report.flags,
        "report_path": str(out),
        "json_path": str(json_path),
    }, code


COMMANDS = {
    "bound": cmd_bound,
    "surface": cmd_surface,
    "critical": cmd_critical,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    common.add_argument("--out", default=None, help="output path")

    np_args = argparse.ArgumentParser(add_help=False)
    np_args.add_argument("--n", type=int, required=True)
    np_args.add_argument("--lambda", dest="lam", type=float, required=True)

    ap = argparse.ArgumentParser(prog="zalcman", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("bound", parents=[common, np_args], help="regime and sharp bound")

    sp = sub.add_parser("surface", parents=[common, np_args], help="sample F or G on a lattice")
    sp.add_argument("--grid", type=int, default=101)
    sp.add_argument("--which", choices=("F", "G"), default="F")

    sub.add_parser("critical", parents=[common, np_args], help="closed-form critical points of F")

    sp = sub.add_parser("sweep", parents=[common, np_args], help="maximize over extreme points")
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--functional", choices=extremal.FUNCTIONALS, default="zalcman")
    sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("verify", parents=[common], help="run every check")
    sp.add_argument("--n-min", type=int, default=3)
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--lambda-samples", type=int, default=15)
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--workers", type=int, default=1)
    return ap


def _emit(env: OutputEnvelope, fmt_name: str, stream):
    stream.write(env.to_csv() if fmt_name == "csv" else env.to_json() + "\n")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    if args.command == "verify" and args.out is None:
        args.out = "verify_report.txt"

    try:
        payload, code = COMMANDS[args.command](args)
    except (DomainError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO

    env = OutputEnvelope(args.command, _echo(args), payload, utc_now())
    try:
        if args.command == "surface" and not args.out:
            # stdout carries the data; the envelope goes to stderr
            _emit(env, args.format, sys.stderr)
        elif args.out and args.command not in ("surface", "verify"):
            with open(args.out, "w", newline="") as fh:
                _emit(env, args.format, fh)
        else:
            _emit(env, args.format, sys.stdout)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
