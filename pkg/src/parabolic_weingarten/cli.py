"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad flags or an input
that cannot be traced (trivial relation, constant principal curvature).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

from . import acceptance, classify, emit, figures
from .errors import WeingartenError
from .odetrace import TraceOptions, trace
from .params import (
    GaussConstant, InitialConditions, Kappa1Constant, Kappa2Constant, Trivial, normalize_linear,
)

CONFIG_ENV = "WEINGARTEN_CONFIG"


class UsageError(Exception):
    """Bad flags or configuration; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _add_params(p):
    g = p.add_argument_group("relation (choose one form)")
    g.add_argument("--K", type=_real, help="constant Gauss curvature")
    g.add_argument("--m", type=_real, help="slope in k1 = m*k2 + n")
    g.add_argument("--n", type=_real, help="offset in k1 = m*k2 + n")
    g.add_argument("--a", type=_real, help="a in a*k1 + b*k2 = c")
    g.add_argument("--b", type=_real)
    g.add_argument("--c", type=_real)
    p.add_argument("--theta0", type=_real, default=0.0, help="initial tangent angle (radians)")
    p.add_argument("--config", help=f"key = value file overriding trace options (default ${CONFIG_ENV})")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weingarten", description="Trace and classify parabolic Weingarten surfaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", help="trace a generating curve")
    _add_params(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: standard output)")

    p = sub.add_parser("classify", help="predict the regime and verify it on a trace")
    _add_params(p)

    p = sub.add_parser("figures", help="render the six reference figures as SVG")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=_count, default=1)

    p = sub.add_parser("mesh", help="sweep a generating curve into an OBJ surface mesh")
    _add_params(p)
    p.add_argument("--t-width", type=_real, required=True, help="half-width of the sweep in t")
    p.add_argument("--cols", type=_count, required=True)
    p.add_argument("--rows", type=_count, help="resample the curve to this many rows")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run the acceptance grid")
    p.add_argument("--jobs", type=_count, default=1)
    return parser


def spec_from_args(args):
    given = {k for k in ("K", "m", "n", "a", "b", "c") if getattr(args, k) is not None}
    if given == {"K"}:
        return GaussConstant(args.K)
    if given == {"m", "n"}:
        return normalize_linear(1.0, -args.m, args.n)
    if given == {"a", "b", "c"}:
        return normalize_linear(args.a, args.b, args.c)
    raise UsageError("give exactly one of --K, --m/--n, or --a/--b/--c")


_OPTION_FIELDS = {f.name: f for f in dataclasses.fields(TraceOptions)}


def parse_config(text: str) -> dict:
    """``key = value`` lines; ``#`` starts a comment.  Keys are trace options."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise UsageError(f"config line {lineno}: expected 'key = value'")
        if key not in _OPTION_FIELDS:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        try:
            if key == "method":
                out[key] = value
            elif key in ("boundary_levels", "stop_at_symmetry"):
                out[key] = None if value.lower() == "none" else int(value)
            else:
                out[key] = float(value)
        except ValueError:
            raise UsageError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return out


def options_from_args(args) -> TraceOptions:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if not path:
        return TraceOptions()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    try:
        return TraceOptions(**parse_config(text))
    except ValueError as exc:
        raise UsageError(f"config {path}: {exc}") from None


def _traceable(spec):
    if isinstance(spec, Trivial):
        raise UsageError(f"{spec.kind.value} relation: nothing to trace")
    if isinstance(spec, (Kappa1Constant, Kappa2Constant)):
        raise UsageError(f"{spec} fixes a principal curvature: no curve to trace")
    return spec


def _write_text(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_trace(args) -> int:
    spec = _traceable(spec_from_args(args))
    curve = trace(spec, InitialConditions(theta0=args.theta0), options_from_args(args))
    if args.out:
        emit.write_curve(curve, args.format, args.out)
    else:
        emit.write_curve(curve, args.format, sys.stdout)
    return 0


def cmd_classify(args) -> int:
    spec = spec_from_args(args)
    if isinstance(spec, Trivial):
        raise UsageError(f"{spec.kind.value} relation has no regime")
    report = classify.predict(spec, args.theta0)
    doc = {"spec": emit._tagged(spec), "report": report.to_dict(), "verification": None}
    code = 0
    if not isinstance(spec, (Kappa1Constant, Kappa2Constant)):
        curve = trace(spec, InitialConditions(theta0=args.theta0), options_from_args(args))
        outcome = classify.verify(spec, curve, report)
        doc["verification"] = outcome.to_dict()
        code = 0 if outcome.passed else 1
    sys.stdout.write(json.dumps(doc, indent=2, default=str) + "\n")
    return code


def cmd_figures(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(figures.build, figures.FIGURES))
    else:
        results = [figures.build(f) for f in figures.FIGURES]
    code = 0
    for r in results:
        path = out_dir / f"{r.figure.name}.svg"
        path.write_text(r.svg)
        status = "ok" if r.ok else "MISMATCH"
        print(f"{path}  {status}")
        if not r.ok:
            code = 1
    return code


def cmd_mesh(args) -> int:
    spec = _traceable(spec_from_args(args))
    if not args.t_width > 0:
        raise UsageError("--t-width must be positive")
    if args.cols < 2 or (args.rows is not None and args.rows < 2):
        raise UsageError("--cols and --rows must be at least 2")
    curve = trace(spec, InitialConditions(theta0=args.theta0), options_from_args(args))
    mesh = emit.sweep_mesh(curve, args.t_width, args.cols, args.rows)
    nbytes = emit.write_obj(mesh, args.out)
    print(f"{args.out}: {len(mesh.vertices)} vertices, {len(mesh.faces)} faces, {nbytes} bytes",
          file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    results = acceptance.run_all(args.jobs)
    for r in results:
        print(r.line())
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok}/{len(results)} criteria passed")
    return 0 if n_ok == len(results) else 1


COMMANDS = {
    "trace": cmd_trace, "classify": cmd_classify, "figures": cmd_figures,
    "mesh": cmd_mesh, "verify": cmd_verify,
}


_NUMERIC_FLAGS = {"--K", "--m", "--n", "--a", "--b", "--c", "--theta0", "--t-width"}


def _join_numeric(argv):
    """Attach values such as ``-2.5e-1`` to their flag; argparse would read
    a negative number in exponent form as an option."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _NUMERIC_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
                break
            out.append(f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_numeric(argv))
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"weingarten: error: {exc}", file=sys.stderr)
        return 2
    except (WeingartenError, ValueError) as exc:
        print(f"weingarten: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:        # --help
        return int(exc.code or 0)
    except BrokenPipeError:          # e.g. piped into head
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


def main() -> None:
    sys.exit(run())
