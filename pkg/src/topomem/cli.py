"""Command-line entry point: ``topomem <command> [flags]``.

Relative ``--out`` paths are resolved against ``$TOPOMEM_OUT_DIR`` when it
is set. Exit status is 0 on success, 1 when a validation or roundtrip check
fails, and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bounds import BoundEvaluation, linspace, sweep_csv
from .codes import FAMILIES, build_code, export_code, validate
from .noisy import CSV_COLUMNS, NoiseModel, estimate_failure, estimates_csv
from .protocol import roundtrip

OUT_DIR_ENV = "TOPOMEM_OUT_DIR"


class UsageError(Exception):
    pass


def _family(s: str) -> str:
    s = s.lower().replace("-", "_")
    if s not in FAMILIES:
        raise argparse.ArgumentTypeError(f"unknown code {s!r}; choose from {', '.join(FAMILIES)}")
    return s


def _basis(s: str) -> str:
    if s.upper() not in ("Z", "X"):
        raise argparse.ArgumentTypeError(f"basis must be z or x, got {s!r}")
    return s.upper()


def _eigen(s: str) -> int:
    if s not in ("+1", "1", "-1"):
        raise argparse.ArgumentTypeError(f"eigenvalue must be +1 or -1, got {s!r}")
    return -1 if s == "-1" else 1


def _pair(s: str) -> tuple[int, int]:
    try:
        a, b = (int(t) for t in s.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N,T, got {s!r}") from None
    return a, b


def _floats(s: str) -> list[float]:
    try:
        return [float(t) for t in s.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def _ints(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="topomem", description="Single-shot encoding into topological CSS codes.")
    ap.add_argument("--version", action="version", version=f"topomem {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def code_args(p):
        p.add_argument("--code", type=_family, required=True, help=f"one of {', '.join(FAMILIES)}")
        p.add_argument("--size", type=int, required=True, help="lattice size L")

    def out_arg(p):
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("validate", help="check commutation relations and logical count")
    code_args(p)

    p = sub.add_parser("export", help="write the check matrices")
    code_args(p)
    out_arg(p)

    p = sub.add_parser("roundtrip", help="noiseless encode/decode trials")
    code_args(p)
    p.add_argument("--basis", type=_basis, required=True)
    p.add_argument("--eigen", type=_eigen, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--inject", choices=["logical", "stabilizer"])
    p.add_argument("--fast", action="store_true", help="skip stabilizers already fixed at +1")
    p.add_argument("--avoid-logicals", action="store_true", help="route chains around logical lines")
    out_arg(p)

    def noise_args(p):
        p.add_argument("--p-bit", type=float)
        p.add_argument("--p-phase", type=float)
        p.add_argument("--p-meas", type=float)
        p.add_argument("--trials", type=int, required=True)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("memory", help="noisy storage Monte Carlo for the subsystem code")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--p", type=float, required=True, help="default for all three probabilities")
    noise_args(p)
    out_arg(p)

    p = sub.add_parser("bounds", help="tabulate the analytic bounds")
    p.add_argument("--p-min", type=float, required=True)
    p.add_argument("--p-max", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--finite", type=_pair, help="N,T for the finite-size bound")
    out_arg(p)

    p = sub.add_parser("sweep", help="memory runs with bound columns over a grid")
    p.add_argument("--sizes", type=_ints, required=True, help="comma-separated L values")
    p.add_argument("--steps", type=_ints, help="comma-separated T values (default: T = L)")
    p.add_argument("--ps", type=_floats, required=True, help="comma-separated p values")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    out_arg(p)
    return ap


def _resolve(out: str | None) -> Path | None:
    if out is None:
        return None
    path = Path(out)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def _emit(text: str, out: str | None) -> None:
    path = _resolve(out)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _require(cond: bool, flag: str, msg: str) -> None:
    if not cond:
        raise UsageError(f"{flag}: {msg}")


def _code(args):
    try:
        return build_code(args.code, args.size)
    except ValueError as exc:
        raise UsageError(f"--size: {exc}") from None


def _prob(flag: str, v: float) -> float:
    _require(0.0 <= v < 0.5, flag, f"must lie in [0, 0.5), got {v}")
    return v


def _noise(args) -> NoiseModel:
    p = _prob("--p", args.p)
    return NoiseModel(
        _prob("--p-bit", args.p_bit if args.p_bit is not None else p),
        _prob("--p-phase", args.p_phase if args.p_phase is not None else p),
        _prob("--p-meas", args.p_meas if args.p_meas is not None else p),
    )


def _check_lt(L: int, T: int) -> None:
    _require(L >= 3 and L % 2 == 1, "--size", f"must be odd and >= 3, got {L}")
    _require(T >= 1, "--steps", f"must be >= 1, got {T}")


def _cmd_validate(args) -> int:
    rep = validate(_code(args))
    print(rep.summary())
    return 0 if rep.ok else 1


def _cmd_export(args) -> int:
    _emit(export_code(_code(args)), args.out)
    return 0


def _cmd_roundtrip(args) -> int:
    _require(args.trials >= 1, "--trials", f"must be >= 1, got {args.trials}")
    code = _code(args)
    res = roundtrip(
        code, args.basis, args.eigen, args.trials, args.seed,
        inject=args.inject, fast=args.fast, avoid_logicals=args.avoid_logicals,
    )
    _emit(res.to_json() + "\n", args.out)
    return 0 if res.failures == 0 or args.inject == "logical" else 1


def _cmd_memory(args) -> int:
    _check_lt(args.size, args.steps)
    _require(args.trials >= 1, "--trials", f"must be >= 1, got {args.trials}")
    _require(args.threads >= 1, "--threads", f"must be >= 1, got {args.threads}")
    est = estimate_failure(args.size, args.steps, _noise(args), args.trials, args.seed, args.threads)
    _emit(estimates_csv([est]), args.out)
    return 0


def _cmd_bounds(args) -> int:
    _require(0.0 <= args.p_min <= 0.5, "--p-min", f"must lie in [0, 0.5], got {args.p_min}")
    _require(args.p_min <= args.p_max <= 0.5, "--p-max", f"must lie in [p-min, 0.5], got {args.p_max}")
    _require(args.points >= 1, "--points", f"must be >= 1, got {args.points}")
    if args.finite:
        N, T = args.finite
        _require(N >= 3 and N % 2 == 1 and T >= 1, "--finite", f"needs odd N >= 3 and T >= 1, got {N},{T}")
    _emit(sweep_csv(linspace(args.p_min, args.p_max, args.points), args.finite), args.out)
    return 0


def _cmd_sweep(args) -> int:
    steps = args.steps or [None]
    _require(args.trials >= 1, "--trials", f"must be >= 1, got {args.trials}")
    for p in args.ps:
        _prob("--ps", p)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS + ["finite_bound", "phase_asymptotic", "bit_asymptotic"])
    for L in args.sizes:
        for T in steps:
            T = L if T is None else T
            _check_lt(L, T)
            for p in args.ps:
                est = estimate_failure(L, T, NoiseModel.uniform(p), args.trials, args.seed, args.threads)
                b = BoundEvaluation.at(p, (L, T))
                extra = ["" if v is None else repr(float(v)) for v in (b.finite_bound, b.phase_asymptotic, b.bit_asymptotic)]
                w.writerow(est.csv_row() + extra)
    _emit(buf.getvalue(), args.out)
    return 0


COMMANDS = {
    "validate": _cmd_validate,
    "export": _cmd_export,
    "roundtrip": _cmd_roundtrip,
    "memory": _cmd_memory,
    "bounds": _cmd_bounds,
    "sweep": _cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"topomem {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
