"""Command-line front end: ``spinc-surfaces verify-algebra | verify-surface | report``.

Exit codes: 0 when every check passes, 1 on a failed check or an I/O
error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .cp2 import BUILTIN_SURFACES
from .report import SuiteResult
from .suites import CASE_FILTERS, verify_algebra, verify_surface


def cmd_verify_algebra(trials: int = 1000, seed: int = 42, case_filter: str = "all") -> SuiteResult:
    return verify_algebra(trials, seed, case_filter)


def cmd_verify_surface(name: str, grid: int = 32, fd_step: float = 1e-4, tol: float = 1e-4) -> SuiteResult:
    return verify_surface(name, grid, fd_step, tol)


def cmd_report(result: SuiteResult, fmt: str, out_path) -> Path:
    """Write ``result`` as JSON or CSV (UTF-8, LF line endings)."""
    out = Path(out_path)
    out.write_text(result.render(fmt), encoding="utf-8", newline="\n")
    return out


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not x > 0 or x == float("inf"):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return x


def _grid(text: str) -> int:
    n = _positive_int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid must be >= 2")
    return n


def _surface(text: str) -> str:
    name = text.replace("-", "_")
    if name not in BUILTIN_SURFACES:
        known = ", ".join(sorted(s.replace("_", "-") for s in BUILTIN_SURFACES))
        raise argparse.ArgumentTypeError(f"unknown surface {text!r} (known: {known})")
    return name


def _algebra_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=_positive_int, default=1000, help="random trials per check (default 1000)")
    p.add_argument("--seed", type=int, default=42, help="base seed; trial k uses seed + k (default 42)")
    p.add_argument("--case-filter", choices=CASE_FILTERS, default="all", help="admissible case to sample")


def _surface_args(p: argparse.ArgumentParser, positional: bool = True) -> None:
    if positional:
        p.add_argument("surface", type=_surface, help="builtin surface: " + ", ".join(BUILTIN_SURFACES))
    else:
        p.add_argument("--surface", type=_surface, default="cp1", help="builtin surface (default cp1)")
    p.add_argument("--grid", type=_grid, default=32, help="sample points per side (default 32)")
    p.add_argument("--fd-step", type=_positive_float, default=1e-4, help="outer finite-difference step")
    p.add_argument("--tol", type=_positive_float, default=1e-4, help="residual tolerance (default 1e-4)")


def _output_args(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", type=Path, required=required, help="write the report here ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinc-surfaces",
        description="Exact and numerical checks of the spinor description of surfaces in CP^2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-algebra", help="exact identities on random admissible data")
    _algebra_args(p)
    _output_args(p)

    p = sub.add_parser("verify-surface", help="frame equations along a builtin surface")
    _surface_args(p)
    _output_args(p)

    p = sub.add_parser("report", help="run a suite and write its JSON or CSV report")
    p.add_argument("--suite", choices=("algebra", "surface"), default="algebra")
    _algebra_args(p)
    _surface_args(p, positional=False)
    _output_args(p, required=True)
    return parser


def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _summary(result: SuiteResult, stream) -> None:
    color = _use_color(stream)
    for c in result.checks:
        status = c.status.upper()
        if color:
            status = f"\033[{32 if c.passed else 31}m{status}\033[0m"
        res = c.max_residual if isinstance(c.max_residual, str) else f"{c.max_residual:.3e}"
        tail = f"  [{c.detail}]" if c.detail else ""
        print(f"{status:>4}  {c.name:<40} trials={c.trials:<6} max_residual={res}{tail}", file=stream)
    n_ok = sum(c.passed for c in result.checks)
    print(f"{result.suite}: {n_ok}/{len(result.checks)} checks passed", file=stream)


def _flags(result: SuiteResult) -> None:
    for f in result.flags:
        print(f"flag {f.name}: printed {f.printed}; computed {f.computed} ({f.note})", file=sys.stderr)


def _write(result: SuiteResult, fmt: str, out: Path) -> None:
    if str(out) == "-":
        sys.stdout.write(result.render(fmt))
    else:
        cmd_report(result, fmt, out)


def _run(args) -> SuiteResult:
    if args.command == "verify-algebra" or (args.command == "report" and args.suite == "algebra"):
        return cmd_verify_algebra(args.trials, args.seed, args.case_filter)
    seed = getattr(args, "seed", 0)
    return verify_surface(args.surface, args.grid, args.fd_step, args.tol, seed=seed)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    result = _run(args)
    if args.command != "report":
        _summary(result, sys.stdout)
    _flags(result)
    if args.out is not None:
        try:
            _write(result, args.format, args.out)
        except OSError as exc:
            print(f"error: cannot write report to {args.out}: {exc.strerror or exc}", file=sys.stderr)
            return 1
    return 0 if result.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
