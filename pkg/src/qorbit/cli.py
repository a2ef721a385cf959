"""Command-line interface.

Exit codes: 0 success (or physical input), 1 internal error, 2 unphysical
input, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import commands
from .errors import MatrixFormatError
from .state import read_matrix

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_UNPHYSICAL = 2
EXIT_MALFORMED = 3


def render_text(doc, indent: int = 0) -> str:
    """Key/value text with nested sections indented two spaces per level."""
    lines = []
    pad = "  " * indent
    for key, value in doc.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")
    return "\n".join(line for line in lines if line)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write(render_text(doc) + "\n")


def _cmd_analyze(args) -> int:
    try:
        m = read_matrix(args.path)
    except MatrixFormatError as exc:
        sys.stderr.write(f"{args.path}: malformed matrix: {exc}\n")
        return EXIT_MALFORMED
    except OSError as exc:
        sys.stderr.write(f"{args.path}: {exc.strerror or exc}\n")
        return EXIT_MALFORMED
    report = commands.analyze(m, args.tol)
    _emit(report, args.json)
    return EXIT_OK if commands.is_physical(report) else EXIT_UNPHYSICAL


def _cmd_verify(args) -> int:
    _emit(commands.verify(args.dim, args.n, args.seed, args.tol), args.json)
    return EXIT_OK


def _cmd_figure(args) -> int:
    if args.which == "qutrit_triangle":
        doc = commands.figure_qutrit_triangle(args.out, step=args.grid_step, tol=args.tol)
    else:
        step = 0.01 if args.grid_step is None else args.grid_step
        doc = commands.figure_qudit_regions(args.out, step=step, tol=args.tol)
    _emit(doc, args.json)
    return EXIT_OK


def _cmd_sample(args) -> int:
    _emit(commands.sample(args.dim, args.n, args.seed, args.out, rank=args.rank, tol=args.tol), args.json)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors must not collide with the "unphysical input" code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INTERNAL, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="qorbit", description="Unitary orbit-space tools for density matrices."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol):
        p.add_argument("--tol", type=float, default=tol, help=f"tolerance (default {tol:g})")
        p.add_argument("--json", action="store_true", help="emit JSON instead of key/value text")

    p = sub.add_parser("analyze", help="report invariants, Grad verdict and strata of a matrix file")
    p.add_argument("path")
    common(p, 1e-9)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("verify", help="Monte Carlo check that Grad is never indefinite on states")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    common(p, 1e-8)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("figure", help="write CSV data for the qutrit triangle or d=4 regions")
    p.add_argument("which", choices=["qutrit_triangle", "qudit_regions"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--grid-step", type=float, default=None)
    common(p, 1e-9)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("sample", help="write invariant coordinates of random states to CSV")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--rank", type=int, default=None, help="fixed rank (default: cycle 1..d)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV file")
    common(p, 1e-9)
    p.set_defaults(func=_cmd_sample)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"qorbit {args.command}: {exc}\n")
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        sys.stderr.write(f"qorbit {args.command}: internal error: {exc!r}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
