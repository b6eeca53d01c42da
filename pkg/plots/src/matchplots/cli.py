"""Command line entry point: plots render --fig F3..F8 --in CSV --out IMG."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_IDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plots")
    sub = parser.add_subparsers(dest="command", required=True)
    cmd = sub.add_parser("render", help="render one figure from an experiment CSV")
    cmd.add_argument("--fig", required=True, choices=FIGURE_IDS)
    cmd.add_argument("--in", dest="input_csv", required=True, metavar="CSV")
    cmd.add_argument("--out", dest="output_path", required=True, metavar="IMG")
    cmd.add_argument("--title", help="override the default figure title")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(args.fig, args.input_csv, args.output_path, title=args.title)
    path = render(spec)
    print(path, file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
