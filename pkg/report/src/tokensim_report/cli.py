"""Command-line entry point: ``report <OUT_DIR> [--figures ...] [--format ...]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .data import EmptyEnsemble, MissingColumn
from .figures import FIGURE_IDS, default_specs, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="report",
        description="Render diagnostic figures from a tokensim output directory.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("out_dir", help="directory holding trajectories.csv")
    parser.add_argument("--figures", default=",".join(FIGURE_IDS),
                        help="comma-separated figure ids "
                             f"(default: all of {', '.join(FIGURE_IDS)})")
    parser.add_argument("--format", choices=("png", "svg"), default="png")
    parser.add_argument("--out",
                        help="directory for images (default: OUT_DIR/figures)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    target = Path(args.out) if args.out else Path(args.out_dir) / "figures"
    figure_ids = [f.strip() for f in args.figures.split(",") if f.strip()]
    try:
        specs = default_specs(target, figure_ids, args.format)
        written = render(args.out_dir, specs)
    except (MissingColumn, EmptyEnsemble, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "IoError", "message": str(exc)}),
              file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
