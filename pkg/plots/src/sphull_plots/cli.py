"""``sphull-plot``: render figures from the primary CLI's CSV/JSON output.

Usage: sphull-plot <hist|curve|deficiency> --in data.csv --out figure.png
"""
from __future__ import annotations

import argparse
import sys

from . import render
from .reader import SchemaError, read_rows

RENDERERS = {
    "hist": render.render_hist,
    "curve": render.render_curve,
    "deficiency": render.render_deficiency,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphull-plot",
        description="Render sphull figure data (PNG + SVG).")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in RENDERERS:
        p = sub.add_parser(kind)
        p.add_argument("--in", dest="input", required=True,
                       help="CSV or JSON file written by `sphull %s`" % kind)
        p.add_argument("--out", required=True,
                       help="output image path (PNG; SVG written alongside)")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        rows = read_rows(args.input, args.kind)
        result = RENDERERS[args.kind](rows, args.out)
    except (SchemaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in result["outputs"]:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
