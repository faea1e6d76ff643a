"""Command-line chart renderer for submigrate experiment CSVs.

    submigrate-plot --in results.csv --kind improvement-scatter --out fig1.svg
"""
from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="submigrate-plot")
    parser.add_argument("--in", dest="input", required=True,
                        help="harness results.csv")
    parser.add_argument("--out", required=True,
                        help="output image path (.svg or .png); per-model "
                             "facets get a _<model> suffix")
    parser.add_argument("--kind", choices=KINDS, default="improvement-scatter")
    parser.add_argument("--no-facet", action="store_true",
                        help="draw all models on one chart")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(input_csv=args.input, out_path=args.out, kind=args.kind,
                    facet_by_model=not args.no_facet)
    try:
        summary = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in summary.files:
        print(f"wrote {path} ({summary.points[path]} points)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
