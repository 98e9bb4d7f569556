"""``mechfig render``: one figure per invocation from a sweep CSV."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureJob, GridError, SchemaError, render

SCHEMA_ERROR = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mechfig", description="Render simulator sweep CSVs as figures.")
    sub = parser.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("render", help="render one CSV to an image")
    sp.add_argument("--kind", required=True, choices=sorted(KINDS))
    sp.add_argument("--in", required=True, dest="input_csv")
    sp.add_argument("--out", required=True, dest="output_image")
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else SCHEMA_ERROR
    try:
        job = FigureJob(input_csv=ns.input_csv, kind=ns.kind,
                        output_image=ns.output_image)
        info = render(job)
    except (SchemaError, GridError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SCHEMA_ERROR
    print(f"{info['kind']} written to {info['output']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
