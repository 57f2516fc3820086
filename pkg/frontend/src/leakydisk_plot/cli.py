"""leaky-disk-plot: render spectrum/curves CSVs to PNG + SVG."""

from __future__ import annotations

import argparse
import json
import sys

from .render import PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leaky-disk-plot")
    ap.add_argument("spectrum", nargs="?", help="spectrum CSV path")
    ap.add_argument("curves", nargs="?", help="curves CSV path (optional)")
    ap.add_argument("--spec", type=str, default=None,
                    help="JSON file with PlotSpec fields (overrides positionals)")
    ap.add_argument("--axes", choices=["linear", "loglog"], default="linear")
    ap.add_argument("--out", type=str, default="plot")
    ap.add_argument("--title", type=str, default="")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.spec:
        with open(args.spec) as fh:
            spec = PlotSpec(**json.load(fh))
    else:
        if not args.spectrum:
            print("need a spectrum CSV or --spec FILE", file=sys.stderr)
            return 2
        spec = PlotSpec(spectrum_csv=args.spectrum, curves_csv=args.curves,
                        axes=args.axes, out_base=args.out, title=args.title)
    try:
        paths = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
