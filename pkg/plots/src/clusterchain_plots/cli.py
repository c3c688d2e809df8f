"""``render`` entry point: figures from clusterchain sweep outputs."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, SchemaError, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render figures from clusterchain CSV/JSON outputs.",
    )
    parser.add_argument("--figure", required=True, choices=sorted(FIGURES),
                        help="figure identifier")
    parser.add_argument("--inputs", required=True,
                        help="comma-separated CSV paths (figB also takes the "
                             "fit summary JSON)")
    parser.add_argument("--out", required=True, help="output image path (SVG/PNG)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    inputs = [p.strip() for p in args.inputs.split(",") if p.strip()]
    if not inputs:
        print("usage error: --inputs is empty", file=sys.stderr)
        return 2
    try:
        render(args.figure, inputs, args.out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
