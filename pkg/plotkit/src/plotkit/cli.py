"""``plotkit render --spec figure.yaml --out figure.png [--allow-partial]``"""

from __future__ import annotations

import argparse
import sys

import matplotlib.pyplot as plt

from . import __version__
from .figures import load_figure_spec, render
from .records import SchemaError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotkit", description="render figures from simulation record files"
    )
    parser.add_argument("--version", action="version", version=f"plotkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure spec to an image file")
    p.add_argument("--spec", required=True, help="figure spec YAML")
    p.add_argument("--out", required=True, help="output image path (png)")
    p.add_argument(
        "--allow-partial",
        action="store_true",
        help="render even if the record grid has missing cells",
    )
    args = parser.parse_args(argv)
    try:
        spec = load_figure_spec(args.spec)
        fig = render(spec, args.out, allow_partial=args.allow_partial)
        plt.close(fig)
    except (SchemaError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
