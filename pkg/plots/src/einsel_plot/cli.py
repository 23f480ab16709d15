"""einsel-plot: render a figure from an einsel CSV artifact.

Exit codes: 0 success, 2 schema mismatch or bad arguments, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURE_KINDS, FigureSpec, SchemaMismatch, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="einsel-plot",
        description="Figures from einsel result tables (read-only; no physics "
        "is recomputed)",
    )
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--in", dest="input_csv", required=True, metavar="CSV")
    parser.add_argument("--out", dest="output_image", required=True, metavar="IMAGE")
    parser.add_argument("--log-x", action="store_true")
    parser.add_argument("--log-y", action="store_true")
    args = parser.parse_args(argv)

    try:
        spec = FigureSpec(
            kind=args.kind,
            input_csv=args.input_csv,
            output_image=args.output_image,
            log_x=args.log_x,
            log_y=args.log_y,
        )
        path = render(spec)
    except SchemaMismatch as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
