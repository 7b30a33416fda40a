"""Command-line entry: render figures from runner CSV globs.

    pdflow-plots --figures decay "runs/example51/*.csv"
    pdflow-plots --figures trajectory --out-dir figs "runs/hessian/*.csv"
    pdflow-plots --figures decay trajectory "runs/hessian/*.csv"

Each requested figure is written to ``<out-dir>/<figure>.<format>``.
A missing required column (or an empty glob) prints ``schema error: ...``
on stderr and exits with status 1; no image is written for that figure.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys

from .figures import FigureSpec, SchemaError, plot_decay, plot_trajectory


def _expand(patterns: list[str]) -> tuple[str, ...]:
    paths: list[str] = []
    for pattern in patterns:
        matched = sorted(glob.glob(pattern))
        if matched:
            paths.extend(matched)
        elif os.path.exists(pattern):
            paths.append(pattern)
    seen, unique = set(), []
    for p in paths:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return tuple(unique)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pdflow-plots",
        description="Render decay/trajectory figures from pdflow CSV files.",
    )
    parser.add_argument("--figures", nargs="+", choices=("decay", "trajectory"),
                        required=True, help="which figures to render")
    parser.add_argument("globs", nargs="+", metavar="GLOB",
                        help="CSV files or glob patterns")
    parser.add_argument("--metric", default="obj_residual",
                        help="metric column for the decay figure "
                             "(default: obj_residual)")
    parser.add_argument("--out-dir", default=".", help="output directory")
    parser.add_argument("--format", default="png", choices=("png", "svg", "pdf"),
                        help="image format (default: png)")
    parser.add_argument("--lin-y", action="store_true",
                        help="linear metric axis for the decay figure "
                             "(default: log-log)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    csvs = _expand(args.globs)

    renderers = {"decay": plot_decay, "trajectory": plot_trajectory}
    try:
        for figure in dict.fromkeys(args.figures):
            spec = FigureSpec(
                csv_paths=csvs,
                metric=args.metric,
                logy=(figure == "decay" and not args.lin_y),
                out_path=os.path.join(args.out_dir, f"{figure}.{args.format}"),
            )
            written = renderers[figure](spec)
            print(f"wrote {written}")
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
