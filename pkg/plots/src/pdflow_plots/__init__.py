"""Figures from pdflow experiment CSVs.

Pure post-processing: every figure is a function of the CSV files written
by the runner (plus its optional sibling summary files); nothing here
recomputes dynamics.
"""

from .figures import (
    FigureSpec,
    SchemaError,
    build_decay_figure,
    build_trajectory_figure,
    member_label,
    plot_decay,
    plot_trajectory,
    predicted_slope,
)

__all__ = [
    "FigureSpec",
    "SchemaError",
    "build_decay_figure",
    "build_trajectory_figure",
    "member_label",
    "plot_decay",
    "plot_trajectory",
    "predicted_slope",
]
