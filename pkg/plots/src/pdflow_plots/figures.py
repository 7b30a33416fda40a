"""Build decay and trajectory figures from runner CSV files.

Inputs are the CSV files written by ``pdflow run`` / ``pdflow preset``:
a header row naming the columns, one row per sample.  The decay figure
needs the time column plus one metric column per input; the trajectory
figure needs the per-component state columns ``x0, x1, ...`` that the
runner appends under ``--dump-state``.  When a ``NAME.summary.txt`` file
sits next to ``NAME.csv``, its fitted-rate lines supply the predicted
slope used for the dashed guide line.

Any referenced column that is absent from an input raises
``SchemaError`` with the message

    column '<name>' missing from <file> (have: <columns>)

and no image file is written.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (needs backend set first)
import numpy as np  # noqa: E402


class SchemaError(ValueError):
    """An input CSV does not carry the columns (or rows) a figure needs."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw and where to write it.

    ``csv_paths`` lists the input files (one curve or panel each);
    ``metric`` is the column plotted by the decay figure; ``logx`` /
    ``logy`` choose the axis scales (log-log by default, lin-log if
    ``logy`` is off); ``labels`` overrides the legend labels otherwise
    derived from the sweep-member file names.
    """

    csv_paths: tuple[str, ...]
    metric: str = "obj_residual"
    x_column: str = "t"
    logx: bool = True
    logy: bool = True
    labels: tuple[str, ...] | None = field(default=None)
    out_path: str = "figure.png"
    dpi: int = 150

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != len(self.csv_paths):
            raise SchemaError(
                f"got {len(self.labels)} labels for {len(self.csv_paths)} inputs"
            )


_MEMBER_RE = re.compile(r"^(?P<prefix>.+)_(?P<param>sigma|gamma|s)(?P<value>[0-9.eE+-]+)$")


def member_label(path: str) -> str:
    """Legend label derived from a sweep-member file name.

    ``.../example51_sigma0.4.csv`` becomes ``"sigma = 0.4"``; file names
    that do not end in a recognized sweep suffix fall back to the bare
    stem.
    """
    stem = os.path.splitext(os.path.basename(path))[0]
    m = _MEMBER_RE.match(stem)
    if m is None:
        return stem
    return f"{m.group('param')} = {m.group('value')}"


def _sweep_sort_key(path: str):
    stem = os.path.splitext(os.path.basename(path))[0]
    m = _MEMBER_RE.match(stem)
    if m is None:
        return (1, stem, 0.0)
    try:
        value = float(m.group("value"))
    except ValueError:
        return (1, stem, 0.0)
    return (0, m.group("param"), value)


def _load_table(path: str) -> np.ndarray:
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names is None:
        raise SchemaError(f"no header row in {path}")
    return np.atleast_1d(data)


def _require_columns(data: np.ndarray, columns: list[str], path: str) -> None:
    have = data.dtype.names
    for name in columns:
        if name not in have:
            raise SchemaError(
                f"column '{name}' missing from {path} (have: {', '.join(have)})"
            )


def _summary_path(csv_path: str) -> str:
    base, _ = os.path.splitext(csv_path)
    return base + ".summary.txt"


def predicted_slope(summary_path: str, metric: str) -> float | None:
    """Predicted decay exponent for ``metric`` from a runner summary file.

    Reads the ``rate <metric> ... predicted <value> ...`` line; returns
    None when the file is absent, the metric has no rate line, or the
    prediction is ``none``.
    """
    try:
        with open(summary_path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError:
        return None
    for line in lines:
        tokens = line.split()
        if len(tokens) >= 2 and tokens[0] == "rate" and tokens[1] == metric:
            try:
                value = tokens[tokens.index("predicted") + 1]
            except (ValueError, IndexError):
                return None
            if value == "none":
                return None
            return float(value)
    return None


def _common_title(paths: list[str]) -> str:
    stems = [os.path.splitext(os.path.basename(p))[0] for p in paths]
    prefix = os.path.commonprefix(stems).rstrip("_")
    return prefix


def build_decay_figure(spec: FigureSpec):
    """One metric curve per input CSV on shared axes, plus guide lines.

    Returns the matplotlib Figure.  Each curve keeps only the samples
    where both the time and the metric are strictly positive (log axes
    cannot show the rest); an input with fewer than two such samples is
    a schema error.  When a sibling summary file carries a predicted
    exponent, a dashed guide with that slope is anchored at the curve's
    final point.
    """
    if not spec.csv_paths:
        raise SchemaError("no input files matched")

    order = sorted(range(len(spec.csv_paths)),
                   key=lambda i: _sweep_sort_key(spec.csv_paths[i]))
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    try:
        for i in order:
            path = spec.csv_paths[i]
            data = _load_table(path)
            _require_columns(data, [spec.x_column, spec.metric], path)
            t = data[spec.x_column]
            y = data[spec.metric]
            keep = (t > 0) & (y > 0) & np.isfinite(y)
            if keep.sum() < 2:
                raise SchemaError(
                    f"fewer than 2 positive values in column '{spec.metric}' of {path}"
                )
            label = spec.labels[i] if spec.labels is not None else member_label(path)
            (line,) = ax.plot(t[keep], y[keep], label=label, linewidth=1.2)

            slope = predicted_slope(_summary_path(path), spec.metric)
            if slope is not None:
                t_end, y_end = t[keep][-1], y[keep][-1]
                t_lo = max(t_end / 10.0, float(t[keep][0]))
                tg = np.geomspace(t_lo, t_end, 32)
                ax.plot(tg, y_end * (tg / t_end) ** slope, linestyle="--",
                        linewidth=1.0, alpha=0.7, color=line.get_color(),
                        label="_nolegend_")

        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(spec.x_column)
        ax.set_ylabel(spec.metric)
        title = _common_title(list(spec.csv_paths))
        if title:
            ax.set_title(f"{title}: {spec.metric}")
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
    except Exception:
        plt.close(fig)
        raise
    return fig


_STATE_RE = re.compile(r"^x(\d+)$")


def _state_columns(data: np.ndarray, path: str) -> list[str]:
    cols = sorted((c for c in data.dtype.names if _STATE_RE.match(c)),
                  key=lambda c: int(c[1:]))
    if not cols:
        raise SchemaError(
            f"column 'x0' missing from {path} "
            f"(have: {', '.join(data.dtype.names)}); "
            "generate the CSV with --dump-state"
        )
    return cols


def build_trajectory_figure(spec: FigureSpec):
    """Per-component state panels, one panel per input CSV, side by side.

    Returns the matplotlib Figure.  Every input must carry the same set
    of ``x<i>`` columns; a mismatch is a schema error.  Components are
    drawn against time (log time axis by default, linear values) so the
    smoothness of the trajectories can be compared across panels.
    """
    if not spec.csv_paths:
        raise SchemaError("no input files matched")

    order = sorted(range(len(spec.csv_paths)),
                   key=lambda i: _sweep_sort_key(spec.csv_paths[i]))
    paths = [spec.csv_paths[i] for i in order]
    labels = ([spec.labels[i] for i in order]
              if spec.labels is not None else [member_label(p) for p in paths])

    tables, columns = [], None
    first_path = None
    for path in paths:
        data = _load_table(path)
        _require_columns(data, [spec.x_column], path)
        cols = _state_columns(data, path)
        if columns is None:
            columns, first_path = cols, path
        elif cols != columns:
            raise SchemaError(
                f"state columns differ across inputs: {first_path} has "
                f"{len(columns)} ({', '.join(columns)}), {path} has "
                f"{len(cols)} ({', '.join(cols)})"
            )
        tables.append(data)

    n = len(paths)
    fig, axes = plt.subplots(1, n, figsize=(4.8 * n, 4.0),
                             sharex=True, sharey=True, squeeze=False)
    try:
        for ax, path, label, data in zip(axes[0], paths, labels, tables):
            t = data[spec.x_column]
            for col in columns:
                ax.plot(t, data[col], label=col, linewidth=1.0)
            if spec.logx:
                ax.set_xscale("log")
            ax.set_xlabel(spec.x_column)
            ax.set_title(label)
            ax.grid(True, which="both", alpha=0.3)
        axes[0, 0].set_ylabel("state components")
        axes[0, 0].legend()
        title = _common_title(paths)
        if title:
            fig.suptitle(title)
        fig.tight_layout()
    except Exception:
        plt.close(fig)
        raise
    return fig


def _save(fig, out_path: str, dpi: int) -> str:
    out_dir = os.path.dirname(out_path)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    try:
        fig.savefig(out_path, dpi=dpi)
    finally:
        plt.close(fig)
    return out_path


def plot_decay(spec: FigureSpec) -> str:
    """Render the decay figure and return the written image path."""
    return _save(build_decay_figure(spec), spec.out_path, spec.dpi)


def plot_trajectory(spec: FigureSpec) -> str:
    """Render the trajectory figure and return the written image path."""
    return _save(build_trajectory_figure(spec), spec.out_path, spec.dpi)
