"""Figure builders against synthetic CSVs with known content."""

import numpy as np
import pytest

from pdflow_plots import (
    FigureSpec,
    SchemaError,
    build_decay_figure,
    build_trajectory_figure,
    member_label,
    plot_decay,
    plot_trajectory,
    predicted_slope,
)


def write_csv(path, columns):
    names = list(columns)
    rows = np.column_stack([np.asarray(columns[c], dtype=float) for c in names])
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return str(path)


def data_lines(ax):
    return [ln for ln in ax.lines if not ln.get_label().startswith("_")]


# ---------------------------------------------------------------- labels

@pytest.mark.parametrize("name,label", [
    ("example51_sigma0.4.csv", "sigma = 0.4"),
    ("example51_sigma0.csv", "sigma = 0"),
    ("example52_s0.3.csv", "s = 0.3"),
    ("example52_hessian_gamma1.csv", "gamma = 1"),
    ("single_run.csv", "single_run"),
])
def test_member_label(name, label):
    assert member_label(f"some/dir/{name}") == label


# ----------------------------------------------------------------- decay

def test_decay_power_law_is_straight_line(tmp_path):
    t = np.geomspace(1.0, 100.0, 60)
    path = write_csv(tmp_path / "pow.csv", {"t": t, "obj_residual": t ** -2})
    fig = build_decay_figure(FigureSpec(csv_paths=(path,)))
    ax = fig.axes[0]
    assert ax.get_xscale() == "log" and ax.get_yscale() == "log"
    (line,) = data_lines(ax)
    xs, ys = line.get_xdata(), line.get_ydata()
    slope = np.polyfit(np.log(xs), np.log(ys), 1)[0]
    assert abs(slope - (-2.0)) < 1e-12


def test_decay_curves_sorted_by_sweep_value(tmp_path):
    t = np.geomspace(1.0, 10.0, 20)
    paths = [
        write_csv(tmp_path / f"run_sigma{v}.csv",
                  {"t": t, "obj_residual": (1 + float(v)) * t ** -1})
        for v in ("0.7", "0", "0.1")  # deliberately scrambled
    ]
    fig = build_decay_figure(FigureSpec(csv_paths=tuple(paths)))
    labels = [ln.get_label() for ln in data_lines(fig.axes[0])]
    assert labels == ["sigma = 0", "sigma = 0.1", "sigma = 0.7"]


def test_decay_missing_column_names_column_and_file(tmp_path):
    t = np.geomspace(1.0, 10.0, 10)
    path = write_csv(tmp_path / "nom.csv", {"t": t, "feasibility": t ** -1})
    with pytest.raises(SchemaError) as exc:
        build_decay_figure(FigureSpec(csv_paths=(path,)))
    msg = str(exc.value)
    assert "column 'obj_residual' missing from" in msg
    assert "nom.csv" in msg and "feasibility" in msg


def test_decay_empty_input_list_writes_nothing(tmp_path):
    out = tmp_path / "decay.png"
    with pytest.raises(SchemaError, match="no input files matched"):
        plot_decay(FigureSpec(csv_paths=(), out_path=str(out)))
    assert not out.exists()


def test_decay_drops_nonpositive_values(tmp_path):
    t = np.geomspace(1.0, 100.0, 30)
    y = t ** -1.0
    y[::3] = 0.0  # exact zeros cannot appear on a log axis
    path = write_csv(tmp_path / "zeros.csv", {"t": t, "obj_residual": y})
    fig = build_decay_figure(FigureSpec(csv_paths=(path,)))
    (line,) = data_lines(fig.axes[0])
    assert len(line.get_ydata()) == int((y > 0).sum())
    assert np.all(line.get_ydata() > 0)


def test_decay_rejects_all_nonpositive_metric(tmp_path):
    t = np.geomspace(1.0, 10.0, 10)
    path = write_csv(tmp_path / "flat.csv",
                     {"t": t, "obj_residual": np.zeros_like(t)})
    with pytest.raises(SchemaError, match="fewer than 2 positive values"):
        build_decay_figure(FigureSpec(csv_paths=(path,)))


def test_decay_guide_line_from_summary(tmp_path):
    t = np.geomspace(1.0, 100.0, 40)
    path = write_csv(tmp_path / "run_s0.1.csv", {"t": t, "obj_residual": t ** -2})
    (tmp_path / "run_s0.1.summary.txt").write_text(
        "run run_s0.1\n"
        "rate obj_residual window 1 100 fitted -2.0 predicted -0.5 "
        "r2 0.99 verdict faster_than_bound\n"
        "rate dist_minnorm window 1 100 fitted -1.0 predicted none "
        "r2 0.9 verdict none\n")
    fig = build_decay_figure(FigureSpec(csv_paths=(path,)))
    ax = fig.axes[0]
    guides = [ln for ln in ax.lines if ln.get_label().startswith("_")]
    assert len(data_lines(ax)) == 1 and len(guides) == 1
    gx, gy = guides[0].get_xdata(), guides[0].get_ydata()
    slope = np.polyfit(np.log(gx), np.log(gy), 1)[0]
    assert abs(slope - (-0.5)) < 1e-12
    # anchored at the curve's final point
    assert np.isclose(gx[-1], t[-1]) and np.isclose(gy[-1], t[-1] ** -2)


def test_predicted_slope_none_cases(tmp_path):
    summary = tmp_path / "a.summary.txt"
    assert predicted_slope(str(summary), "obj_residual") is None  # no file
    summary.write_text(
        "rate obj_residual window 1 10 fitted -1 predicted none r2 0.5 verdict none\n")
    assert predicted_slope(str(summary), "obj_residual") is None
    assert predicted_slope(str(summary), "feasibility") is None  # no line
    summary.write_text(
        "rate obj_residual window 1 10 fitted -1 predicted -0.24 r2 0.5 verdict within_bound\n")
    assert predicted_slope(str(summary), "obj_residual") == -0.24


def test_decay_metric_selectable(tmp_path):
    t = np.geomspace(1.0, 10.0, 15)
    path = write_csv(tmp_path / "m.csv",
                     {"t": t, "obj_residual": t ** -1, "energy": t ** -3})
    fig = build_decay_figure(FigureSpec(csv_paths=(path,), metric="energy"))
    (line,) = data_lines(fig.axes[0])
    slope = np.polyfit(np.log(line.get_xdata()), np.log(line.get_ydata()), 1)[0]
    assert abs(slope - (-3.0)) < 1e-12
    assert fig.axes[0].get_ylabel() == "energy"


# ------------------------------------------------------------ trajectory

def traj_columns(t, k, wiggle):
    cols = {"t": t, "obj_residual": t ** -1}
    for i in range(k):
        cols[f"x{i}"] = np.cos((i + 1) * wiggle * np.log(t))
    return cols


def test_trajectory_two_panels_side_by_side(tmp_path):
    t = np.geomspace(1.0, 100.0, 50)
    p0 = write_csv(tmp_path / "run_gamma0.csv", traj_columns(t, 3, 5.0))
    p1 = write_csv(tmp_path / "run_gamma1.csv", traj_columns(t, 3, 0.5))
    fig = build_trajectory_figure(FigureSpec(csv_paths=(p0, p1)))
    axes = fig.axes
    assert len(axes) == 2
    assert [ax.get_title() for ax in axes] == ["gamma = 0", "gamma = 1"]
    for ax in axes:
        assert len(ax.lines) == 3  # one line per state component
        assert ax.get_xscale() == "log"
    # shared value axis so smoothness is comparable across panels
    assert axes[0].get_ylim() == axes[1].get_ylim()


def test_trajectory_single_csv_single_panel(tmp_path):
    t = np.geomspace(1.0, 10.0, 20)
    path = write_csv(tmp_path / "solo_gamma1.csv", traj_columns(t, 2, 1.0))
    fig = build_trajectory_figure(FigureSpec(csv_paths=(path,)))
    assert len(fig.axes) == 1
    assert len(fig.axes[0].lines) == 2


def test_trajectory_mismatched_components(tmp_path):
    t = np.geomspace(1.0, 10.0, 20)
    p0 = write_csv(tmp_path / "a_gamma0.csv", traj_columns(t, 2, 1.0))
    p1 = write_csv(tmp_path / "a_gamma1.csv", traj_columns(t, 3, 1.0))
    with pytest.raises(SchemaError, match="state columns differ across inputs"):
        build_trajectory_figure(FigureSpec(csv_paths=(p0, p1)))


def test_trajectory_requires_state_columns(tmp_path):
    t = np.geomspace(1.0, 10.0, 20)
    path = write_csv(tmp_path / "plain.csv", {"t": t, "obj_residual": t ** -1})
    with pytest.raises(SchemaError) as exc:
        build_trajectory_figure(FigureSpec(csv_paths=(path,)))
    assert "column 'x0' missing from" in str(exc.value)
    assert "--dump-state" in str(exc.value)


# ---------------------------------------------------- determinism, purity

def test_rendering_is_deterministic_and_pure(tmp_path):
    t = np.geomspace(1.0, 100.0, 40)
    path = write_csv(tmp_path / "run_gamma0.csv", traj_columns(t, 2, 2.0))
    before = open(path, "rb").read()

    pairs = []
    for tag in ("one", "two"):
        d = plot_decay(FigureSpec(csv_paths=(path,),
                                  out_path=str(tmp_path / f"d_{tag}.png")))
        s = plot_trajectory(FigureSpec(csv_paths=(path,),
                                       out_path=str(tmp_path / f"s_{tag}.png")))
        pairs.append((open(d, "rb").read(), open(s, "rb").read()))

    assert pairs[0][0] == pairs[1][0]
    assert pairs[0][1] == pairs[1][1]
    assert pairs[0][0][:8] == b"\x89PNG\r\n\x1a\n"
    assert open(path, "rb").read() == before  # inputs never mutated
