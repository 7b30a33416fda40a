"""Experiment driver: config grammar, presets, run outputs, exit codes.

CSV fidelity is checked by reparsing written fields back to bit-identical
floats; reproducibility by byte-comparing files across reruns and across
reordered sweeps.
"""

from __future__ import annotations

import dataclasses
import subprocess
import sys

import numpy as np
import pytest

from pdflow import (
    ConfigError,
    IntegratorConfig,
    MassFunction,
    ParameterSet,
    RegularizationSpec,
    energy_coefficients,
    theta,
)
from pdflow import cli

TOY_CONFIG = """\
[problem]
kind = toy
coeffs = 1 2 1

[params]
alpha = 3
q = 0.1
s = 0.1
p = 0.1
c = 5
gamma = 1
t0 = 1

[mass]
kappa = 1
sigma = 0.15

[initial]
x = 1 1 -1
v = -1 -1 1
lam = 1

[integrator]
samples = 50

[run]
name = smoke
horizon = 3
sweep = none
out = {out}
dump_state = {dump}
"""


def write_config(tmp_path, text):
    path = tmp_path / "experiment.config"
    path.write_text(text)
    return str(path)


def toy_cfg(tmp_path, dump="false", **extra):
    return write_config(tmp_path, TOY_CONFIG.format(out=tmp_path / "out",
                                                    dump=dump, **extra))


# ---------------------------------------------------------------------------
# config grammar
# ---------------------------------------------------------------------------


def test_config_text_round_trips_presets():
    for name in cli.PRESET_NAMES:
        cfg = cli.preset(name)
        text = cli.config_to_text(cfg)
        assert cli.parse_config(text) == cfg
        # serialization is a fixed point
        assert cli.config_to_text(cli.parse_config(text)) == text


def test_config_round_trips_custom_experiment(tmp_path):
    cfg = cli.parse_config(TOY_CONFIG.format(out="runs/smoke", dump="true"))
    assert cfg.problem_kind == "toy" and cfg.coeffs == (1.0, 2.0, 1.0)
    assert cfg.params == ParameterSet(
        alpha=3.0, q=0.1, s=0.1, gamma=1.0,
        reg=RegularizationSpec(c=5.0, p=0.1), t0=1.0,
    )
    assert cfg.mass == MassFunction.power_law(1.0, 0.15)
    assert cfg.integrator == IntegratorConfig(samples=50)
    assert cfg.x0 == (1.0, 1.0, -1.0) and cfg.lam0 == (1.0,)
    assert cfg.horizon == 3.0 and cfg.dump_state is True
    assert cli.parse_config(cli.config_to_text(cfg)) == cfg


@pytest.mark.parametrize(
    "mangle",
    [
        lambda t: "not an ini [",
        lambda t: t.replace("[params]", "[parameters]"),
        lambda t: t.replace("kind = toy", "kind = banana"),
        lambda t: t.replace("coeffs = 1 2 1", ""),
        lambda t: t.replace("sweep = none", "sweep = banana"),
        lambda t: t.replace("sweep = none", "sweep = none\nvalues = 1 2"),
        lambda t: t.replace("horizon = 3", "horizon = 0.5"),
        lambda t: t.replace("alpha = 3", "alpha = oops"),
        lambda t: t.replace("x = 1 1 -1", "x = maybe"),
    ],
)
def test_malformed_configs_are_rejected(mangle):
    base = TOY_CONFIG.format(out="runs", dump="false")
    with pytest.raises(ConfigError):
        cfg = cli.parse_config(mangle(base))
        cli.run(cfg, quiet=True)  # initial-vector errors surface at run time


def test_qp_config_requires_generator_fields():
    text = TOY_CONFIG.format(out="runs", dump="false").replace(
        "kind = toy\ncoeffs = 1 2 1", "kind = qp\nseed = 3\nrows = 2"
    )
    with pytest.raises(ConfigError):
        cli.parse_config(text)


def test_unknown_preset_is_rejected():
    with pytest.raises(ConfigError):
        cli.preset("example53")


def test_preset_parameter_values():
    c51 = cli.preset("example51")
    assert c51.problem_kind == "qp"
    assert (c51.seed, c51.rows, c51.cols) == (42, 5, 10)
    assert c51.params == ParameterSet(
        alpha=1.1, q=0.06, s=0.7, gamma=2.0,
        reg=RegularizationSpec(c=0.01, p=0.9), t0=1.0,
    )
    assert c51.mass == MassFunction.power_law(1.0, 0.7)
    assert c51.sweep == "sigma"
    assert c51.sweep_values == (0.0, 0.1, 0.4, 0.7)
    assert c51.horizon == 1e3
    assert (c51.x0, c51.v0, c51.lam0) == ("ones", "ones", "ones")

    c52 = cli.preset("example52")
    assert c52.problem_kind == "toy" and c52.coeffs == (1.0, 2.0, 1.0)
    assert c52.params == ParameterSet(
        alpha=3.0, q=0.1, s=0.1, gamma=1.0,
        reg=RegularizationSpec(c=5.0, p=0.1), t0=1.0,
    )
    assert c52.mass == MassFunction.power_law(1.0, 0.15)
    assert c52.sweep == "s" and c52.sweep_values == (0.1, 0.3, 0.5, 0.7)
    assert c52.x0 == (1.0, 1.0, -1.0)
    assert c52.v0 == (-1.0, -1.0, 1.0)
    assert c52.lam0 == (1.0,)

    ch = cli.preset("example52_hessian")
    assert ch.coeffs == (10.0, 20.0, 10.0)
    assert ch.params == c52.params
    assert ch.sweep == "gamma" and ch.sweep_values == (0.0, 1.0)
    assert ch.dump_state is True


# ---------------------------------------------------------------------------
# run outputs
# ---------------------------------------------------------------------------


def test_run_writes_csv_with_exact_schema(tmp_path):
    cfg = cli.parse_config(open(toy_cfg(tmp_path, dump="true")).read())
    [summary] = cli.run(cfg, quiet=True)
    assert summary.status == "ok"
    lines = open(summary.csv_path).read().splitlines()
    assert lines[0] == cli.CSV_HEADER + ",x0,x1,x2,v0,v1,v2,lam0"
    assert len(lines) == 1 + 50

    first = lines[1].split(",")
    cols = cli.CSV_HEADER.split(",")
    row0 = dict(zip(cols, (float(v) for v in first)))
    assert row0["t"] == 1.0
    # 17-significant-digit fields reparse to bit-identical doubles
    a_t, b_t = energy_coefficients(cfg.params, cfg.mass, 1.0)
    assert row0["a_t"] == a_t and row0["b_t"] == b_t
    assert row0["theta"] == theta(cfg.params, cfg.mass, 1.0)
    assert row0["obj_residual"] == 4.0  # (1*1 + 2*1 + 1*(-1))^2
    assert row0["feasibility"] == 2.0
    assert float(first[11:14][0]) == 1.0 and float(first[14]) == -1.0
    assert float(first[17]) == 1.0  # lam0 column

    data = np.genfromtxt(summary.csv_path, delimiter=",", names=True)
    assert data.shape == (50,)
    assert data["t"][0] == 1.0 and data["t"][-1] == 3.0
    assert np.all(np.diff(data["t"]) > 0)
    assert np.all(data["step_size"] > 0)


def test_run_summary_file_contents(tmp_path):
    cfg = cli.parse_config(open(toy_cfg(tmp_path)).read())
    [summary] = cli.run(cfg, quiet=True)
    text = open(summary.summary_path).read()
    assert text.startswith("run smoke\nstatus ok\n")
    assert "regime Thm3.2(ii)\n" in text
    assert "predicted gap_exp -0.1 feas_exp -0.1 dist_exp -0.85\n" in text
    assert "terminal t 3 " in text
    assert "wall_clock_seconds" in text
    # the 3-decade window (0.03, 3) holds every sample, so rates fit
    assert "rate obj_residual window 0.03 3 fitted" in text


def test_run_records_skipped_rate_fits(tmp_path):
    text = TOY_CONFIG.format(out=tmp_path / "out", dump="false")
    text = text.replace("samples = 50", "samples = 9")
    text = text.replace("horizon = 3", "horizon = 200")
    [summary] = cli.run(cli.parse_config(text), quiet=True)
    assert summary.status == "ok"
    assert summary.rates == []
    assert len(summary.rate_skips) == 5  # every metric: 7 usable < 8
    body = open(summary.summary_path).read()
    assert body.count("rate_skipped") == 5
    assert "rate_skipped obj_residual: only " in body
    assert "need >= 8" in body


def test_output_dir_env_override(tmp_path, monkeypatch):
    override = tmp_path / "elsewhere"
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(override))
    cfg = cli.parse_config(open(toy_cfg(tmp_path)).read())
    [summary] = cli.run(cfg, quiet=True)
    assert summary.csv_path == str(override / "smoke.csv")
    assert (override / "smoke.csv").exists()
    assert not (tmp_path / "out").exists()


def test_reruns_are_byte_identical(tmp_path):
    cfg = cli.parse_config(open(toy_cfg(tmp_path)).read())
    a = dataclasses.replace(cfg, out_dir=str(tmp_path / "a"))
    b = dataclasses.replace(cfg, out_dir=str(tmp_path / "b"))
    [sa] = cli.run(a, quiet=True)
    [sb] = cli.run(b, quiet=True)
    assert open(sa.csv_path, "rb").read() == open(sb.csv_path, "rb").read()


def test_sweep_members_are_order_independent(tmp_path):
    base = TOY_CONFIG.format(out=tmp_path / "fwd", dump="false")
    base = base.replace("sweep = none", "sweep = s\nvalues = 0.1 0.3")
    fwd = cli.run(cli.parse_config(base), quiet=True)
    rev_text = base.replace("values = 0.1 0.3", "values = 0.3 0.1").replace(
        str(tmp_path / "fwd"), str(tmp_path / "rev")
    )
    rev = cli.run(cli.parse_config(rev_text), quiet=True)
    assert [s.name for s in fwd] == ["smoke_s0.1", "smoke_s0.3"]
    assert [s.name for s in rev] == ["smoke_s0.3", "smoke_s0.1"]
    by_name = {s.name: s for s in rev}
    for s in fwd:
        twin = by_name[s.name]
        assert open(s.csv_path, "rb").read() == open(twin.csv_path, "rb").read()


def test_divergent_member_is_reported_and_isolated(tmp_path):
    text = TOY_CONFIG.format(out=tmp_path / "out", dump="false")
    text += "\n[integrator]\n"  # duplicate section is a config error
    with pytest.raises(ConfigError):
        cli.parse_config(text)

    bad = TOY_CONFIG.format(out=tmp_path / "out", dump="false").replace(
        "samples = 50", "samples = 50\nrel_tol = 1e-300\nabs_tol = 1e-300"
    )
    [summary] = cli.run(cli.parse_config(bad), quiet=True)
    assert summary.status == "diverged"
    assert summary.csv_path == ""
    assert "underflow" in summary.detail
    body = open(summary.summary_path).read()
    assert "status diverged\n" in body and "detail " in body


def test_truncated_member_keeps_partial_output(tmp_path):
    text = TOY_CONFIG.format(out=tmp_path / "out", dump="false").replace(
        "samples = 50", "samples = 50\nmax_steps = 10"
    )
    [summary] = cli.run(cli.parse_config(text), quiet=True)
    assert summary.status == "truncated"
    assert "exhausted" in summary.detail


# ---------------------------------------------------------------------------
# entry points and exit codes
# ---------------------------------------------------------------------------


def test_main_run_exit_codes(tmp_path, capsys):
    path = toy_cfg(tmp_path)
    assert cli.main(["run", path]) == 0
    assert "smoke: status ok" in capsys.readouterr().out

    bad = write_config(
        tmp_path,
        TOY_CONFIG.format(out=tmp_path / "bad", dump="false").replace(
            "samples = 50", "samples = 50\nrel_tol = 1e-300\nabs_tol = 1e-300"
        ),
    )
    assert cli.main(["run", bad]) == 1


def test_main_run_dump_state_flag(tmp_path):
    path = toy_cfg(tmp_path)
    assert cli.main(["run", path, "--dump-state"]) == 0
    header = open(tmp_path / "out" / "smoke.csv").readline().rstrip("\n")
    assert header.endswith(",x0,x1,x2,v0,v1,v2,lam0")


def test_main_preset_writes_config_and_members(tmp_path, capsys):
    out = tmp_path / "preset_out"
    code = cli.main(
        ["preset", "example52", "--out", str(out), "--horizon", "3"]
    )
    assert code == 0
    capsys.readouterr()
    saved = open(out / "example52.config").read()
    expect = dataclasses.replace(
        cli.preset("example52"), out_dir=str(out), horizon=3.0
    )
    assert cli.parse_config(saved) == expect
    for tag in ("s0.1", "s0.3", "s0.5", "s0.7"):
        assert (out / f"example52_{tag}.csv").exists()
        assert (out / f"example52_{tag}.summary.txt").exists()


def test_main_check_reports_without_writing(tmp_path, capsys):
    text = TOY_CONFIG.format(out=tmp_path / "never", dump="false").replace(
        "sweep = none", "sweep = s\nvalues = 0.1 0.3"
    )
    assert cli.main(["check", write_config(tmp_path, text)]) == 0
    out = capsys.readouterr().out
    assert "smoke_s0.1: regime Thm3.2(ii)" in out
    assert "smoke_s0.3: regime Thm3.1(iii)" in out
    assert "predicted gap_exp" in out
    assert not (tmp_path / "never").exists()


def test_module_entry_point_smoke(tmp_path):
    path = toy_cfg(tmp_path)
    proc = subprocess.run(
        [sys.executable, "-m", "pdflow", "check", path],
        capture_output=True, text=True, cwd=str(tmp_path),
    )
    assert proc.returncode == 0
    assert "regime Thm3.2(ii)" in proc.stdout
