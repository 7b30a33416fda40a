"""Experiment runner: configs, presets, sweeps, CSV/summary output, CLI.

Config files are flat key = value sections (stdlib configparser grammar);
see the package README for the full documented grammar.  Output per sweep
member: one CSV (schema below) and one line-oriented summary file.

CSV header (fixed):

    t,obj_residual,feasibility,lagrangian_gap,dist_saddle_sq,dist_minnorm,energy,a_t,b_t,theta,step_size

with all floats printed to 17 significant digits; `--dump-state` appends
per-component state columns x0..x{n-1},v0..v{n-1},lam0..lam{m-1}.
The environment variable PDFLOW_OUT overrides the configured output
directory.  Exit status is nonzero iff any sweep member diverged.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import io
import os
import sys
import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import diagnostics
from .diagnostics import MetricRow, OscillationMeasure, RateEstimate
from .dynamics import (
    MassFunction,
    ParameterSet,
    RegimeReport,
    TrajectoryState,
    build_field,
    theta,
    validate_and_classify,
)
from .errors import (
    ConfigError,
    DivergenceError,
    EstimationError,
    TruncatedTrajectoryError,
)
from .integrator import IntegratorConfig, Trajectory, integrate, log_grid
from .lagrangian import RegularizationSpec, min_norm_solution, saddle_path
from .problem import Problem, QuadraticProblem, ToyProblem, make_random_qp

__all__ = ["ExperimentConfig", "RunSummary", "preset", "run", "parse_config",
           "config_to_text", "main", "CSV_HEADER", "OUTPUT_DIR_ENV"]

CSV_HEADER = (
    "t,obj_residual,feasibility,lagrangian_gap,dist_saddle_sq,"
    "dist_minnorm,energy,a_t,b_t,theta,step_size"
)
OUTPUT_DIR_ENV = "PDFLOW_OUT"
PRESET_NAMES = ("example51", "example52", "example52_hessian")
_SWEEP_AXES = ("none", "sigma", "s", "gamma")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    problem_kind: str  # "qp" | "toy" | "preset"
    params: ParameterSet
    mass: MassFunction
    integrator: IntegratorConfig
    horizon: float
    out_dir: str
    seed: int | None = None
    rows: int | None = None
    cols: int | None = None
    coeffs: tuple[float, float, float] | None = None
    preset_ref: str | None = None
    sweep: str = "none"
    sweep_values: tuple[float, ...] = ()
    dump_state: bool = False
    x0: tuple[float, ...] | str = "ones"
    v0: tuple[float, ...] | str = "zeros"
    lam0: tuple[float, ...] | str = "zeros"

    def __post_init__(self):
        if self.problem_kind not in ("qp", "toy", "preset"):
            raise ConfigError(f"unknown problem kind '{self.problem_kind}'")
        if self.problem_kind == "qp" and None in (self.seed, self.rows, self.cols):
            raise ConfigError("qp problems need seed, rows, cols")
        if self.problem_kind == "toy" and self.coeffs is None:
            raise ConfigError("toy problems need coeffs = a b c")
        if self.problem_kind == "preset":
            if self.preset_ref not in PRESET_NAMES:
                raise ConfigError(
                    f"unknown preset '{self.preset_ref}'; known: {', '.join(PRESET_NAMES)}"
                )
        if self.sweep not in _SWEEP_AXES:
            raise ConfigError(f"sweep must be one of {_SWEEP_AXES}, got '{self.sweep}'")
        if self.sweep != "none" and not self.sweep_values:
            raise ConfigError("sweep requires a values list")
        if self.sweep == "none" and self.sweep_values:
            raise ConfigError("values given but sweep = none")
        if not (self.horizon > self.params.t0):
            raise ConfigError(
                f"horizon must exceed t0, got T={self.horizon}, t0={self.params.t0}"
            )


@dataclass
class RunSummary:
    name: str
    member: str
    status: str  # ok | diverged | truncated
    regime_report: RegimeReport
    terminal: dict
    rates: list[RateEstimate]
    oscillation: OscillationMeasure | None
    warnings: list[str]
    wall_clock: float
    csv_path: str
    summary_path: str
    stats: dict
    detail: str = ""
    rate_skips: list[str] = dc_field(default_factory=list)


def build_problem(cfg: ExperimentConfig) -> Problem:
    if cfg.problem_kind == "qp":
        return make_random_qp(cfg.seed, cfg.rows, cfg.cols)
    if cfg.problem_kind == "toy":
        return ToyProblem(*cfg.coeffs)
    return build_problem(preset(cfg.preset_ref))


def _resolve_initial(spec, dim: int, name: str) -> np.ndarray:
    if isinstance(spec, str):
        if spec == "ones":
            return np.ones(dim)
        if spec == "zeros":
            return np.zeros(dim)
        raise ConfigError(f"{name} must be 'ones', 'zeros', or numbers, got '{spec}'")
    arr = np.asarray(spec, dtype=np.float64)
    if arr.shape != (dim,):
        raise ConfigError(f"{name} has {arr.shape[0]} entries, problem wants {dim}")
    return arr


# ---------------------------------------------------------------------------
# Presets: the two experiment families.
#
# example51: random QP (documented generator seed 42), 5 constraints on 10
#   variables; alpha=1.1, q=0.06, p=0.9, s=0.7, c=0.01, gamma=2; all-ones
#   initial state; mass sweep sigma in {0, 0.1, 0.4, 0.7}.
# example52: 3-variable toy objective (1,2,1); alpha=3, q=0.1, p=0.1, c=5,
#   gamma=1, mass t^-0.15; x(1)=(1,1,-1), lam(1)=(1), v(1)=(-1,-1,1);
#   time-scaling sweep s in {0.1, 0.3, 0.5, 0.7}.
# example52_hessian: toy coefficients (10,20,10), s=0.1 fixed, sweep
#   gamma in {0, 1} to contrast curvature damping on/off.
# ---------------------------------------------------------------------------


def preset(name: str) -> ExperimentConfig:
    if name == "example51":
        return ExperimentConfig(
            name="example51",
            problem_kind="qp",
            seed=42,
            rows=5,
            cols=10,
            params=ParameterSet(
                alpha=1.1, q=0.06, s=0.7, gamma=2.0,
                reg=RegularizationSpec(c=0.01, p=0.9), t0=1.0,
            ),
            mass=MassFunction.power_law(1.0, 0.7),
            integrator=IntegratorConfig(),
            horizon=1e3,
            out_dir=os.path.join("runs", "example51"),
            sweep="sigma",
            sweep_values=(0.0, 0.1, 0.4, 0.7),
            x0="ones",
            v0="ones",
            lam0="ones",
        )
    if name == "example52":
        return ExperimentConfig(
            name="example52",
            problem_kind="toy",
            coeffs=(1.0, 2.0, 1.0),
            params=ParameterSet(
                alpha=3.0, q=0.1, s=0.1, gamma=1.0,
                reg=RegularizationSpec(c=5.0, p=0.1), t0=1.0,
            ),
            mass=MassFunction.power_law(1.0, 0.15),
            integrator=IntegratorConfig(),
            horizon=1e3,
            out_dir=os.path.join("runs", "example52"),
            sweep="s",
            sweep_values=(0.1, 0.3, 0.5, 0.7),
            x0=(1.0, 1.0, -1.0),
            v0=(-1.0, -1.0, 1.0),
            lam0=(1.0,),
        )
    if name == "example52_hessian":
        return ExperimentConfig(
            name="example52_hessian",
            problem_kind="toy",
            coeffs=(10.0, 20.0, 10.0),
            params=ParameterSet(
                alpha=3.0, q=0.1, s=0.1, gamma=1.0,
                reg=RegularizationSpec(c=5.0, p=0.1), t0=1.0,
            ),
            mass=MassFunction.power_law(1.0, 0.15),
            integrator=IntegratorConfig(),
            horizon=1e3,
            out_dir=os.path.join("runs", "example52_hessian"),
            sweep="gamma",
            sweep_values=(0.0, 1.0),
            dump_state=True,
            x0=(1.0, 1.0, -1.0),
            v0=(-1.0, -1.0, 1.0),
            lam0=(1.0,),
        )
    raise ConfigError(f"unknown preset '{name}'; known: {', '.join(PRESET_NAMES)}")


# ---------------------------------------------------------------------------
# Config file grammar (configparser sections; see README for the format):
#
#   [problem]  kind = qp|toy|preset ; seed/rows/cols ; coeffs ; name
#   [params]   alpha q s p c gamma t0
#   [mass]     kappa sigma
#   [initial]  x v lam   (numbers, or ones/zeros)
#   [integrator] rel_tol abs_tol max_step_factor initial_step max_steps samples
#   [run]      name horizon sweep values out dump_state
# ---------------------------------------------------------------------------


def _vector_or_token(text: str):
    text = text.strip()
    if text in ("ones", "zeros"):
        return text
    return tuple(float(v) for v in text.split())


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    try:
        prob_sec = cp["problem"]
        kind = prob_sec.get("kind", "").strip()
        par = cp["params"]
        params = ParameterSet(
            alpha=par.getfloat("alpha"),
            q=par.getfloat("q"),
            s=par.getfloat("s"),
            gamma=par.getfloat("gamma"),
            reg=RegularizationSpec(c=par.getfloat("c"), p=par.getfloat("p")),
            t0=par.getfloat("t0", 1.0),
        )
        mass_sec = cp["mass"] if cp.has_section("mass") else {}
        mass = MassFunction.power_law(
            float(mass_sec.get("kappa", 1.0)), float(mass_sec.get("sigma", 0.0))
        )
        integ_sec = cp["integrator"] if cp.has_section("integrator") else {}
        integ = IntegratorConfig(
            rel_tol=float(integ_sec.get("rel_tol", 1e-8)),
            abs_tol=float(integ_sec.get("abs_tol", 1e-10)),
            max_step_factor=float(integ_sec.get("max_step_factor", 0.1)),
            initial_step=float(integ_sec.get("initial_step", 1e-3)),
            max_steps=int(float(integ_sec.get("max_steps", 20_000_000))),
            samples=int(float(integ_sec.get("samples", 400))),
        )
        run_sec = cp["run"]
        sweep = run_sec.get("sweep", "none").strip()
        values_text = run_sec.get("values", "").strip()
        values = tuple(float(v) for v in values_text.split()) if values_text else ()
        init_sec = cp["initial"] if cp.has_section("initial") else {}
        cfg = ExperimentConfig(
            name=run_sec.get("name", "experiment").strip(),
            problem_kind=kind,
            seed=prob_sec.getint("seed") if "seed" in prob_sec else None,
            rows=prob_sec.getint("rows") if "rows" in prob_sec else None,
            cols=prob_sec.getint("cols") if "cols" in prob_sec else None,
            coeffs=(
                tuple(float(v) for v in prob_sec.get("coeffs").split())
                if "coeffs" in prob_sec
                else None
            ),
            preset_ref=prob_sec.get("name", "").strip() or None,
            params=params,
            mass=mass,
            integrator=integ,
            horizon=run_sec.getfloat("horizon", 1e3),
            out_dir=run_sec.get("out", "runs").strip(),
            sweep=sweep,
            sweep_values=values,
            dump_state=run_sec.getboolean("dump_state", False),
            x0=_vector_or_token(init_sec.get("x", "ones")),
            v0=_vector_or_token(init_sec.get("v", "zeros")),
            lam0=_vector_or_token(init_sec.get("lam", "zeros")),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from exc
    return cfg


def _fmt_init(spec) -> str:
    if isinstance(spec, str):
        return spec
    return " ".join(f"{v:g}" for v in spec)


def config_to_text(cfg: ExperimentConfig) -> str:
    out = io.StringIO()
    out.write("[problem]\n")
    out.write(f"kind = {cfg.problem_kind}\n")
    if cfg.problem_kind == "qp":
        out.write(f"seed = {cfg.seed}\nrows = {cfg.rows}\ncols = {cfg.cols}\n")
    elif cfg.problem_kind == "toy":
        out.write("coeffs = " + " ".join(f"{v:g}" for v in cfg.coeffs) + "\n")
    else:
        out.write(f"name = {cfg.preset_ref}\n")
    p = cfg.params
    out.write("\n[params]\n")
    out.write(f"alpha = {p.alpha:g}\nq = {p.q:g}\ns = {p.s:g}\n")
    out.write(f"p = {p.p:g}\nc = {p.c:g}\ngamma = {p.gamma:g}\nt0 = {p.t0:g}\n")
    out.write("\n[mass]\n")
    out.write(f"kappa = {cfg.mass.kappa:g}\nsigma = {cfg.mass.sigma:g}\n")
    out.write("\n[initial]\n")
    out.write(f"x = {_fmt_init(cfg.x0)}\nv = {_fmt_init(cfg.v0)}\nlam = {_fmt_init(cfg.lam0)}\n")
    ic = cfg.integrator
    out.write("\n[integrator]\n")
    out.write(f"rel_tol = {ic.rel_tol:g}\nabs_tol = {ic.abs_tol:g}\n")
    out.write(f"max_step_factor = {ic.max_step_factor:g}\ninitial_step = {ic.initial_step:g}\n")
    out.write(f"max_steps = {ic.max_steps}\nsamples = {ic.samples}\n")
    out.write("\n[run]\n")
    out.write(f"name = {cfg.name}\nhorizon = {cfg.horizon:g}\nsweep = {cfg.sweep}\n")
    if cfg.sweep_values:
        out.write("values = " + " ".join(f"{v:g}" for v in cfg.sweep_values) + "\n")
    out.write(f"out = {cfg.out_dir}\ndump_state = {str(cfg.dump_state).lower()}\n")
    return out.getvalue()


def _member_setup(cfg: ExperimentConfig, value: float | None):
    """(member name, params, mass) for one sweep member."""
    if cfg.sweep == "none" or value is None:
        return "", cfg.params, cfg.mass
    tag = f"{cfg.sweep}{value:g}"
    if cfg.sweep == "sigma":
        return tag, cfg.params, MassFunction.power_law(cfg.mass.kappa, value)
    if cfg.sweep == "s":
        return tag, dataclasses.replace(cfg.params, s=value), cfg.mass
    return tag, dataclasses.replace(cfg.params, gamma=value), cfg.mass


def _fmt17(v: float) -> str:
    return f"{v:.17g}"


def _write_csv(
    path: str,
    rows: list[MetricRow],
    traj: Trajectory,
    params: ParameterSet,
    mass,
    dump_state: bool,
) -> None:
    with open(path, "w", newline="\n") as fh:
        header = CSV_HEADER
        if dump_state:
            header += "".join(f",x{i}" for i in range(traj.dim_x))
            header += "".join(f",v{i}" for i in range(traj.dim_x))
            header += "".join(f",lam{i}" for i in range(traj.dim_dual))
        fh.write(header + "\n")
        for i, row in enumerate(rows):
            a_t, b_t = diagnostics.energy_coefficients(params, mass, row.t)
            vals = [
                row.t,
                row.obj_residual,
                row.feasibility,
                row.lagrangian_gap,
                row.dist_saddle_sq,
                row.dist_minnorm,
                row.energy,
                a_t,
                b_t,
                theta(params, mass, row.t),
                traj.step_sizes[i],
            ]
            if dump_state:
                vals.extend(traj.xs[i])
                vals.extend(traj.vs[i])
                vals.extend(traj.lams[i])
            fh.write(",".join(_fmt17(v) for v in vals) + "\n")


def _write_summary(path: str, summary: RunSummary) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"run {summary.name}\n")
        fh.write(f"status {summary.status}\n")
        if summary.detail:
            fh.write(f"detail {summary.detail}\n")
        rep = summary.regime_report
        fh.write(f"regime {rep.regime}\n")
        fh.write(f"r {rep.r:g}\n")
        if rep.satisfied_regimes:
            fh.write("satisfied " + ",".join(rep.satisfied_regimes) + "\n")
        if rep.violated_conditions:
            fh.write("violated " + "; ".join(rep.violated_conditions) + "\n")
        if rep.predicted_exponents is not None:
            e = rep.predicted_exponents
            fh.write(
                f"predicted gap_exp {e.gap_exp:g} feas_exp {e.feas_exp:g} "
                f"dist_exp {e.dist_exp:g}\n"
            )
        for w in summary.warnings:
            fh.write(f"warning {w}\n")
        if summary.terminal:
            parts = " ".join(f"{k} {_fmt17(v)}" for k, v in summary.terminal.items())
            fh.write(f"terminal {parts}\n")
        for r in summary.rates:
            pred = "none" if r.predicted_slope is None else f"{r.predicted_slope:.6g}"
            verdict = r.verdict if r.verdict is not None else "none"
            fh.write(
                f"rate {r.metric_name} window {r.window[0]:g} {r.window[1]:g} "
                f"fitted {r.fitted_slope:.6g} predicted {pred} "
                f"r2 {r.residual_r2:.6g} verdict {verdict}\n"
            )
        for skip in summary.rate_skips:
            fh.write(f"rate_skipped {skip}\n")
        if summary.oscillation is not None:
            o = summary.oscillation
            fh.write(
                f"oscillation objective sign_changes {o.sign_changes} "
                f"total_variation {o.total_variation:.6g}\n"
            )
        st = summary.stats
        if st:
            fh.write(
                f"steps accepted {st['accepted']} rejected {st['rejected']} "
                f"evals {st['field_evals']} min_step {st['min_step']:.6g} "
                f"max_step {st['max_step']:.6g}\n"
            )
        fh.write(f"wall_clock_seconds {summary.wall_clock:.3f}\n")


def run(cfg: ExperimentConfig, quiet: bool = False) -> list[RunSummary]:
    """Execute every sweep member; one CSV + one summary file each.

    Divergence or truncation in a member is recorded in its summary and
    the remaining members still execute.
    """
    prob = build_problem(cfg)
    min_norm = min_norm_solution(prob)
    out_dir = os.environ.get(OUTPUT_DIR_ENV) or cfg.out_dir
    os.makedirs(out_dir, exist_ok=True)
    x0 = _resolve_initial(cfg.x0, prob.dim_x, "x")
    v0 = _resolve_initial(cfg.v0, prob.dim_x, "v")
    lam0 = _resolve_initial(cfg.lam0, prob.dim_dual, "lam")

    values = list(cfg.sweep_values) if cfg.sweep != "none" else [None]
    summaries = []
    for value in values:
        member, params, mass = _member_setup(cfg, value)
        stem = f"{cfg.name}_{member}" if member else cfg.name
        csv_path = os.path.join(out_dir, stem + ".csv")
        summary_path = os.path.join(out_dir, stem + ".summary.txt")
        started = time.perf_counter()
        report = validate_and_classify(params, mass)
        status, detail = "ok", ""
        traj: Trajectory | None = None
        try:
            field = build_field(prob, params, mass)
            state0 = TrajectoryState(t=params.t0, x=x0, v=v0, lam=lam0)
            traj = integrate(field, state0, cfg.horizon, cfg.integrator)
        except TruncatedTrajectoryError as exc:
            status, detail = "truncated", str(exc)
            traj = exc.trajectory
        except DivergenceError as exc:
            status, detail = "diverged", str(exc)
            traj = None

        rates: list[RateEstimate] = []
        rate_skips: list[str] = []
        osc = None
        terminal: dict = {}
        stats: dict = {}
        if traj is not None and len(traj) >= 2:
            saddles = saddle_path(prob, params.reg, traj.ts)
            rows = diagnostics.metrics(prob, params, mass, traj, saddles, min_norm)
            _write_csv(csv_path, rows, traj, params, mass, cfg.dump_state)
            window = (cfg.horizon / 100.0, cfg.horizon)
            for metric in (
                "obj_residual",
                "feasibility",
                "lagrangian_gap",
                "dist_saddle_sq",
                "dist_minnorm",
            ):
                try:
                    rates.append(
                        diagnostics.fit_rate(rows, metric, window, regime_report=report)
                    )
                except EstimationError as exc:
                    rate_skips.append(f"{metric}: {exc}")
            try:
                osc = diagnostics.oscillation_measure(
                    traj,
                    lambda st: prob.value(st.x),
                    t_min=10.0 * params.t0,
                    t_max=cfg.horizon,
                )
            except EstimationError:
                osc = None
            last = rows[-1]
            terminal = {
                "t": last.t,
                "obj_residual": last.obj_residual,
                "feasibility": last.feasibility,
                "lagrangian_gap": last.lagrangian_gap,
                "dist_saddle_sq": last.dist_saddle_sq,
                "dist_minnorm": last.dist_minnorm,
                "energy": last.energy,
            }
            stats = {
                "accepted": traj.stats.accepted,
                "rejected": traj.stats.rejected,
                "field_evals": traj.stats.field_evals,
                "min_step": traj.stats.min_step,
                "max_step": traj.stats.max_step,
            }

        summary = RunSummary(
            name=stem,
            member=member,
            status=status,
            regime_report=report,
            terminal=terminal,
            rates=rates,
            oscillation=osc,
            warnings=list(report.warnings),
            wall_clock=time.perf_counter() - started,
            csv_path=csv_path if traj is not None else "",
            summary_path=summary_path,
            stats=stats,
            detail=detail,
            rate_skips=rate_skips,
        )
        _write_summary(summary_path, summary)
        summaries.append(summary)
        if not quiet:
            wrote = summary.csv_path or "(no CSV)"
            print(f"{stem}: status {status}, regime {report.regime}, {wrote}")
    return summaries


def check(cfg: ExperimentConfig) -> list[tuple[str, RegimeReport]]:
    """Classification and assumption report per sweep member; no integration."""
    values = list(cfg.sweep_values) if cfg.sweep != "none" else [None]
    out = []
    for value in values:
        member, params, mass = _member_setup(cfg, value)
        stem = f"{cfg.name}_{member}" if member else cfg.name
        out.append((stem, validate_and_classify(params, mass)))
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pdflow",
        description=(
            "Integrate damped primal-dual flows for linearly constrained "
            "convex problems and verify their convergence behavior."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config file")
    p_run.add_argument("config", help="path to a config file")
    p_run.add_argument("--dump-state", action="store_true",
                       help="append per-component state columns to the CSV")

    p_preset = sub.add_parser("preset", help="run a built-in experiment preset")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--out", default=None, help="output directory")
    p_preset.add_argument("--horizon", type=float, default=None, help="final time T")
    p_preset.add_argument("--dump-state", action="store_true",
                          help="append per-component state columns to the CSV")

    p_check = sub.add_parser(
        "check", help="regime/assumption report for a config; no integration"
    )
    p_check.add_argument("config", help="path to a config file")

    args = parser.parse_args(argv)

    if args.command == "run":
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
        if args.dump_state:
            cfg = dataclasses.replace(cfg, dump_state=True)
        summaries = run(cfg)
        return 1 if any(s.status == "diverged" for s in summaries) else 0

    if args.command == "preset":
        cfg = preset(args.name)
        if args.out is not None:
            cfg = dataclasses.replace(cfg, out_dir=args.out)
        if args.horizon is not None:
            cfg = dataclasses.replace(cfg, horizon=args.horizon)
        if args.dump_state:
            cfg = dataclasses.replace(cfg, dump_state=True)
        out_dir = os.environ.get(OUTPUT_DIR_ENV) or cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, cfg.name + ".config"), "w") as fh:
            fh.write(config_to_text(cfg))
        summaries = run(cfg)
        return 1 if any(s.status == "diverged" for s in summaries) else 0

    # check
    with open(args.config) as fh:
        cfg = parse_config(fh.read())
    for stem, report in check(cfg):
        print(f"{stem}: regime {report.regime} r={report.r:g}")
        if report.predicted_exponents is not None:
            e = report.predicted_exponents
            print(
                f"  predicted gap_exp {e.gap_exp:g} feas_exp {e.feas_exp:g} "
                f"dist_exp {e.dist_exp:g}"
            )
        if report.satisfied_regimes:
            print("  satisfied " + ",".join(report.satisfied_regimes))
        if report.violated_conditions:
            print("  violated " + "; ".join(report.violated_conditions))
        for w in report.warnings:
            print(f"  warning {w}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
