"""Energy monitor, convergence metrics, rate fitting, oscillation measures.

The Lyapunov-style energy along a trajectory state z = (x, v, lam) at
time t, relative to the instantaneous saddle (x_t, lam_t), is

    E(t) = a(t) t^q (L_t(x, lam_t) - L_t(x_t, lam_t))
           + 1/2 |vth(t)|^2 + 1/2 b(t) |x - x_t|^2 + 1/2 |lam - lam_t|^2

with the mixed primal term

    vth(t) = (alpha-1)(x - x_t) + t^q (m(t) v + gamma grad_x L_t(x, lam))

and coefficients

    a(t) = m t^{q+s} - 2 gamma q m t^{q-1} - gamma m'(t) t^q + gamma
    b(t) = -(alpha-1) (q m t^{q-1} + m'(t) t^q - 1).

E(t) >= 0 whenever a(t) >= 0 and b(t) >= 0, because the saddle property
makes the Lagrangian difference nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import MassFunction, ParameterSet, TrajectoryState
from .errors import EstimationError
from .integrator import Trajectory
from .lagrangian import (
    MinNormSolution,
    SaddlePoint,
    grad_x_Lt,
    lagrangian_value,
    plain_lagrangian,
)
from .problem import Problem

__all__ = [
    "EnergyReport",
    "MetricRow",
    "RateEstimate",
    "OscillationMeasure",
    "energy_coefficients",
    "energy",
    "metrics",
    "fit_rate",
    "oscillation_measure",
]

LOG_FLOOR = 1e-14


@dataclass(frozen=True)
class EnergyReport:
    t: float
    a_t: float
    b_t: float
    theta_term: np.ndarray
    energy: float


@dataclass(frozen=True)
class MetricRow:
    t: float
    obj_residual: float
    feasibility: float
    lagrangian_gap: float
    dist_saddle_sq: float
    dist_minnorm: float
    energy: float


@dataclass(frozen=True)
class RateEstimate:
    metric_name: str
    window: tuple[float, float]
    fitted_slope: float
    predicted_slope: float | None
    residual_r2: float
    verdict: str | None
    n_used: int
    n_floored: int


@dataclass(frozen=True)
class OscillationMeasure:
    sign_changes: int
    total_variation: float


def energy_coefficients(
    params: ParameterSet, mass: MassFunction, t: float
) -> tuple[float, float]:
    """Coefficients (a(t), b(t)) of the energy function."""
    q, s, gamma, alpha = params.q, params.s, params.gamma, params.alpha
    m_t = mass(t)
    md_t = mass.derivative(t)
    a_t = (
        m_t * t ** (q + s)
        - 2.0 * gamma * q * m_t * t ** (q - 1.0)
        - gamma * md_t * t**q
        + gamma
    )
    b_t = -(alpha - 1.0) * (q * m_t * t ** (q - 1.0) + md_t * t**q - 1.0)
    return a_t, b_t


def energy(
    prob: Problem,
    params: ParameterSet,
    mass: MassFunction,
    state: TrajectoryState,
    saddle: SaddlePoint,
) -> EnergyReport:
    """Energy of one state against the saddle point at the same time."""
    t = state.t
    if not math.isclose(t, saddle.t, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError(f"state time {t} does not match saddle time {saddle.t}")
    alpha, q, gamma = params.alpha, params.q, params.gamma
    a_t, b_t = energy_coefficients(params, mass, t)
    m_t = mass(t)
    dx = state.x - saddle.x_t
    dlam = state.lam - saddle.lambda_t
    gap = lagrangian_value(prob, params.reg, t, state.x, saddle.lambda_t) - (
        lagrangian_value(prob, params.reg, t, saddle.x_t, saddle.lambda_t)
    )
    vth = (alpha - 1.0) * dx + t**q * (
        m_t * state.v + gamma * grad_x_Lt(prob, params.reg, t, state.x, state.lam)
    )
    value = (
        a_t * t**q * gap
        + 0.5 * float(vth @ vth)
        + 0.5 * b_t * float(dx @ dx)
        + 0.5 * float(dlam @ dlam)
    )
    return EnergyReport(t=float(t), a_t=a_t, b_t=b_t, theta_term=vth, energy=value)


def metrics(
    prob: Problem,
    params: ParameterSet,
    mass: MassFunction,
    trajectory: Trajectory,
    saddles: list[SaddlePoint],
    min_norm: MinNormSolution,
) -> list[MetricRow]:
    """One MetricRow per trajectory sample.

    The Lagrangian gap uses the plain (unregularized) Lagrangian at the
    minimum-norm multiplier: f(x) - f* + <lam*, A x - b>, nonnegative by
    the saddle inequality.
    """
    if len(saddles) != len(trajectory):
        raise ValueError(
            f"saddle path has {len(saddles)} entries for {len(trajectory)} samples"
        )
    f_star = min_norm.f_star
    base = plain_lagrangian(prob, min_norm.x_star, min_norm.lambda_star)
    rows = []
    for i in range(len(trajectory)):
        state = trajectory.state_at(i)
        sp = saddles[i]
        if not math.isclose(state.t, sp.t, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError(
                f"saddle path time {sp.t} does not match sample time {state.t}"
            )
        x, lam = state.x, state.lam
        feas = float(np.linalg.norm(prob.A @ x - prob.b))
        gap = plain_lagrangian(prob, x, min_norm.lambda_star) - base
        dx = x - sp.x_t
        dlam = lam - sp.lambda_t
        dxs = x - min_norm.x_star
        dls = lam - min_norm.lambda_star
        e = energy(prob, params, mass, state, sp)
        rows.append(
            MetricRow(
                t=state.t,
                obj_residual=abs(prob.value(x) - f_star),
                feasibility=feas,
                lagrangian_gap=gap,
                dist_saddle_sq=float(dx @ dx + dlam @ dlam),
                dist_minnorm=math.sqrt(float(dxs @ dxs + dls @ dls)),
                energy=e.energy,
            )
        )
    return rows


_PREDICTION_FIELD = {
    "obj_residual": "gap_exp",
    "lagrangian_gap": "gap_exp",
    "feasibility": "feas_exp",
    "dist_saddle_sq": "dist_exp",
}


def fit_rate(
    rows,
    metric_name: str,
    window: tuple[float, float],
    regime_report=None,
    predicted_slope: float | None = None,
    slack: float = 0.1,
) -> RateEstimate:
    """Least-squares log-log slope of a metric over a time window.

    Values at or below the 1e-14 floor are flagged and excluded from the
    fit.  The predicted slope comes from `predicted_slope` if given, else
    from the regime report's exponent for this metric (when the metric
    has one and the report carries predictions).  Verdict: fitted above
    predicted + slack violates the bound, below predicted - slack beats
    it, otherwise within_bound; None when there is no prediction.
    """
    lo, hi = window
    ts, vals = [], []
    for row in rows:
        t = row.t if hasattr(row, "t") else row["t"]
        if lo <= t <= hi:
            v = getattr(row, metric_name) if hasattr(row, metric_name) else row[metric_name]
            ts.append(t)
            vals.append(v)
    ts = np.asarray(ts)
    vals = np.asarray(vals)
    floored = vals < LOG_FLOOR
    n_used = int((~floored).sum())
    if n_used < 8:
        raise EstimationError(
            f"only {n_used} usable samples for {metric_name} in [{lo:g}, {hi:g}]; need >= 8"
        )
    logt = np.log(ts[~floored])
    logv = np.log(vals[~floored])
    slope, intercept = np.polyfit(logt, logv, 1)
    fitted = logt * slope + intercept
    ss_res = float(np.sum((logv - fitted) ** 2))
    ss_tot = float(np.sum((logv - logv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    if predicted_slope is None and regime_report is not None:
        exps = regime_report.predicted_exponents
        fieldname = _PREDICTION_FIELD.get(metric_name)
        if exps is not None and fieldname is not None:
            predicted_slope = getattr(exps, fieldname)
    if predicted_slope is None:
        verdict = None
    elif slope > predicted_slope + slack:
        verdict = "violates_bound"
    elif slope < predicted_slope - slack:
        verdict = "faster_than_bound"
    else:
        verdict = "within_bound"
    return RateEstimate(
        metric_name=metric_name,
        window=(float(lo), float(hi)),
        fitted_slope=float(slope),
        predicted_slope=predicted_slope,
        residual_r2=float(r2),
        verdict=verdict,
        n_used=n_used,
        n_floored=int(floored.sum()),
    )


def oscillation_measure(
    trajectory: Trajectory,
    component_selector,
    t_min: float | None = None,
    t_max: float | None = None,
) -> OscillationMeasure:
    """Oscillation of a trajectory signal over [t_min, t_max].

    `component_selector` is either an integer (primal component index:
    signal x_i with sampled derivative v_i) or a callable state -> real
    (derivative taken as sampled increments).  Returns the number of
    sign changes of the derivative and the total variation sum |delta|
    of the signal across samples.
    """
    ts = trajectory.ts
    lo = ts[0] if t_min is None else t_min
    hi = ts[-1] if t_max is None else t_max
    mask = (ts >= lo) & (ts <= hi)
    if int(mask.sum()) < 2:
        raise EstimationError(
            f"need >= 2 samples in [{lo:g}, {hi:g}], got {int(mask.sum())}"
        )
    if isinstance(component_selector, (int, np.integer)):
        signal = trajectory.xs[mask, int(component_selector)]
        deriv = trajectory.vs[mask, int(component_selector)]
    else:
        idx = np.nonzero(mask)[0]
        signal = np.array(
            [float(component_selector(trajectory.state_at(int(i)))) for i in idx]
        )
        deriv = np.diff(signal)
    signs = np.sign(deriv)
    signs = signs[signs != 0]
    changes = int(np.sum(signs[1:] != signs[:-1])) if signs.size > 1 else 0
    tv = float(np.sum(np.abs(np.diff(signal))))
    return OscillationMeasure(sign_changes=changes, total_variation=tv)
