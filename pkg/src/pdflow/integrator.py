"""Adaptive embedded Runge-Kutta integration with log-spaced dense output.

Dormand-Prince 5(4) pair (7 stages, FSAL): the 5th-order solution is
propagated, the embedded 4th-order difference drives a standard PI step
controller with per-component error scale abs_tol + rel_tol * |y|.
Steps are additionally capped at max_step_factor * t, which tracks the
power-law stiffening of the flow's coefficients.  Dense output at the
requested sample grid uses cubic Hermite interpolation on accepted
steps.  Everything is deterministic: identical inputs give bitwise
identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TrajectoryState
from .errors import DivergenceError, DomainError, TruncatedTrajectoryError

__all__ = ["IntegratorConfig", "StepStats", "Trajectory", "integrate", "log_grid"]

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1 / 5, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3 / 40, 9 / 40, 0.0, 0.0, 0.0, 0.0],
        [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0, 0.0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0, 0.0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0.0],
    ]
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# b5 - b4: error-estimate weights of the embedded pair
_E = np.array(
    [
        71 / 57600,
        0.0,
        -71 / 16695,
        71 / 1920,
        -17253 / 339200,
        22 / 525,
        -1 / 40,
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_PI_ALPHA = 0.7 / 5.0  # PI controller exponents (Gustafsson-style)
_PI_BETA = 0.4 / 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step_factor: float = 0.1
    initial_step: float = 1e-3
    max_steps: int = 20_000_000
    samples: int = 400

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if not (0 < self.max_step_factor):
            raise DomainError("max_step_factor must be positive")
        if not (self.initial_step > 0):
            raise DomainError("initial_step must be positive")
        if self.max_steps < 1 or self.samples < 2:
            raise DomainError("need max_steps >= 1 and samples >= 2")


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    min_step: float = math.inf
    max_step: float = 0.0
    field_evals: int = 0


@dataclass
class Trajectory:
    """Dense samples of one integration at the requested grid times."""

    ts: np.ndarray
    xs: np.ndarray
    vs: np.ndarray
    lams: np.ndarray
    step_sizes: np.ndarray  # size of the accepted step covering each sample
    stats: StepStats = field(default_factory=StepStats)

    def __len__(self) -> int:
        return self.ts.shape[0]

    @property
    def dim_x(self) -> int:
        return self.xs.shape[1]

    @property
    def dim_dual(self) -> int:
        return self.lams.shape[1]

    def state_at(self, i: int) -> TrajectoryState:
        return TrajectoryState(
            t=float(self.ts[i]), x=self.xs[i].copy(), v=self.vs[i].copy(),
            lam=self.lams[i].copy(),
        )

    def states(self):
        return [self.state_at(i) for i in range(len(self))]


def log_grid(t0: float, T: float, samples: int) -> np.ndarray:
    """Log-spaced sample times with exact endpoints."""
    if not (0 < t0 < T):
        raise DomainError(f"need 0 < t0 < T, got t0={t0}, T={T}")
    grid = np.geomspace(t0, T, samples)
    grid[0] = t0
    grid[-1] = T
    if not np.all(np.diff(grid) > 0):
        raise DomainError("sample grid is not strictly increasing")
    return grid


def _hermite(y0, y1, f0, f1, h, tau):
    """Cubic Hermite value at fraction tau of a step (t, t+h)."""
    t2 = tau * tau
    t3 = t2 * tau
    return (
        (2 * t3 - 3 * t2 + 1) * y0
        + (t3 - 2 * t2 + tau) * h * f0
        + (-2 * t3 + 3 * t2) * y1
        + (t3 - t2) * h * f1
    )


def integrate(field, state0: TrajectoryState, T: float, cfg: IntegratorConfig,
              grid: np.ndarray | None = None, fast: bool | None = None) -> Trajectory:
    """Integrate y' = field(t, y) from state0.t to T with dense sampling.

    Raises TruncatedTrajectoryError (with the partial trajectory) when the
    step budget runs out, and DivergenceError (with the last finite state)
    when the solution blows up or the step size underflows.

    ``fast`` selects the compiled whole-loop path for quadratic-problem
    fields: None picks it automatically when available, False forces the
    generic loop, True requires the compiled path.  Both paths implement
    the same method at the same tolerances.
    """
    t0 = float(state0.t)
    if not (t0 < T):
        raise DomainError(f"need state0.t < T, got t0={t0}, T={T}")
    n = state0.x.shape[0]
    m = state0.lam.shape[0]
    dim = 2 * n + m
    if grid is None:
        grid = log_grid(t0, T, cfg.samples)
    else:
        grid = np.asarray(grid, dtype=np.float64)
        if grid[0] != t0 or grid[-1] != T or not np.all(np.diff(grid) > 0):
            raise DomainError("grid must increase strictly from t0 to T")
    S = grid.shape[0]

    if fast is not False:
        payload = getattr(field, "qp_payload", None)
        fastpath = None
        if payload is not None:
            try:
                from . import _fastpath as fastpath
            except ImportError:  # pragma: no cover - numba not installed
                fastpath = None
        if fastpath is not None:
            return _integrate_compiled(fastpath, payload, state0, t0, T, cfg,
                                       grid, n, m)
        if fast is True:
            raise DomainError(
                "fast=True requires a quadratic-problem field and numba"
            )

    ys = np.empty((S, dim))
    step_sizes = np.empty(S)
    stats = StepStats()

    y = np.concatenate([state0.x, state0.v, state0.lam])
    t = t0
    f0 = np.asarray(field(t, y), dtype=np.float64)
    stats.field_evals += 1
    if f0.shape != (dim,):
        raise DomainError(f"field returned shape {f0.shape}, expected ({dim},)")

    ys[0] = y
    ptr = 1  # grid[0] == t0 recorded; step size filled after the first step
    first_h = None

    h = min(cfg.initial_step, cfg.max_step_factor * t0, T - t0)
    err_prev = 1.0
    K = np.empty((7, dim))
    attempts = 0

    def partial(upto: int) -> Trajectory:
        return Trajectory(
            ts=grid[:upto].copy(),
            xs=ys[:upto, :n].copy(),
            vs=ys[:upto, n : 2 * n].copy(),
            lams=ys[:upto, 2 * n :].copy(),
            step_sizes=step_sizes[:upto].copy(),
            stats=stats,
        )

    while t < T:
        if attempts >= cfg.max_steps:
            if first_h is not None:
                step_sizes[0] = first_h
            raise TruncatedTrajectoryError(
                f"step budget {cfg.max_steps} exhausted at t={t:.6g} (target {T:.6g})",
                trajectory=partial(ptr),
                t_reached=t,
            )
        h = min(h, cfg.max_step_factor * t, T - t)
        if h < 1e-14 * max(t, 1.0):
            raise DivergenceError(
                f"step size underflow at t={t:.6g}; trajectory is not integrable "
                "to the horizon at this tolerance",
                t=t,
                last_state=TrajectoryState(
                    t=t, x=y[:n].copy(), v=y[n : 2 * n].copy(), lam=y[2 * n :].copy()
                ),
            )
        attempts += 1

        K[0] = f0
        ok = True
        y_new = None
        for i in range(1, 7):
            if i < 6:
                yi = y + h * (K[:i].T @ _A[i, :i])
            else:
                y_new = y + h * (K[:6].T @ _B5[:6])  # b5[6]=0; stage 7 is FSAL
                yi = y_new
            K[i] = field(t + _C[i] * h, yi)
            stats.field_evals += 1
            if not np.isfinite(K[i]).all():
                ok = False
                break

        if ok:
            err_vec = h * (K.T @ _E)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            # overflow to inf just means "reject"; don't warn about it
            with np.errstate(over="ignore"):
                err = float(np.sqrt(np.mean((err_vec / scale) ** 2)))
        else:
            err = math.inf

        if not math.isfinite(err):
            stats.rejected += 1
            h *= 0.25
            continue

        if err <= 1.0:
            # accept; fill grid points covered by [t, t+h] via Hermite
            t_new = t + h
            f1 = K[6]
            while ptr < S and grid[ptr] <= t_new * (1 + 1e-15):
                g = min(grid[ptr], t_new)
                tau = (g - t) / h
                ys[ptr] = _hermite(y, y_new, f0, f1, h, tau)
                step_sizes[ptr] = h
                ptr += 1
            if first_h is None:
                first_h = h
            stats.accepted += 1
            stats.min_step = min(stats.min_step, h)
            stats.max_step = max(stats.max_step, h)
            t = t_new
            y = y_new
            # FSAL: copy, not alias — K[6] is overwritten by the next step's
            # stages, and the dense-output fill needs the step-start slope.
            f0 = f1.copy()
            err_cl = max(err, 1e-10)  # guard err**-a against exact zeros
            factor = _SAFETY * err_cl ** -_PI_ALPHA * err_prev**_PI_BETA
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            err_prev = err_cl
        else:
            stats.rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err**-0.2)

    if ptr != S:  # pragma: no cover - defensive; grid[-1] == T is reached above
        raise AssertionError("sample grid not exhausted at the horizon")
    step_sizes[0] = first_h if first_h is not None else 0.0

    if not np.isfinite(ys).all():
        raise DivergenceError(
            "non-finite values in interpolated samples",
            t=t,
            last_state=TrajectoryState(
                t=t, x=y[:n].copy(), v=y[n : 2 * n].copy(), lam=y[2 * n :].copy()
            ),
        )

    return Trajectory(
        ts=grid.copy(),
        xs=ys[:, :n].copy(),
        vs=ys[:, n : 2 * n].copy(),
        lams=ys[:, 2 * n :].copy(),
        step_sizes=step_sizes,
        stats=stats,
    )


def _integrate_compiled(fastpath, payload, state0, t0, T, cfg, grid, n, m):
    """Adapter around the compiled loop; mirrors integrate()'s outcomes."""
    y0 = np.concatenate([state0.x, state0.v, state0.lam])
    (status, ys, step_sizes, ptr, t_end, y_end,
     accepted, rejected, min_step, max_step, evals) = fastpath.run_loop(
        payload, y0, t0, T, grid, cfg
    )
    stats = StepStats(
        accepted=int(accepted),
        rejected=int(rejected),
        min_step=float(min_step),
        max_step=float(max_step),
        field_evals=int(evals),
    )

    def partial(upto: int) -> Trajectory:
        return Trajectory(
            ts=grid[:upto].copy(),
            xs=ys[:upto, :n].copy(),
            vs=ys[:upto, n : 2 * n].copy(),
            lams=ys[:upto, 2 * n :].copy(),
            step_sizes=step_sizes[:upto].copy(),
            stats=stats,
        )

    last_state = TrajectoryState(
        t=float(t_end), x=y_end[:n].copy(), v=y_end[n : 2 * n].copy(),
        lam=y_end[2 * n :].copy(),
    )
    if status == fastpath.STATUS_TRUNCATED:
        raise TruncatedTrajectoryError(
            f"step budget {cfg.max_steps} exhausted at t={t_end:.6g} "
            f"(target {T:.6g})",
            trajectory=partial(int(ptr)),
            t_reached=float(t_end),
        )
    if status == fastpath.STATUS_UNDERFLOW:
        raise DivergenceError(
            f"step size underflow at t={t_end:.6g}; trajectory is not "
            "integrable to the horizon at this tolerance",
            t=float(t_end),
            last_state=last_state,
        )
    if not np.isfinite(ys).all():
        raise DivergenceError(
            "non-finite values in interpolated samples",
            t=float(t_end),
            last_state=last_state,
        )
    return partial(grid.shape[0])
