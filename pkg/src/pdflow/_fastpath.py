"""Compiled whole-loop integrator for quadratic-problem flow fields.

Mirrors integrator.integrate step for step — same tableau, same PI
controller, same per-component error scale, same Hermite dense output,
same step cap and underflow/budget semantics — but runs the entire
accept/reject loop inside one numba-compiled function, calling the
compiled flow kernel directly.  Only fields built from a
QuadraticProblem (which carry a ``qp_payload``) can use it; everything
else takes the generic loop.  Both paths solve the same equations at
the same tolerances; their step sequences may differ in the last bits,
so sampled trajectories agree to integration accuracy, not bitwise.

This module imports cleanly only when numba is present; integrator
guards the import.
"""

from __future__ import annotations

import math

import numba
import numpy as np

from .dynamics import _qp_rhs_py
from .integrator import (
    _A,
    _B5,
    _C,
    _E,
    _MAX_FACTOR,
    _MIN_FACTOR,
    _PI_ALPHA,
    _PI_BETA,
    _SAFETY,
)

__all__ = ["run_loop", "STATUS_OK", "STATUS_TRUNCATED", "STATUS_UNDERFLOW"]

STATUS_OK = 0
STATUS_TRUNCATED = 1
STATUS_UNDERFLOW = 2

_qp_rhs = numba.njit(cache=True, fastmath=False)(_qp_rhs_py)


@numba.njit(cache=True, fastmath=False)
def _loop(y0, t0, T, grid, rel_tol, abs_tol, max_step_factor, initial_step,
          max_steps, Q, A, AT, k, b, par,
          A_tab, B5, C, E):
    dim = y0.shape[0]
    S = grid.shape[0]
    ys = np.empty((S, dim))
    step_sizes = np.zeros(S)

    y = y0.copy()
    t = t0
    f0 = _qp_rhs(t, y, Q, A, AT, k, b, par)
    evals = 1

    ys[0] = y
    ptr = 1
    first_h = -1.0

    h = min(initial_step, max_step_factor * t0, T - t0)
    err_prev = 1.0
    K = np.empty((7, dim))
    yi = np.empty(dim)
    y_new = np.empty(dim)
    attempts = 0
    accepted = 0
    rejected = 0
    min_step = math.inf
    max_step = 0.0
    status = STATUS_OK

    while t < T:
        if attempts >= max_steps:
            status = STATUS_TRUNCATED
            break
        h = min(h, max_step_factor * t, T - t)
        if h < 1e-14 * max(t, 1.0):
            status = STATUS_UNDERFLOW
            break
        attempts += 1

        K[0] = f0
        ok = True
        for i in range(1, 7):
            if i < 6:
                for d in range(dim):
                    acc = 0.0
                    for j in range(i):
                        acc += A_tab[i, j] * K[j, d]
                    yi[d] = y[d] + h * acc
            else:
                # 5th-order solution; stage 7 evaluates the field there (FSAL)
                for d in range(dim):
                    acc = 0.0
                    for j in range(6):
                        acc += B5[j] * K[j, d]
                    y_new[d] = y[d] + h * acc
                    yi[d] = y_new[d]
            Ki = _qp_rhs(t + C[i] * h, yi, Q, A, AT, k, b, par)
            evals += 1
            for d in range(dim):
                K[i, d] = Ki[d]
                if not math.isfinite(Ki[d]):
                    ok = False
            if not ok:
                break

        if ok:
            sq_sum = 0.0
            for d in range(dim):
                acc = 0.0
                for j in range(7):
                    acc += E[j] * K[j, d]
                scale = abs_tol + rel_tol * max(abs(y[d]), abs(y_new[d]))
                r = h * acc / scale
                sq_sum += r * r
            err = math.sqrt(sq_sum / dim)
        else:
            err = math.inf

        if not math.isfinite(err):
            rejected += 1
            h *= 0.25
            continue

        if err <= 1.0:
            t_new = t + h
            while ptr < S and grid[ptr] <= t_new * (1 + 1e-15):
                g = min(grid[ptr], t_new)
                tau = (g - t) / h
                t2 = tau * tau
                t3 = t2 * tau
                h00 = 2 * t3 - 3 * t2 + 1
                h10 = t3 - 2 * t2 + tau
                h01 = -2 * t3 + 3 * t2
                h11 = t3 - t2
                for d in range(dim):
                    ys[ptr, d] = (
                        h00 * y[d]
                        + h10 * h * K[0, d]
                        + h01 * y_new[d]
                        + h11 * h * K[6, d]
                    )
                step_sizes[ptr] = h
                ptr += 1
            if first_h < 0.0:
                first_h = h
            accepted += 1
            min_step = min(min_step, h)
            max_step = max(max_step, h)
            t = t_new
            for d in range(dim):
                y[d] = y_new[d]
                f0[d] = K[6, d]
            err_cl = max(err, 1e-10)
            factor = _SAFETY * err_cl ** -_PI_ALPHA * err_prev ** _PI_BETA
            h *= min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            err_prev = err_cl
        else:
            rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)

    if first_h > 0.0:
        step_sizes[0] = first_h
    return (status, ys, step_sizes, ptr, t, y,
            accepted, rejected, min_step, max_step, evals)


def run_loop(payload, y0, t0, T, grid, cfg):
    """Run the compiled loop; returns the raw tuple from ``_loop``."""
    Q, A, AT, k, b, par = payload
    return _loop(
        y0, t0, T, grid,
        cfg.rel_tol, cfg.abs_tol, cfg.max_step_factor, cfg.initial_step,
        cfg.max_steps, Q, A, AT, k, b, par,
        _A, _B5, _C, _E,
    )
