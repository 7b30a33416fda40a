"""Minimal tour: build a problem, classify the parameters, run the flow.

A random equality-constrained convex QP is integrated under the damped
primal-dual dynamics, and the terminal metrics are compared against the
regime classifier's predicted decay exponents.
"""

import numpy as np

from pdflow import (
    IntegratorConfig,
    MassFunction,
    ParameterSet,
    RegularizationSpec,
    TrajectoryState,
    build_field,
    fit_rate,
    integrate,
    make_random_qp,
    metrics,
    min_norm_solution,
    saddle_path,
    validate_and_classify,
)


def main():
    # a feasible random QP: minimize x'Qx/2 + k'x  subject to  Ax = b
    prob = make_random_qp(seed=7, m=4, n=12)
    print(f"problem: {prob.dim_x} variables, {prob.dim_dual} constraints")

    # weak friction, strong temporal scaling, fast-decaying regularization:
    # the regularized saddle path converges quickly to the min-norm solution,
    # so the terminal iterate is a genuinely accurate answer.
    params = ParameterSet(
        alpha=1.1, q=0.06, s=0.7, gamma=2.0,
        reg=RegularizationSpec(c=0.01, p=0.9),
    )
    mass = MassFunction.power_law(1.0, 0.4)

    report = validate_and_classify(params, mass)
    print(f"regime: {report.regime} (r = {report.r:g})")
    if report.predicted_exponents is not None:
        e = report.predicted_exponents
        print(f"predicted slopes: gap {e.gap_exp:g}, feasibility {e.feas_exp:g}, "
              f"dist^2 {e.dist_exp:g}")

    T = 200.0
    field = build_field(prob, params, mass)
    state0 = TrajectoryState(
        t=params.t0,
        x=np.ones(prob.dim_x),
        v=np.zeros(prob.dim_x),
        lam=np.zeros(prob.dim_dual),
    )
    traj = integrate(field, state0, T, IntegratorConfig())
    print(f"integrated to T={T:g} in {traj.stats.accepted} accepted steps")

    mn = min_norm_solution(prob)
    rows = metrics(prob, params, mass, traj,
                   saddle_path(prob, params.reg, traj.ts), mn)
    last = rows[-1]
    print(f"terminal: |f - f*| = {last.obj_residual:.3e}, "
          f"||Ax - b|| = {last.feasibility:.3e}, "
          f"distance to min-norm solution = {last.dist_minnorm:.3e}")

    for metric in ("obj_residual", "feasibility", "dist_saddle_sq"):
        est = fit_rate(rows, metric, (T / 100.0, T), regime_report=report)
        print(f"fitted {metric} slope {est.fitted_slope:+.3f} "
              f"(predicted {est.predicted_slope:+.3f}): {est.verdict}")


if __name__ == "__main__":
    main()
