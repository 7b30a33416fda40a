"""Curvature damping as an oscillation suppressor.

The stiff 3-variable toy problem (objective (10x1 + 20x2 + 10x3)^2) rings
visibly when integrated without the total-derivative damping term.  This
demo runs the same flow with gamma = 0 and gamma = 1 and compares the
objective signal's derivative sign changes and total variation, plus the
energy function's decay, on a shared time grid.
"""

import dataclasses

import numpy as np

from pdflow import cli, oscillation_measure


def main():
    cfg = dataclasses.replace(
        cli.preset("example52_hessian"),
        horizon=200.0,
        out_dir="runs/demo_curvature",
    )
    print("toy objective (10x1 + 20x2 + 10x3)^2, "
          f"gamma sweep {cfg.sweep_values}, T={cfg.horizon:g}\n")

    summaries = cli.run(cfg, quiet=True)

    for s in summaries:
        data = np.genfromtxt(s.csv_path, delimiter=",", names=True)
        f = (10.0 * data["x0"] + 20.0 * data["x1"] + 10.0 * data["x2"]) ** 2
        tv = float(np.sum(np.abs(np.diff(f))))
        osc = s.oscillation
        print(f"{s.member}: objective sign changes (t >= 10) "
              f"{osc.sign_changes}, full-window total variation {tv:.3e}")
        print(f"  terminal |f - f*| = {s.terminal['obj_residual']:.3e}, "
              f"energy = {s.terminal['energy']:.3e}")

    print("\nwith gamma = 1 the trajectory is overdamped: far fewer "
          "derivative sign changes and a much smaller travelled path, at "
          "the cost of a slower early transient.")


if __name__ == "__main__":
    main()
