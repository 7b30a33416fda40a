"""How the inertia schedule shapes convergence.

The same QP and damping parameters are run under masses m(t) = t^-sigma
for several decay exponents sigma.  The mass exponent enters the guarantee
through the predicted distance-to-saddle exponent, and the measured
tracking error and energy order accordingly: faster-shrinking inertia
hugs the regularized saddle path more tightly.  The objective residual,
by contrast, is dominated by the regularization schedule shared across
members, so it barely moves.  The constant-mass member falls outside
every regime because its mass fails the required decay bound; the
classifier's warning is printed alongside the table.
"""

import dataclasses

from pdflow import cli


def main():
    cfg = cli.preset("example51")
    cfg = dataclasses.replace(cfg, horizon=100.0,
                              out_dir="runs/demo_mass_sweep")
    print(f"sweeping sigma over {cfg.sweep_values}, horizon T={cfg.horizon:g}")
    print()

    summaries = cli.run(cfg, quiet=True)

    print(f"{'member':>10s} {'regime':>20s} {'pred dist^2':>12s} "
          f"{'fit dist^2':>11s} {'dist^2(T)':>11s} {'energy(T)':>11s}")
    for s in summaries:
        exps = s.regime_report.predicted_exponents
        pred = f"{exps.dist_exp:+.2f}" if exps is not None else "--"
        fit = next(r.fitted_slope for r in s.rates
                   if r.metric_name == "dist_saddle_sq")
        print(f"{s.member:>10s} {s.regime_report.regime:>20s} {pred:>12s} "
              f"{fit:+11.3f} {s.terminal['dist_saddle_sq']:11.3e} "
              f"{s.terminal['energy']:11.3e}")

    print()
    for s in summaries:
        for w in s.warnings:
            print(f"note ({s.member}): {w}")

    print("\nlarger sigma (lighter late-time inertia) tightens the predicted "
          "distance exponent, and the measured tracking error and energy "
          "follow suit; the objective residual is set by the shared "
          "regularization path and is nearly identical across members.")


if __name__ == "__main__":
    main()
