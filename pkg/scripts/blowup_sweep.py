"""Sweep the order gamma and map numerical blow-up times against the bounds.

For each (gamma, u0) pair: optimized lower/upper bounds, the step ladder's
break times, and the k^gamma extrapolation. The sweep reproduces the two
regimes worth staring at: large initial data blows up sooner as gamma falls,
small initial data the other way around.

Usage:
    python scripts/blowup_sweep.py
    python scripts/blowup_sweep.py --u0 0.12 1.2 --gammas 0.2:0.9:8 --png
"""

import argparse
import csv
import sys
from pathlib import Path

from caputo_ode import (
    ProblemSpec,
    RhsModel,
    blowup_bounds_optimized,
    estimate_blowup_time,
)


def gamma_grid(spec: str) -> list[float]:
    lo, hi, count = spec.split(":")
    lo, hi, count = float(lo), float(hi), int(count)
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--A", type=float, default=1.0)
    ap.add_argument("--p", type=float, default=2.0)
    ap.add_argument("--u0", type=float, nargs="+", default=[0.12, 1.2])
    ap.add_argument("--gammas", default="0.2:0.9:8",
                    help="lo:hi:count grid of orders")
    ap.add_argument("--k", type=float, default=2e-3,
                    help="finest ladder step; the ladder is 4k, 2k, k")
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--png", action="store_true",
                    help="also render a PNG (needs matplotlib)")
    args = ap.parse_args(argv)

    rows = []
    for u0 in args.u0:
        for g in gamma_grid(args.gammas):
            bounds = blowup_bounds_optimized(g, args.A, args.p, u0)
            problem = ProblemSpec(
                gamma=g, u0=u0, rhs=RhsModel.power_law(args.A, args.p),
                horizon=1.2 * bounds.upper,
            )
            est = estimate_blowup_time(
                problem, (4 * args.k, 2 * args.k, args.k)
            )
            tb = est.extrapolated if est.conclusive else None
            rows.append((g, u0, bounds.lower, bounds.upper, tb))
            tb_text = "inconclusive" if tb is None else f"{tb:.6g}"
            print(f"gamma={g:.3f} u0={u0:g}: "
                  f"[{bounds.lower:.4g}, {bounds.upper:.4g}] T_b={tb_text}")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"blowup_sweep_A{args.A:g}_p{args.p:g}_k{args.k:g}.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["gamma", "u0", "lower_opt", "upper_opt", "tb_extrap"])
        for g, u0, lo, hi, tb in rows:
            writer.writerow(
                ["%.17g" % g, "%.17g" % u0, "%.17g" % lo, "%.17g" % hi,
                 "%.17g" % tb if tb is not None else "inconclusive"]
            )
    print(f"wrote {csv_path}")

    if args.png:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(7, 4.5))
        for u0 in args.u0:
            pts = [(g, lo, hi, tb) for g, u, lo, hi, tb in rows if u == u0]
            gs = [p[0] for p in pts]
            ax.fill_between(
                gs, [p[1] for p in pts], [p[2] for p in pts], alpha=0.2,
                label=f"bounds, u0={u0:g}",
            )
            ax.plot(
                gs, [p[3] for p in pts], marker="o", lw=1.2,
                label=f"T_b extrapolated, u0={u0:g}",
            )
        ax.set_xlabel("gamma")
        ax.set_ylabel("blow-up time")
        ax.set_yscale("log")
        ax.set_title(f"A={args.A:g}, p={args.p:g}")
        ax.legend()
        fig.tight_layout()
        png_path = out_dir / csv_path.with_suffix(".png").name
        fig.savefig(png_path, dpi=150)
        print(f"wrote {png_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
