#!/usr/bin/env python3
"""Regenerate the golden fixture CSVs shipped with the package.

Every row is recomputed from scratch by `caputo-ode verify`, so these files
are only a determinism anchor: regenerating on the same platform must be a
no-op, and a diff after a code change is a visible behavioural change.

Usage: python scripts/make_fixtures.py [--out-dir src/caputo_ode/fixtures]
"""

from __future__ import annotations

import argparse
import csv
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from caputo_ode import (  # noqa: E402
    GridConfig,
    ProblemSpec,
    RhsModel,
    Scheme,
    decay_lower_bound_check,
    fit_blowup_exponent,
    refined_reference,
    solve_diff_implicit,
)

FMT = "%.17g"


def _row(values) -> list[str]:
    return [v if isinstance(v, str) else FMT % v for v in values]


def write_reference_values(path: pathlib.Path) -> None:
    cases = [
        # gamma, A, p, u0, t, tol; blow-up cases keep t below the proven
        # lower bound on T_b so the ladder cannot run past the solution
        (0.3, 1.0, 2.0, 1.2, 0.0025, 1e-7),
        (0.5, 1.0, 2.0, 1.2, 0.03, 1e-7),
        (0.6, 1.0, 2.0, 1.2, 0.01, 1e-7),
        (0.6, 1.0, 2.0, 1.2, 0.10, 1e-7),
        (0.6, 1.0, 2.0, 0.12, 1.00, 1e-7),
        (0.8, 1.0, 3.0, 0.9, 0.20, 1e-7),
        (0.5, -1.0, 2.0, 1.0, 2.00, 1e-7),
        (0.7, -2.0, 1.5, 0.8, 1.00, 1e-7),
    ]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "A", "p", "u0", "t", "tol", "value"])
        for g, A, p, u0, t, tol in cases:
            problem = ProblemSpec(
                gamma=g, u0=u0, rhs=RhsModel.power_law(A, p), horizon=t
            )
            value = refined_reference(problem, t, tol)
            w.writerow(_row([g, A, p, u0, t, tol, value]))


def write_blowup_times(path: pathlib.Path) -> None:
    cases = [
        # gamma, A, p, u0, k, horizon
        (0.6, 1.0, 2.0, 1.2, 4e-3, 1.0),
        (0.6, 1.0, 2.0, 1.2, 2e-3, 1.0),
        (0.6, 1.0, 2.0, 1.2, 1e-3, 1.0),
        (0.3, 1.0, 2.0, 1.2, 1e-3, 2.0),
        (0.9, 1.0, 2.0, 1.2, 1e-3, 1.0),
        (0.6, 1.0, 2.0, 0.12, 4e-3, 16.0),
    ]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "A", "p", "u0", "k", "horizon", "tb_k"])
        for g, A, p, u0, k, horizon in cases:
            problem = ProblemSpec(
                gamma=g, u0=u0, rhs=RhsModel.power_law(A, p), horizon=horizon
            )
            grid = GridConfig.for_horizon(k, horizon, Scheme.DIFF_IMPLICIT)
            traj = solve_diff_implicit(problem, grid)
            tb = traj.numerical_blowup_time
            if tb is None:
                raise SystemExit(f"no break for {g=} {u0=} {k=} within {horizon=}")
            w.writerow(_row([g, A, p, u0, k, horizon, tb]))


def write_decay_margin(path: pathlib.Path) -> None:
    cases = [
        # gamma, A, p, u0, k, horizon, t_min
        (0.5, -1.0, 2.0, 1.0, 1.25e-3, 50.0, 10.0),
        (0.5, -1.0, 2.0, 1.0, 1.25e-3, 50.0, 25.0),
        (0.7, -1.0, 3.0, 2.0, 1e-3, 20.0, 10.0),
    ]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["gamma", "A", "p", "u0", "k", "horizon", "t_min", "margin"])
        for g, A, p, u0, k, horizon, t_min in cases:
            problem = ProblemSpec(
                gamma=g, u0=u0, rhs=RhsModel.power_law(A, p), horizon=horizon
            )
            grid = GridConfig.for_horizon(k, horizon, Scheme.DIFF_IMPLICIT)
            traj = solve_diff_implicit(problem, grid)
            res = decay_lower_bound_check(traj, problem, t_min=t_min)
            if not res.holds:
                raise SystemExit(f"decay floor failed for {g=} {u0=} {t_min=}")
            w.writerow(_row([g, A, p, u0, k, horizon, t_min, res.margin]))


def write_growth_fit(path: pathlib.Path) -> None:
    cases = [
        # gamma, A, p, u0, k, horizon, window
        (0.6, 1.0, 2.0, 0.12, 1e-4, 12.0, 0.2),
        (0.6, 1.0, 2.0, 1.2, 1e-4, 1.0, 0.2),
    ]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(
            ["gamma", "A", "p", "u0", "k", "horizon", "window",
             "exponent", "amplitude"]
        )
        for g, A, p, u0, k, horizon, window in cases:
            problem = ProblemSpec(
                gamma=g, u0=u0, rhs=RhsModel.power_law(A, p), horizon=horizon
            )
            grid = GridConfig.for_horizon(k, horizon, Scheme.DIFF_IMPLICIT)
            traj = solve_diff_implicit(problem, grid)
            tb = traj.numerical_blowup_time
            if tb is None:
                raise SystemExit(f"no break for {g=} {u0=} {k=} within {horizon=}")
            fit = fit_blowup_exponent(traj, tb, window, problem=problem)
            w.writerow(
                _row([g, A, p, u0, k, horizon, window, fit.exponent,
                      fit.amplitude])
            )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out-dir",
        default=str(
            pathlib.Path(__file__).resolve().parent.parent
            / "src" / "caputo_ode" / "fixtures"
        ),
    )
    args = parser.parse_args()
    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_reference_values(out / "reference_values.csv")
    print("reference_values.csv")
    write_blowup_times(out / "blowup_times.csv")
    print("blowup_times.csv")
    write_decay_margin(out / "decay_margin.csv")
    print("decay_margin.csv")
    write_growth_fit(out / "growth_fit.csv")
    print("growth_fit.csv")


if __name__ == "__main__":
    main()
