"""Command line front end: solve runs, bound tables, self-verification.

Configuration precedence is defaults < config file < command line flags. The
config file is flat `key = value` text with `#` comments; keys match the flag
names with `-` and `_` interchangeable. All numbers are serialized with 17
significant digits so output round-trips doubles exactly.
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .analysis import (
    blowup_bounds_closed,
    blowup_bounds_optimized,
    estimate_blowup_time,
)
from .errors import ConvergenceError, DomainError, MlOverflowError
from .problem import ProblemSpec, RhsModel
from .schemes import GridConfig, Scheme, TrajectoryStatus, solve
from .verify import run_checks

__all__ = ["RunConfig", "ConfigError", "main", "cmd_solve", "cmd_bounds",
           "cmd_verify"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

_SCHEME_NAMES = {s.value: s for s in Scheme}
_SWEEPABLE = ("gamma", "A", "p", "u0", "k")


class ConfigError(ValueError):
    """Bad configuration input; always names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one CLI invocation."""

    gamma: float = 0.6
    A: float = 1.0
    p: float = 2.0
    u0: float = 1.2
    k: float = 1e-3
    n_max: int | None = None
    scheme: str = "diff-im"
    horizon: float | None = None
    out: str | None = None
    sweep: tuple = ()
    name_filter: str | None = None


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _parse_number(field_name: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"field {field_name!r}: not a number: {text!r}") from None


def parse_config_file(path: str) -> dict:
    """Flat key = value lines, # comments, keys normalized to underscores."""
    known_float = {"gamma", "A", "p", "u0", "k", "horizon"}
    out: dict = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"field 'config': cannot read {path!r}: {exc}") from None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"field 'config': line {lineno} is not key = value: {raw.rstrip()!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key in known_float:
            out[key] = _parse_number(key, value)
        elif key == "n_max":
            number = _parse_number(key, value)
            if number != int(number):
                raise ConfigError(f"field 'n_max': not an integer: {value!r}")
            out[key] = int(number)
        elif key in ("scheme", "out"):
            out[key] = value
        else:
            raise ConfigError(f"field {key!r}: unknown config field")
    return out


def _parse_sweep(spec: str) -> tuple[str, tuple[float, ...]]:
    if "=" not in spec:
        raise ConfigError(f"field 'sweep': expected NAME=v1,v2,..., got {spec!r}")
    name, _, values = spec.partition("=")
    name = name.strip().replace("-", "_")
    if name not in _SWEEPABLE:
        raise ConfigError(
            f"field 'sweep': {name!r} is not sweepable "
            f"(choose from {', '.join(_SWEEPABLE)})"
        )
    parsed = tuple(
        _parse_number(f"sweep {name}", v.strip()) for v in values.split(",") if v.strip()
    )
    if not parsed:
        raise ConfigError(f"field 'sweep': no values for {name!r}")
    return name, parsed


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="caputo-ode",
        description="Solver and analysis toolkit for D_c^gamma u = A*u^p.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--gamma", type=float, default=None)
        sp.add_argument("--A", type=float, default=None)
        sp.add_argument("--p", type=float, default=None)
        sp.add_argument("--u0", type=float, default=None)
        sp.add_argument("--k", type=float, default=None)
        sp.add_argument("--n-max", type=int, default=None, dest="n_max")
        sp.add_argument(
            "--scheme", choices=sorted(_SCHEME_NAMES), default=None
        )
        sp.add_argument("--horizon", type=float, default=None)
        sp.add_argument("--out", default=None)
        sp.add_argument("--config", default=None)
        sp.add_argument(
            "--sweep", action="append", default=None, metavar="NAME=v1,v2,..."
        )

    add_common(sub.add_parser("solve", help="run one scheme, emit t,u,status CSV"))
    add_common(sub.add_parser("bounds", help="blow-up bound table per gamma"))
    sp_verify = sub.add_parser("verify", help="run named self-checks")
    sp_verify.add_argument("--filter", default=None, dest="name_filter")
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **parse_config_file(args.config))
    cli_fields = {}
    for f in ("gamma", "A", "p", "u0", "k", "n_max", "scheme", "horizon", "out"):
        value = getattr(args, f, None)
        if value is not None:
            cli_fields[f] = value
    if getattr(args, "sweep", None):
        cli_fields["sweep"] = tuple(_parse_sweep(s) for s in args.sweep)
    if getattr(args, "name_filter", None) is not None:
        cli_fields["name_filter"] = args.name_filter
    return replace(cfg, **cli_fields)


def _build_problem_grid(cfg: RunConfig, overrides: dict) -> tuple[ProblemSpec, GridConfig]:
    vals = {
        "gamma": cfg.gamma, "A": cfg.A, "p": cfg.p, "u0": cfg.u0, "k": cfg.k,
    }
    vals.update(overrides)
    scheme = _SCHEME_NAMES.get(cfg.scheme)
    if scheme is None:
        raise ConfigError(
            f"field 'scheme': unknown scheme {cfg.scheme!r} "
            f"(choose from {', '.join(sorted(_SCHEME_NAMES))})"
        )
    k = vals["k"]
    if not (math.isfinite(k) and k > 0.0):
        raise ConfigError(f"field 'k': step must be positive, got {k!r}")
    n_max, horizon = cfg.n_max, cfg.horizon
    if n_max is None:
        horizon = horizon if horizon is not None else 1.0
        n_max = int(math.floor(horizon / k * (1.0 + 1e-12)))
        if n_max < 1:
            raise ConfigError(
                f"field 'horizon': {horizon!r} admits no step of size {k!r}"
            )
    elif horizon is None:
        horizon = k * n_max
    try:
        problem = ProblemSpec(
            gamma=vals["gamma"], u0=vals["u0"],
            rhs=RhsModel.power_law(vals["A"], vals["p"]), horizon=horizon,
        )
        grid = GridConfig(k=k, n_max=n_max, scheme=scheme)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    return problem, grid


def _solve_rows(cfg: RunConfig, overrides: dict) -> list[tuple[str, str, str]]:
    problem, grid = _build_problem_grid(cfg, overrides)
    try:
        traj = solve(problem, grid)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    k = grid.k
    rows = [
        (_fmt(n * k), _fmt(u), "ok") for n, u in enumerate(traj.values)
    ]
    if traj.status is TrajectoryStatus.BLOWUP_BREAK:
        rows.append((_fmt(traj.numerical_blowup_time), "", "blowup"))
    elif traj.status is TrajectoryStatus.DOMAIN_EXIT:
        rows.append((_fmt(traj.n_star * k), "", "domain-exit"))
    return rows


def _sweep_combos(cfg: RunConfig) -> tuple[list[str], list[dict]]:
    if not cfg.sweep:
        return [], [{}]
    names = [name for name, _ in cfg.sweep]
    axes = [values for _, values in cfg.sweep]
    combos = [
        dict(zip(names, point)) for point in itertools.product(*axes)
    ]
    return names, combos


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(cfg: RunConfig) -> int:
    """Run the configured scheme (or a sweep of them), emit CSV."""
    _, combos = _sweep_combos(cfg)
    if len(combos) == 1:
        blocks = [_solve_rows(cfg, combos[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(combos))) as pool:
            blocks = list(pool.map(lambda ov: _solve_rows(cfg, ov), combos))
    lines = []
    if cfg.sweep:
        lines.append("run,t,u,status")
        for run, block in enumerate(blocks):
            lines.extend(f"{run},{t},{u},{s}" for t, u, s in block)
    else:
        lines.append("t,u,status")
        lines.extend(f"{t},{u},{s}" for t, u, s in blocks[0])
    _emit(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


_INCONCLUSIVE = "inconclusive"


def _bounds_row(cfg: RunConfig, g: float) -> str:
    cells = [_fmt(g)]
    if cfg.p <= 1.0 or cfg.A <= 0.0 or not (0.0 < g < 1.0):
        return ",".join(cells + [_INCONCLUSIVE] * 5)
    closed = blowup_bounds_closed(g, cfg.A, cfg.p, cfg.u0)
    opt = blowup_bounds_optimized(g, cfg.A, cfg.p, cfg.u0)
    cells += [_fmt(closed.lower), _fmt(closed.upper), _fmt(opt.lower),
              _fmt(opt.upper)]
    horizon = cfg.horizon if cfg.horizon is not None else 1.25 * opt.upper
    problem = ProblemSpec(
        gamma=g, u0=cfg.u0, rhs=RhsModel.power_law(cfg.A, cfg.p),
        horizon=horizon,
    )
    ladder = (4.0 * cfg.k, 2.0 * cfg.k, cfg.k)
    est = estimate_blowup_time(problem, ladder)
    cells.append(_fmt(est.extrapolated) if est.conclusive else _INCONCLUSIVE)
    return ",".join(cells)


def cmd_bounds(cfg: RunConfig) -> int:
    """Closed-form and optimized blow-up bounds plus numerical T_b per gamma."""
    for name, _ in cfg.sweep:
        if name != "gamma":
            raise ConfigError(
                f"field 'sweep': bounds sweeps only over gamma, got {name!r}"
            )
    gammas = list(cfg.sweep[0][1]) if cfg.sweep else [cfg.gamma]
    if len(gammas) == 1:
        rows = [_bounds_row(cfg, gammas[0])]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(gammas))) as pool:
            rows = list(pool.map(lambda g: _bounds_row(cfg, g), gammas))
    header = "gamma,lower_cf,upper_cf,lower_opt,upper_opt,Tb_num"
    _emit(cfg, "\n".join([header] + rows) + "\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    """Run the named self-checks and print a pass/fail table."""
    try:
        results = run_checks(cfg.name_filter)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    width = max(len(r.name) for r in results)
    all_ok = True
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        all_ok &= r.passed
        line = f"{r.name:<{width}}  {mark}"
        if r.detail:
            line += f"  {r.detail}"
        print(line)
    return EXIT_OK if all_ok else EXIT_VERIFY


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.verb == "solve":
            return cmd_solve(cfg)
        if args.verb == "bounds":
            return cmd_bounds(cfg)
        return cmd_verify(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, MlOverflowError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
