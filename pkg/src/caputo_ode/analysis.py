"""Blow-up and decay analysis for the power law f(u) = A*u^p.

Bounds on the blow-up time come in two strengths: the closed-form constants
G(p) and H(p, gamma), and a numerically optimized version of the variational
bounds they were derived from,

    C * sup_{r>1} (r^g - 1)^(1/g) / (r^p - r)
      <= T_b <=
    C * inf_{r>1, m>=1} [ r^p/(r^((m+1)(p-1)) - r^(m(p-1)))
                          + ((1 - r^(m*g*(1-p)))/(p-1))^(1/g) ],

with C = (Gamma(1+g)/(A*u0^(p-1)))^(1/g). The optimized interval is clipped
against the closed form, so it can only ever tighten it: the upper objective
attains the closed (1/(p-1))^(1/g) branch only in the r -> infinity limit,
which no finite grid reaches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, InsufficientDataError
from .problem import ProblemSpec, RhsModel, eval_rhs
from .schemes import (
    GridConfig,
    Scheme,
    Trajectory,
    TrajectoryStatus,
    solve_diff_implicit,
)
from .specfun import MlOrder, gamma_fn

__all__ = [
    "BoundsMethod",
    "BlowupBounds",
    "CriticalValues",
    "GrowthFit",
    "BlowupEstimate",
    "DecayCheck",
    "OsgoodReport",
    "blowup_bounds_closed",
    "blowup_bounds_optimized",
    "critical_initial_values",
    "osgood_blows_up",
    "osgood_report",
    "estimate_blowup_time",
    "fit_blowup_exponent",
    "decay_lower_bound_check",
    "check_ordering",
]


class BoundsMethod(Enum):
    CLOSED_FORM = "closed-form"
    OPTIMIZED = "optimized"


@dataclass(frozen=True)
class BlowupBounds:
    """Interval [lower, upper] certified to contain the blow-up time.

    G and H are the effective constants implied by the interval through
    lower = (Gamma(1+g)/(A u0^(p-1) G))^(1/g) and likewise for upper; for the
    closed form they are exactly G(p) and H(p, gamma). fallback marks an
    optimized request that degraded to the closed form.
    """

    lower: float
    upper: float
    G: float
    H: float
    method: BoundsMethod
    fallback: bool = False

    def __post_init__(self) -> None:
        if not (0.0 < self.lower <= self.upper):
            raise DomainError(
                f"bounds must satisfy 0 < lower <= upper, "
                f"got [{self.lower!r}, {self.upper!r}]"
            )


@dataclass(frozen=True)
class CriticalValues:
    """Thresholds for the initial value in the gamma -> 0 memory limit.

    Below u01 the blow-up time diverges as gamma -> 0, above u02 it vanishes.
    u_crit is the conjectured exact threshold from the limiting algebraic
    equation u - u0 = A*u^p; reported, never asserted.
    """

    u01: float
    u02: float
    u_crit: float


def _power_blowup_params(gamma, A: float, p: float, u0: float):
    g = float(gamma)
    if not 0.0 < g < 1.0:
        raise DomainError(f"bounds need order in (0, 1), got {gamma!r}")
    A, p, u0 = float(A), float(p), float(u0)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError(f"bounds need A > 0, got {A!r}")
    if not (math.isfinite(p) and p > 1.0):
        raise DomainError(f"bounds need p > 1, got {p!r}")
    if not (math.isfinite(u0) and u0 > 0.0):
        raise DomainError(f"bounds need u0 > 0, got {u0!r}")
    return g, A, p, u0


def _bounds_scale(g: float, A: float, p: float, u0: float) -> float:
    # C = (Gamma(1+g)/(A u0^(p-1)))^(1/g)
    return (gamma_fn(1.0 + g) / (A * u0 ** (p - 1.0))) ** (1.0 / g)


def blowup_bounds_closed(gamma, A: float, p: float, u0: float) -> BlowupBounds:
    """Closed-form interval with G(p) = min(2^p, p^p/(p-1)^(p-1)) and
    H(p, g) = max(p-1, 2^(-p*g/(p-1)))."""
    g, A, p, u0 = _power_blowup_params(gamma, A, p, u0)
    G = min(2.0**p, p**p / (p - 1.0) ** (p - 1.0))
    H = max(p - 1.0, 2.0 ** (-p * g / (p - 1.0)))
    base = gamma_fn(1.0 + g) / (A * u0 ** (p - 1.0))
    lower = (base / G) ** (1.0 / g)
    upper = (base / H) ** (1.0 / g)
    return BlowupBounds(
        lower=lower, upper=upper, G=G, H=H, method=BoundsMethod.CLOSED_FORM
    )


def _golden_max(fn, lo: float, hi: float, iters: int = 90) -> float:
    """Argmax of a unimodal fn on [lo, hi] by golden-section search."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def _lower_objective(g: float, p: float):
    # log r parametrization keeps r^p - r well-conditioned near r = 1
    def phi(lr: float) -> float:
        if lr <= 0.0:
            return 0.0
        num = (1.0 / g) * math.log(math.expm1(g * lr))
        den_exp = (p - 1.0) * lr
        if den_exp > 700.0:
            return 0.0
        den = lr + math.log(math.expm1(den_exp)) if den_exp > 0 else math.inf
        val = num - den
        return math.exp(val) if val < 700.0 else math.inf

    return phi


def _upper_objective(g: float, p: float, m: int):
    q = p - 1.0

    def psi(lr: float) -> float:
        if lr <= 0.0:
            return math.inf
        den_exp = m * q * lr
        if den_exp > 690.0:
            first = 0.0
        else:
            first_ln = p * lr - den_exp - math.log(math.expm1(q * lr))
            first = math.exp(first_ln) if first_ln < 700.0 else math.inf
        second = (-math.expm1(-m * g * q * lr) / q) ** (1.0 / g)
        return first + second

    return psi


def blowup_bounds_optimized(gamma, A: float, p: float, u0: float) -> BlowupBounds:
    """Numerically optimized variational interval, clipped to the closed form.

    Lower: coarse log grid in r with the closed form's witnesses r = 2^(1/g)
    and (p/(p-1))^(1/g) seeded, then golden-section refinement around the
    best bracket. Upper: the same per m over m = 1..64.
    """
    g, A, p, u0 = _power_blowup_params(gamma, A, p, u0)
    closed = blowup_bounds_closed(gamma, A, p, u0)
    C = _bounds_scale(g, A, p, u0)
    try:
        lo_factor = _optimize_lower(g, p)
        up_factor = _optimize_upper(g, p)
    except (OverflowError, ValueError, FloatingPointError):
        return BlowupBounds(
            lower=closed.lower, upper=closed.upper, G=closed.G, H=closed.H,
            method=BoundsMethod.CLOSED_FORM, fallback=True,
        )
    lower = max(closed.lower, C * lo_factor)
    upper = min(closed.upper, C * up_factor)
    if not (0.0 < lower <= upper) or not math.isfinite(upper):
        return BlowupBounds(
            lower=closed.lower, upper=closed.upper, G=closed.G, H=closed.H,
            method=BoundsMethod.CLOSED_FORM, fallback=True,
        )
    base = gamma_fn(1.0 + g) / (A * u0 ** (p - 1.0))
    G_eff = base / lower**g
    H_eff = base / upper**g
    return BlowupBounds(
        lower=lower, upper=upper, G=G_eff, H=H_eff, method=BoundsMethod.OPTIMIZED
    )


def _optimize_lower(g: float, p: float) -> float:
    phi = _lower_objective(g, p)
    seeds = [math.log(2.0) / g, math.log(p / (p - 1.0)) / g]
    lr_max = max(10.0, 4.0 * max(seeds))
    grid = list(np.geomspace(1e-6, lr_max, 400)) + seeds
    grid.sort()
    vals = [phi(lr) for lr in grid]
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    best_lr = _golden_max(phi, lo, hi)
    return max(vals[i], phi(best_lr))


def _optimize_upper(g: float, p: float) -> float:
    best = math.inf
    q = p - 1.0
    for m in range(1, 65):
        psi = _upper_objective(g, p, m)
        seeds = [math.log(2.0) / q] if m == 1 else []
        lr_max = min(600.0 / max(m * q, 1.0), 600.0 / p)
        grid = list(np.geomspace(1e-6, lr_max, 200)) + [
            s for s in seeds if s < lr_max
        ]
        grid.sort()
        vals = [psi(lr) for lr in grid]
        i = int(np.argmin(vals))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        best_lr = _golden_max(lambda lr: -psi(lr), lo, hi)
        best = min(best, vals[i], psi(best_lr))
    return best


def critical_initial_values(A: float, p: float) -> CriticalValues:
    """u01, u02 from the bound constants and the conjectured u_crit."""
    A, p = float(A), float(p)
    if not (math.isfinite(A) and A > 0.0):
        raise DomainError(f"critical values need A > 0, got {A!r}")
    if not (math.isfinite(p) and p > 1.0):
        raise DomainError(f"critical values need p > 1, got {p!r}")
    s = A ** (-1.0 / (p - 1.0))
    u01 = s * max(2.0 ** (-p / (p - 1.0)), (p - 1.0) / p ** (p / (p - 1.0)))
    u02 = s * min(1.0, (1.0 / (p - 1.0)) ** (1.0 / (p - 1.0)))
    u_crit = (p - 1.0) / p * (1.0 / (p * A)) ** (1.0 / (p - 1.0))
    return CriticalValues(u01=u01, u02=u02, u_crit=u_crit)


@dataclass(frozen=True)
class OsgoodReport:
    """Outcome of the blow-up integral test with diagnostics.

    tail_exponent is the fitted local exponent s of the integrand near the
    far end of the quadrature window; the tail converges when s > 1. The
    confidence flag drops when s sits too close to 1 to call.
    """

    blows_up: bool
    integral_head: float
    tail_exponent: float
    confident: bool
    analytic: bool


def osgood_blows_up(rhs: RhsModel, gamma, U: float = 1.0) -> bool:
    """Does int_U^inf (u/f(u))^(1/g) du/u converge?

    Convergence of this integral is equivalent to finite-time blow-up for
    positive nondecreasing f. Power laws are answered exactly (p > 1);
    anything else is quadrature on [U, 1e6*U] plus a tail-exponent fit.
    """
    return osgood_report(rhs, gamma, U).blows_up


def osgood_report(rhs: RhsModel, gamma, U: float = 1.0) -> OsgoodReport:
    g = float(gamma)
    if not 0.0 < g < 1.0:
        raise DomainError(f"criterion needs order in (0, 1), got {gamma!r}")
    U = float(U)
    if not (math.isfinite(U) and U > 0.0):
        raise DomainError(f"criterion needs U > 0, got {U!r}")
    if rhs.is_power_law():
        if rhs.A <= 0.0:
            raise DomainError("criterion needs f positive: power law with A > 0")
        # (u/(A u^p))^(1/g)/u = A^(-1/g) u^((1-p)/g - 1): converges iff p > 1
        return OsgoodReport(
            blows_up=rhs.p > 1.0,
            integral_head=math.nan,
            tail_exponent=1.0 + (rhs.p - 1.0) / g,
            confident=True,
            analytic=True,
        )
    if not rhs.nondecreasing:
        raise DomainError("criterion hypotheses: f must be flagged nondecreasing")
    f_U = eval_rhs(rhs, U)
    if not f_U > 0.0:
        raise DomainError(f"criterion hypotheses: f(U) > 0 required, got {f_U!r}")

    def integrand(v: float) -> float:
        # substitute u = U*exp(v); du/u = dv
        u = U * math.exp(v)
        return (u / eval_rhs(rhs, u)) ** (1.0 / g)

    v_end = math.log(1e6)
    head, _ = quad(integrand, 0.0, v_end, limit=300)
    # local exponent of h(u) = (u/f)^(1/g)/u near the window end: the tail
    # integral behaves like u^(1-s)/(s-1), finite iff s > 1
    u1, u2 = U * 1e5, U * 1e6
    h1 = (u1 / eval_rhs(rhs, u1)) ** (1.0 / g) / u1
    h2 = (u2 / eval_rhs(rhs, u2)) ** (1.0 / g) / u2
    if h2 <= 0.0 or h1 <= 0.0:
        raise DomainError("criterion hypotheses: f must stay positive")
    s = -(math.log(h2) - math.log(h1)) / (math.log(u2) - math.log(u1))
    confident = abs(s - 1.0) > 0.05
    return OsgoodReport(
        blows_up=s > 1.0,
        integral_head=head,
        tail_exponent=s,
        confident=confident,
        analytic=False,
    )


@dataclass(frozen=True)
class BlowupEstimate:
    """Numerical blow-up times per step with a k^gamma extrapolation.

    conclusive is False when any ladder run completed without a break; in
    that case extrapolated is None and per_k holds None for those runs.
    """

    k_ladder: tuple
    per_k: tuple
    extrapolated: float | None
    conclusive: bool


def estimate_blowup_time(problem: ProblemSpec, k_ladder) -> BlowupEstimate:
    """Implicit-scheme break times T_b(k), extrapolated linearly in k^gamma.

    The extrapolation uses the two finest steps: with T(k) = T + c*k^g, the
    pair solves exactly to T = (T2*k1^g - T1*k2^g)/(k1^g - k2^g).
    """
    ks = tuple(float(k) for k in k_ladder)
    if len(ks) < 2:
        raise DomainError("need at least two steps to extrapolate")
    if any(not (math.isfinite(k) and k > 0.0) for k in ks):
        raise DomainError(f"steps must be positive, got {k_ladder!r}")
    g = problem.gamma_value
    per_k = []
    for k in ks:
        grid = GridConfig.for_horizon(k, problem.horizon, Scheme.DIFF_IMPLICIT)
        traj = solve_diff_implicit(problem, grid)
        per_k.append(traj.numerical_blowup_time)
    if any(t is None for t in per_k):
        return BlowupEstimate(
            k_ladder=ks, per_k=tuple(per_k), extrapolated=None, conclusive=False
        )
    order = sorted(range(len(ks)), key=lambda i: ks[i])
    k2, k1 = ks[order[0]], ks[order[1]]  # k2 finest
    t2, t1 = per_k[order[0]], per_k[order[1]]
    extr = (t2 * k1**g - t1 * k2**g) / (k1**g - k2**g)
    return BlowupEstimate(
        k_ladder=ks, per_k=tuple(per_k), extrapolated=extr, conclusive=True
    )


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares fit of the blow-up profile u - u0 ~ amp * X^exponent,
    X = (T_b - t)^(-1) - T_b^(-1), against the predicted exponent
    g/(p-1) and amplitude [Gamma(p*g/(p-1))/(A*Gamma(g/(p-1)))]^(1/(p-1))."""

    exponent: float
    amplitude: float
    theoretical_exponent: float
    theoretical_amplitude: float
    n_samples: int
    window: float


def fit_blowup_exponent(
    trajectory: Trajectory,
    t_b: float,
    window: float = 0.2,
    *,
    problem: ProblemSpec,
) -> GrowthFit:
    """Fit log(u - u0) against log((T_b - t)^(-1) - T_b^(-1)).

    The trajectory must have ended in a blow-up break; samples are the steps
    with t >= (1 - window)*T_b. The problem supplies gamma, A, p for the
    theoretical profile.
    """
    if trajectory.status is not TrajectoryStatus.BLOWUP_BREAK:
        raise DomainError("growth fit needs a trajectory that broke")
    t_b = float(t_b)
    if not (math.isfinite(t_b) and t_b > 0.0):
        raise DomainError(f"blow-up time must be positive, got {t_b!r}")
    window = float(window)
    if not 0.0 < window < 1.0:
        raise DomainError(f"window must be a fraction in (0, 1), got {window!r}")
    rhs = problem.rhs
    if not rhs.is_power_law() or rhs.A <= 0.0 or rhs.p <= 1.0:
        raise DomainError("growth profile is defined for power laws with "
                          "A > 0, p > 1")
    g, A, p = problem.gamma_value, rhs.A, rhs.p
    u0 = problem.u0
    times = trajectory.times
    values = trajectory.values
    mask = (times >= (1.0 - window) * t_b) & (times < t_b) & (values > u0)
    n = int(np.count_nonzero(mask))
    if n < 8:
        raise InsufficientDataError(
            f"only {n} usable samples in the fit window; need 8"
        )
    t_s = times[mask]
    x = np.log(1.0 / (t_b - t_s) - 1.0 / t_b)
    y = np.log(values[mask] - u0)
    slope, intercept = np.polyfit(x, y, 1)
    q = p - 1.0
    theo_amp = (gamma_fn(p * g / q) / (A * gamma_fn(g / q))) ** (1.0 / q)
    return GrowthFit(
        exponent=float(slope),
        amplitude=float(math.exp(intercept)),
        theoretical_exponent=g / q,
        theoretical_amplitude=theo_amp,
        n_samples=n,
        window=window,
    )


@dataclass(frozen=True)
class DecayCheck:
    """Outcome of the slow-decay lower bound u^p >= (u0/(2|A|)) t^(-g)/Gamma(1-g).

    margin is the minimum of lhs/rhs over the checked samples; holds means
    margin >= 1. t_min is where the check started (the bound only applies
    for large enough t).
    """

    holds: bool
    margin: float
    t_min: float
    n_samples: int


def decay_lower_bound_check(
    trajectory: Trajectory,
    problem: ProblemSpec,
    t_min: float | None = None,
) -> DecayCheck:
    """Check the memory-induced decay floor on the tail of a decaying run.

    Defaults to the second half of the trajectory window when t_min is not
    given.
    """
    rhs = problem.rhs
    if not rhs.is_power_law() or rhs.A >= 0.0 or rhs.p < 1.0:
        raise DomainError("decay bound is stated for power laws with "
                          "A < 0, p >= 1")
    g = problem.gamma_value
    if g >= 1.0:
        raise DomainError("decay bound needs order strictly below 1")
    values = trajectory.values
    if not np.all(values > 0.0):
        raise DomainError("decay bound needs a trajectory positive throughout")
    times = trajectory.times
    t_end = float(times[-1])
    if t_min is None:
        t_min = 0.5 * t_end
    t_min = float(t_min)
    if not (0.0 < t_min < t_end):
        raise DomainError(
            f"t_min must fall inside the trajectory window (0, {t_end!r}), "
            f"got {t_min!r}"
        )
    mask = times >= t_min
    t_s = times[mask]
    floor = (problem.u0 / (2.0 * abs(rhs.A))) * t_s ** (-g) / gamma_fn(1.0 - g)
    ratio = values[mask] ** rhs.p / floor
    margin = float(np.min(ratio))
    return DecayCheck(
        holds=margin >= 1.0,
        margin=margin,
        t_min=t_min,
        n_samples=int(t_s.shape[0]),
    )


def check_ordering(traj_low: Trajectory, traj_high: Trajectory) -> bool:
    """True iff the low run stays at or below the high run at every shared step.

    Solution curves from ordered initial data never cross; a violation in the
    discrete output signals a scheme bug.
    """
    if not math.isclose(traj_low.k, traj_high.k, rel_tol=1e-12):
        raise DomainError(
            f"grids differ: k={traj_low.k!r} vs {traj_high.k!r}"
        )
    n = min(traj_low.values.shape[0], traj_high.values.shape[0])
    return bool(np.all(traj_low.values[:n] <= traj_high.values[:n]))
