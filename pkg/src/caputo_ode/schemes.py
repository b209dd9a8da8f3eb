"""Time-stepping schemes for D_c^gamma u = f(u) on a uniform grid t_n = n*k.

Two families:

* integral schemes discretize the Volterra form with product weights
  (n-m)^g - (n-m-1)^g or rectangle weights (n-m)^(g-1) applied to f(u^m);
* differential schemes discretize the derivative itself with the backward
  piecewise-linear coefficient table b_m, explicitly or implicitly.

Every step needs the full history, so one solve is an O(N^2) pass. The
convolutions are arranged as dot products against a reversed weight table,
which keeps the inner loop in BLAS and makes 10^5 step runs routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConvergenceError, DomainError, MissingDerivativeError
from .problem import (
    POWER_LAW,
    ProblemSpec,
    RhsModel,
    eval_rhs,
    eval_rhs_derivative,
    rhs_callable,
)
from .specfun import gamma_fn

__all__ = [
    "Scheme",
    "TrajectoryStatus",
    "GridConfig",
    "L1Weights",
    "Trajectory",
    "l1_weights",
    "apply_discrete_caputo",
    "solve",
    "solve_integral_product",
    "solve_integral_rectangle",
    "solve_diff_explicit",
    "solve_diff_implicit",
]

# step cap: a float64 value and an f(value) per step, ~16 bytes each
_N_MAX_LIMIT = 20_000_000


class Scheme(Enum):
    INTEGRAL_PRODUCT = "int-prod"
    INTEGRAL_RECTANGLE = "int-rect"
    DIFF_EXPLICIT = "diff-ex"
    DIFF_IMPLICIT = "diff-im"


class TrajectoryStatus(Enum):
    COMPLETED = "completed"
    BLOWUP_BREAK = "blowup"
    DOMAIN_EXIT = "domain-exit"


@dataclass(frozen=True)
class GridConfig:
    """Uniform grid: step k, step count cap n_max, scheme selector."""

    k: float
    n_max: int
    scheme: Scheme

    def __post_init__(self) -> None:
        k = float(self.k)
        if not math.isfinite(k) or k <= 0.0:
            raise DomainError(f"step must be positive, got {self.k!r}")
        object.__setattr__(self, "k", k)
        n = self.n_max
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
            raise DomainError(f"n_max must be an integer >= 1, got {n!r}")
        if n > _N_MAX_LIMIT:
            raise DomainError(
                f"n_max={n} exceeds the memory guard of {_N_MAX_LIMIT} steps"
            )
        object.__setattr__(self, "n_max", int(n))
        if not isinstance(self.scheme, Scheme):
            raise DomainError(f"scheme must be a Scheme, got {self.scheme!r}")

    @classmethod
    def for_horizon(cls, k: float, horizon: float, scheme: Scheme) -> "GridConfig":
        """Largest grid with k*n_max <= horizon (up to float slack)."""
        n = int(math.floor(float(horizon) / float(k) * (1.0 + 1e-12)))
        return cls(k=k, n_max=max(n, 1), scheme=scheme)


@dataclass(frozen=True)
class L1Weights:
    """Backward-difference coefficient table of the discrete operator.

    Row n+1 of the operator reads
        k^(-g) * (b[0]*u^{n+1} + sum_{m=1..n} b[m]*u^{n+1-m} + tail(n+1)*u^0)
    so b holds the interior coefficients and tail() the one multiplying the
    initial value. Rows sum to zero: constants are annihilated exactly.
    """

    gamma: float
    b: np.ndarray

    def tail(self, row: int) -> float:
        """Coefficient on u^0 in the operator row for target index `row`."""
        if row < 1:
            raise DomainError(f"tail coefficient needs row >= 1, got {row!r}")
        g = self.gamma
        if g == 1.0:
            return -1.0 if row == 1 else 0.0
        e = 1.0 - g
        return ((row - 1.0) ** e - float(row) ** e) / math.gamma(2.0 - g)


def l1_weights(gamma, n: int) -> L1Weights:
    """Coefficient table b[0..n] for operator rows up to target index n+1."""
    g = float(gamma)
    if not 0.0 < g <= 1.0:
        raise DomainError(f"order must lie in (0, 1], got {gamma!r}")
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise DomainError(f"table length n must be an integer >= 0, got {n!r}")
    b = np.zeros(n + 1)
    if g == 1.0:
        # backward Euler limit: (u^{n+1} - u^n)/k
        b[0] = 1.0
        if n >= 1:
            b[1] = -1.0
        return L1Weights(gamma=g, b=b)
    e = 1.0 - g
    c = 1.0 / math.gamma(2.0 - g)
    b[0] = c
    if n >= 1:
        m = np.arange(1, n + 1, dtype=float)
        b[1:] = c * ((m + 1.0) ** e - 2.0 * m**e + (m - 1.0) ** e)
    return L1Weights(gamma=g, b=b)


def apply_discrete_caputo(values, weights: L1Weights, n: int, k: float) -> float:
    """Discrete Caputo derivative at target index n+1.

    values must supply u^0..u^{n+1}; weights must cover the interior
    coefficients b[1..n].
    """
    values = np.asarray(values, dtype=float)
    if values.shape[0] < n + 2:
        raise DomainError(
            f"need at least {n + 2} values for target index {n + 1}, "
            f"got {values.shape[0]}"
        )
    if weights.b.shape[0] < n + 1:
        raise DomainError(
            f"weight table covers b[0..{weights.b.shape[0] - 1}], "
            f"row {n + 1} needs b[0..{n}]"
        )
    k = float(k)
    if not k > 0.0:
        raise DomainError(f"step must be positive, got {k!r}")
    # sum_{m=0..n} b[m]*u^{n+1-m}: reverse the value window to align with b
    window = values[1 : n + 2][::-1]
    acc = float(np.dot(weights.b[: n + 1], window))
    acc += weights.tail(n + 1) * float(values[0])
    return k ** (-weights.gamma) * acc


@dataclass(frozen=True)
class Trajectory:
    """Output of one solve: grid step, values u^0..u^N, termination status.

    For BLOWUP_BREAK, n_star is the first step index with no admissible
    implicit root; for DOMAIN_EXIT it is the index whose value left the
    domain of f (non-finite, or u <= 0). values always ends at n_star - 1.
    """

    k: float
    values: np.ndarray
    status: TrajectoryStatus
    n_star: int | None = None

    def __post_init__(self) -> None:
        if self.status is TrajectoryStatus.COMPLETED:
            if self.n_star is not None:
                raise DomainError("completed trajectory carries no n_star")
        elif self.n_star is None or self.n_star < 1:
            raise DomainError("truncated trajectory needs n_star >= 1")

    @property
    def times(self) -> np.ndarray:
        return self.k * np.arange(self.values.shape[0])

    @property
    def numerical_blowup_time(self) -> float | None:
        if self.status is TrajectoryStatus.BLOWUP_BREAK:
            return self.n_star * self.k
        return None


def _check_grid(problem: ProblemSpec, grid: GridConfig, expect: Scheme) -> None:
    if grid.scheme is not expect:
        raise DomainError(
            f"grid is configured for {grid.scheme.value}, "
            f"solver implements {expect.value}"
        )
    if grid.k * grid.n_max > problem.horizon + grid.k * (1.0 + 1e-9):
        raise DomainError(
            f"grid reaches t={grid.k * grid.n_max!r} beyond the horizon "
            f"{problem.horizon!r} plus one step"
        )


def _admissible(rhs: RhsModel, u: float) -> bool:
    # domain of every supported rhs is u > 0; non-finite never passes
    return math.isfinite(u) and u > 0.0


def _bad_value_status(u: float) -> TrajectoryStatus:
    # overflow (or inf - inf noise from it) is the blow-up signal for the
    # always-computable schemes; only a finite value can leave the domain
    if math.isfinite(u):
        return TrajectoryStatus.DOMAIN_EXIT
    return TrajectoryStatus.BLOWUP_BREAK


def _solve_integral(
    problem: ProblemSpec, grid: GridConfig, product: bool
) -> Trajectory:
    g = problem.gamma_value
    k, n_max = grid.k, grid.n_max
    j = np.arange(n_max + 1, dtype=float)
    if product:
        w = j**g - np.maximum(j - 1.0, 0.0) ** g
        c = k**g / gamma_fn(1.0 + g)
    else:
        w = np.empty(n_max + 1)
        w[0] = 0.0  # never used: weights start at lag 1
        w[1:] = j[1:] ** (g - 1.0)
        c = k**g / gamma_fn(g)
    # wrev[i] = w[n_max - i]; lag-aligned dot against f-history is then a
    # contiguous ascending slice
    wrev = np.ascontiguousarray(w[1:][::-1])
    f = rhs_callable(problem.rhs)
    u = np.empty(n_max + 1)
    fv = np.empty(n_max)
    u[0] = problem.u0
    fv[0] = f(problem.u0)
    for n in range(1, n_max + 1):
        s = float(np.dot(wrev[n_max - n :], fv[:n]))
        un = problem.u0 + c * s
        if not _admissible(problem.rhs, un):
            return Trajectory(
                k=k, values=u[:n].copy(),
                status=_bad_value_status(un), n_star=n,
            )
        u[n] = un
        if n < n_max:
            fv[n] = f(un)
    return Trajectory(k=k, values=u, status=TrajectoryStatus.COMPLETED)


def solve_integral_product(problem: ProblemSpec, grid: GridConfig) -> Trajectory:
    """Volterra form, product quadrature: exact for piecewise-constant f(u).

    u^n = u0 + (k^g/Gamma(1+g)) * sum_{m<n} f(u^m)*((n-m)^g - (n-m-1)^g).
    """
    _check_grid(problem, grid, Scheme.INTEGRAL_PRODUCT)
    return _solve_integral(problem, grid, product=True)


def solve_integral_rectangle(problem: ProblemSpec, grid: GridConfig) -> Trajectory:
    """Volterra form, rectangle quadrature with weight (n-m)^(g-1)."""
    _check_grid(problem, grid, Scheme.INTEGRAL_RECTANGLE)
    return _solve_integral(problem, grid, product=False)


def _power_law_cap(rhs: RhsModel, b0: float, kg: float) -> float:
    """Largest M with b0 - kg*f'(z) >= 0 on (0, M] for increasing power laws."""
    A, p = rhs.A, rhs.p
    # only meaningful for A > 0, p > 1; elsewhere the residual is monotone
    return (b0 / (kg * A * p)) ** (1.0 / (p - 1.0))


_OK = 0
_BREAK = 1
_EXIT = 2


def _bisect(phi, lo: float, hi: float, target: float) -> float:
    # phi increasing on [lo, hi] with phi(lo) <= target <= phi(hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-12 * max(1.0, abs(mid)):
            return mid
        if phi(mid) < target:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection stalled on [{lo!r}, {hi!r}] after 200 iterations"
    )


def _implicit_step(
    rhs: RhsModel, b0: float, kg: float, target: float, u_prev: float
) -> tuple[int, float]:
    """Solve b0*z - kg*f(z) = target for the next implicit iterate.

    Returns (_OK, root), (_BREAK, 0) when no root exists below the cap where
    the residual stops increasing (the blow-up break), or (_EXIT, 0) when the
    root would leave u > 0.
    """
    if rhs.kind == POWER_LAW:
        A, p = rhs.A, rhs.p
        if A == 0.0 or p == 0.0:
            z = (target + kg * A) if p == 0.0 else target
            z /= b0
            return (_OK, z) if z > 0.0 else (_EXIT, 0.0)
        if p == 1.0:
            den = b0 - kg * A
            if den <= 0.0:
                return (_BREAK, 0.0)
            z = target / den
            return (_OK, z) if z > 0.0 else (_EXIT, 0.0)
        if p == 2.0:
            a2 = kg * A
            disc = b0 * b0 - 4.0 * a2 * target
            if A > 0.0:
                if disc < 0.0:
                    return (_BREAK, 0.0)
                z = (b0 - math.sqrt(disc)) / (2.0 * a2)
            else:
                if disc < 0.0 or target <= 0.0:
                    return (_EXIT, 0.0)
                # increasing branch of the concave residual
                z = (b0 - math.sqrt(disc)) / (2.0 * a2)
            return (_OK, z) if z > 0.0 else (_EXIT, 0.0)

    phi, cap = _residual_and_cap(rhs, b0, kg, u_prev)

    if cap is not None:
        # residual increases on (0, cap] and decreases beyond, so a root
        # missing from [u_prev, cap] is missing everywhere admissible
        if u_prev > cap or phi(cap) < target:
            return (_BREAK, 0.0)
        z = _bisect(phi, u_prev, cap, target)
        return (_OK, z) if z > 0.0 else (_EXIT, 0.0)

    # monotone-past-the-dip residual: bracket the root by scanning
    lo, hi = _bracket(phi, u_prev, target)
    if lo is None:
        return (_EXIT, 0.0)
    z = _bisect(phi, lo, hi, target)
    return (_OK, z) if z > 0.0 else (_EXIT, 0.0)


def _residual_and_cap(rhs: RhsModel, b0: float, kg: float, u_prev: float):
    """Residual phi(z) = b0*z - kg*f(z) and the cap where phi stops increasing.

    cap=None signals a residual with at most one crossing of any positive
    level (monotone f, or a power law with p <= 1 whose dip sits below zero).
    """

    def phi(z: float) -> float:
        fz = eval_rhs(rhs, z)
        if math.isinf(fz):
            return -math.inf if fz > 0 else math.inf
        return b0 * z - kg * fz

    if rhs.kind == POWER_LAW:
        A, p = rhs.A, rhs.p
        if A > 0.0 and p > 1.0:
            return phi, _power_law_cap(rhs, b0, kg)
        return phi, None

    if not rhs.nondecreasing:
        # decreasing f: phi strictly increasing, no cap
        return phi, None
    if rhs.f_prime is None:
        raise MissingDerivativeError(
            "implicit scheme needs f_prime for a general nondecreasing rhs"
        )

    # find where b0 - kg*f'(z) first turns negative, doubling from u_prev
    z = max(u_prev, 1e-12)
    if b0 - kg * eval_rhs_derivative(rhs, z) < 0.0:
        return phi, z  # cap already below the current value: break imminent
    for _ in range(600):
        z2 = z * 2.0
        if b0 - kg * eval_rhs_derivative(rhs, z2) < 0.0:
            # refine the sign change of phi' in [z, z2]
            lo, hi = z, z2
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if b0 - kg * eval_rhs_derivative(rhs, mid) >= 0.0:
                    lo = mid
                else:
                    hi = mid
            return phi, lo
        z = z2
        if z > 1e150:
            return phi, None  # effectively monotone over the float range
    return phi, None


def _bracket(phi, u_prev: float, target: float):
    """Expanding bracket for a monotone increasing residual."""
    if phi(u_prev) <= target:
        lo, hi = u_prev, max(u_prev * 2.0, 1e-8)
        for _ in range(600):
            if phi(hi) >= target:
                return lo, hi
            lo, hi = hi, hi * 2.0
            if hi > 1e290:
                return None, None
        return None, None
    # root below the previous value (decaying f)
    hi = u_prev
    lo = u_prev * 0.5
    for _ in range(2000):
        if phi(lo) <= target:
            return lo, hi
        hi, lo = lo, lo * 0.5
        if lo < 5e-324:
            return None, None
    return None, None


def _solve_diff(
    problem: ProblemSpec, grid: GridConfig, implicit: bool
) -> Trajectory:
    g = problem.gamma_value
    k, n_max = grid.k, grid.n_max
    kg = k**g
    w = l1_weights(g, n_max)
    b0 = float(w.b[0])
    # brev[i] = b[n_max - i] so the row convolution over u^1..u^n is a
    # contiguous ascending slice (see module docstring)
    brev = np.ascontiguousarray(w.b[1:][::-1])
    f = rhs_callable(problem.rhs)
    if implicit and problem.rhs.kind != POWER_LAW:
        if problem.rhs.nondecreasing and problem.rhs.f_prime is None:
            raise MissingDerivativeError(
                "implicit scheme needs f_prime for a general nondecreasing rhs"
            )
    u = np.empty(n_max + 1)
    u[0] = problem.u0
    fprev = f(problem.u0)
    for n in range(n_max):
        conv = float(np.dot(brev[n_max - n :], u[1 : n + 1])) if n else 0.0
        hist = -conv - w.tail(n + 1) * problem.u0
        if implicit:
            code, z = _implicit_step(problem.rhs, b0, kg, hist, float(u[n]))
            if code == _BREAK:
                return Trajectory(
                    k=k, values=u[: n + 1].copy(),
                    status=TrajectoryStatus.BLOWUP_BREAK, n_star=n + 1,
                )
            if code == _EXIT or not _admissible(problem.rhs, z):
                return Trajectory(
                    k=k, values=u[: n + 1].copy(),
                    status=TrajectoryStatus.DOMAIN_EXIT, n_star=n + 1,
                )
            u[n + 1] = z
        else:
            un1 = (kg * fprev + hist) / b0
            if not _admissible(problem.rhs, un1):
                return Trajectory(
                    k=k, values=u[: n + 1].copy(),
                    status=_bad_value_status(un1), n_star=n + 1,
                )
            u[n + 1] = un1
            fprev = f(un1)
    return Trajectory(k=k, values=u, status=TrajectoryStatus.COMPLETED)


def solve_diff_explicit(problem: ProblemSpec, grid: GridConfig) -> Trajectory:
    """Backward-difference operator equated to f at the previous step."""
    _check_grid(problem, grid, Scheme.DIFF_EXPLICIT)
    return _solve_diff(problem, grid, implicit=False)


def solve_diff_implicit(problem: ProblemSpec, grid: GridConfig) -> Trajectory:
    """Backward-difference operator equated to f at the new step.

    Each step solves b0*z - k^g*f(z) = RHS on [u^n, M] where M caps the
    region with b0 - k^g*f'(z) >= 0. A vanished root is the numerical
    blow-up signal: the trajectory ends with status BLOWUP_BREAK and
    numerical_blowup_time = n_star*k.
    """
    _check_grid(problem, grid, Scheme.DIFF_IMPLICIT)
    return _solve_diff(problem, grid, implicit=True)


_SOLVERS = {
    Scheme.INTEGRAL_PRODUCT: solve_integral_product,
    Scheme.INTEGRAL_RECTANGLE: solve_integral_rectangle,
    Scheme.DIFF_EXPLICIT: solve_diff_explicit,
    Scheme.DIFF_IMPLICIT: solve_diff_implicit,
}


def solve(problem: ProblemSpec, grid: GridConfig) -> Trajectory:
    """Dispatch on grid.scheme."""
    return _SOLVERS[grid.scheme](problem, grid)
