"""Problem description: right-hand side models and the initial value problem.

Everything here is plain data. The solvers only ever see scalars through
``rhs_callable``, so a right-hand side is either the power law A * u**p or an
arbitrary callable tagged with the structural facts the analysis routines
need (monotonicity, sign) that cannot be inferred from a black box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, MissingDerivativeError
from .specfun import MlOrder

__all__ = [
    "RhsModel",
    "ProblemSpec",
    "eval_rhs",
    "eval_rhs_derivative",
    "rhs_callable",
]

POWER_LAW = "power-law"
GENERAL = "general"


@dataclass(frozen=True)
class RhsModel:
    """Autonomous right-hand side f(u) on u > 0."""

    kind: str
    A: float | None = None
    p: float | None = None
    f: Callable[[float], float] | None = None
    f_prime: Callable[[float], float] | None = None
    nondecreasing: bool = False
    nonnegative: bool = False

    @classmethod
    def power_law(cls, A: float, p: float) -> "RhsModel":
        A = float(A)
        p = float(p)
        if not math.isfinite(A) or not math.isfinite(p):
            raise DomainError(f"power law needs finite A, p, got {A!r}, {p!r}")
        if p < 0.0:
            raise DomainError(f"power law exponent must be >= 0, got {p!r}")
        return cls(
            kind=POWER_LAW, A=A, p=p,
            nondecreasing=A >= 0.0 or p == 0.0,
            nonnegative=A >= 0.0,
        )

    @classmethod
    def general(
        cls,
        f: Callable[[float], float],
        f_prime: Callable[[float], float] | None = None,
        *,
        nondecreasing: bool = False,
        nonnegative: bool = False,
    ) -> "RhsModel":
        if not callable(f):
            raise DomainError("general right-hand side must be callable")
        return cls(
            kind=GENERAL, f=f, f_prime=f_prime,
            nondecreasing=nondecreasing, nonnegative=nonnegative,
        )

    def is_power_law(self) -> bool:
        return self.kind == POWER_LAW


def eval_rhs(rhs: RhsModel, u: float) -> float:
    """f(u) for u > 0. Overflow saturates to signed infinity.

    Saturation keeps a marching scheme honest near a blow-up: the next iterate
    comes out non-finite and the march stops with a recorded status instead of
    the solver dying inside an arithmetic instruction.
    """
    u = float(u)
    if not u > 0.0:  # also rejects nan
        raise DomainError(f"right-hand side is defined on u > 0, got {u!r}")
    if rhs.kind == POWER_LAW:
        try:
            return rhs.A * u**rhs.p
        except OverflowError:
            return math.copysign(math.inf, rhs.A)
    value = rhs.f(u)
    return float(value)


def eval_rhs_derivative(rhs: RhsModel, u: float) -> float:
    """f'(u) for u > 0; MissingDerivativeError if the model has none."""
    u = float(u)
    if not u > 0.0:
        raise DomainError(f"derivative is defined on u > 0, got {u!r}")
    if rhs.kind == POWER_LAW:
        if rhs.p == 0.0:
            return 0.0
        try:
            return rhs.A * rhs.p * u ** (rhs.p - 1.0)
        except OverflowError:
            return math.copysign(math.inf, rhs.A * rhs.p)
    if rhs.f_prime is None:
        raise MissingDerivativeError(
            "general right-hand side was built without f_prime"
        )
    return float(rhs.f_prime(u))


def rhs_callable(rhs: RhsModel) -> Callable[[float], float]:
    """Bind a model to a fast scalar closure for the inner solver loop."""
    if rhs.kind == POWER_LAW:
        A, p = rhs.A, rhs.p

        def f(u: float) -> float:
            try:
                return A * u**p
            except OverflowError:
                return math.copysign(math.inf, A)

        return f
    return lambda u: float(rhs.f(u))


@dataclass(frozen=True)
class ProblemSpec:
    """Initial value problem for the fractional derivative of order gamma.

    horizon is the largest time any grid built for this problem may reach; it
    is a budget, not a promise that the solution exists that far.
    """

    gamma: MlOrder
    u0: float
    rhs: RhsModel
    horizon: float

    def __post_init__(self) -> None:
        g = self.gamma
        if not isinstance(g, MlOrder):
            g = MlOrder(float(g))
            object.__setattr__(self, "gamma", g)
        u0 = float(self.u0)
        if not math.isfinite(u0) or u0 <= 0.0:
            raise DomainError(f"initial value must be positive, got {self.u0!r}")
        object.__setattr__(self, "u0", u0)
        if not isinstance(self.rhs, RhsModel):
            raise DomainError("rhs must be an RhsModel")
        horizon = float(self.horizon)
        if not math.isfinite(horizon) or horizon <= 0.0:
            raise DomainError(f"horizon must be positive, got {self.horizon!r}")
        object.__setattr__(self, "horizon", horizon)

    @property
    def gamma_value(self) -> float:
        return self.gamma.gamma
