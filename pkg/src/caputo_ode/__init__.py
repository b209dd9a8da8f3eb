"""Solver and analysis toolkit for the scalar fractional initial value problem

    D_c^gamma u = f(u),  u(0) = u0,  gamma in (0, 1),

with the Caputo derivative. Four history-complete marching schemes, exact and
series oracles, blow-up time bounds with break detection, growth/decay rate
checks, and a CSV-emitting command line front end.
"""

from .analysis import (
    BlowupBounds,
    BlowupEstimate,
    BoundsMethod,
    CriticalValues,
    DecayCheck,
    GrowthFit,
    OsgoodReport,
    blowup_bounds_closed,
    blowup_bounds_optimized,
    check_ordering,
    critical_initial_values,
    decay_lower_bound_check,
    estimate_blowup_time,
    fit_blowup_exponent,
    osgood_blows_up,
    osgood_report,
)
from .errors import (
    ConvergenceError,
    DomainError,
    InsufficientDataError,
    MissingDerivativeError,
    MlOverflowError,
)
from .oracle import (
    SeriesSolution,
    SeriesValue,
    exact_linear,
    refined_reference,
    refined_reference_curve,
    series_coefficients,
    series_eval,
)
from .problem import (
    ProblemSpec,
    RhsModel,
    eval_rhs,
    eval_rhs_derivative,
    rhs_callable,
)
from .schemes import (
    GridConfig,
    L1Weights,
    Scheme,
    Trajectory,
    TrajectoryStatus,
    apply_discrete_caputo,
    l1_weights,
    solve,
    solve_diff_explicit,
    solve_diff_implicit,
    solve_integral_product,
    solve_integral_rectangle,
)
from .specfun import MlOrder, gamma_fn, mittag_leffler, resolvent

__version__ = "0.1.0"

__all__ = [
    "MlOrder", "gamma_fn", "mittag_leffler", "resolvent",
    "RhsModel", "ProblemSpec", "eval_rhs", "eval_rhs_derivative",
    "rhs_callable",
    "Scheme", "TrajectoryStatus", "GridConfig", "L1Weights", "Trajectory",
    "l1_weights", "apply_discrete_caputo", "solve",
    "solve_integral_product", "solve_integral_rectangle",
    "solve_diff_explicit", "solve_diff_implicit",
    "SeriesSolution", "SeriesValue", "exact_linear", "series_coefficients",
    "series_eval", "refined_reference", "refined_reference_curve",
    "BoundsMethod", "BlowupBounds", "CriticalValues", "GrowthFit",
    "BlowupEstimate", "DecayCheck", "OsgoodReport",
    "blowup_bounds_closed", "blowup_bounds_optimized",
    "critical_initial_values", "osgood_blows_up", "osgood_report",
    "estimate_blowup_time", "fit_blowup_exponent",
    "decay_lower_bound_check", "check_ordering",
    "DomainError", "MlOverflowError", "MissingDerivativeError",
    "ConvergenceError", "InsufficientDataError",
    "__version__",
]
