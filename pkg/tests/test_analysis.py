"""Blow-up bounds, blow-up detection, growth/decay diagnostics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caputo_ode import (
    GridConfig,
    InsufficientDataError,
    ProblemSpec,
    RhsModel,
    Scheme,
    blowup_bounds_closed,
    blowup_bounds_optimized,
    check_ordering,
    critical_initial_values,
    decay_lower_bound_check,
    estimate_blowup_time,
    fit_blowup_exponent,
    gamma_fn,
    osgood_blows_up,
    osgood_report,
    solve_diff_implicit,
)
from caputo_ode.errors import DomainError


def power_problem(gamma, A, p, u0, horizon):
    return ProblemSpec(
        gamma=gamma, u0=u0, rhs=RhsModel.power_law(A, p), horizon=horizon
    )


def implicit(problem, k):
    grid = GridConfig.for_horizon(k, problem.horizon, Scheme.DIFF_IMPLICIT)
    return solve_diff_implicit(problem, grid)


# ---------------------------------------------------------------- bounds


def test_closed_bounds_frozen_case():
    b = blowup_bounds_closed(0.6, 1.0, 2.0, 1.2)
    assert b.lower == pytest.approx(0.06068778686520612, rel=1e-12)
    assert b.upper == pytest.approx(0.6116945611440544, rel=1e-12)
    assert not b.fallback


def test_optimized_bounds_frozen_case():
    b = blowup_bounds_optimized(0.6, 1.0, 2.0, 1.2)
    assert b.lower == pytest.approx(0.1015631374240675, rel=1e-9)
    assert b.upper == pytest.approx(0.5655825163140575, rel=1e-9)
    assert not b.fallback


@given(
    g=st.floats(0.1, 0.95),
    p=st.floats(1.1, 4.0),
    u0=st.floats(0.05, 4.0),
    A=st.floats(0.2, 5.0),
)
@settings(max_examples=40)
def test_optimized_bounds_dominate_closed_form(g, p, u0, A):
    closed = blowup_bounds_closed(g, A, p, u0)
    opt = blowup_bounds_optimized(g, A, p, u0)
    slack = 1.0 + 1e-9
    assert closed.lower <= opt.lower * slack
    assert opt.upper <= closed.upper * slack
    assert opt.lower <= opt.upper * slack
    assert closed.lower > 0.0 and math.isfinite(closed.upper)


def test_bounds_reject_non_blowup_parameters():
    with pytest.raises(DomainError):
        blowup_bounds_closed(0.5, -1.0, 2.0, 1.0)
    with pytest.raises(DomainError):
        blowup_bounds_closed(0.5, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        blowup_bounds_optimized(0.5, 1.0, 0.5, 1.0)


def test_critical_values_frozen_case():
    cv = critical_initial_values(1.0, 2.0)
    assert cv.u01 == 0.25
    assert cv.u02 == 1.0
    assert cv.u_crit == 0.25


@given(A=st.floats(0.1, 10.0), p=st.floats(1.05, 6.0))
def test_critical_band_is_ordered(A, p):
    cv = critical_initial_values(A, p)
    assert 0.0 < cv.u01 <= cv.u02
    assert cv.u_crit <= cv.u02 * (1.0 + 1e-12)


def test_critical_values_scale_with_amplitude():
    base = critical_initial_values(1.0, 3.0)
    scaled = critical_initial_values(16.0, 3.0)
    s = 16.0 ** (-0.5)
    assert scaled.u01 == pytest.approx(base.u01 * s, rel=1e-12)
    assert scaled.u02 == pytest.approx(base.u02 * s, rel=1e-12)
    assert scaled.u_crit == pytest.approx(base.u_crit * s, rel=1e-12)


# ------------------------------------------------------------- detection


def test_blowup_estimate_frozen_ladder():
    pr = power_problem(0.6, 1.0, 2.0, 1.2, 1.0)
    est = estimate_blowup_time(pr, (4e-3, 2e-3, 1e-3))
    assert est.conclusive
    assert est.per_k == (0.216, 0.222, 0.223)
    g = 0.6
    k1, k2, t1, t2 = 2e-3, 1e-3, 0.222, 0.223
    want = (t2 * k1**g - t1 * k2**g) / (k1**g - k2**g)
    assert est.extrapolated == pytest.approx(want, rel=1e-12)
    b = blowup_bounds_optimized(0.6, 1.0, 2.0, 1.2)
    assert b.lower < est.extrapolated < b.upper


def test_blowup_estimate_inconclusive_without_break():
    pr = power_problem(0.6, -1.0, 2.0, 1.2, 1.0)  # decaying, never breaks
    est = estimate_blowup_time(pr, (4e-3, 2e-3))
    assert not est.conclusive
    assert est.extrapolated is None
    assert est.per_k == (None, None)


def test_blowup_estimate_needs_a_ladder():
    pr = power_problem(0.6, 1.0, 2.0, 1.2, 1.0)
    with pytest.raises(DomainError):
        estimate_blowup_time(pr, (1e-3,))


def test_finer_steps_give_later_break():
    # memory truncation only ever accelerates the discrete blow-up
    pr = power_problem(0.6, 1.0, 2.0, 1.2, 1.0)
    est = estimate_blowup_time(pr, (8e-3, 4e-3, 2e-3, 1e-3))
    assert list(est.per_k) == sorted(est.per_k)


# ---------------------------------------------------------------- osgood


@pytest.mark.parametrize("p", [1.1, 2.0, 3.0])
def test_superlinear_power_laws_blow_up(p):
    report = osgood_report(RhsModel.power_law(1.0, p), 0.6)
    assert report.blows_up
    assert report.analytic


@pytest.mark.parametrize("p", [0.0, 0.5, 1.0])
def test_sublinear_power_laws_do_not(p):
    report = osgood_report(RhsModel.power_law(1.0, p), 0.6)
    assert not report.blows_up
    assert report.analytic


def test_log_squared_drive_blows_up_without_closed_form():
    rhs = RhsModel.general(
        lambda u: u * math.log(1.0 + u) ** 2,
        nondecreasing=True,
        nonnegative=True,
    )
    report = osgood_report(rhs, 0.5)
    assert not report.analytic
    assert report.blows_up
    assert report.confident
    assert report.tail_exponent > 1.0


def test_sublinear_general_drive_does_not_blow_up():
    rhs = RhsModel.general(
        lambda u: math.sqrt(1.0 + u), nondecreasing=True, nonnegative=True
    )
    report = osgood_report(rhs, 0.5)
    assert not report.analytic
    assert not report.blows_up
    assert report.confident
    assert report.tail_exponent < 1.0


def test_borderline_drive_reports_low_confidence():
    # asymptotically 2u: the tail exponent sits on the convergence line and
    # the verdict must say so rather than pretend
    rhs = RhsModel.general(
        lambda u: u * (2.0 - 1.0 / (1.0 + u)),
        nondecreasing=True,
        nonnegative=True,
    )
    report = osgood_report(rhs, 0.5)
    assert not report.confident
    assert report.tail_exponent == pytest.approx(1.0, abs=0.01)


def test_osgood_validates_inputs():
    rhs = RhsModel.power_law(1.0, 2.0)
    with pytest.raises(DomainError):
        osgood_report(rhs, 1.0)  # integer order has no fractional criterion
    with pytest.raises(DomainError):
        osgood_report(rhs, 0.5, U=0.0)
    assert osgood_blows_up(rhs, 0.5, U=2.0)


# ---------------------------------------------------------- growth/decay


def test_growth_fit_recovers_theoretical_profile():
    g = 0.6
    pr = power_problem(g, 1.0, 2.0, 0.12, 12.0)
    traj = implicit(pr, 1e-3)
    fit = fit_blowup_exponent(
        traj, traj.numerical_blowup_time, 0.2, problem=pr
    )
    assert fit.theoretical_exponent == pytest.approx(g, rel=1e-15)
    assert fit.theoretical_amplitude == pytest.approx(
        gamma_fn(2.0 * g) / gamma_fn(g), rel=1e-13
    )
    assert fit.exponent == pytest.approx(g, abs=0.2)
    assert fit.n_samples >= 8
    assert fit.window == 0.2


def test_growth_fit_needs_enough_samples():
    pr = power_problem(0.6, 1.0, 2.0, 1.2, 1.0)
    traj = implicit(pr, 4e-3)
    with pytest.raises(InsufficientDataError):
        fit_blowup_exponent(traj, traj.numerical_blowup_time, 0.01, problem=pr)


def test_growth_fit_rejects_completed_runs():
    pr = power_problem(0.6, -1.0, 2.0, 1.2, 1.0)
    traj = implicit(pr, 4e-3)
    with pytest.raises(DomainError):
        fit_blowup_exponent(traj, 1.0, 0.2, problem=pr)


def test_decay_floor_holds_on_long_run():
    pr = power_problem(0.5, -1.0, 2.0, 1.0, 50.0)
    traj = implicit(pr, 5e-3)
    check = decay_lower_bound_check(traj, pr, t_min=10.0)
    assert check.holds
    assert 1.0 < check.margin < 3.0
    assert check.t_min == 10.0
    # default window is the second half
    assert decay_lower_bound_check(traj, pr).t_min == pytest.approx(25.0)


def test_decay_floor_rejects_growing_problems():
    pr = power_problem(0.5, 1.0, 2.0, 1.0, 1.0)
    traj = implicit(pr, 1e-2)
    with pytest.raises(DomainError):
        decay_lower_bound_check(traj, power_problem(0.5, 1.0, 2.0, 1.0, 1.0))
    decaying = power_problem(0.5, -1.0, 2.0, 1.0, 2.0)
    long_traj = implicit(decaying, 1e-2)
    with pytest.raises(DomainError):
        decay_lower_bound_check(long_traj, decaying, t_min=5.0)


# -------------------------------------------------------------- ordering


def test_ordering_detects_crossings():
    pr_lo = power_problem(0.5, -1.0, 2.0, 0.8, 1.0)
    pr_hi = power_problem(0.5, -1.0, 2.0, 1.0, 1.0)
    lo = implicit(pr_lo, 0.01)
    hi = implicit(pr_hi, 0.01)
    assert check_ordering(lo, hi)
    assert not check_ordering(hi, lo)


def test_ordering_requires_matching_grids():
    pr = power_problem(0.5, -1.0, 2.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        check_ordering(implicit(pr, 0.01), implicit(pr, 0.02))
