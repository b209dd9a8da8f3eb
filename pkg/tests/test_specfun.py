"""Special function layer against high-precision reference grids."""

import csv
import math
from pathlib import Path

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from caputo_ode import MlOrder, MlOverflowError, gamma_fn, mittag_leffler, resolvent
from caputo_ode.errors import DomainError

DATA = Path(__file__).parent / "data"


def load_grid(name):
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))


def test_mittag_leffler_matches_reference_grid():
    rows = load_grid("mlf_reference.csv")
    assert len(rows) >= 70
    for row in rows:
        got = mittag_leffler(float(row["gamma"]), float(row["z"]))
        want = float(row["value"])
        assert got == pytest.approx(want, rel=1e-10, abs=1e-300), row


def test_resolvent_matches_reference_grid():
    rows = load_grid("resolvent_reference.csv")
    assert len(rows) >= 55
    for row in rows:
        got = resolvent(float(row["gamma"]), float(row["lam"]), float(row["t"]))
        want = float(row["value"])
        assert got == pytest.approx(want, rel=1e-6), row


def test_half_order_closed_form():
    # order 1/2 reduces to exp(z^2) * erfc(-z)
    assert mittag_leffler(0.5, 1.0) == pytest.approx(5.008980080762283, rel=1e-13)
    assert mittag_leffler(0.5, -1.0) == pytest.approx(
        math.exp(1.0) * math.erfc(1.0), rel=1e-10
    )


def test_order_one_is_exp():
    for z in (-30.0, -2.0, 0.0, 1.5, 20.0):
        assert mittag_leffler(1.0, z) == pytest.approx(math.exp(z), rel=1e-12)


def test_value_at_zero_is_one():
    for g in (0.1, 0.5, 0.9, 1.0):
        assert mittag_leffler(g, 0.0) == 1.0


def test_overflow_raises():
    with pytest.raises(MlOverflowError):
        mittag_leffler(0.5, 800.0)


@pytest.mark.parametrize("bad", [0.0, -0.3, 1.5, math.nan, math.inf])
def test_order_outside_unit_interval_rejected(bad):
    with pytest.raises(DomainError):
        MlOrder(bad)


def test_order_wrapper_round_trip():
    g = MlOrder(0.7)
    assert float(g) == 0.7
    assert mittag_leffler(g, 0.2) == mittag_leffler(0.7, 0.2)


@given(
    g=st.floats(0.2, 0.95),
    x=st.floats(0.01, 40.0),
    step=st.floats(0.05, 5.0),
)
def test_negative_axis_positive_and_decreasing(g, x, step):
    # complete monotonicity implies this much, and it spans the
    # series/integral dispatch boundary
    lo = mittag_leffler(g, -(x + step))
    hi = mittag_leffler(g, -x)
    assert 0.0 < lo < hi <= 1.0


@given(g=st.floats(0.15, 0.99), z=st.floats(0.0, 15.0))
def test_positive_axis_dominates_one(g, z):
    # E_g(z) ~ exp(z^(1/g))/g for z > 0; stay inside float range
    assume(z ** (1.0 / g) < 600.0)
    assert mittag_leffler(g, z) >= 1.0


def test_gamma_fn_matches_math():
    for x in (0.3, 1.0, 2.5, 7.0):
        assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-15)


def test_gamma_fn_rejects_poles():
    for x in (0.0, -1.0, -3.0):
        with pytest.raises(DomainError):
            gamma_fn(x)


def test_resolvent_order_one_is_exponential_density():
    lam, t = 1.7, 0.6
    assert resolvent(1.0, lam, t) == pytest.approx(
        lam * math.exp(-lam * t), rel=1e-12
    )


def test_resolvent_frozen_point():
    assert resolvent(0.5, 2.0, 0.25) == pytest.approx(0.4555398569955441, rel=1e-10)


@given(g=st.floats(0.25, 0.95), lam=st.floats(0.1, 4.0), t=st.floats(0.01, 8.0))
def test_resolvent_positive(g, lam, t):
    assert resolvent(g, lam, t) > 0.0


def test_resolvent_rejects_bad_inputs():
    with pytest.raises(DomainError):
        resolvent(0.5, -1.0, 0.5)
    with pytest.raises(DomainError):
        resolvent(0.5, 1.0, -0.5)
