from fractions import Fraction

import pytest

from oclab.arith import ParameterError
from oclab.umatrix import (
    StarBoundRefused, check_general_bound, check_star_bound, compute_umatrix, gamma,
    origin_bound_counterexample, star_rate, star_slope, umatrix_recurrence_p2,
)

GENUS_ZERO = (2, 3, 5, 7, 13)


def _entry(checks, i, j):
    return next(c for c in checks if (c.i, c.j) == (i, j))


def test_seed_entries():
    u = compute_umatrix(2, 2)
    assert u[1, 1] == 24 and u[1, 2] == 2048
    assert u[0, 0] == 1 and u.row(0) == {0: 1}
    assert compute_umatrix(5, 4)[4, 1] == 24


def test_recurrence_matches_direct_computation():
    assert umatrix_recurrence_p2(40).entries == compute_umatrix(2, 40).entries


@pytest.mark.parametrize("p", GENUS_ZERO)
def test_support_and_general_bound(p):
    u = compute_umatrix(p, 40)
    assert u.support_ok()
    assert all(c.passed for c in check_general_bound(u))
    assert all(isinstance(v, int) for v in u.entries.values())


def test_general_bound_examples():
    c = _entry(check_general_bound(compute_umatrix(2, 2)), 1, 2)
    assert (c.observed, c.required, c.margin) == (11, 11, 0)
    c = _entry(check_general_bound(compute_umatrix(5, 4)), 4, 1)
    assert (c.observed, c.required, c.margin) == (0, Fraction(-1, 2), Fraction(1, 2))


@pytest.mark.parametrize("p", [2, 3])
def test_star_bound_holds(p):
    assert all(c.passed for c in check_star_bound(compute_umatrix(p, 40)))


def test_star_bound_examples():
    checks = check_star_bound(compute_umatrix(2, 2))
    assert (_entry(checks, 1, 1).observed, _entry(checks, 1, 1).required) == (3, 3)
    assert (_entry(checks, 1, 2).observed, _entry(checks, 1, 2).required) == (11, 9)


@pytest.mark.parametrize("p", [5, 7, 13])
def test_star_bound_refused(p):
    with pytest.raises(StarBoundRefused, match="c_\\(4,1\\) = 24"):
        check_star_bound(compute_umatrix(p, 4))


def test_origin_counterexample_p5():
    u = compute_umatrix(5, 4)
    # the earliest witness is c_(3,1) = 189; c_(4,1) = 24 fails the same way
    assert origin_bound_counterexample(u) == (3, 1, 189)
    assert u[4, 1] == 24 and 5 * 1 - 4 > 0 and 24 % 5 != 0
    assert origin_bound_counterexample(compute_umatrix(2, 20)) is None


def test_slope_arithmetic():
    assert gamma(2) == 4 and gamma(3) == Fraction(3, 2)
    assert star_slope(2) == 3
    assert star_rate(2) == Fraction(1, 4) and star_rate(3) == Fraction(1, 6)
    for p in (2, 3):
        assert star_rate(p) == Fraction(1, 2 * p)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        compute_umatrix(11, 3)
    with pytest.raises(ParameterError):
        compute_umatrix(2, 0)
    with pytest.raises(ParameterError):
        umatrix_recurrence_p2(0)
