from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oclab.arith import INF, ParameterError
from oclab.fpbasis import (
    LinearBound, OutOfCriterionError, PrecisionError, check_bound, check_profile, expand_in_fp,
    fp_series, max_slope, rational_fn_expansion, valuation_profile,
)
from oclab.qseries import QSeries, eta_quotient_fp, invert
from oclab.verify import IDENTITIES, e_ratio, estar_ratio


def test_expand_fp_itself():
    for p in (2, 3, 5, 7, 13):
        e = expand_in_fp(eta_quotient_fp(p, 10), p, 3)
        assert e.a == (0, 1, 0, 0)
        assert valuation_profile(e) == [INF, 0, INF, INF]


def test_expand_e4_ratio_p2_geometric():
    e = expand_in_fp(e_ratio(4, 2, 41), 2, 40)
    assert e[0] == 1
    assert all(e[i] == 240 * (-16) ** (i - 1) for i in range(1, 41))
    assert valuation_profile(e)[1:] == [4 * i for i in range(1, 41)]


def test_expand_golden_valuations():
    prof = valuation_profile(expand_in_fp(estar_ratio(2, 12, 31), 2, 30))
    assert prof[2] == 7 and prof[30] == 105


def test_expand_errors():
    with pytest.raises(PrecisionError):
        expand_in_fp(QSeries.one(5), 2, 5)
    with pytest.raises(ParameterError):
        expand_in_fp(QSeries.one(5), 11, 3)


def test_rational_fn_examples():
    assert rational_fn_expansion([1], [1], 2, 4).a == (1, 0, 0, 0, 0)
    e = rational_fn_expansion([1, 2**8], [1, 2**4], 2, 2)
    assert e.a == (1, 240, -3840)
    with pytest.raises(ParameterError):
        rational_fn_expansion([1], [0, 1], 2, 3)


@pytest.mark.parametrize("p", [2, 3])
def test_closed_forms_agree_to_index_50(p):
    for _, weight, numer, denom in IDENTITIES[p]:
        lhs = expand_in_fp(e_ratio(weight, p, 51), p, 50)
        assert lhs.a == rational_fn_expansion(numer, denom, p, 50).a


@pytest.mark.parametrize("p,weight,slope", [(2, 4, 4), (2, 6, 3), (3, 4, 1), (3, 6, Fraction(3, 2))])
def test_unit_criterion(p, weight, slope):
    h = e_ratio(weight, p, 41)
    bound = LinearBound(0, Fraction(slope), 1)
    for g in (h, invert(h)):
        assert check_bound(expand_in_fp(g, p, 40), bound).passed


def test_check_bound_examples():
    e = expand_in_fp(eta_quotient_fp(3, 8), 3, 6)
    assert check_bound(e, LinearBound(0, -1, 0)).passed
    r = check_bound(expand_in_fp(e_ratio(4, 2, 21), 2, 20), LinearBound(0, 4, 1))
    assert r.passed and r.min_margin == 0 and r.checked_range == (1, 20)
    r = check_bound(expand_in_fp(estar_ratio(2, 12, 31), 2, 30), LinearBound(0, Fraction(10, 3), 1))
    assert r.passed
    assert r.rows[-1] == (30, 105, 100)


def test_check_bound_reports_violation():
    e = expand_in_fp(e_ratio(4, 2, 11), 2, 10)
    r = check_bound(e, LinearBound(1, 4, 1))
    assert not r.passed and r.violations[0] == (1, 4, 5) and r.min_margin == -1


def test_check_bound_errors():
    e = expand_in_fp(e_ratio(4, 2, 11), 2, 10)
    with pytest.raises(OutOfCriterionError):
        check_bound(e, LinearBound(0, max_slope(2) + Fraction(1, 100), 1))
    with pytest.raises(ParameterError):
        check_profile(valuation_profile(e), LinearBound(0, 1, 11), 2)


small = st.fractions(min_value=-20, max_value=20, max_denominator=5)


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=3, max_size=30), st.sampled_from([2, 3, 5, 7, 13]), st.data())
def test_triangular_stability_and_round_trip(cs, p, data):
    g = QSeries(cs, len(cs))
    M = len(cs) - 1
    full = expand_in_fp(g, p, M)
    Mp = data.draw(st.integers(0, M))
    assert expand_in_fp(g, p, Mp).a == full.a[: Mp + 1]
    assert fp_series(full.a, p, M + 1) == g
