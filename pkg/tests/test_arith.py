from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from oclab.arith import (
    INF, ParameterError, bernoulli, format_val, padic_val, parse_val, sigma_power, sigma_table,
)


def akiyama_tanigawa(m):
    """Independent Bernoulli oracle (B_1 = +1/2; agrees with B_m for even m)."""
    a = [Fraction(0)] * (m + 1)
    for n in range(m + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def brute_sigma(e, n):
    return sum(d**e for d in range(1, n + 1) if n % d == 0)


@pytest.mark.parametrize("x,p,expected", [(0, 2, INF), (12, 2, 2), (Fraction(1, 6), 3, -1),
                                          (Fraction(-250, 3), 5, 3), (7, 7, 1)])
def test_padic_val_examples(x, p, expected):
    assert padic_val(x, p) == expected


def test_padic_val_rejects_composite():
    with pytest.raises(ParameterError):
        padic_val(3, 4)


def test_infinity_orders_above_rationals():
    assert INF > 10**100
    assert INF > Fraction(-1, 3)
    assert not INF < 5
    assert 5 < INF
    assert INF == INF
    assert min(3, INF) == 3


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert -2 * 4 / bernoulli(4) == 240
    assert bernoulli(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("m", range(0, 62, 2))
def test_bernoulli_matches_independent_oracle(m):
    assert bernoulli(m) == akiyama_tanigawa(m)


def test_bernoulli_rejects_odd():
    with pytest.raises(ParameterError):
        bernoulli(3)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_von_staudt_clausen(p):
    for m in range(2, 61, 2):
        if m % (p - 1) == 0:
            assert padic_val(bernoulli(m), p) == -1
    # the whole statement: B_m + sum_{(q-1)|m} 1/q is an integer
    for m in range(2, 41, 2):
        s = bernoulli(m) + sum(Fraction(1, q) for q in range(2, m + 2)
                               if (m % (q - 1) == 0) and all(q % d for d in range(2, q)))
        assert s.denominator == 1


def test_sigma_examples():
    assert sigma_power(3, 1) == 1
    assert sigma_power(3, 2) == 9
    assert sigma_power(5, 4) == 1057


def test_sigma_rejects_zero():
    with pytest.raises(ParameterError):
        sigma_power(3, 0)


@pytest.mark.parametrize("e", [0, 1, 3, 5, 11])
def test_sigma_table_matches_brute_force(e):
    table = sigma_table(e, 300)
    assert table[1:] == [brute_sigma(e, n) for n in range(1, 300)]


def test_sigma_multiplicative_on_coprime_pairs():
    for m in range(1, 51):
        for n in range(1, 51):
            if gcd(m, n) == 1:
                assert sigma_power(3, m * n) == sigma_power(3, m) * sigma_power(3, n)


rationals = st.fractions(max_denominator=10**6).filter(lambda x: x != 0)


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, st.sampled_from([2, 3, 5, 7, 13]))
def test_valuation_axioms(x, y, p):
    assert padic_val(x * y, p) == padic_val(x, p) + padic_val(y, p)
    assert padic_val(x + y, p) >= min(padic_val(x, p), padic_val(y, p))


@pytest.mark.parametrize("v", [0, 7, -1, Fraction(20, 3), Fraction(-1, 2), INF])
def test_format_parse_round_trip(v):
    assert parse_val(format_val(v)) == v
