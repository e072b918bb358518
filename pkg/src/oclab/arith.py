"""Exact rational helpers: p-adic valuations, Bernoulli numbers, divisor sums."""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import total_ordering
from math import comb
from numbers import Rational


class ParameterError(ValueError):
    """A caller-supplied parameter violates an operation's precondition."""


@total_ordering
class _Infinity:
    """The valuation of zero. Compares above every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("oclab.INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p):
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"p must be a prime, got {p!r}")


def int_val(n: int, p: int):
    """Exponent of p in the nonzero integer n; INF for n == 0."""
    n = abs(int(n))
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_val(x, p: int):
    """p-adic valuation of a rational number, normalised so that v(p) = 1.

    >>> padic_val(Fraction(1, 6), 3)
    -1
    >>> padic_val(0, 2)
    INF
    """
    _check_prime(p)
    if not isinstance(x, Rational):
        x = Fraction(x)
    if x == 0:
        return INF
    return int_val(x.numerator, p) - int_val(x.denominator, p)


def format_val(v) -> str:
    """Exact text form of a valuation or bound: ``7``, ``20/3`` or ``inf``."""
    if v is INF:
        return "inf"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def parse_val(s: str):
    if s == "inf":
        return INF
    v = Fraction(s)
    return v.numerator if v.denominator == 1 else v


_bernoulli_cache = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def _bernoulli_any(m):
    # B_1 = -1/2 convention inside the recurrence; only even indices escape.
    with _bernoulli_lock:
        cache = _bernoulli_cache
        while len(cache) <= m:
            n = len(cache)
            acc = sum(comb(n + 1, j) * cache[j] for j in range(n))
            cache.append(-acc / (n + 1))
        return cache[m]


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m for even m >= 0 (B_2 = 1/6, B_4 = -1/30)."""
    if not isinstance(m, int) or m < 0 or m % 2:
        raise ParameterError(f"bernoulli needs an even index >= 0, got {m!r}")
    return _bernoulli_any(m)


def sigma_power(e: int, n: int) -> int:
    """Sum of d**e over the positive divisors d of n."""
    if n < 1:
        raise ParameterError(f"sigma_power needs n >= 1, got {n}")
    total = 1
    m = n
    q = 2
    while q * q <= m:
        if m % q == 0:
            term, pk = 1, 1
            while m % q == 0:
                m //= q
                pk *= q ** e
                term += pk
            total *= term
        q += 1
    if m > 1:
        total *= 1 + m ** e
    return total


def sigma_table(e: int, n_max: int) -> list[int]:
    """[0, sigma_e(1), ..., sigma_e(n_max - 1)] via a smallest-prime-factor sieve."""
    if n_max <= 1:
        return [0] * max(n_max, 0)
    spf = list(range(n_max))
    i = 2
    while i * i < n_max:
        if spf[i] == i:
            for j in range(i * i, n_max, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    sig = [0] * n_max
    sig[1] = 1
    # rest[n] = n with its smallest prime power stripped; ppow_sum[n] = 1 + q^e + ... for that power
    ppow_sum = [0] * n_max
    for n in range(2, n_max):
        q = spf[n]
        m = n // q
        if m % q == 0 and spf[m] == q:
            ppow_sum[n] = ppow_sum[m] * q ** e + 1
            # strip the full q-power of m to reach the coprime part
            r = m
            while r % q == 0:
                r //= q
            sig[n] = ppow_sum[n] * sig[r]
        else:
            ppow_sum[n] = 1 + q ** e
            sig[n] = ppow_sum[n] * sig[m]
    return sig
