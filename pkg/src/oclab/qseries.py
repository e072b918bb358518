"""Truncated q-expansions over the rationals.

A :class:`QSeries` is ``sum c_n q^n + O(q^prec)``.  Coefficients live in a
``flint.fmpq_poly`` (an integer polynomial over one common denominator), which
keeps the exact arithmetic fast enough for q-precisions in the hundreds of
thousands.  Every operation reports only coefficients it can justify:

* ``+``, ``-``, ``*``: precision is the minimum of the operands'
* :func:`apply_U`: ``ceil(prec / p)``
* :func:`apply_V`: ``p * (prec - 1) + 1``
* :func:`div_by_order`: minimum precision minus the divisor's q-order
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint

from .arith import INF, ParameterError, int_val, is_prime

GENUS_ZERO_PRIMES = (2, 3, 5, 7, 13)


class NonUnitError(ArithmeticError):
    pass


class NotDivisibleError(ArithmeticError):
    pass


class DegenerateDivisorError(ArithmeticError):
    pass


def _to_fmpq(c):
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, flint.fmpz) or isinstance(c, int):
        return flint.fmpq(c)
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class QSeries:
    __slots__ = ("poly", "prec")

    def __init__(self, coeffs, prec: int | None = None):
        if isinstance(coeffs, flint.fmpq_poly):
            poly = coeffs
        else:
            coeffs = list(coeffs)
            poly = flint.fmpq_poly([_to_fmpq(c) for c in coeffs])
            if prec is None:
                prec = len(coeffs)
        if prec is None or prec < 1:
            raise ParameterError(f"precision must be >= 1, got {prec!r}")
        if poly.length() > prec:
            poly = poly.truncate(prec)
        self.poly = poly
        self.prec = int(prec)

    @classmethod
    def one(cls, prec):
        return cls(flint.fmpq_poly([1]), prec)

    @classmethod
    def zero(cls, prec):
        return cls(flint.fmpq_poly(), prec)

    @classmethod
    def gen(cls, prec):
        """The series q + O(q^prec)."""
        return cls(flint.fmpq_poly([0, 1]), prec)

    def __len__(self):
        return self.prec

    def __getitem__(self, n):
        if isinstance(n, slice):
            return [self[i] for i in range(*n.indices(self.prec))]
        if n < 0:
            n += self.prec
        if not 0 <= n < self.prec:
            raise IndexError(f"coefficient {n} is beyond precision {self.prec}")
        return _to_fraction(self.poly[n])

    @property
    def coeffs(self) -> list[Fraction]:
        vals = [_to_fraction(c) for c in self.poly.coeffs()]
        return vals + [Fraction(0)] * (self.prec - len(vals))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.prec > 6 else ""
        return f"QSeries([{shown}{more}], prec={self.prec})"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self.poly == other.poly

    def __hash__(self):
        return hash((self.prec, tuple(self.coeffs)))

    def equal_to(self, other, prec=None) -> bool:
        """Coefficientwise equality through q^(prec-1) (default: common precision)."""
        n = min(self.prec, other.prec) if prec is None else prec
        if n > min(self.prec, other.prec):
            raise ParameterError(f"cannot compare through {n} coefficients")
        return self.poly.truncate(n) == other.poly.truncate(n)

    def truncate(self, prec) -> QSeries:
        if prec > self.prec:
            raise ParameterError(f"cannot raise precision from {self.prec} to {prec}")
        return QSeries(self.poly.truncate(prec), prec)

    def valuation(self):
        """q-order: index of the first nonzero stored coefficient, INF if none."""
        if self.poly.is_zero():
            return INF
        for n, c in enumerate(self.poly.coeffs()):
            if c != 0:
                return n
        return INF

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        return QSeries(flint.fmpq_poly([_to_fmpq(other)]), self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.prec, other.prec)
        return QSeries((self.poly + other.poly).truncate(n), n)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(-self.poly, self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        n = min(self.prec, other.prec)
        return QSeries((self.poly - other.poly).truncate(n), n)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries(self.poly * _to_fmpq(other), self.prec)
        n = min(self.prec, other.prec)
        return QSeries(self.poly.mul_low(other.poly, n), n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * invert(other)
        return QSeries(self.poly / _to_fmpq(other), self.prec)

    def __pow__(self, n):
        return power(self, n)


def add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def sub(a: QSeries, b: QSeries) -> QSeries:
    return a - b


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def invert(a: QSeries) -> QSeries:
    """Multiplicative inverse of a series with nonzero constant term.

    Newton iteration ``b <- b (2 - a b)``, doubling the correct length each step.
    """
    c0 = a.poly[0]
    if c0 == 0:
        raise NonUnitError("series has zero constant term and is not invertible")
    n = a.prec
    b = flint.fmpq_poly([1 / c0])
    k = 1
    while k < n:
        k = min(2 * k, n)
        ab = a.poly.mul_low(b, k)
        b = b.mul_low(2 - ab, k)
    return QSeries(b, n)


def div_by_order(a: QSeries, b: QSeries) -> QSeries:
    """Exact quotient a / b where b may start at a positive power of q."""
    d = b.valuation()
    if d is INF:
        raise DegenerateDivisorError("divisor is zero within its precision")
    ord_a = a.valuation()
    if ord_a is not INF and ord_a < d:
        raise NotDivisibleError(f"q-order {ord_a} of dividend is below q-order {d} of divisor")
    n = min(a.prec, b.prec) - d
    if n < 1:
        raise DegenerateDivisorError("no coefficients survive the division")
    a_shift = QSeries(a.poly.truncate(n + d).right_shift(d), n)
    b_shift = QSeries(b.poly.truncate(n + d).right_shift(d), n)
    return a_shift * invert(b_shift)


def power(a: QSeries, n: int) -> QSeries:
    if n < 0:
        raise ParameterError("negative exponent; use invert")
    if n == 0:
        return QSeries.one(a.prec)
    return QSeries(a.poly.pow_trunc(n, a.prec), a.prec)


def apply_U(a: QSeries, p: int) -> QSeries:
    """Atkin's U: the coefficient of q^n becomes c_{pn}."""
    n = -(-a.prec // p)
    c = a.poly.coeffs()
    return QSeries(flint.fmpq_poly(c[::p]), n)


def apply_V(a: QSeries, p: int) -> QSeries:
    """Frobenius q -> q^p."""
    n = p * (a.prec - 1) + 1
    c = a.poly.coeffs()
    if not c:
        return QSeries.zero(n)
    out = [0] * (p * (len(c) - 1) + 1)
    out[::p] = c
    return QSeries(flint.fmpq_poly(out), n)


def min_val(a: QSeries, p: int, start: int = 0):
    """Smallest p-adic valuation among the coefficients c_start .. c_{prec-1}."""
    if not 0 <= start < a.prec:
        raise ParameterError(f"empty coefficient range [{start}, {a.prec})")
    if not is_prime(p):
        raise ParameterError(f"p must be a prime, got {p!r}")
    poly = a.poly.right_shift(start) if start else a.poly
    if poly.is_zero():
        return INF
    # min over n of v(num_n / den) = v(content of the numerator) - v(den)
    num = poly.numer()
    content = 0
    for c in num.coeffs():
        content = flint.fmpz(c).gcd(content)
        if content == 1:
            break
    return int_val(int(content), p) - int_val(int(poly.denom()), p)


def euler_product(prec: int) -> QSeries:
    """prod_{n >= 1} (1 - q^n) via the pentagonal number theorem."""
    c = [0] * prec
    k = 0
    while True:
        g1 = k * (3 * k - 1) // 2
        if g1 >= prec:
            break
        sign = -1 if k % 2 else 1
        c[g1] = sign
        if k:
            g2 = k * (3 * k + 1) // 2
            if g2 < prec:
                c[g2] = sign
        k += 1
    return QSeries(flint.fmpq_poly(c), prec)


def eta_quotient_fp(p: int, prec: int) -> QSeries:
    """Hauptmodul f_p = (eta(pz)/eta(z))^(24/(p-1)) = q + ... of X_0(p)."""
    if p not in GENUS_ZERO_PRIMES:
        raise ParameterError(f"f_p is only defined here for p in {GENUS_ZERO_PRIMES}, got {p}")
    return _eta_quotient_cached(p, prec)


@lru_cache(maxsize=64)
def _eta_quotient_cached(p, prec):
    e = 24 // (p - 1)
    if prec == 1:
        return QSeries.zero(1)
    n = prec - 1
    euler = euler_product(n)
    inner = apply_V(euler, p).truncate(n) * invert(euler)
    body = power(inner, e)
    return QSeries(body.poly.left_shift(1), prec)
