"""Expansions of modular functions in powers of the Hauptmodul f_p.

For p in {2, 3, 5, 7, 13} a weight-0 function g has a formal expansion
``g = sum a_i f_p^i``.  Membership ``g in p^c M_0(>= sigma)`` is equivalent to
``v_p(a_i) >= c + 12/(p-1) * sigma * i``; everything here certifies that kind
of statement on a finite index range.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import flint

from .arith import INF, ParameterError, padic_val
from .qseries import GENUS_ZERO_PRIMES, QSeries, _to_fmpq, _to_fraction, eta_quotient_fp


class PrecisionError(ValueError):
    """The input series does not carry enough q-coefficients."""


class OutOfCriterionError(ValueError):
    """A slope beyond the range where the f_p criterion is an equivalence."""


@dataclass(frozen=True)
class FpExpansion:
    p: int
    M: int
    a: tuple[Fraction, ...]
    source_prec: int

    def __getitem__(self, i):
        return self.a[i]


@dataclass(frozen=True)
class LinearBound:
    """The claim v_p(a_i) >= c0 + m * i for every i >= i0."""

    c0: Fraction
    m: Fraction
    i0: int = 1

    def required(self, i):
        return Fraction(self.c0) + Fraction(self.m) * i

    @classmethod
    def for_rate(cls, p, sigma, offset=0, i0=1):
        """Bound encoding g in p^offset * M_0(>= sigma)."""
        return cls(Fraction(offset), Fraction(12, p - 1) * Fraction(sigma), i0)


@dataclass
class BoundReport:
    bound: LinearBound
    checked_range: tuple[int, int]
    rows: list = field(default_factory=list)  # (i, observed, required)
    violations: list = field(default_factory=list)
    min_margin: object = INF

    @property
    def passed(self) -> bool:
        return not self.violations


def _check_p(p):
    if p not in GENUS_ZERO_PRIMES:
        raise ParameterError(f"f_p expansions need p in {GENUS_ZERO_PRIMES}, got {p}")


@lru_cache(maxsize=32)
def _fp_powers(p, prec, count):
    f = eta_quotient_fp(p, prec).poly
    out = [flint.fmpq_poly([1])]
    for _ in range(1, count):
        out.append(out[-1].mul_low(f, prec))
    return tuple(out)


def expand_in_fp(g: QSeries, p: int, M: int) -> FpExpansion:
    """Coefficients a_0..a_M of g in powers of f_p.

    Subtract-and-match: f_p^i = q^i + ..., so after removing a_0..a_{i-1}
    the residual's q^i coefficient is a_i.
    """
    _check_p(p)
    if M < 0:
        raise ParameterError(f"M must be >= 0, got {M}")
    if g.prec < M + 1:
        raise PrecisionError(f"expanding to index {M} needs q-precision {M + 1}, have {g.prec}")
    n = M + 1
    powers = _fp_powers(p, n, n)
    residual = g.poly.truncate(n)
    a = []
    for i in range(n):
        ai = residual[i]
        a.append(_to_fraction(ai))
        if ai != 0:
            residual = residual - powers[i] * ai
    return FpExpansion(p=p, M=M, a=tuple(a), source_prec=g.prec)


def fp_series(coeffs, p: int, prec: int) -> QSeries:
    """The q-series sum coeffs[i] * f_p^i to the given precision."""
    _check_p(p)
    powers = _fp_powers(p, prec, min(len(coeffs), prec))
    acc = flint.fmpq_poly()
    for c, fi in zip(coeffs, powers):
        if c:
            acc += fi * _to_fmpq(c)
    return QSeries(acc, prec)


def valuation_profile(e: FpExpansion) -> list:
    return [padic_val(c, e.p) for c in e.a]


def max_slope(p: int) -> Fraction:
    """Largest slope 12/(p-1) * p/(p+1) for which the criterion is an equivalence."""
    return Fraction(12, p - 1) * Fraction(p, p + 1)


def check_profile(profile, bound: LinearBound, p: int, M: int | None = None) -> BoundReport:
    """Compare observed valuations profile[i] with the bound for i0 <= i <= M."""
    if M is None:
        M = len(profile) - 1
    if bound.i0 > M:
        raise ParameterError(f"empty range [{bound.i0}, {M}]")
    report = BoundReport(bound=bound, checked_range=(bound.i0, M))
    for i in range(bound.i0, M + 1):
        obs = profile[i]
        req = bound.required(i)
        report.rows.append((i, obs, req))
        margin = obs - req
        if margin < 0:
            report.violations.append((i, obs, req))
        if margin < report.min_margin:
            report.min_margin = margin
    return report


def check_bound(e: FpExpansion, b: LinearBound) -> BoundReport:
    """Certify ``v_p(a_i) >= c0 + m i`` on ``[i0, M]``; a finite-range certificate."""
    if Fraction(b.m) > max_slope(e.p):
        raise OutOfCriterionError(
            f"slope {b.m} exceeds 12/(p-1) * p/(p+1) = {max_slope(e.p)} for p={e.p}"
        )
    return check_profile(valuation_profile(e), b, e.p, e.M)


def rational_fn_expansion(numer, denom, p: int, M: int) -> FpExpansion:
    """Formal power series in f of numer(f)/denom(f), up to f^M."""
    numer = [Fraction(c) for c in numer]
    denom = [Fraction(c) for c in denom]
    if not denom or denom[0] == 0:
        raise ParameterError("denominator must have a nonzero constant term")
    a = []
    for i in range(M + 1):
        acc = numer[i] if i < len(numer) else Fraction(0)
        for j in range(1, min(i, len(denom) - 1) + 1):
            acc -= denom[j] * a[i - j]
        a.append(acc / denom[0])
    return FpExpansion(p=p, M=M, a=tuple(a), source_prec=M + 1)


def certified_rate(profile, p: int, i0: int = 1, offset=0):
    """Largest sigma such that v_p(a_i) >= offset + 12/(p-1) sigma i on the profile."""
    best = INF
    for i in range(max(i0, 1), len(profile)):
        v = profile[i]
        if v is INF:
            continue
        s = (Fraction(v) - offset) * Fraction(p - 1, 12) / i
        if s < best:
            best = s
    return best
