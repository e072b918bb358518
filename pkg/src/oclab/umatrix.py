"""The matrix of U on powers of f_p: U(f^i) = sum_j c_{i,j} f^j."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import ParameterError, int_val
from .fpbasis import _fp_powers
from .qseries import GENUS_ZERO_PRIMES, QSeries, apply_U

# Extra q-coefficients of U(f^i) inspected past j = ip to confirm the expansion stops.
RESIDUAL_PAD = 8


class ConsistencyError(ArithmeticError):
    """A computed U-matrix violates integrality or termination."""


@dataclass
class UMatrix:
    p: int
    i_max: int
    entries: dict = field(default_factory=dict)  # (i, j) -> int, nonzero only

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def row(self, i):
        return {j: c for (ii, j), c in self.entries.items() if ii == i}

    def support_ok(self) -> bool:
        p = self.p
        return all(i <= p * j and j <= i * p for (i, j) in self.entries)


def gamma(p: int) -> Fraction:
    return Fraction(12, p * p - 1)


def star_slope(p: int) -> Fraction:
    return gamma(p) - Fraction(1, p - 1)


def star_rate(p: int) -> Fraction:
    """The rate (p-1)/12 * (gamma_p - 1/(p-1)); equals 1/(2p) for p = 2, 3."""
    return Fraction(p - 1, 12) * star_slope(p)


def compute_umatrix(p: int, i_max: int) -> UMatrix:
    """Expand U(f_p^i) in powers of f_p for 0 <= i <= i_max, directly from q-expansions."""
    if p not in GENUS_ZERO_PRIMES:
        raise ParameterError(f"U-matrix needs p in {GENUS_ZERO_PRIMES}, got {p}")
    if i_max < 1:
        raise ParameterError(f"i_max must be >= 1, got {i_max}")
    return UMatrix(p=p, i_max=i_max, entries=dict(_umatrix_entries(p, i_max)))


@lru_cache(maxsize=16)
def _umatrix_entries(p, i_max):
    out_prec = p * i_max + 1 + RESIDUAL_PAD
    in_prec = p * out_prec
    src = _fp_powers(p, in_prec, i_max + 1)
    tgt = _fp_powers(p, out_prec, p * i_max + 1)
    entries = {}
    for i in range(i_max + 1):
        residual = apply_U(QSeries(src[i], in_prec), p).poly
        for j in range(i * p + 1):
            c = residual[j]
            if c == 0:
                continue
            if c.q != 1:
                raise ConsistencyError(f"c_({i},{j}) = {c} is not an integer (p={p})")
            entries[(i, j)] = int(c.p)
            residual = residual - tgt[j] * c
        if not residual.is_zero():
            raise ConsistencyError(f"U(f^{i}) does not terminate at j = {i * p} (p={p})")
    return tuple(entries.items())


def umatrix_recurrence_p2(i_max: int) -> UMatrix:
    """c_{i,j} = 2^12 c_{i-1,j-2} + 48 c_{i-1,j-1} + c_{i-2,j-1} for i >= 2.

    Seeds: c_{0,0} = 1 (U(1) = 1), c_{1,1} = 24, c_{1,2} = 2^11; entries with a
    negative index are zero.
    """
    if i_max < 1:
        raise ParameterError(f"i_max must be >= 1, got {i_max}")
    c = {(0, 0): 1, (1, 1): 24, (1, 2): 2**11}
    for i in range(2, i_max + 1):
        for j in range(0, 2 * i + 1):
            v = (
                2**12 * c.get((i - 1, j - 2), 0)
                + 48 * c.get((i - 1, j - 1), 0)
                + c.get((i - 2, j - 1), 0)
            )
            if v:
                c[(i, j)] = v
    return UMatrix(p=2, i_max=i_max, entries=c)


@dataclass
class EntryCheck:
    i: int
    j: int
    value: int
    observed: object
    required: Fraction

    @property
    def margin(self):
        return self.observed - self.required

    @property
    def passed(self):
        return self.margin >= 0


def _check(u: UMatrix, required_fn) -> list[EntryCheck]:
    out = []
    for (i, j) in sorted(u.entries):
        value = u.entries[(i, j)]
        obs = int_val(value, u.p)
        out.append(EntryCheck(i, j, value, obs, required_fn(i, j)))
    return out


def check_general_bound(u: UMatrix) -> list[EntryCheck]:
    """v_p(c_{i,j}) >= gamma_p (pj - i) - 1 for every stored entry."""
    g = gamma(u.p)
    return _check(u, lambda i, j: g * (u.p * j - i) - 1)


class StarBoundRefused(ParameterError):
    pass


def star_witness(p: int) -> str:
    if p == 5:
        return ("for p=5, c_(4,1) = 24 has valuation 0 while p*j - i = 1 > 0, so no bound "
                "v_p(c_ij) >= a (pj - i) with a > 0 can hold")
    return f"for p={p} no positive slope a gives v_p(c_ij) >= a (pj - i) (see p=5: c_(4,1) = 24)"


def check_star_bound(u: UMatrix) -> list[EntryCheck]:
    """v_p(c_{i,j}) >= (gamma_p - 1/(p-1)) (pj - i); only meaningful for p = 2, 3."""
    if u.p not in (2, 3):
        raise StarBoundRefused(f"the strengthened bound is refused for p={u.p}: {star_witness(u.p)}")
    s = star_slope(u.p)
    return _check(u, lambda i, j: s * (u.p * j - i))


def origin_bound_counterexample(u: UMatrix):
    """First entry with pj - i > 0 and v_p(c_{i,j}) = 0, if any."""
    for (i, j) in sorted(u.entries):
        if u.p * j - i > 0 and int_val(u.entries[(i, j)], u.p) == 0:
            return (i, j, u.entries[(i, j)])
    return None

