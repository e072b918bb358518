"""Katz expansions g = sum_i b_i / E_{p-1}^i for p >= 5.

The complement B_i of E_{p-1} M_{(i-1)(p-1)} inside M_{i(p-1)} is spanned by
the Miller basis elements of weight i(p-1) whose q-order is at least
dim M_{(i-1)(p-1)}.  With that choice the coefficients of h E_{p-1}^i in the
window [dim M_{(i-1)(p-1)}, dim M_{i(p-1)}) are exactly the coordinates of b_i,
so the expansion is computed by a triangular sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

from .arith import INF, ParameterError, is_prime, padic_val
from .eisenstein import eisenstein_series
from .fpbasis import PrecisionError
from .qseries import QSeries, _to_fraction, euler_product, invert, power

BASIS_CHOICE = "miller: weight i(p-1) Miller forms of q-order >= dim M_{(i-1)(p-1)}"


def dim_modular_forms(weight: int) -> int:
    """Dimension of level-one modular forms of the given even weight."""
    if weight < 0 or weight % 2:
        return 0
    if weight == 2:
        return 0
    return weight // 12 + (0 if weight % 12 == 2 else 1)


def delta_series(prec: int) -> QSeries:
    """Delta = q prod (1 - q^n)^24."""
    if prec == 1:
        return QSeries.zero(1)
    body = power(euler_product(prec - 1), 24)
    return QSeries(body.poly.left_shift(1), prec)


def miller_basis(weight: int, prec: int) -> list[QSeries]:
    """Echelon basis of M_weight(SL_2(Z)): the j-th element is q^j + O(q^d)."""
    if weight < 0 or weight % 2:
        raise ParameterError(f"weight must be even and >= 0, got {weight}")
    return list(_miller_cached(weight, prec))


@lru_cache(maxsize=128)
def _miller_cached(weight, prec):
    d = dim_modular_forms(weight)
    if d == 0:
        return ()
    if weight == 0:
        return (QSeries.one(prec),)
    delta = delta_series(prec)
    rows = []
    for j in range(d):
        w = weight - 12 * j
        if w % 4 == 0:
            a, b = w // 4, 0
        else:
            a, b = (w - 6) // 4, 1
        f = power(delta, j)
        if a:
            f = f * power(eisenstein_series(4, prec), a)
        if b:
            f = f * eisenstein_series(6, prec)
        rows.append(f.poly)
    # back-substitute so that row j vanishes at q^l for every other l < d
    for j in range(d - 1, -1, -1):
        for l in range(j + 1, d):
            c = rows[j][l]
            if c != 0:
                rows[j] = rows[j] - rows[l] * c
    return tuple(QSeries(r, prec) for r in rows)


def bi_basis(i: int, p: int, prec: int) -> list[QSeries]:
    """Basis of the complement B_i inside M_{i(p-1)}; B_0 is the constants."""
    if i < 0:
        raise ParameterError(f"i must be >= 0, got {i}")
    if i == 0:
        return [QSeries.one(prec)]
    lo = dim_modular_forms((i - 1) * (p - 1))
    return miller_basis(i * (p - 1), prec)[lo:]


def splitting_rank(i: int, p: int) -> tuple[int, int]:
    """(rank of E_{p-1} M_{(i-1)(p-1)} + B_i, dim M_{i(p-1)}), computed exactly."""
    if i < 1:
        raise ParameterError(f"splittings are defined for i >= 1, got {i}")
    d = dim_modular_forms(i * (p - 1))
    prec = max(d, 1)
    e = eisenstein_series(p - 1, prec)
    gens = [e * m for m in miller_basis((i - 1) * (p - 1), prec)] + bi_basis(i, p, prec)
    if not gens or d == 0:
        return 0, d
    mat = flint.fmpq_mat([[g.poly[n] for n in range(d)] for g in gens])
    return mat.rank(), d


@dataclass(frozen=True)
class KatzExpansion:
    p: int
    i_max: int
    b: tuple  # QSeries b_i, weight i(p-1)
    coords: tuple  # coordinates of b_i in the B_i basis
    basis_choice: str
    justified_prec: int
    residual_order: object


def _check_katz_p(p):
    if not is_prime(p) or p < 5:
        raise ParameterError(f"Katz expansions need a prime p >= 5, got {p}")


def required_precision(p: int, i_max: int) -> int:
    return max(dim_modular_forms(i_max * (p - 1)), 1)


def katz_expand(g: QSeries, p: int, i_max: int) -> KatzExpansion:
    """Katz coefficients b_0..b_{i_max} of the weight-0 series g."""
    _check_katz_p(p)
    if i_max < 0:
        raise ParameterError(f"i_max must be >= 0, got {i_max}")
    need = required_precision(p, i_max)
    if g.prec < need:
        raise PrecisionError(f"Katz expansion through i={i_max} needs q-precision {need}, have {g.prec}")
    n = g.prec
    e = eisenstein_series(p - 1, n)
    e_inv = invert(e)
    h = g
    e_pow = QSeries.one(n)
    e_inv_pow = QSeries.one(n)
    bs, coords = [], []
    for i in range(i_max + 1):
        lo = dim_modular_forms((i - 1) * (p - 1)) if i else 0
        hi = dim_modular_forms(i * (p - 1))
        w = h * e_pow
        for j in range(min(lo, n)):
            if w.poly[j] != 0:
                raise ArithmeticError(f"Katz sweep lost triangularity at i={i}, q^{j}")
        basis = bi_basis(i, p, n)
        cs = [_to_fraction(w.poly[j]) for j in range(lo, hi)]
        bi = QSeries.zero(n)
        for c, m in zip(cs, basis):
            if c:
                bi = bi + m * c
        bs.append(bi)
        coords.append(tuple(cs))
        h = h - bi * e_inv_pow
        e_pow = e_pow * e
        e_inv_pow = e_inv_pow * e_inv
    residual_order = h.valuation()
    if residual_order is not INF and residual_order < need:
        raise ArithmeticError(f"Katz residual has q-order {residual_order} < {need}")
    return KatzExpansion(
        p=p, i_max=i_max, b=tuple(bs), coords=tuple(coords), basis_choice=BASIS_CHOICE,
        justified_prec=need, residual_order=residual_order,
    )


def katz_profile(e: KatzExpansion) -> list:
    """v_p(b_i) for each i: the minimum valuation over b_i's integral coordinates."""
    out = []
    for cs in e.coords:
        vals = [padic_val(c, e.p) for c in cs if c]
        out.append(min(vals) if vals else INF)
    return out


def katz_sum(e: KatzExpansion, prec: int | None = None) -> QSeries:
    """sum b_i / E_{p-1}^i, the round-trip reconstruction of the source."""
    n = e.justified_prec if prec is None else prec
    e_inv = invert(eisenstein_series(e.p - 1, n))
    acc = QSeries.zero(n)
    scale = QSeries.one(n)
    for bi in e.b:
        acc = acc + bi.truncate(n) * scale
        scale = scale * e_inv
    return acc


def katz_certified_rate(profile, i0: int = 1):
    """Largest sigma with v_p(b_i) >= sigma i on the profile."""
    best = INF
    for i in range(max(i0, 1), len(profile)):
        v = profile[i]
        if v is INF:
            continue
        s = Fraction(v) / i
        if s < best:
            best = s
    return best
