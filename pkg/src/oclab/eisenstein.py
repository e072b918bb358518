"""Eisenstein series, their p-deprived versions, and the Hasse-invariant lift F.

Normalisation is E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, so E_6 = 1 - 504 q - ...
A "+504" sign is sometimes seen for E_6; it is incompatible with the closed form
E_6/V(E_6) = (1 - 2^9 f_2)/(1 - 2^3 f_2), which holds exactly with -504.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

from .arith import ParameterError, bernoulli, int_val, is_prime, sigma_table
from .qseries import QSeries, apply_V, power


def _check_weight(p, k):
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"p must be a prime, got {p!r}")
    if not isinstance(k, int) or k < 4 or k % 2:
        raise ParameterError(f"k must be an even integer >= 4, got {k!r}")
    if k % (p - 1):
        raise ParameterError(f"k = {k} is not divisible by p - 1 = {p - 1}")


@dataclass(frozen=True)
class Params:
    """The constants attached to a pair (p, k).

    ``f_recipe`` lists ``(weight, exponent)`` factors whose product is F;
    ``f_case`` names which branch of the definition of F was taken.
    ``s`` is ``v_p(k/2)`` and is only defined for p in {2, 3}.
    """

    p: int
    k: int
    rho: Fraction
    t: int
    s: int | None
    f_case: str
    f_recipe: tuple[tuple[int, int], ...]

    @property
    def sigma(self) -> Fraction:
        """Overconvergence rate t/(t+1) * rho guaranteed for E*_k / V(E*_k)."""
        return Fraction(self.t, self.t + 1) * self.rho


def params(p: int, k: int) -> Params:
    _check_weight(p, k)
    if p >= 5 or k % (2 * p) == 0:
        rho = Fraction(1, p + 1)
    else:
        rho = Fraction(1, 2 * p)

    if p == 2:
        t = 3 if k == 4 else 3 + int_val(k, 2)
    else:
        t = 2 + int_val(k, p)

    s = int_val(k // 2, p) if p in (2, 3) else None

    if p == 2 and k % 4 == 0:
        case, recipe = "E4^(k/4)", ((4, k // 4),)
    elif p == 2:
        case, recipe = "E4^((k-6)/4) E6", ((4, (k - 6) // 4), (6, 1))
    elif p == 3 and k % 6 == 0:
        case, recipe = "E6^(k/6)", ((6, k // 6),)
    elif p == 3 and k % 6 == 2:
        case, recipe = "E8 E6^((k-8)/6)", ((8, 1), (6, (k - 8) // 6))
    elif p == 3:
        case, recipe = "E4 E6^((k-4)/6)", ((4, 1), (6, (k - 4) // 6))
    else:
        case, recipe = "E_{p-1}^(k/(p-1))", ((p - 1, k // (p - 1)),)

    if any(e < 0 for _, e in recipe):
        raise ParameterError(f"F is undefined for p={p}, k={k}: negative exponent")
    recipe = tuple((w, e) for w, e in recipe if e > 0)
    return Params(p=p, k=k, rho=rho, t=t, s=s, f_case=case, f_recipe=recipe)


def eisenstein_series(m: int, prec: int) -> QSeries:
    """E_m = 1 - (2m / B_m) sum sigma_{m-1}(n) q^n, level one."""
    if not isinstance(m, int) or m < 4 or m % 2:
        raise ParameterError(f"Eisenstein weight must be even and >= 4, got {m!r}")
    return _eisenstein_cached(m, prec)


@lru_cache(maxsize=32)
def _eisenstein_cached(m, prec):
    scale = -2 * m / bernoulli(m)
    sig = sigma_table(m - 1, prec)
    poly = flint.fmpq_poly(sig) * flint.fmpq(scale.numerator, scale.denominator)
    return QSeries(poly + 1, prec)


def estar(p: int, k: int, prec: int) -> QSeries:
    """p-deprived Eisenstein series (E_k - p^(k-1) V(E_k)) / (1 - p^(k-1))."""
    _check_weight(p, k)
    ek = eisenstein_series(k, prec)
    vek = apply_V(eisenstein_series(k, -(-prec // p) + 1), p).truncate(prec)
    pk = p ** (k - 1)
    return (ek - vek * pk) * Fraction(1, 1 - pk)


def form_from_recipe(recipe, prec: int) -> QSeries:
    out = QSeries.one(prec)
    for weight, exponent in recipe:
        out = out * power(eisenstein_series(weight, prec), exponent)
    return out


def lift_F(p: int, k: int, prec: int) -> QSeries:
    return form_from_recipe(params(p, k).f_recipe, prec)
