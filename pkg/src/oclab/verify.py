"""Finite-range certification of the overconvergence statements for E*_k / V(E*_k).

Each ``verify_*`` function returns a :class:`VerificationReport` whose rows
compare an observed valuation (computed from q-expansions) against a required
value (computed from the parameters alone).  A report certifies its checked
index range and nothing beyond it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import INF, ParameterError, format_val
from .eisenstein import eisenstein_series, estar, lift_F, params
from .fpbasis import (
    LinearBound, PrecisionError, certified_rate, check_bound, expand_in_fp, fp_series,
    valuation_profile,
)
from .katz import katz_certified_rate, katz_expand, katz_profile, required_precision
from .qseries import GENUS_ZERO_PRIMES, QSeries, apply_U, apply_V, invert, min_val
from .umatrix import (
    StarBoundRefused, check_general_bound, check_star_bound, compute_umatrix, star_rate,
    star_slope, star_witness,
)

CLAIMS = (
    "THM_A", "PROP_SPECIAL", "PROP_CONGR", "IDENTITIES_21", "COR_UF_F", "LEMMA_UI",
    "PROP_ES_VS_F", "SERRE_CONV", "UMATRIX_GENERAL", "UMATRIX_STAR",
)

SHARPNESS_WINDOW = 10


@dataclass
class Row:
    i: int
    observed: object
    required: object
    margin: object
    label: str = ""

    @property
    def passed(self) -> bool:
        return self.margin is INF or self.margin >= 0


@dataclass
class VerificationReport:
    claim_id: str
    params: dict
    status: str
    rows: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def first_violation(self):
        for r in self.rows:
            if not r.passed:
                return r
        return None

    def row(self, i, label=""):
        for r in self.rows:
            if r.i == i and r.label == label:
                return r
        raise KeyError((i, label))


def _margin(obs, req):
    if obs is INF:
        return INF
    m = Fraction(obs) - Fraction(req)
    return m.numerator if m.denominator == 1 else m


def _row(i, obs, req, label=""):
    if isinstance(req, Fraction) and req.denominator == 1:
        req = req.numerator
    return Row(i=i, observed=obs, required=req, margin=_margin(obs, req), label=label)


def _finish(claim, prm, rows, details=None, extra_ok=True):
    ok = extra_ok and all(r.passed for r in rows)
    details = dict(details or {})
    bad = next((r for r in rows if not r.passed), None)
    if bad is not None:
        details["first_violation"] = {
            "i": bad.i, "label": bad.label,
            "observed": format_val(bad.observed), "required": format_val(bad.required),
        }
    return VerificationReport(claim, prm, "pass" if ok else "fail", rows, details)


def _bound_rows(profile, bound: LinearBound, M, label=""):
    return [_row(i, profile[i], bound.required(i), label) for i in range(bound.i0, M + 1)]


def _need(N, required, what):
    if N is None:
        return required
    if N < required:
        raise PrecisionError(f"{what} needs q-precision N >= {required}, got N = {N}")
    return N


def _check_fp_prime(p):
    if p not in GENUS_ZERO_PRIMES:
        raise ParameterError(f"f_p certification needs p in {GENUS_ZERO_PRIMES}, got {p}")


# modular functions built from (p, k)

def estar_ratio(p, k, prec) -> QSeries:
    """E*_k / V(E*_k)."""
    e = estar(p, k, prec)
    return e * invert(apply_V(e, p).truncate(prec))


def hasse_ratio(p, k, prec) -> QSeries:
    """F / V(F)."""
    f = lift_F(p, k, prec)
    return f * invert(apply_V(f, p).truncate(prec))


def u_iterate(f: QSeries, p, i) -> QSeries:
    for _ in range(i):
        f = apply_U(f, p)
    return f


def ui_over_f(p, k, i, prec) -> QSeries:
    """U^i(F) / F, from F at precision p^i (prec - 1) + 1."""
    f_big = lift_F(p, k, p**i * (prec - 1) + 1)
    return u_iterate(f_big, p, i).truncate(prec) * invert(f_big.truncate(prec))


def es_over_f(p, k, prec) -> QSeries:
    return estar(p, k, prec) * invert(lift_F(p, k, prec))


def f_over_es(p, k, prec) -> QSeries:
    return lift_F(p, k, prec) * invert(estar(p, k, prec))


FUNCTIONS = {
    "estar-ratio": lambda p, k, n: estar_ratio(p, k, n),
    "f-ratio": lambda p, k, n: hasse_ratio(p, k, n),
    "uf-over-f": lambda p, k, n: ui_over_f(p, k, 1, n),
    "es-over-f": lambda p, k, n: es_over_f(p, k, n),
    "f-over-es": lambda p, k, n: f_over_es(p, k, n),
}


def _base_params(p, k, **extra):
    prm = {"p": p, "k": k}
    prm.update({key: v for key, v in extra.items() if v is not None})
    return prm


def thm_a_bound(p, k) -> LinearBound:
    return LinearBound.for_rate(p, params(p, k).sigma)


def verify_theorem_a(p, k, M, N=None) -> VerificationReport:
    """v_p(a_i) >= 12/(p-1) * t/(t+1) * rho * i for the f_p-expansion of E*_k/V(E*_k)."""
    _check_fp_prime(p)
    prm = params(p, k)
    N = _need(N, M + 1, f"f_p expansion to index {M}")
    e = expand_in_fp(estar_ratio(p, k, N), p, M)
    bound = thm_a_bound(p, k)
    rep = check_bound(e, bound)
    rows = _bound_rows(valuation_profile(e), bound, M)
    details = {
        "rho": format_val(prm.rho), "t": prm.t, "sigma": format_val(prm.sigma),
        "slope": format_val(bound.m), "checked_range": [1, M], "method": "fp",
        "min_margin": format_val(rep.min_margin),
        "a0": format_val(e.a[0]),
    }
    return _finish("THM_A", _base_params(p, k, M=M, N=N), rows, details, extra_ok=e.a[0] == 1)


def verify_theorem_a_katz(p, k, i_max, N=None) -> VerificationReport:
    """v_p(b_i) >= t/(t+1) * rho * i for the Katz expansion of E*_k/V(E*_k), p >= 5."""
    prm = params(p, k)
    if p < 5:
        raise ParameterError(f"Katz expansions need p >= 5, got {p}")
    N = _need(N, required_precision(p, i_max), f"Katz expansion to i={i_max}")
    ke = katz_expand(estar_ratio(p, k, N), p, i_max)
    profile = katz_profile(ke)
    bound = LinearBound(Fraction(0), prm.sigma, 1)
    rows = _bound_rows(profile, bound, i_max)
    details = {
        "rho": format_val(prm.rho), "t": prm.t, "sigma": format_val(prm.sigma),
        "slope": format_val(bound.m), "checked_range": [1, i_max], "method": "katz",
        "basis_choice": ke.basis_choice, "certified_rate": format_val(katz_certified_rate(profile)),
    }
    return _finish("THM_A", _base_params(p, k, M=i_max, N=N, method="katz"), rows, details,
                   extra_ok=profile[0] == 0)


def cross_certify(p, k, M, i_max=None) -> dict:
    """The THM_A bound certified by both the f_p profile and the Katz profile."""
    i_max = M if i_max is None else i_max
    fp_rep = verify_theorem_a(p, k, M)
    katz_rep = verify_theorem_a_katz(p, k, i_max)
    fp_rate = certified_rate([None] + [r.observed for r in fp_rep.rows], p)
    return {
        "fp": fp_rep,
        "katz": katz_rep,
        "fp_rate": fp_rate,
        "katz_rate": katz_rep.details["certified_rate"],
        "sigma": params(p, k).sigma,
    }


def special_slope(p) -> Fraction:
    return Fraction(12, p - 1) * Fraction(1, 2 * p)


def verify_special(p, k, M, N=None) -> VerificationReport:
    """E*_k/V(E*_k) in 1 + p^s M_0(>= 1/(2p)): v_p(a_i) >= s + 3i (p=2) or s + i (p=3)."""
    if p not in (2, 3):
        raise ParameterError(f"the special proposition concerns p in {{2, 3}}, got {p}")
    prm = params(p, k)
    N = _need(N, M + 1, f"f_p expansion to index {M}")
    e = expand_in_fp(estar_ratio(p, k, N), p, M)
    bound = LinearBound(Fraction(prm.s), special_slope(p), 1)
    rows = _bound_rows(valuation_profile(e), bound, M)
    attained = [r.i for r in rows if r.margin == 0 and r.i <= SHARPNESS_WINDOW]
    details = {
        "s": prm.s, "slope": format_val(bound.m), "checked_range": [1, M],
        "a0": format_val(e.a[0]),
        "attained_at": attained, "sharp": bool(attained),
    }
    return _finish("PROP_SPECIAL", _base_params(p, k, M=M, N=N), rows, details,
                   extra_ok=e.a[0] == 1)


def crossover_index(p, k):
    """Exact i where s + slope_special i = slope_A i, or None if the lines never cross for i > 0."""
    prm = params(p, k)
    if prm.s is None:
        return None
    diff = thm_a_bound(p, k).m - special_slope(p)
    if diff <= 0:
        return None
    return Fraction(prm.s) / diff


def verify_congruence(p, k, N=64, i_max=4, u_prec=16) -> VerificationReport:
    """E*_k = E_k = F mod p^t and U^i(F) = F mod p^t in q-expansion.

    The first two congruences are checked through q^(N-1).  U^i(F) - F is
    checked on ``u_prec`` coefficients, from F at precision p^i (u_prec - 1) + 1.
    """
    prm = params(p, k)
    if N < 1 or u_prec < 1:
        raise ParameterError("precisions must be >= 1")
    es = estar(p, k, N)
    ek = eisenstein_series(k, N)
    f = lift_F(p, k, N)
    rows = [
        _row(0, min_val(es - ek, p), prm.t, "E*-E_k"),
        _row(0, min_val(es - f, p), prm.t, "E*-F"),
    ]
    f_big = lift_F(p, k, max(N, p**i_max * (u_prec - 1) + 1))
    u = f_big
    u_precs = []
    for i in range(1, i_max + 1):
        u = apply_U(u, p)
        n = min(u.prec, f_big.prec)
        u_precs.append(n)
        rows.append(_row(i, min_val(u.truncate(n) - f_big.truncate(n), p), prm.t, "U^i(F)-F"))
    es_f = rows[1].observed
    details = {
        "t": prm.t, "f_case": prm.f_case,
        "exponent_es_f_equals_t": es_f == prm.t,
        "u_precisions": u_precs,
        "es_ek_at_least_k_minus_1": rows[0].observed >= k - 1 or (p, k) == (2, 4),
    }
    return _finish("PROP_CONGR", _base_params(p, k, N=N, i_max=i_max, u_prec=u_prec), rows, details)


IDENTITIES = {
    2: (
        ("E4/V(E4)", 4, (1, 2**8), (1, 2**4)),
        ("E6/V(E6)", 6, (1, -(2**9)), (1, -(2**3))),
    ),
    3: (
        ("E4/V(E4)", 4, (1, 3**5), (1, 3)),
        ("E6/V(E6)", 6, (1, -2 * 3**5, -(3**9)), (1, 2 * 3**2, -(3**3))),
    ),
}


def e_ratio(weight, p, prec) -> QSeries:
    e = eisenstein_series(weight, prec)
    return e * invert(apply_V(e, p).truncate(prec))


def verify_identities_21(p, N=200) -> VerificationReport:
    """E4/V(E4) and E6/V(E6) as explicit rational functions of f_p, p = 2, 3.

    Row ``observed`` is the number of leading q-coefficients on which the two
    sides agree; ``required`` is N.
    """
    if p not in IDENTITIES:
        raise ParameterError(f"closed forms are known here only for p in {{2, 3}}, got {p}")
    rows = []
    for label, weight, numer, denom in IDENTITIES[p]:
        lhs = e_ratio(weight, p, N)
        rhs = fp_series(numer, p, N) * invert(fp_series(denom, p, N))
        diff = (lhs - rhs).valuation()
        agree = N if diff is INF else diff
        rows.append(_row(0, agree, N, label))
    return _finish("IDENTITIES_21", {"p": p, "N": N}, rows, {"numerators_denominators": {
        label: [list(numer), list(denom)] for label, _, numer, denom in IDENTITIES[p]}})


def verify_cor_UF_F(p, k, M, N=None) -> VerificationReport:
    """U(F)/F in (1/p) M_0(>= p rho): v_p(a_i) >= -1 + 12/(p-1) p rho i."""
    _check_fp_prime(p)
    prm = params(p, k)
    N = _need(N, p * M + 1, f"U(F) to index {M}")
    g = ui_over_f(p, k, 1, (N - 1) // p + 1)
    e = expand_in_fp(g, p, M)
    bound = LinearBound.for_rate(p, p * prm.rho, offset=-1)
    check_bound(e, bound)
    rows = _bound_rows(valuation_profile(e), bound, M)
    details = {"rho": format_val(prm.rho), "slope": format_val(bound.m), "offset": -1,
               "a0": format_val(e.a[0]), "checked_range": [1, M]}
    return _finish("COR_UF_F", _base_params(p, k, M=M, N=N), rows, details)


def verify_lemma_ui(p, k, i_max, M, N=None) -> VerificationReport:
    """U^i(F)/F - U(F)/F in M_0(>= p rho) for 2 <= i <= i_max."""
    _check_fp_prime(p)
    prm = params(p, k)
    N = _need(N, p**max(i_max, 1) * M + 1, f"U^{i_max}(F) to index {M}")
    bound = LinearBound.for_rate(p, p * prm.rho, offset=0)
    base = ui_over_f(p, k, 1, M + 1)
    rows = []
    for i in range(2, i_max + 1):
        diff = ui_over_f(p, k, i, M + 1) - base
        e = expand_in_fp(diff, p, M)
        prof = valuation_profile(e)
        label = f"i={i}"
        rows.append(_row(0, prof[0], 0, label))
        rows.extend(_bound_rows(prof, bound, M, label))
    details = {"rho": format_val(prm.rho), "slope": format_val(bound.m), "checked_range": [1, M],
               "iterates": list(range(2, i_max + 1))}
    return _finish("LEMMA_UI", _base_params(p, k, M=M, N=N, i_max=i_max), rows, details)


def verify_prop_es_vs_f(p, k, M, N=None) -> VerificationReport:
    """E*_k/F in (1/p) M_0(>= p rho), and F/E*_k in M_0(>= t/(t+1) p rho)."""
    _check_fp_prime(p)
    prm = params(p, k)
    N = _need(N, M + 1, f"f_p expansion to index {M}")
    b1 = LinearBound.for_rate(p, p * prm.rho, offset=-1)
    b2 = LinearBound.for_rate(p, Fraction(prm.t, prm.t + 1) * p * prm.rho, offset=0)
    e1 = expand_in_fp(es_over_f(p, k, N), p, M)
    e2 = expand_in_fp(f_over_es(p, k, N), p, M)
    rows = _bound_rows(valuation_profile(e1), b1, M, "E*/F")
    rows += _bound_rows(valuation_profile(e2), b2, M, "F/E*")
    ok = e1.a[0] == 1 and e2.a[0] == 1
    details = {"rho": format_val(prm.rho), "t": prm.t,
               "slope_es_over_f": format_val(b1.m), "slope_f_over_es": format_val(b2.m),
               "constant_terms": [format_val(e1.a[0]), format_val(e2.a[0])],
               "checked_range": [1, M]}
    return _finish("PROP_ES_VS_F", _base_params(p, k, M=M, N=N), rows, details, extra_ok=ok)


def verify_serre_convergence(p, k, i_max, N) -> VerificationReport:
    """m_i = min_val(U^i(F) - E*_k) for i = 0..i_max, each at its natural precision.

    Passes when every m_i >= t, the sequence is nondecreasing, and m_{i_max} > m_0.
    """
    if p not in (2, 3, 5, 7):
        raise ParameterError(f"Serre's convergence lemma is used for p <= 7, got {p}")
    prm = params(p, k)
    f = lift_F(p, k, N)
    es = estar(p, k, N)
    rows, ms, precs = [], [], []
    u = f
    for i in range(i_max + 1):
        if i:
            u = apply_U(u, p)
        m = min_val(u - es.truncate(u.prec), p)
        ms.append(m)
        precs.append(u.prec)
        rows.append(_row(i, m, prm.t))
    nondecreasing = all(a <= b for a, b in zip(ms, ms[1:]))
    strict = ms[-1] > ms[0]
    details = {"t": prm.t, "nondecreasing": nondecreasing, "strict_growth": strict,
               "precisions": precs, "sequence": [format_val(m) for m in ms]}
    return _finish("SERRE_CONV", _base_params(p, k, N=N, i_max=i_max), rows, details,
                   extra_ok=nondecreasing and strict)


def verify_umatrix(p, i_max, check="general") -> VerificationReport:
    """Bounds on c_{i,j}; ``check`` is 'general' or 'star'."""
    if check == "star" and p not in (2, 3):
        raise StarBoundRefused(f"the strengthened bound is refused for p={p}: {star_witness(p)}")
    u = compute_umatrix(p, i_max)
    if check == "star":
        entries = check_star_bound(u)
        claim = "UMATRIX_STAR"
        extra = {"slope": format_val(star_slope(p)), "induced_rate": format_val(star_rate(p))}
    elif check == "general":
        entries = check_general_bound(u)
        claim = "UMATRIX_GENERAL"
        extra = {"gamma": format_val(Fraction(12, p * p - 1))}
    else:
        raise ParameterError(f"unknown U-matrix check {check!r}")
    rows = [_row(e.i, e.observed, e.required, f"j={e.j}") for e in entries]
    details = {"support_ok": u.support_ok(), "entries": len(u.entries), **extra}
    return _finish(claim, {"p": p, "i_max": i_max}, rows, details, extra_ok=u.support_ok())


RUNNERS = {
    "thm-a": verify_theorem_a,
    "special": verify_special,
    "congruence": verify_congruence,
    "cor-uf": verify_cor_UF_F,
    "lemma-ui": verify_lemma_ui,
    "es-vs-f": verify_prop_es_vs_f,
    "serre": verify_serre_convergence,
    "katz": verify_theorem_a_katz,
}


def _run_cell(job):
    name, kwargs = job
    try:
        return RUNNERS[name](**kwargs)
    except ParameterError as exc:
        return VerificationReport(CLAIM_OF[name], dict(kwargs), "skipped", [], {"reason": str(exc)})


CLAIM_OF = {
    "thm-a": "THM_A", "special": "PROP_SPECIAL", "congruence": "PROP_CONGR",
    "cor-uf": "COR_UF_F", "lemma-ui": "LEMMA_UI", "es-vs-f": "PROP_ES_VS_F",
    "serre": "SERRE_CONV", "katz": "THM_A",
}


def run_sweep(name, ps, ks, jobs=1, **kwargs) -> list[VerificationReport]:
    """Run one verifier over the cartesian product ps x ks.

    Cells whose (p, k) violate the verifier's preconditions come back with
    status ``skipped``.  Output is sorted by (p, k) whatever the completion order.
    """
    if name not in RUNNERS:
        raise ParameterError(f"unknown sweep claim {name!r}")
    cells = sorted({(p, k) for p in ps for k in ks})
    work = [(name, {"p": p, "k": k, **kwargs}) for p, k in cells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, work))
    return [_run_cell(w) for w in work]
