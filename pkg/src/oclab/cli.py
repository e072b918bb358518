"""Command-line front end: ``oclab <subcommand> [options]``.

Exit codes: 0 all checks pass, 1 at least one violation (report still
written), 2 usage or parameter error, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .arith import ParameterError, format_val, padic_val
from .fpbasis import OutOfCriterionError, PrecisionError, expand_in_fp
from .report import emit_report
from .umatrix import ConsistencyError, StarBoundRefused
from .verify import (
    FUNCTIONS, RUNNERS, verify_cor_UF_F, verify_congruence, verify_identities_21,
    verify_lemma_ui, verify_prop_es_vs_f, verify_serre_convergence, verify_special,
    verify_theorem_a, verify_theorem_a_katz, verify_umatrix,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _common(sp):
    sp.add_argument("--format", choices=("json", "csv", "text"), default="text")
    sp.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="oclab", description="Exact certification of overconvergence bounds.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pk(name, help_, terms=True, N=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        if terms:
            sp.add_argument("--terms", "-M", dest="M", type=int, default=20)
        if N:
            sp.add_argument("--N", type=int, default=None, help="q-precision (auto-sized if omitted)")
        _common(sp)
        return sp

    pk("thm-a", "f_p-expansion bound for E*_k / V(E*_k)")
    pk("special", "the p = 2, 3 bound s + 12/(p-1) * i/(2p)")
    sp = pk("congruence", "E*_k = E_k = F and U^i(F) = F mod p^t", terms=False, N=False)
    sp.add_argument("--N", type=int, default=64)
    sp.add_argument("--imax", dest="i_max", type=int, default=4)
    sp.add_argument("--u-prec", dest="u_prec", type=int, default=16)
    sp = sub.add_parser("identities", help="closed forms of E4/V(E4), E6/V(E6) for p = 2, 3")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, default=200)
    _common(sp)
    pk("cor-uf", "U(F)/F in (1/p) M_0(>= p rho)")
    sp = pk("lemma-ui", "U^i(F)/F - U(F)/F in M_0(>= p rho)")
    sp.add_argument("--imax", dest="i_max", type=int, default=4)
    pk("es-vs-f", "E*_k/F and F/E*_k bounds")
    sp = pk("serre", "U^i(F) -> E*_k in q-expansion", terms=False, N=False)
    sp.add_argument("--imax", dest="i_max", type=int, default=4)
    sp.add_argument("--N", type=int, default=None)
    sp = sub.add_parser("umatrix", help="bounds on the matrix of U in powers of f_p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--imax", dest="i_max", type=int, default=10)
    sp.add_argument("--check", choices=("general", "star"), default="general")
    _common(sp)
    sp = pk("katz", "THM_A bound via the Katz expansion (p >= 5)", terms=False)
    sp.add_argument("--imax", dest="i_max", type=int, default=20)
    sp = pk("expand", "dump the f_p-expansion of a modular function")
    sp.add_argument("--function", choices=sorted(FUNCTIONS), default="estar-ratio")
    sp = sub.add_parser("sweep", help="run one verifier over a grid of (p, k)")
    sp.add_argument("--claim", choices=sorted(RUNNERS), required=True)
    sp.add_argument("--p", type=int, nargs="+", required=True)
    sp.add_argument("--k", type=int, nargs="+", required=True)
    sp.add_argument("--terms", "-M", dest="M", type=int, default=None)
    sp.add_argument("--imax", dest="i_max", type=int, default=None)
    sp.add_argument("--N", type=int, default=None)
    sp.add_argument("--jobs", type=int, default=1)
    _common(sp)
    return ap


def _serre_default_N(p, i_max):
    return max(64, 2 * p**i_max)


def _dispatch(a):
    c = a.command
    if c == "thm-a":
        return verify_theorem_a(a.p, a.k, a.M, a.N)
    if c == "special":
        return verify_special(a.p, a.k, a.M, a.N)
    if c == "congruence":
        return verify_congruence(a.p, a.k, a.N, a.i_max, a.u_prec)
    if c == "identities":
        return verify_identities_21(a.p, a.N)
    if c == "cor-uf":
        return verify_cor_UF_F(a.p, a.k, a.M, a.N)
    if c == "lemma-ui":
        return verify_lemma_ui(a.p, a.k, a.i_max, a.M, a.N)
    if c == "es-vs-f":
        return verify_prop_es_vs_f(a.p, a.k, a.M, a.N)
    if c == "serre":
        N = a.N if a.N is not None else _serre_default_N(a.p, a.i_max)
        return verify_serre_convergence(a.p, a.k, a.i_max, N)
    if c == "umatrix":
        return verify_umatrix(a.p, a.i_max, a.check)
    if c == "katz":
        return verify_theorem_a_katz(a.p, a.k, a.i_max, a.N)
    if c == "sweep":
        from .verify import run_sweep
        kw = {key: getattr(a, key) for key in ("M", "i_max", "N") if getattr(a, key) is not None}
        if a.claim == "katz" and "M" in kw:
            kw.setdefault("i_max", kw.pop("M"))
        return run_sweep(a.claim, a.p, a.k, jobs=a.jobs, **kw)
    raise ParameterError(f"unknown command {c!r}")


def _expansion_text(a):
    N = a.N if a.N is not None else a.M + 1
    if N < a.M + 1:
        raise PrecisionError(f"expansion to index {a.M} needs q-precision N >= {a.M + 1}, got N = {N}")
    g = FUNCTIONS[a.function](a.p, a.k, N)
    e = expand_in_fp(g, a.p, a.M)
    rows = [(i, c, padic_val(c, a.p)) for i, c in enumerate(e.a)]
    if a.format == "json":
        payload = {
            "function": a.function, "p": a.p, "k": a.k, "M": a.M, "N": N,
            "coefficients": [{"i": i, "a": format_val(c), "valuation": format_val(v)} for i, c, v in rows],
        }
        return json.dumps(payload, indent=2) + "\n"
    if a.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "coefficient", "valuation"])
        for i, c, v in rows:
            w.writerow([i, format_val(c), format_val(v)])
        return buf.getvalue()
    lines = [f"{a.function}  p={a.p} k={a.k} M={a.M} N={N}"]
    for i, c, v in rows:
        lines.append(f"  {i:>4}  v={format_val(v):>5}  {format_val(c)}")
    return "\n".join(lines) + "\n"


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"oclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if a.command == "expand":
            _write(_expansion_text(a), a.out)
            return EXIT_PASS
        result = _dispatch(a)
    except (ParameterError, PrecisionError, OutOfCriterionError) as exc:
        kind = "refused" if isinstance(exc, StarBoundRefused) else "parameter error"
        print(f"oclab: {kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConsistencyError, ArithmeticError) as exc:
        print(f"oclab: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"oclab: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        emit_report(result, a.format, a.out, stream=sys.stdout)
    except OSError as exc:
        print(f"oclab: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    reports = result if isinstance(result, list) else [result]
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_PASS


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
