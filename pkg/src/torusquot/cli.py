"""Command-line front end.

Exit status: 0 on success, 1 on analysis errors (an error object is printed as
JSON), 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import __version__
from .errors import TorusQuotError
from .groups import (BinaryDihedral, BinaryIcosahedral, BinaryOctahedral, BinaryTetrahedral, CyclicScalar,
                     CyclicSU2, DiagonalCyclic, DuValProduct, enumerate_duval, generate, spec_from_json)
from .invariants import (dim2_data, gorenstein_fit, graded_dims, hilbert_basis_monomials, poly_to_str,
                         quotient_hilbert_series)
from .molien import molien_series
from .obstruction import DEFAULT_ORDER_CAP, DEFAULT_SERIES_ORDER, check_orbifold
from .poisson import verify_dim2_brackets
from .weights import WeightMatrix, cox_group, effectiveness_report, simplicial_check


class ParseError(Exception):
    pass


def parse_matrix(text: str) -> WeightMatrix:
    try:
        return WeightMatrix.parse(text)
    except ValueError as e:
        raise ParseError(f"bad matrix {text!r}: {e}") from None


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def parse_group(text: str):
    """Group spec: JSON, or one of scalar:N, su2:N, dihedral:N, T, O, I,
    diag:x,y,M, duval:TYPE:key=value,... (e.g. duval:3:m=1,l=3,variant=b)."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return spec_from_json(json.loads(text))
        head, _, rest = text.partition(":")
        head = head.lower()
        if head in ("t", "t24"):
            return BinaryTetrahedral()
        if head in ("o", "o48"):
            return BinaryOctahedral()
        if head in ("i", "i120"):
            return BinaryIcosahedral()
        if head == "scalar":
            return CyclicScalar(int(rest))
        if head == "su2":
            return CyclicSU2(int(rest))
        if head == "dihedral":
            return BinaryDihedral(int(rest))
        if head == "diag":
            x, y, M = _ints(rest)
            return DiagonalCyclic(x, y, M)
        if head == "duval":
            t, _, kv = rest.partition(":")
            fields = {}
            for item in filter(None, kv.split(",")):
                k, v = item.split("=")
                fields[k.strip()] = v.strip() if k.strip() == "variant" else int(v)
            return DuValProduct(int(t), **fields)
    except (ValueError, TypeError, KeyError, json.JSONDecodeError) as e:
        raise ParseError(f"bad group spec {text!r}: {e}") from None
    raise ParseError(f"unknown group spec {text!r}")


# --- subcommands: each returns (json object, text lines) ------------------

def cmd_analyze(a):
    W = parse_matrix(a.matrix)
    eff = effectiveness_report(W)
    rep = simplicial_check(eff.reduced)
    out = {"matrix": W.to_text(),
           "effectiveness": {"rank": eff.rank, "full_rank": eff.full_rank, "minors_gcd": eff.minors_gcd,
                             "effective": eff.effective, "reduced": eff.reduced.to_text()},
           **rep.to_json()}
    lines = [f"matrix: {W.to_text()}",
             f"rank {eff.rank}, minors gcd {eff.minors_gcd}, effective: {eff.effective}"]
    if not eff.effective:
        lines.append(f"reduced to: {eff.reduced.to_text()}")
    P = rep.polytope
    lines.append(f"polytope: {len(P.vertices)} vertices, dimension {P.dimension}")
    for v in P.to_json()["vertices"]:
        lines.append("  (" + ", ".join(v) + ")")
    lines.append(f"simplicial: {rep.simplicial}")
    if rep.standard_form is not None:
        sf = rep.standard_form
        lines.append(f"standard form: perm {list(sf.perm)}, D {[list(r) for r in sf.D]}, "
                     f"C {[list(r) for r in sf.C]}, unimodular {sf.unimodular}")
        if not P.empty:
            try:
                cg = cox_group(eff.reduced)
                out["cox_group"] = {"invariant_factors": list(cg.invariant_factors), "order": cg.order}
                lines.append(f"Cox group: order {cg.order}, invariant factors {list(cg.invariant_factors)}")
            except TorusQuotError as e:
                out["cox_group"] = None
                lines.append(f"Cox group: not available ({e})")
    return out, lines


def cmd_hilbert(a):
    W = parse_matrix(a.matrix)
    if a.invariant_ring:
        s = graded_dims(W, a.order).series()
        what = "invariant ring"
    else:
        s = quotient_hilbert_series(W, a.order)
        what = "quotient"
    out = {"matrix": W.to_text(), "series": what, "order": a.order, "coefficients": s.as_ints()}
    lines = [f"{what} Hilbert series of {W.to_text()} through t^{a.order}:", " ".join(map(str, s.as_ints()))]
    if a.fit:
        fit = gorenstein_fit(W, a.fit_order)
        out["fit"] = {"numerator": list(fit.numerator), "denominator": list(fit.denominator),
                      "palindromic": fit.palindromic}
        lines.append(f"numerator {list(fit.numerator)} over prod (1 - t^d), d in {list(fit.denominator)}; "
                     f"palindromic: {fit.palindromic}")
    return out, lines


def cmd_basis(a):
    W = parse_matrix(a.matrix)
    res = hilbert_basis_monomials(W, a.cap)
    gens = [g.to_json() for g in res.generators]
    out = {"matrix": W.to_text(), "degree_cap": res.degree_cap, "complete": res.complete,
           "count": len(gens), "generators": gens}
    lines = [f"{len(gens)} generators up to degree {res.degree_cap} (complete: {res.complete})"]
    for g in res.generators:
        lines.append(f"  degree {g.degree}: z^{list(g.a)} zbar^{list(g.b)}")
    return out, lines


def cmd_molien(a):
    spec = parse_group(a.group)
    G = generate(spec)
    res = molien_series(G, a.order)
    out = {"group": spec.to_json(), "label": spec.label(), **res.to_json()}
    lines = [f"{spec.label()} (order {res.group_order}), Molien series through t^{a.order}:",
             " ".join(map(str, res.coefficients)), f"max integrality drift {res.max_integrality_drift:.2e}"]
    return out, lines


def cmd_check(a):
    W = parse_matrix(a.matrix)
    v = check_orbifold(W, a.order, a.cap)
    full = a.certificates
    out = v.to_json(full=full) if hasattr(v, "certificates") or hasattr(v, "candidates") else v.to_json()
    lines = [f"verdict: {v.kind}"]
    if v.kind == "NotRationalHomologyManifold":
        lines.append(f"polytope has {len(v.polytope.vertices)} vertices in dimension {v.polytope.dimension}")
    elif v.kind == "Dim2Orbifold":
        lines.append(f"graded regularly symplectomorphic to C/Z{v.target_N}")
    elif v.kind == "NoFiniteMatchUpToBound":
        s = out["summary"]
        lines.append(f"target {out['target']}")
        lines.append(f"{len(v.certificates)} groups of order <= {v.order_cap} excluded through t^{v.series_order}")
        lines.append("mismatch degrees: " + ", ".join(f"t^{k}: {c}" for k, c in s["by_mismatch_degree"].items()))
        lines.append(f"pruned by a witness subgroup: {s['pruned']}")
        if full:
            for c in v.certificates:
                w = f" (witness {c.pruned_by.label()})" if c.pruned_by is not None else ""
                lines.append(f"  {c.candidate.label()}: t^{c.mismatch_degree} "
                             f"{c.group_coefficient} != {c.target_coefficient}{w}")
    elif v.kind == "CandidatesFound":
        lines.extend(f"  {s.label()}" for s in v.candidates)
    return out, lines


def cmd_dim2(a):
    W = parse_matrix(a.matrix)
    d = dim2_data(W)
    out = d.to_json()
    lines = [f"N = {d.N} (calA = {d.calA}, calM = {d.calM}, m_i = {list(d.m_i)})",
             f"beta = {d.beta}, alpha^2 = {d.alpha_sq}, calB = {d.calB}",
             "kernel: " + "; ".join(poly_to_str(p) for p in d.kernel_generators)]
    if a.brackets:
        rep = verify_dim2_brackets(W)
        out["brackets"] = {"passed": rep.passed, "checks": [name for name, _ in rep.checks]}
        lines.append(f"bracket identities: {len(rep.checks)} checked, passed: {rep.passed}")
    return out, lines


def cmd_duval(a):
    groups = enumerate_duval(a.cap)
    out = {"cap": a.cap, "count": len(groups),
           "groups": [{"spec": s.to_json(), "label": s.label(), "order": G.order} for s, G in groups]}
    lines = [f"{len(groups)} conjugacy classes of order <= {a.cap}"]
    lines.extend(f"  {G.order:5d}  {s.label()}" for s, G in groups)
    return out, lines


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusquot", description="Symplectic quotients by torus representations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, matrix=True):
        sp = sub.add_parser(name, help=help_)
        if matrix:
            sp.add_argument("-A", "--matrix", required=True, help='weight matrix, e.g. "-1 1 2" or "1 -1 0; 0 1 -1"')
        sp.add_argument("--json", action="store_true", help="print JSON instead of text")
        sp.set_defaults(func=fn)
        return sp

    add("analyze", cmd_analyze, "effectiveness, polytope, simplicial check, standard form")
    sp = add("hilbert", cmd_hilbert, "Hilbert series of the quotient")
    sp.add_argument("--order", type=int, default=8)
    sp.add_argument("--invariant-ring", action="store_true", help="series of the invariant ring instead")
    sp.add_argument("--fit", action="store_true", help="also fit a rational function")
    sp.add_argument("--fit-order", type=int, default=16)
    sp = add("basis", cmd_basis, "Hilbert basis of invariant monomials")
    sp.add_argument("--cap", type=int, default=6, help="degree cap")
    sp = add("molien", cmd_molien, "Molien series of a finite subgroup of U2", matrix=False)
    sp.add_argument("-G", "--group", required=True, help="e.g. su2:3, dihedral:2, T, duval:3:m=1,l=3,variant=b")
    sp.add_argument("--order", type=int, default=8)
    sp = add("check-orbifold", cmd_check, "decide whether the quotient can be a finite quotient")
    sp.add_argument("--order", type=int, default=DEFAULT_SERIES_ORDER)
    sp.add_argument("--cap", type=int, default=DEFAULT_ORDER_CAP)
    sp.add_argument("--certificates", action="store_true", help="list every exclusion certificate")
    sp = add("dim2", cmd_dim2, "dimension-two quotient data")
    sp.add_argument("--brackets", action="store_true", help="also verify the bracket identities")
    sp = add("duval-list", cmd_duval, "list finite subgroups of U2 up to conjugacy", matrix=False)
    sp.add_argument("--cap", type=int, default=12)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        out, lines = args.func(args)
    except ParseError as e:
        print(json.dumps({"error": "ParseError", "message": str(e)}), file=sys.stderr)
        return 2
    except (TorusQuotError, ValueError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}))
        return 1
    if args.json:
        print(json.dumps(out))
    else:
        print("\n".join(lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
