"""Torus-invariant real polynomials: graded dimensions, monomial Hilbert bases,
Hilbert series of the symplectic quotient and the data of the dimension-two case."""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import (
    BudgetError,
    GcdViolation,
    Mismatch,
    NotDim2Form,
    NotFullRank,
    OracleDisagreement,
)
from .lattice import IntMatrix, integer_row_reduce, rank, rational_inverse
from .series import RationalFunctionProd, TruncatedSeries, palindromic, rational_fit, series_expand
from .weights import WeightMatrix, effectiveness_report

MAX_N = 8
MAX_K = 20


@dataclass(frozen=True)
class MonomialExp:
    """z^a zbar^b."""

    a: tuple
    b: tuple

    @property
    def degree(self) -> int:
        return sum(self.a) + sum(self.b)

    def conjugate(self) -> "MonomialExp":
        return MonomialExp(self.b, self.a)

    def divides(self, other: "MonomialExp") -> bool:
        return all(x <= y for x, y in zip(self.a, other.a)) and all(x <= y for x, y in zip(self.b, other.b))

    def __truediv__(self, other: "MonomialExp") -> "MonomialExp":
        return MonomialExp(tuple(x - y for x, y in zip(self.a, other.a)), tuple(x - y for x, y in zip(self.b, other.b)))

    def is_invariant(self, W: WeightMatrix) -> bool:
        d = [x - y for x, y in zip(self.a, self.b)]
        return all(sum(r[j] * d[j] for j in range(len(d))) == 0 for r in W.rows)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "degree": self.degree}


@dataclass(frozen=True)
class GradedDims:
    dims: tuple

    def series(self) -> TruncatedSeries:
        return TruncatedSeries(self.dims)


@dataclass(frozen=True)
class HilbertBasisResult:
    generators: tuple
    degree_cap: int
    complete: bool


@dataclass(frozen=True)
class Dim2IsoData:
    a_i: tuple
    n_i: tuple
    calA: int
    m_i: tuple
    calM: int
    N: int
    beta: Fraction
    alpha_sq: Fraction
    calB: Fraction
    kernel_generators: tuple
    generator_degrees: tuple
    form: tuple
    perm: tuple

    def to_json(self) -> dict:
        fs = _fs
        return {
            "a_i": list(self.a_i), "n_i": list(self.n_i), "calA": self.calA, "m_i": list(self.m_i),
            "calM": self.calM, "N": self.N, "beta": fs(self.beta), "alpha_sq": fs(self.alpha_sq),
            "calB": fs(self.calB), "generator_degrees": list(self.generator_degrees),
            "kernel_generators": [poly_to_str(p) for p in self.kernel_generators],
            "form": [list(r) for r in self.form], "perm": list(self.perm),
        }


def _fs(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def poly_to_str(poly: dict, var: str = "y") -> str:
    parts = []
    # positive terms first, each group in lex order with y1 largest
    items = sorted(poly.items(), reverse=True)
    for exps, c in [kv for kv in items if kv[1] > 0] + [kv for kv in items if kv[1] < 0]:
        mono = "*".join(f"{var}{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
        coef = _fs(c)
        if not mono:
            parts.append(coef)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{coef}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


# --- counting ------------------------------------------------------------

def _check_budget(W: WeightMatrix, K: int):
    if K < 0:
        raise ValueError("K must be non-negative")
    if W.n > MAX_N or K > MAX_K:
        raise BudgetError(f"counting is bounded to n <= {MAX_N} and K <= {MAX_K}")


def _half_buckets(W: WeightMatrix, K: int):
    """cnt[p][w] = number of exponent vectors a with |a| = p and A a = w."""
    cols = list(zip(*W.rows)) if W.ell else [()] * W.n
    out = []
    for p in range(K + 1):
        cnt = defaultdict(int)
        for combo in itertools.combinations_with_replacement(range(W.n), p):
            w = tuple(sum(cols[j][i] for j in combo) for i in range(W.ell))
            cnt[w] += 1
        out.append(cnt)
    return out


def graded_dims_enumeration(W: WeightMatrix, K: int) -> list[int]:
    buckets = _half_buckets(W, K)
    dims = []
    for k in range(K + 1):
        total = 0
        for p in range(k + 1):
            bp, bq = buckets[p], buckets[k - p]
            total += sum(c * bq.get(w, 0) for w, c in bp.items())
        dims.append(total)
    return dims


def graded_dims_laurent(W: WeightMatrix, K: int) -> list[int]:
    """Constant terms in u of prod_j 1/((1 - u^c_j t)(1 - u^-c_j t)), degree by degree."""
    ell = W.ell
    zero = (0,) * ell
    series = [{zero: 1}] + [{} for _ in range(K)]
    for col in zip(*W.rows) if ell else [()] * W.n:
        for sign in (1, -1):
            shift = tuple(sign * c for c in col)
            new = []
            for d in range(K + 1):
                cur = dict(series[d])
                if d:
                    for e, c in new[d - 1].items():
                        key = tuple(x + y for x, y in zip(e, shift))
                        cur[key] = cur.get(key, 0) + c
                new.append(cur)
            series = new
    return [series[d].get(zero, 0) for d in range(K + 1)]


def graded_dims(W: WeightMatrix, K: int) -> GradedDims:
    _check_budget(W, K)
    a = graded_dims_enumeration(W, K)
    b = graded_dims_laurent(W, K)
    if a != b:
        raise OracleDisagreement(f"enumeration {a} and Laurent extraction {b} disagree")
    return GradedDims(tuple(a))


def invariant_monomials(W: WeightMatrix, cap: int) -> list[MonomialExp]:
    cols = list(zip(*W.rows))
    by_weight = defaultdict(list)
    for p in range(cap + 1):
        for combo in itertools.combinations_with_replacement(range(W.n), p):
            a = [0] * W.n
            for j in combo:
                a[j] += 1
            w = tuple(sum(cols[j][i] * a[j] for j in range(W.n)) for i in range(W.ell))
            by_weight[w].append(tuple(a))
    out = []
    for halves in by_weight.values():
        for a in halves:
            for b in halves:
                if 0 < sum(a) + sum(b) <= cap:
                    out.append(MonomialExp(a, b))
    return out


def _mono_key(m: MonomialExp):
    return (m.degree, tuple(-x for x in m.a + m.b))


def hilbert_basis_monomials(W: WeightMatrix, degree_cap: int) -> HilbertBasisResult:
    if degree_cap < 2:
        raise ValueError("degree cap must be at least 2")
    _check_budget(W, degree_cap)
    monos = sorted(invariant_monomials(W, degree_cap), key=_mono_key)
    if len(monos) > 2_000_000:
        raise BudgetError("too many invariant monomials below the degree cap")
    gens: list[MonomialExp] = []
    for m in monos:
        if not any(g.divides(m) for g in gens if g.degree < m.degree):
            gens.append(m)
    genset = set(gens)
    for g in gens:
        if g.conjugate() not in genset:
            raise AssertionError("generator set not closed under conjugation")
    # every invariant monomial up to the cap must factor over the generators
    memo: dict = {}

    def factors(m: MonomialExp) -> bool:
        if m.degree == 0:
            return True
        if m in memo:
            return memo[m]
        ok = any(g.divides(m) and factors(m / g) for g in gens if g.degree <= m.degree)
        memo[m] = ok
        return ok

    complete = all(factors(m) for m in monos)
    return HilbertBasisResult(tuple(gens), degree_cap, complete)


def quotient_hilbert_series(W: WeightMatrix, K: int) -> TruncatedSeries:
    if rank(W.A) != W.ell:
        raise NotFullRank("the weight matrix does not have full row rank")
    dims = graded_dims(W, K).dims
    # multiply by (1 - t^2)^ell
    c = list(dims)
    for _ in range(W.ell):
        c = [c[k] - (c[k - 2] if k >= 2 else 0) for k in range(K + 1)]
    return TruncatedSeries(tuple(c))


@dataclass(frozen=True)
class GorensteinFit:
    numerator: tuple
    denominator: tuple
    palindromic: bool

    def rational_function(self) -> RationalFunctionProd:
        return RationalFunctionProd(self.numerator, tuple((p, 1) for p in self.denominator))


def gorenstein_fit(W: WeightMatrix, order: int = 16, degree_cap: Optional[int] = None) -> GorensteinFit:
    """Smallest denominator prod(1 - t^d) with 2(n - rank) factors, degrees drawn
    from the Hilbert basis generator degrees, that fits the quotient series
    through ``order``; reports whether the numerator is palindromic."""
    r = rank(W.A)
    size = 2 * (W.n - r)
    s = quotient_hilbert_series(W, order)
    cap = degree_cap or min(order, MAX_K)
    degrees = sorted({g.degree for g in hilbert_basis_monomials(W, min(cap, 8)).generators})
    combos = sorted(itertools.combinations_with_replacement(degrees, size), key=lambda c: (sum(c), c))
    for combo in combos:
        total = sum(combo)
        if total >= order:
            break
        try:
            num = rational_fit(s, [(d, 1) for d in combo], max_degree=total - 1)
        except Mismatch:
            continue
        return GorensteinFit(tuple(num), tuple(combo), palindromic(num))
    raise Mismatch(order, "no denominator from the generator degrees fits at this order")


# --- dimension two -------------------------------------------------------

def _is_literal_form(rows, ell, n):
    if n != ell + 1:
        return False
    for i in range(ell):
        for j in range(ell):
            if (i == j and rows[i][j] >= 0) or (i != j and rows[i][j] != 0):
                return False
        if rows[i][ell] < 0:
            return False
    return True


def dim2_form(W: WeightMatrix) -> tuple[tuple, tuple]:
    """Bring W to [D | n] by a column permutation and a change of row-lattice basis.

    Returns (rows of the form, permutation of the original columns).
    """
    rows = W.rows
    if W.n != W.ell + 1 and W.n != rank(W.A) + 1:
        raise NotDim2Form("need n = rank + 1")
    if _is_literal_form(rows, W.ell, W.n):
        for i in range(W.ell):
            if math.gcd(rows[i][i], rows[i][W.ell]) != 1:
                raise GcdViolation(f"gcd(a_{i + 1}, n_{i + 1}) != 1")
        return tuple(tuple(r) for r in rows), tuple(range(W.n))
    red = effectiveness_report(W).reduced
    R = [list(r) for r in red.rows]
    ell, n = len(R), W.n
    if n != ell + 1:
        raise NotDim2Form("need n = rank + 1")
    _, H = integer_row_reduce(IntMatrix.from_rows(R))
    target = H.entries
    for perm in itertools.permutations(range(n)):
        pivots, last = list(perm[:-1]), perm[-1]
        inv = rational_inverse([[r[j] for j in pivots] for r in R])
        if inv is None:
            continue
        new_rows = []
        ok = True
        for i in range(ell):
            x = [sum(inv[i][k] * R[k][j] for k in range(ell)) for j in range(n)]
            row = [-v for v in x]
            den = math.lcm(*[v.denominator for v in row])
            ints = [int(v * den) for v in row]
            g = math.gcd(*ints)
            ints = [v // g for v in ints]
            if ints[last] < 0:
                ok = False
                break
            new_rows.append(ints)
        if not ok:
            continue
        # the new rows must generate the same lattice as the reduced rows
        _, H2 = integer_row_reduce(IntMatrix.from_rows(new_rows))
        if H2.entries != target:
            continue
        form = tuple(tuple(r[j] for j in perm) for r in new_rows)
        return form, tuple(perm)
    raise NotDim2Form("no column order and row basis give the form [D | n]")


def _poly_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def dim2_data(W: WeightMatrix) -> Dim2IsoData:
    form, perm = dim2_form(W)
    ell = len(form)
    a = tuple(-form[i][i] for i in range(ell))
    nn = tuple(form[i][ell] for i in range(ell))
    for ai, ni in zip(a, nn):
        if math.gcd(ai, ni) != 1:
            raise GcdViolation(f"gcd({ai}, {ni}) != 1")
    calA = math.lcm(*a)
    m = tuple(ni * calA // ai for ai, ni in zip(a, nn))
    calM = sum(m)
    N = calA + calM
    prod_mm = math.prod(mi ** mi for mi in m)
    beta = Fraction(calA, N)
    alpha_sq = Fraction(calA ** calA * prod_mm, N ** N)
    calB = Fraction(N * prod_mm, 1) / Fraction(calA) ** (calM - 1)
    if alpha_sq * N * N != beta ** (N - 1) * calB:
        raise AssertionError("consistency identity failed")
    nv = ell + 3
    e = lambda i, k=1: tuple(k if j == i else 0 for j in range(nv))
    c = Fraction(prod_mm) / Fraction(calA) ** calM
    gens = [{e(0, 2): Fraction(1), e(1, 2): Fraction(1), e(2, N): -c}]
    for i in range(ell):
        gens.append({e(3 + i): Fraction(1), e(2): -Fraction(m[i], calA)})
    data = Dim2IsoData(a, nn, calA, m, calM, N, beta, alpha_sq, calB, tuple(gens),
                       (N, N) + (2,) * (ell + 1), form, perm)
    _check_arrow(data)
    return data


def arrow_image(data: Dim2IsoData, poly: dict) -> dict:
    """Image under y_{1,2} -> alpha x_{1,2}, y_3 -> beta x_3, y_{3+i} -> m_i/N x_3.

    alpha is irrational in general; we return a dict keyed by (power of alpha mod 2,
    x exponents) with the even powers of alpha folded into alpha_sq.
    """
    out: dict = {}
    for exps, c in poly.items():
        apow = exps[0] + exps[1]
        coef = c * data.alpha_sq ** (apow // 2) * data.beta ** exps[2]
        x3 = exps[2]
        for i, mi in enumerate(data.m_i):
            coef *= Fraction(mi, data.N) ** exps[3 + i]
            x3 += exps[3 + i]
        key = (apow % 2, (exps[0], exps[1], x3))
        out[key] = out.get(key, 0) + coef
        if out[key] == 0:
            del out[key]
    return out


def _check_arrow(data: Dim2IsoData):
    # first generator goes to alpha^2 (x1^2 + x2^2 - x3^N), the shell ones to zero
    img = arrow_image(data, data.kernel_generators[0])
    want = {(0, (2, 0, 0)): data.alpha_sq, (0, (0, 2, 0)): data.alpha_sq, (0, (0, 0, data.N)): -data.alpha_sq}
    if img != want:
        raise AssertionError("arrow does not send the quadratic generator to the cone relation")
    for g in data.kernel_generators[1:]:
        if arrow_image(data, g):
            raise AssertionError("arrow does not kill a shell relation")
