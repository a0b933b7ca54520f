"""Weight matrices of torus representations and the polytope of the zero fibre."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BudgetError, DegeneratePolytope, NotSimplicial
from .lattice import (
    IntMatrix,
    det,
    integer_row_reduce,
    kernel_lattice_basis,
    minors_gcd,
    primitive_vector,
    rank,
    rational_inverse,
    rational_rank,
    rational_rref,
    smith_normal_form,
)

MAX_VERTEX_COLUMNS = 12


@dataclass(frozen=True)
class WeightMatrix:
    A: IntMatrix

    @classmethod
    def from_rows(cls, rows) -> "WeightMatrix":
        rows = [list(rows)] if rows and not isinstance(rows[0], (list, tuple)) else rows
        return cls(IntMatrix.from_rows(rows))

    @classmethod
    def parse(cls, text: str) -> "WeightMatrix":
        """Rows separated by ';', entries by whitespace or commas."""
        rows = []
        for chunk in text.strip().split(";"):
            chunk = chunk.replace(",", " ").strip()
            if not chunk:
                raise ValueError("empty row in matrix text")
            rows.append([int(x) for x in chunk.split()])
        if len({len(r) for r in rows}) != 1:
            raise ValueError("rows have different lengths")
        return cls(IntMatrix.from_rows(rows))

    @property
    def ell(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def rows(self):
        return self.A.entries

    def permute_columns(self, perm: Sequence[int]) -> "WeightMatrix":
        return WeightMatrix(self.A.select_columns(perm))

    def to_text(self) -> str:
        return "; ".join(" ".join(str(x) for x in r) for r in self.rows)


@dataclass(frozen=True)
class EffectivenessReport:
    rank: int
    full_rank: bool
    minors_gcd: int
    effective: bool
    reduced: WeightMatrix


@dataclass(frozen=True)
class PolytopeDescription:
    vertices: tuple
    dimension: int
    support: tuple

    @property
    def empty(self) -> bool:
        return not self.vertices

    def to_json(self) -> dict:
        return {"vertices": [[_fs(x) for x in v] for v in self.vertices],
                "dimension": self.dimension, "support": list(self.support)}


def _fs(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class StandardForm:
    """Column permutation and row transform bringing A' (restricted to the
    support) into [[D | C 0], [0 | 0 0]].

    ``U`` is rational in general; ``unimodular`` records whether it is an
    integral matrix of determinant +-1.
    """

    perm: tuple
    U: tuple
    D: tuple
    C: tuple
    zero_columns: int
    unimodular: bool

    def to_json(self) -> dict:
        return {"perm": list(self.perm), "D": [list(r) for r in self.D], "C": [list(r) for r in self.C],
                "q": self.zero_columns, "unimodular": self.unimodular,
                "U": [[_fs(x) for x in r] for r in self.U]}


@dataclass(frozen=True)
class SimplicialReport:
    simplicial: bool
    vertex_count: int
    polytope: PolytopeDescription
    standard_form: Optional[StandardForm] = None
    normals: Optional[tuple] = None
    separated_indices: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"simplicial": self.simplicial, "vertex_count": self.vertex_count,
               "polytope": self.polytope.to_json()}
        if self.standard_form is not None:
            out["standard_form"] = self.standard_form.to_json()
            out["normals"] = [list(m) for m in self.normals]
            out["separated_indices"] = list(self.separated_indices)
        return out


@dataclass(frozen=True)
class MomentMapData:
    components: tuple


@dataclass(frozen=True)
class CoxGroupData:
    invariant_factors: tuple
    order: int


def effectiveness_report(W: WeightMatrix) -> EffectivenessReport:
    r = rank(W.A)
    full = r == W.ell
    g = minors_gcd(W.A, r) if r else 0
    effective = full and g == 1
    if effective:
        return EffectivenessReport(r, full, g, True, W)
    if r == 0:
        # nothing acts; keep one zero row so the shape stays meaningful
        return EffectivenessReport(r, full, g, False, WeightMatrix(IntMatrix(1, W.n, ((0,) * W.n,))))
    # saturate the row lattice: annihilator of the kernel lattice
    sat = kernel_lattice_basis(kernel_lattice_basis(W.A)) if r < W.n else IntMatrix.identity(W.n)
    rows = []
    for row in sat.entries:
        row = list(row)
        for orig in W.rows:
            if any(orig) and rational_rank([orig, row]) == 1:
                k = next(j for j in range(W.n) if orig[j])
                if (orig[k] > 0) != (row[k] > 0):
                    row = [-x for x in row]
                break
        rows.append(tuple(row))
    return EffectivenessReport(r, full, g, False, WeightMatrix(IntMatrix.from_rows(rows)))


def _solve_basic(A_rows, cols, n):
    """Solve [A;1] x = e_last on the columns ``cols``; None unless unique and > 0."""
    M = [[r[j] for j in cols] + [0] for r in A_rows] + [[1] * len(cols) + [1]]
    R, piv = rational_rref(M)
    k = len(cols)
    if piv != list(range(k)):
        return None
    if any(row[k] != 0 for row in R[k:]):
        return None
    x = [R[i][k] for i in range(k)]
    if any(v <= 0 for v in x):
        return None
    out = [Fraction(0)] * n
    for j, v in zip(cols, x):
        out[j] = v
    return tuple(out)


def polytope(W: WeightMatrix) -> PolytopeDescription:
    n = W.n
    if n > MAX_VERTEX_COLUMNS:
        raise BudgetError(f"vertex enumeration is bounded to n <= {MAX_VERTEX_COLUMNS}")
    rows = [r for r in W.rows if any(r)]
    kmax = min(n, rational_rank(rows + [[1] * n]) if rows else 1)
    found = set()
    for k in range(1, kmax + 1):
        for cols in itertools.combinations(range(n), k):
            v = _solve_basic(rows, cols, n)
            if v is not None:
                found.add(v)
    vertices = tuple(sorted(found, reverse=True))
    if not vertices:
        return PolytopeDescription((), -1, ())
    base = vertices[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in vertices[1:]]
    dim = rational_rank(diffs) if diffs else 0
    support = tuple(sorted({j for v in vertices for j in range(n) if v[j]}))
    return PolytopeDescription(vertices, dim, support)


def cone_rays(W: WeightMatrix) -> list[tuple]:
    rays = []
    for v in polytope(W).vertices:
        den = math.lcm(*[x.denominator for x in v])
        rays.append(primitive_vector([int(x * den) for x in v]))
    return sorted(rays, reverse=True)


def moment_map(W: WeightMatrix) -> MomentMapData:
    return MomentMapData(tuple(tuple(Fraction(a, 2) for a in r) for r in W.rows))


# --- standard form -------------------------------------------------------

def _row_basis(A: IntMatrix) -> list[tuple]:
    _, H = integer_row_reduce(A)
    return [r for r in H.entries if any(r)]


def _form_from_pivots(B, pivots, others):
    """Rows w_i in the rational row space of B with w_i[pivots[k]] = -c_i delta_ik,
    scaled to primitive integers. Returns (W rows, T) with W = T B, or None."""
    BP = [[r[j] for j in pivots] for r in B]
    inv = rational_inverse(BP)
    if inv is None:
        return None
    r = len(B)
    # X = BP^{-1} B has identity on the pivot columns
    X = [[sum(inv[i][k] * B[k][j] for k in range(r)) for j in range(len(B[0]))] for i in range(r)]
    rows, T = [], []
    for i in range(r):
        neg = [-x for x in X[i]]
        den = math.lcm(*[x.denominator for x in neg])
        ints = [int(x * den) for x in neg]
        g = math.gcd(*ints)
        scale = Fraction(den, g)
        rows.append(tuple(x // g for x in ints))
        T.append([-scale * inv[i][k] for k in range(r)])
    for row in rows:
        if any(row[j] < 0 for j in others):
            return None
    return rows, T


def _standard_form_exists(B, cols) -> bool:
    """Independent oracle: does any pivot set give D < 0 and C >= 0 without zero rows."""
    r = len(B)
    for pivots in itertools.combinations(cols, r):
        others = [j for j in cols if j not in pivots]
        res = _form_from_pivots(B, list(pivots), others)
        if res is None:
            continue
        rows, _ = res
        if all(any(row[j] for j in others) for row in rows):
            return True
    return False


def simplicial_check(W: WeightMatrix) -> SimplicialReport:
    P = polytope(W)
    if P.empty:
        return SimplicialReport(True, 0, P)
    count = len(P.vertices)
    simplicial = count == P.dimension + 1
    support = list(P.support)
    sub = W.A.select_columns(support)
    B = _row_basis(sub)
    nz_cols = [j for j in range(len(support)) if any(r[j] for r in B)]
    if not simplicial:
        if B and _standard_form_exists(B, nz_cols):
            raise AssertionError("standard form found for a non-simplicial polytope")
        return SimplicialReport(False, count, P)
    if not B:
        # A' vanishes: the polytope is the simplex on the support itself
        perm = tuple(support)
        return SimplicialReport(True, count, P, StandardForm(perm, (), (), (), len(support), True), (), ())
    form, normals, seps = _construct_standard_form(W, P, B, support, nz_cols)
    if form is None:
        raise AssertionError("simplicial polytope without a standard form")
    return SimplicialReport(True, count, P, form, normals, seps)


def _construct_standard_form(W, P, B, support, nz_cols):
    r = len(B)
    local = {j: k for k, j in enumerate(support)}
    verts = [[v[j] for j in support] for v in P.vertices]
    zero_cols = [k for k in range(len(support)) if k not in nz_cols]
    # private coordinates: positive on exactly one vertex
    private = []
    for vi, v in enumerate(verts):
        cand = [k for k in range(len(support)) if v[k] > 0 and all(w[k] == 0 for wi, w in enumerate(verts) if wi != vi)]
        cand = [k for k in cand if k not in zero_cols] or [k for k in cand]
        private.append(cand)
    best = None
    for choice in itertools.product(*private):
        if len(set(choice)) != len(choice):
            continue
        chosen = [k for k in choice if k not in zero_cols]
        pivots = sorted(k for k in nz_cols if k not in choice)
        if len(pivots) != r:
            continue
        others = sorted(chosen)
        res = _form_from_pivots(B, pivots, others)
        if res is None:
            continue
        rows, T = res
        if not all(any(row[j] for j in others) for row in rows):
            continue
        perm = tuple(support[k] for k in pivots + others + zero_cols)
        if best is None or perm < best[0]:
            best = (perm, pivots, others, rows, T)
    if best is None:
        return None, None, None
    perm, pivots, others, rows, T = best
    D = tuple(tuple(rows[i][pivots[k]] for k in range(r)) for i in range(r))
    C = tuple(tuple(rows[i][k] for k in others) for i in range(r))
    # full transform on A' = W.A restricted to the support: diag(T, I) times the Hermite transform
    Uh, _ = integer_row_reduce(W.A.select_columns(support))
    ell = Uh.rows
    big = [list(t) + [0] * (ell - r) for t in T] + [[int(i == j) for j in range(ell)] for i in range(r, ell)]
    Tt = tuple(tuple(sum(Fraction(big[i][k]) * Uh.entries[k][j] for k in range(ell)) for j in range(ell))
               for i in range(ell))
    unimod = all(x.denominator == 1 for t in Tt for x in t) and abs(det([[int(x) for x in t] for t in Tt])) == 1
    form = StandardForm(perm, Tt, D, C, len(zero_cols), unimod)
    normals, seps = [], []
    for i in range(r):
        mu = [0] * W.n
        for k, j in enumerate(support):
            mu[j] = rows[i][k]
        normals.append(tuple(mu))
        seps.append(support[pivots[i]])
    _check_normals(normals, seps, support)
    if not all(D[i][i] < 0 and all(D[i][k] == 0 for k in range(r) if k != i) for i in range(r)):
        raise AssertionError("D block is not negative diagonal")
    return form, tuple(normals), tuple(seps)


def _check_normals(normals, seps, support):
    for i, mu in enumerate(normals):
        if mu[seps[i]] >= 0:
            raise AssertionError("normal does not separate its index")
        for k, j in enumerate(seps):
            if k != i and mu[j] != 0:
                raise AssertionError("normal does not vanish on other separated indices")
        for j in support:
            if j not in seps and mu[j] < 0:
                raise AssertionError("normal negative off its separated index")


def cox_group(W: WeightMatrix) -> CoxGroupData:
    rep = simplicial_check(W)
    if not rep.simplicial:
        raise NotSimplicial("the cone is not simplicial")
    r = rank(W.A)
    if rep.polytope.empty or rep.polytope.dimension != W.n - r - 1:
        raise DegeneratePolytope("the polytope does not have full dimension n - rank - 1")
    K = kernel_lattice_basis(W.A)
    rays = cone_rays(W)
    # coordinates of each ray in the kernel basis (unique, rational solve then integral)
    basis_t = [list(col) for col in zip(*K.entries)]
    coords = []
    for ray in rays:
        M = [basis_t[j] + [ray[j]] for j in range(W.n)]
        R, piv = rational_rref(M)
        k = K.rows
        x = [R[i][k] for i in range(k)]
        if any(v.denominator != 1 for v in x):
            raise AssertionError("ray is not in the kernel lattice")
        coords.append([int(v) for v in x])
    V = IntMatrix.from_rows(coords)
    factors = tuple(d for d in smith_normal_form(V).invariant_factors if d > 1)
    order = math.prod(factors) if factors else 1
    if order != abs(det(V.entries)):
        raise AssertionError("Smith form inconsistent with determinant")
    return CoxGroupData(factors, order)
