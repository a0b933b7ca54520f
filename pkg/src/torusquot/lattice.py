"""Integer matrix algebra: Hermite and Smith forms, kernel lattices, minor gcds."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, ZeroVectorError


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix. ``entries`` is a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        ent = tuple(tuple(int(x) for x in r) for r in self.entries)
        if len(ent) != self.rows or any(len(r) != self.cols for r in ent):
            raise DimensionError("entries do not match the declared shape")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count needed for an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch in product")
        ot = other.transpose().entries
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ot) for r in self.entries))

    def select_columns(self, cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(self.rows, len(cols), tuple(tuple(r[j] for j in cols) for r in self.entries))

    def tolist(self):
        return [list(r) for r in self.entries]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "IntMatrix":
        return cls(data["rows"], data["cols"], tuple(tuple(r) for r in data["entries"]))


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def invariant_factors(self) -> list[int]:
        k = min(self.S.rows, self.S.cols)
        return [self.S[i, i] for i in range(k)]


def det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def minors_gcd(A: IntMatrix, k: int) -> int:
    if k < 1 or k > min(A.rows, A.cols):
        raise DimensionError(f"minor size {k} exceeds matrix dimensions {A.rows}x{A.cols}")
    g = 0
    for rs in itertools.combinations(range(A.rows), k):
        for cs in itertools.combinations(range(A.cols), k):
            g = math.gcd(g, det([[A.entries[i][j] for j in cs] for i in rs]))
            if g == 1:
                return 1
    return g


def integer_row_reduce(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Hermite normal form: returns (U, R) with R = U A and U unimodular."""
    m, n = A.rows, A.cols
    R = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    p = 0
    for col in range(n):
        if p == m:
            break
        while True:
            nz = [i for i in range(p, m) if R[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(R[i][col]))
            R[p], R[i0] = R[i0], R[p]
            U[p], U[i0] = U[i0], U[p]
            clean = True
            for i in range(p + 1, m):
                if R[i][col]:
                    q = R[i][col] // R[p][col]
                    R[i] = [x - q * y for x, y in zip(R[i], R[p])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[p])]
                    if R[i][col]:
                        clean = False
            if clean:
                break
        if not R[p][col]:
            continue
        if R[p][col] < 0:
            R[p] = [-x for x in R[p]]
            U[p] = [-x for x in U[p]]
        for i in range(p):
            q = R[i][col] // R[p][col]
            if q:
                R[i] = [x - q * y for x, y in zip(R[i], R[p])]
                U[i] = [x - q * y for x, y in zip(U[i], U[p])]
        p += 1
    return IntMatrix(m, m, tuple(map(tuple, U))), IntMatrix(m, n, tuple(map(tuple, R)))


def rank(A: IntMatrix) -> int:
    return sum(1 for r in integer_row_reduce(A)[1].entries if any(r))


def kernel_lattice_basis(A: IntMatrix) -> IntMatrix:
    """Basis (as rows) of {v in Z^n : A v = 0}, in Hermite form."""
    n, m = A.cols, A.rows
    aug = IntMatrix(n, m + n, tuple(tuple(A.entries[i][j] for i in range(m)) + tuple(int(j == k) for k in range(n))
                                     for j in range(n)))
    _, H = integer_row_reduce(aug)
    basis = [r[m:] for r in H.entries if not any(r[:m])]
    return IntMatrix(len(basis), n, tuple(basis))


def smith_normal_form(A: IntMatrix) -> SmithForm:
    m, n = A.rows, A.cols
    S = [list(r) for r in A.entries]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(M, a, b):
        for r in M:
            r[a], r[b] = r[b], r[a]

    def add_col(M, dst, src, q):
        for r in M:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not nz:
                break
            _, i0, j0 = min(nz)
            S[t], S[i0] = S[i0], S[t]
            U[t], U[i0] = U[i0], U[t]
            swap_cols(S, t, j0)
            swap_cols(V, t, j0)
            done = True
            for i in range(t + 1, m):
                q = S[i][t] // S[t][t]
                if q:
                    S[i] = [x - q * y for x, y in zip(S[i], S[t])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[t])]
                if S[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = S[t][j] // S[t][t]
                if q:
                    add_col(S, j, t, -q)
                    add_col(V, j, t, -q)
                if S[t][j]:
                    done = False
            if not done:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            i = bad[0]
            S[t] = [x + y for x, y in zip(S[t], S[i])]
            U[t] = [x + y for x, y in zip(U[t], U[i])]
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return SmithForm(IntMatrix(m, m, tuple(map(tuple, U))), IntMatrix(m, n, tuple(map(tuple, S))),
                     IntMatrix(n, n, tuple(map(tuple, V))))


def primitive_vector(v: Sequence[int]) -> tuple:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        raise ZeroVectorError("the zero vector has no primitive representative")
    first = next(x for x in v if x)
    if first < 0:
        g = -g
    return tuple(int(x) // g for x in v)


# exact rational helpers shared by the geometry modules

def rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rational_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rational_rref(rows)[1])


def rational_inverse(M: Sequence[Sequence]) -> list[list[Fraction]] | None:
    n = len(M)
    aug = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, piv = rational_rref(aug)
    if piv[:n] != list(range(n)):
        return None
    return [r[n:] for r in R]
