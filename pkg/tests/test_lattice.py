import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from torusquot.errors import DimensionError, ZeroVectorError
from torusquot.lattice import (IntMatrix, det, integer_row_reduce, kernel_lattice_basis, minors_gcd,
                               primitive_vector, rank, smith_normal_form)

M = IntMatrix.from_rows


def test_minors_gcd_examples():
    assert minors_gcd(M([[-1, 1, 1]]), 1) == 1
    assert minors_gcd(M([[2, 4]]), 1) == 2
    assert minors_gcd(M([[1, 0, 1], [0, 2, 2]]), 2) == 2
    assert minors_gcd(M([[0, 0]]), 1) == 0


def test_minors_gcd_dimension_error():
    with pytest.raises(DimensionError):
        minors_gcd(M([[1, 2]]), 2)


@pytest.mark.parametrize("rows,want", [
    ([[2, 4], [1, 2]], [[1, 2], [0, 0]]),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 0], [0, 0, 1]]),
    ([[0, 1], [1, 0]], [[1, 0], [0, 1]]),
])
def test_row_reduce_examples(rows, want):
    U, R = integer_row_reduce(M(rows))
    assert R.tolist() == want
    assert (U @ M(rows)) == R


def _span_equal(B1: IntMatrix, B2):
    """Same lattice: each basis solves integrally in the other."""
    a = sympy.Matrix(B1.tolist())
    b = sympy.Matrix(B2)
    if a.rank() != b.rank() or a.rows != b.rows:
        return False
    both = sympy.Matrix.vstack(a, b)
    return abs(_maxminors_gcd(a)) == abs(_maxminors_gcd(both))


def _maxminors_gcd(S):
    from itertools import combinations
    r = S.rank()
    g = 0
    for rows in combinations(range(S.rows), r):
        for cols in combinations(range(S.cols), r):
            g = sympy.gcd(g, S.extract(list(rows), list(cols)).det())
    return g


@pytest.mark.parametrize("rows,basis", [
    ([[-1, 1, 1]], [[1, 1, 0], [1, 0, 1]]),
    ([[-2, 1, 1]], [[1, 2, 0], [0, 1, -1]]),
])
def test_kernel_examples(rows, basis):
    K = kernel_lattice_basis(M(rows))
    assert _span_equal(K, basis)
    assert minors_gcd(K, K.rows) == 1


def test_kernel_trivial():
    assert kernel_lattice_basis(M([[1, 0], [0, 1]])).rows == 0


@pytest.mark.parametrize("rows,diag", [
    ([[1, 0], [1, -2]], [1, 2]),
    ([[1, 0], [0, 1]], [1, 1]),
    ([[2, 0], [0, 3]], [1, 6]),
])
def test_smith_examples(rows, diag):
    sf = smith_normal_form(M(rows))
    assert sf.invariant_factors == diag
    assert sf.U @ M(rows) @ sf.V == sf.S


@pytest.mark.parametrize("v,want", [((2, 4, 0), (1, 2, 0)), ((-1, -1), (1, 1)), ((3, 5), (3, 5)), ((0, -6, 4), (0, 3, -2))])
def test_primitive_vector(v, want):
    assert primitive_vector(v) == want


def test_primitive_zero():
    with pytest.raises(ZeroVectorError):
        primitive_vector((0, 0))


def test_json_round_trip():
    A = M([[1, -2, 3]])
    assert A.to_json() == {"rows": 1, "cols": 3, "entries": [[1, -2, 3]]}
    assert IntMatrix.from_json(A.to_json()) == A


def matrices(max_rows=3, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_row_reduce_unimodular(rows):
    A = M(rows)
    U, R = integer_row_reduce(A)
    assert U @ A == R
    assert abs(det(U.entries)) == 1
    assert rank(A) == sympy.Matrix(rows).rank()
    # zero rows last, positive pivots
    nz = [any(r) for r in R.entries]
    assert nz == sorted(nz, reverse=True)
    for r in R.entries:
        if any(r):
            assert next(x for x in r if x) > 0


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_properties(rows):
    A = M(rows)
    K = kernel_lattice_basis(A)
    assert K.rows == A.cols - rank(A)
    for v in K.entries:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in rows)
    if K.rows:
        # saturated: the maximal minors are coprime
        assert minors_gcd(K, K.rows) == 1


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_smith_against_sympy(rows):
    A = M(rows)
    sf = smith_normal_form(A)
    assert sf.U @ A @ sf.V == sf.S
    assert abs(det(sf.U.entries)) == 1 and abs(det(sf.V.entries)) == 1
    d = sf.invariant_factors
    for i in range(len(d) - 1):
        assert d[i] >= 0
        assert (d[i + 1] % d[i] == 0) if d[i] else d[i + 1] == 0
    S = sympy_snf(sympy.Matrix(rows), domain=sympy.ZZ)
    ref = [abs(S[i, i]) for i in range(min(S.shape))]
    assert sorted(ref) == sorted(d)
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert sf.S[i, j] == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_det_against_sympy(rows):
    assert det(rows) == sympy.Matrix(rows).det()


@settings(max_examples=60, deadline=None)
@given(matrices(2, 4), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_minors_gcd_row_op_invariant(rows, mult):
    A = M(rows)
    k = rank(A)
    if not k:
        return
    # add a multiple of one row to another, then swap
    rows2 = [list(r) for r in rows]
    if len(rows2) > 1:
        rows2[1] = [x + mult[0] * y for x, y in zip(rows2[1], rows2[0])]
        rows2.reverse()
    assert minors_gcd(M(rows2), k) == minors_gcd(A, k)
