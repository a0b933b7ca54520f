from fractions import Fraction as F
import itertools
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.optimize import linprog

from torusquot.errors import BudgetError, DegeneratePolytope, NotSimplicial
from torusquot.lattice import IntMatrix, minors_gcd, rank
from torusquot.weights import (WeightMatrix, cone_rays, cox_group, effectiveness_report, moment_map, polytope,
                               simplicial_check)

W = WeightMatrix.parse
SIX_COLUMN = "1 -1 1 -1 0 0; 0 0 0 0 1 -1"
h = F(1, 2)


def lp_vertices(Wm: WeightMatrix, trials=60, seed=0):
    """Independent float oracle: optimise random objectives over the polytope
    with an LP solver and collect the optimal vertices."""
    A = np.array(Wm.rows, dtype=float)
    n = Wm.n
    Aeq = np.vstack([A, np.ones(n)])
    beq = np.zeros(len(A) + 1)
    beq[-1] = 1
    rng = np.random.default_rng(seed)
    found = set()
    for _ in range(trials):
        c = rng.normal(size=n)
        res = linprog(c, A_eq=Aeq, b_eq=beq, bounds=[(0, None)] * n, method="highs-ds")
        if res.status == 2:
            return set()
        found.add(tuple(np.round(res.x, 9)))
    return found


def test_parse_grammar():
    assert W("-1 1 1").rows == ((-1, 1, 1),)
    assert W("1,-1; 0, 2").rows == ((1, -1), (0, 2))
    with pytest.raises(ValueError):
        W("1 2; 3")
    with pytest.raises(ValueError):
        W("1 x")


def test_effectiveness_examples():
    r = effectiveness_report(W("-1 1 1"))
    assert r.effective and r.reduced == W("-1 1 1")
    r = effectiveness_report(W("2 4"))
    assert not r.effective and r.minors_gcd == 2 and r.reduced.rows == ((1, 2),)
    r = effectiveness_report(W("-1 1 1; -2 2 2"))
    assert r.rank == 1 and not r.full_rank and r.reduced.rows == ((-1, 1, 1),)


def test_polytope_examples():
    P = polytope(W("-1 1 1"))
    assert set(P.vertices) == {(h, h, 0), (h, 0, h)}
    assert P.dimension == 1 and P.support == (0, 1, 2)
    P = polytope(W(SIX_COLUMN))
    assert set(P.vertices) == {(h, h, 0, 0, 0, 0), (h, 0, 0, h, 0, 0), (0, h, h, 0, 0, 0), (0, 0, h, h, 0, 0),
                               (0, 0, 0, 0, h, h)}
    assert P.dimension == 3
    P = polytope(W("1 1"))
    assert P.empty and P.dimension == -1 and P.support == ()


def test_polytope_budget():
    with pytest.raises(BudgetError):
        polytope(W(" ".join(["1", "-1"] * 7)))


def test_simplicial_examples():
    assert simplicial_check(W("-1 1 5")).simplicial
    r = simplicial_check(W("-1 -1 1 1"))
    assert not r.simplicial and r.vertex_count == 4 and r.polytope.dimension == 2
    assert set(r.polytope.vertices) == {(h, 0, h, 0), (h, 0, 0, h), (0, h, h, 0), (0, h, 0, h)}
    r = simplicial_check(W("1 -1"))
    assert r.simplicial
    assert r.standard_form.D == ((-1,),) and r.standard_form.C == ((1,),)
    r = simplicial_check(W(SIX_COLUMN))
    assert not r.simplicial and r.vertex_count == 5


def test_empty_polytope_is_simplicial():
    r = simplicial_check(W("1 1"))
    assert r.simplicial and r.standard_form is None


def test_standard_form_two_rows():
    r = simplicial_check(W("1 -1 0 0 0 0; 1 1 -1 -1 -1 -1"))
    sf = r.standard_form
    assert r.simplicial and sf.D == ((-2, 0), (0, -2)) and not sf.unimodular


@pytest.mark.parametrize("text,rays", [
    ("-1 1 1", {(1, 1, 0), (1, 0, 1)}),
    ("-2 1 1", {(1, 2, 0), (1, 0, 2)}),
    ("1 1", set()),
])
def test_cone_rays(text, rays):
    assert set(cone_rays(W(text))) == rays


def test_cox_examples():
    assert cox_group(W("-1 1")).invariant_factors == ()
    assert cox_group(W("-1 1 1")).invariant_factors == ()
    c = cox_group(W("-2 1 1"))
    assert c.invariant_factors == (2,) and c.order == 2


def test_cox_errors():
    with pytest.raises(NotSimplicial):
        cox_group(W("-1 -1 1 1"))
    with pytest.raises(DegeneratePolytope):
        cox_group(W("1 1 0"))


def test_moment_map():
    assert moment_map(W("-1 1 2")).components == ((F(-1, 2), h, 1),)
    assert moment_map(W("1 0; 0 1")).components == ((h, 0), (0, h))
    assert moment_map(W("-1 1 1")).components == ((-h, h, h),)


def test_json_shapes():
    j = simplicial_check(W("-1 1 2")).to_json()
    assert j["simplicial"] is True
    assert j["polytope"]["vertices"] == [["2/3", "0", "1/3"], ["1/2", "1/2", "0"]]
    assert set(j["standard_form"]) >= {"perm", "D", "C"}


# --- properties ------------------------------------------------------------

weight_rows = st.integers(1, 2).flatmap(lambda l: st.integers(l + 1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=l, max_size=l)))


def _check_report(Wm, r):
    P = r.polytope
    for v in P.vertices:
        assert all(x >= 0 for x in v) and sum(v) == 1
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in Wm.rows)
    assert P.support == tuple(sorted({i for v in P.vertices for i, x in enumerate(v) if x}))
    assert r.simplicial == (P.empty or len(P.vertices) == P.dimension + 1)
    if r.standard_form is not None:
        sf = r.standard_form
        assert all(sf.D[i][j] < 0 if i == j else sf.D[i][j] == 0 for i in range(len(sf.D)) for j in range(len(sf.D)))
        assert all(x >= 0 for row in sf.C for x in row)
        assert all(any(row) for row in sf.C)
        for i, (mu, j) in enumerate(zip(r.normals, r.separated_indices)):
            assert mu[j] < 0
            for k, jk in enumerate(r.separated_indices):
                if k != i:
                    assert mu[jk] == 0
            for jj in P.support:
                if jj != j:
                    assert mu[jj] >= 0


@settings(max_examples=60, deadline=None)
@given(weight_rows)
def test_report_invariants_and_lp_oracle(rows):
    Wm = WeightMatrix.from_rows(rows)
    r = simplicial_check(Wm)
    _check_report(Wm, r)
    lp = lp_vertices(Wm, trials=40)
    ours = {tuple(round(float(x), 9) for x in v) for v in r.polytope.vertices}
    # every LP optimum is one of our vertices (LP only ever finds a subset)
    assert lp <= ours
    if r.polytope.empty:
        assert not lp


@settings(max_examples=40, deadline=None)
@given(weight_rows, st.randoms(use_true_random=False))
def test_simplicial_invariant_under_symmetries(rows, rnd):
    Wm = WeightMatrix.from_rows(rows)
    base = simplicial_check(Wm)
    perm = list(range(Wm.n))
    rnd.shuffle(perm)
    rows2 = [list(r) for r in Wm.permute_columns(perm).rows]
    if len(rows2) == 2:
        k = rnd.randint(-3, 3)
        rows2[0] = [a + k * b for a, b in zip(rows2[0], rows2[1])]
        rows2.reverse()
    elif rnd.random() < 0.5:
        rows2[0] = [-a for a in rows2[0]]
    other = simplicial_check(WeightMatrix.from_rows(rows2))
    assert other.simplicial == base.simplicial
    assert other.vertex_count == base.vertex_count


@settings(max_examples=40, deadline=None)
@given(weight_rows)
def test_rays_primitive_in_cone(rows):
    Wm = WeightMatrix.from_rows(rows)
    for ray in cone_rays(Wm):
        assert math.gcd(*ray) == 1 and all(x >= 0 for x in ray)
        assert all(sum(a * x for a, x in zip(row, ray)) == 0 for row in Wm.rows)


@settings(max_examples=40, deadline=None)
@given(weight_rows)
def test_reduced_is_effective(rows):
    Wm = WeightMatrix.from_rows(rows)
    r = effectiveness_report(Wm)
    if r.rank == 0:
        return
    red = r.reduced
    assert rank(red.A) == red.ell == r.rank
    assert minors_gcd(red.A, red.ell) == 1
    # same zero fibre: the real kernels agree
    assert polytope(red).vertices == polytope(Wm).vertices


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_cox_order_is_det(a, b, c):
    Wm = WeightMatrix.from_rows([[-a, b, c]])
    assume(math.gcd(a, b, c) == 1)
    cg = cox_group(Wm)
    assert cg.order == math.prod(cg.invariant_factors)
    for x, y in zip(cg.invariant_factors, cg.invariant_factors[1:]):
        assert y % x == 0
