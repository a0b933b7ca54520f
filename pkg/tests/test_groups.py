import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from torusquot.errors import BudgetError, ClosureBudget, InvalidParams
from torusquot.groups import (BinaryDihedral, BinaryIcosahedral, BinaryOctahedral, BinaryTetrahedral, B_MATRIX,
                              CyclicScalar, CyclicSU2, DiagonalCyclic, DuValProduct, FromGenerators, _keys,
                              conjugacy_key, cyclic_invariant_dim, diagonal_invariant_dim, duval_product_group,
                              enumerate_duval, generate, iter_type1_params, spec_from_json,
                              trace_det_fingerprint, type1_valid)

IB = (1j * B_MATRIX).reshape(4)


def check_group(el: np.ndarray, tol=1e-9):
    n = len(el)
    keys = set(_keys(el))
    assert len(keys) == n
    eye = np.eye(2)
    assert any(np.allclose(g, eye, atol=tol) for g in el)
    for g in el:
        assert np.allclose(g.conj().T @ g, eye, atol=tol)
    prods = (el[:, None] @ el[None, :]).reshape(-1, 2, 2)
    assert set(_keys(prods)) <= keys
    assert set(_keys(np.linalg.inv(el))) <= keys


@pytest.mark.parametrize("spec,order", [
    (CyclicSU2(4), 4), (CyclicScalar(5), 5), (BinaryDihedral(2), 8), (BinaryDihedral(5), 20),
    (BinaryTetrahedral(), 24), (BinaryOctahedral(), 48), (BinaryIcosahedral(), 120),
    (FromGenerators((tuple(IB),)), 2), (DiagonalCyclic(1, 2, 6), 6),
])
def test_orders_and_closure(spec, order):
    G = generate(spec)
    assert G.order == order == len(G.elements)
    check_group(G.elements)


def test_sqrt_minus_one_b():
    G = generate(FromGenerators((tuple(IB),)))
    assert any(np.allclose(g, 1j * B_MATRIX) for g in G.elements)


def test_type1_scalar_z3():
    G = duval_product_group(DuValProduct(1, 3, 1, 3, 1, 1))
    assert G.order == 3
    scal = generate(CyclicScalar(3)).elements
    assert set(_keys(G.elements)) == set(_keys(scal))


def test_type1_minus_identity():
    G = duval_product_group(DuValProduct(1, 1, 1, 2, 2, 1))
    assert set(_keys(G.elements)) == set(_keys(np.array([np.eye(2), -np.eye(2)], dtype=complex)))


@pytest.mark.parametrize("m,l,order", [(1, 1, 2), (1, 3, 6), (3, 1, 6), (3, 3, 18)])
def test_type3_b_orders(m, l, order):
    G = generate(DuValProduct(3, m, l=l, variant="b"))
    assert G.order == order
    check_group(G.elements)


def test_type3_z4_d1_is_sqrt_minus_one_b():
    G = generate(DuValProduct(3, 1, l=1, variant="b"))
    ib = generate(FromGenerators((tuple(IB),)))
    assert conjugacy_key(G) == conjugacy_key(ib) or trace_det_fingerprint(G.elements) == trace_det_fingerprint(ib.elements)


@pytest.mark.parametrize("spec", [DuValProduct(2, 2, l=3), DuValProduct(3, 2, l=2, variant="a"),
                                  DuValProduct(4, 1, l=2), DuValProduct(5, 1), DuValProduct(6, 1),
                                  DuValProduct(7, 1), DuValProduct(8, 1), DuValProduct(9, 1)])
def test_family_orders(spec):
    G = generate(spec)
    check_group(G.elements)


def test_invalid_params():
    with pytest.raises(InvalidParams):
        generate(CyclicSU2(0))
    with pytest.raises(InvalidParams):
        duval_product_group(DuValProduct(1, 2, 2, 1, 2, 1))
    with pytest.raises(InvalidParams):
        duval_product_group(DuValProduct(3, 2, l=1, variant="b"))
    with pytest.raises(InvalidParams):
        duval_product_group(DuValProduct(2, 1, l=1, phi=5))


def test_closure_budget():
    irr = (cmath.exp(1j), 0, 0, cmath.exp(-1j))
    with pytest.raises(ClosureBudget):
        generate(FromGenerators((irr,)))


def test_exceptional_subgroups():
    # T contains an order-4 element of SU2 (conjugate to diag(i, -i)); I one of order 10
    def has_su2_order(el, N):
        tr = el[:, 0, 0] + el[:, 1, 1]
        return np.any(np.abs(tr - 2 * math.cos(2 * math.pi / N)) < 1e-9)
    assert has_su2_order(generate(BinaryTetrahedral()).elements, 4)
    assert has_su2_order(generate(BinaryIcosahedral()).elements, 10)


def test_enumerate_small_caps():
    def keys(cap):
        return {conjugacy_key(G) for _, G in enumerate_duval(cap)}
    k2 = keys(2)
    for spec in (CyclicScalar(1), CyclicScalar(2), CyclicSU2(2), DuValProduct(3, 1, l=1, variant="b")):
        assert conjugacy_key(generate(spec)) in k2
    assert len(k2) == 3
    assert conjugacy_key(generate(DuValProduct(1, 3, 1, 3, 1, 1))) in keys(3)
    fp24 = {trace_det_fingerprint(G.elements) for _, G in enumerate_duval(24)}
    assert trace_det_fingerprint(generate(BinaryTetrahedral()).elements) in fp24


def test_exact_key_agrees_with_fingerprint_count():
    groups = enumerate_duval(24)
    assert len(groups) == len({trace_det_fingerprint(G.elements) for _, G in groups})


def test_enumerate_sorted_and_bounded():
    groups = enumerate_duval(12)
    assert all(G.order <= 12 for _, G in groups)
    ks = [conjugacy_key(G) for _, G in groups]
    assert ks == sorted(ks)
    with pytest.raises(BudgetError):
        enumerate_duval(2001)


@pytest.mark.parametrize("spec", [CyclicScalar(3), CyclicSU2(4), BinaryDihedral(2), BinaryTetrahedral(),
                                  BinaryOctahedral(), BinaryIcosahedral(), DiagonalCyclic(1, 3, 5),
                                  DuValProduct(1, 3, 1, 3, 1, 1), DuValProduct(3, 1, l=3, variant="b", phi=0),
                                  FromGenerators(((1j, 0, 0, -1j),))])
def test_spec_json_round_trip(spec):
    assert spec_from_json(spec.to_json()) == spec


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 40))
def test_type1_exact_model(cap):
    """The exact lattice model matches the numeric elements and the invariant count."""
    params = list(iter_type1_params(cap))
    m, n, f, g, d = params[-1]
    assert type1_valid(m, n, f, g, d)
    G = duval_product_group(DuValProduct(1, m, n, f, g, d))
    el = G.diagonal.elements()
    assert len(el) == G.order
    check_group(el)
    # invariant count from characters vs counting monomials fixed by every element
    for k in (1, 2, 3):
        xy = G.diagonal.exponent_pairs()
        from torusquot.groups import monomial_weight_table
        direct = sum(c for (u, v), c in monomial_weight_table(k)
                     if all((u * x + v * y) % G.diagonal.M == 0 for x, y in xy))
        assert diagonal_invariant_dim(G.diagonal, k) == direct


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.integers(0, 12), st.integers(1, 12), st.integers(0, 4))
def test_cyclic_invariant_dim_matches_group(x, y, M, k):
    G = generate(DiagonalCyclic(x, y, M))
    assert cyclic_invariant_dim(x, y, M, k) == diagonal_invariant_dim(G.diagonal, k)
