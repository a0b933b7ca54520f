from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from torusquot.errors import BudgetError
from torusquot.invariants import hilbert_basis_monomials
from torusquot.poisson import (CPolynomial, GaussQ, bracket, conjugate, cyclic_quotient_table, imag_part,
                               is_invariant, is_real, monomial_poly, real_part, verify_dim2_brackets)
from torusquot.weights import WeightMatrix

W = WeightMatrix.parse
z = CPolynomial.z
zb = CPolynomial.zbar


def to_sympy(p: CPolynomial, zs, zbs):
    out = sympy.Integer(0)
    for (a, b), c in p.terms.items():
        term = sympy.Rational(c.re.numerator, c.re.denominator) + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator)
        for x, e in zip(zs, a):
            term *= x ** e
        for x, e in zip(zbs, b):
            term *= x ** e
        out += term
    return sympy.expand(out)


def sympy_bracket(p, q, zs, zbs):
    """Oracle: the defining formula applied with sympy's differentiation."""
    s = 0
    for x, xb in zip(zs, zbs):
        s += sympy.diff(p, x) * sympy.diff(q, xb) - sympy.diff(p, xb) * sympy.diff(q, x)
    return sympy.expand(-2 * sympy.I * s)


def test_bracket_generators():
    assert bracket(z(0, 1), zb(0, 1)) == CPolynomial.constant(GaussQ(0, -2), 1)
    assert bracket(z(0, 2), z(1, 2)) == CPolynomial.zero(2)


def test_bracket_rho_table_example():
    w = z(0, 2) * z(1, 2)
    rho1, rho2 = real_part(w), imag_part(w)
    rho3 = z(1, 2) * zb(1, 2)
    assert bracket(rho1, rho3) == rho2 * 2


def test_conjugation():
    assert conjugate(z(0, 2) * z(1, 2)) == zb(0, 2) * zb(1, 2)
    assert is_real(z(0, 1) * zb(0, 1))
    assert not is_real(z(0, 1) * zb(0, 1) * GaussQ(0, 1))


def test_is_invariant_examples():
    Wm = W("-1 1")
    assert is_invariant(Wm, z(0, 2) * z(1, 2))
    assert not is_invariant(Wm, z(0, 2))
    for j in range(3):
        assert is_invariant(W("3 -1 2"), z(j, 3) * zb(j, 3))


def test_degree_guard():
    p = z(0, 1) ** 40
    with pytest.raises(BudgetError):
        bracket(p, conjugate(p))
    assert bracket(p, conjugate(p), max_degree=None)


def test_json_layout():
    p = z(0, 2) * GaussQ(F(1, 2), -3) + zb(1, 2)
    assert p.to_json() == [{"a": [0, 0], "b": [0, 1], "re": "1", "im": "0"},
                           {"a": [1, 0], "b": [0, 0], "re": "1/2", "im": "-3"}]


@pytest.mark.parametrize("text", ["-1 1", "-1 2", "-1 0 1; 0 -1 1", "-3 0 2; 0 -2 3"])
def test_dim2_brackets_pass(text):
    rep = verify_dim2_brackets(W(text))
    assert rep.passed
    assert rep.calB > 0


def test_cyclic_table():
    for N in range(2, 7):
        assert all(ok for _, ok in cyclic_quotient_table(N))


# --- properties ------------------------------------------------------------

N_VARS = 2
gauss = st.builds(GaussQ, st.integers(-3, 3), st.integers(-3, 3))
expo = st.tuples(*[st.integers(0, 2)] * N_VARS)
polys = st.dictionaries(st.tuples(expo, expo), gauss, max_size=4).map(lambda d: CPolynomial(N_VARS, d))


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_poisson_axioms(p, q, r):
    assert bracket(p, q) == -bracket(q, p)
    assert bracket(p, q * r) == bracket(p, q) * r + q * bracket(p, r)
    jac = bracket(p, bracket(q, r)) + bracket(q, bracket(r, p)) + bracket(r, bracket(p, q))
    assert not jac


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_bracket_matches_sympy(p, q):
    zs = sympy.symbols("z1 z2")
    zbs = sympy.symbols("w1 w2")
    got = to_sympy(bracket(p, q), zs, zbs)
    want = sympy_bracket(to_sympy(p, zs, zbs), to_sympy(q, zs, zbs), zs, zbs)
    assert sympy.expand(got - want) == 0


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_real_closed(p, q):
    assert is_real(bracket(real_part(p), real_part(q)))


@pytest.mark.parametrize("text", ["-1 1 1", "-1 1 2", "-2 1 1", "-1 -1 1 1", "1 -1 0; 0 1 -2"])
def test_basis_generators_invariant(text):
    Wm = W(text)
    for g in hilbert_basis_monomials(Wm, 4).generators:
        assert is_invariant(Wm, monomial_poly(g))
