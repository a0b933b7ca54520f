"""Exact Poisson algebra on C[z, zbar] with Gaussian-rational coefficients.

The bracket is the one with {z_i, zbar_j} = -2i delta_ij.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .errors import BudgetError, IdentityFailure
from .weights import WeightMatrix, moment_map

MAX_BRACKET_DEGREE = 64
MAX_TERM_PRODUCTS = 1_000_000


class GaussQ:
    """x + y i with x, y rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, o):
        o = _g(o)
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _g(o)
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return _g(o) - self

    def __mul__(self, o):
        o = _g(o)
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _g(o)
        d = o.re * o.re + o.im * o.im
        return self * GaussQ(o.re / d, -o.im / d)

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def conj(self):
        return GaussQ(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = _g(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        return f"({self.re}+{self.im}i)"


I = GaussQ(0, 1)


def _g(x) -> GaussQ:
    if isinstance(x, GaussQ):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussQ(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Gaussian rational")


@dataclass(frozen=True)
class CPolynomial:
    """Sum of c * z^a zbar^b; ``terms`` maps (a, b) to a nonzero GaussQ."""

    n: int
    terms: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.terms.items():
            c = _g(c)
            if c:
                clean[(tuple(a), tuple(b))] = c
        object.__setattr__(self, "terms", clean)

    # constructors
    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def constant(cls, c, n):
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def monomial(cls, a, b, c=1):
        return cls(len(a), {(tuple(a), tuple(b)): c})

    @classmethod
    def z(cls, k, n):
        return cls.monomial(_unit(k, n), (0,) * n)

    @classmethod
    def zbar(cls, k, n):
        return cls.monomial((0,) * n, _unit(k, n))

    @property
    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self.terms), default=0)

    def __eq__(self, o):
        if not isinstance(o, CPolynomial):
            return NotImplemented
        return self.n == o.n and self.terms == o.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, GaussQ()) + c
        return CPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return CPolynomial(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, Fraction, GaussQ)):
            c = _g(o)
            return CPolynomial(self.n, {k: v * c for k, v in self.terms.items()})
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in o.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                out[key] = out.get(key, GaussQ()) + c1 * c2
        return CPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = CPolynomial.constant(1, self.n)
        for _ in range(k):
            out = out * self
        return out

    def _lift(self, o):
        if isinstance(o, CPolynomial):
            if o.n != self.n:
                raise ValueError("polynomials in different numbers of variables")
            return o
        return CPolynomial.constant(o, self.n)

    def d_z(self, k):
        out = {}
        for (a, b), c in self.terms.items():
            if a[k]:
                a2 = a[:k] + (a[k] - 1,) + a[k + 1:]
                out[(a2, b)] = c * a[k]
        return CPolynomial(self.n, out)

    def d_zbar(self, k):
        out = {}
        for (a, b), c in self.terms.items():
            if b[k]:
                b2 = b[:k] + (b[k] - 1,) + b[k + 1:]
                out[(a, b2)] = c * b[k]
        return CPolynomial(self.n, out)

    def to_json(self):
        return [{"a": list(a), "b": list(b), "re": _fs(c.re), "im": _fs(c.im)}
                for (a, b), c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = "".join(f"z{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e)
            mono += "".join(f"zb{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(b) if e)
            parts.append(f"{c!r}*{mono}" if mono else repr(c))
        return " + ".join(parts)


def _fs(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _unit(k, n):
    return tuple(int(i == k) for i in range(n))


def bracket(p: CPolynomial, q: CPolynomial, max_degree: Optional[int] = MAX_BRACKET_DEGREE) -> CPolynomial:
    """Pass max_degree=None to lift the degree guard; the term-count guard stays."""
    if p.n != q.n:
        raise ValueError("polynomials in different numbers of variables")
    if max_degree is not None and p.degree + q.degree > max_degree:
        raise BudgetError(f"bracket degree exceeds {max_degree}")
    if len(p.terms) * len(q.terms) > MAX_TERM_PRODUCTS:
        raise BudgetError(f"bracket needs more than {MAX_TERM_PRODUCTS} term products")
    out = CPolynomial.zero(p.n)
    for k in range(p.n):
        out = out + p.d_z(k) * q.d_zbar(k) - p.d_zbar(k) * q.d_z(k)
    return out * GaussQ(0, -2)


def conjugate(p: CPolynomial) -> CPolynomial:
    return CPolynomial(p.n, {(b, a): c.conj() for (a, b), c in p.terms.items()})


def is_real(p: CPolynomial) -> bool:
    return p == conjugate(p)


def real_part(p: CPolynomial) -> CPolynomial:
    return (p + conjugate(p)) * Fraction(1, 2)


def imag_part(p: CPolynomial) -> CPolynomial:
    return (p - conjugate(p)) * GaussQ(0, Fraction(-1, 2))


def moment_components(W: WeightMatrix) -> list[CPolynomial]:
    out = []
    for comp in moment_map(W).components:
        terms = {(_unit(j, W.n), _unit(j, W.n)): c for j, c in enumerate(comp) if c}
        out.append(CPolynomial(W.n, terms))
    return out


def is_invariant(W: WeightMatrix, p: CPolynomial) -> bool:
    return all(not bracket(J, p, max_degree=None) for J in moment_components(W))


def monomial_poly(m) -> CPolynomial:
    """CPolynomial of a MonomialExp-like object with fields a, b."""
    return CPolynomial.monomial(m.a, m.b)


# --- dimension-two bracket tables -----------------------------------------

@dataclass(frozen=True)
class Dim2BracketReport:
    checks: tuple
    calB: Fraction
    N: int

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)


def _require(name, diff, checks):
    if diff:
        raise IdentityFailure(name, diff)
    checks.append((name, True))


def _br(p, q):
    # the dimension-two identities involve a handful of terms at degree up to 2N
    return bracket(p, q, max_degree=None)


def cyclic_quotient_table(N: int) -> list:
    """Bracket table of x1 = Re z^N, x2 = Im z^N, x3 = z zbar on C."""
    z = CPolynomial.z(0, 1)
    w = z ** N
    x1, x2 = real_part(w), imag_part(w)
    x3 = z * conjugate(z)
    checks: list = []
    _require("{x1,x2} = N^2 x3^(N-1)", _br(x1, x2) - x3 ** (N - 1) * (N * N), checks)
    _require("{x1,x3} = 2N x2", _br(x1, x3) - x2 * (2 * N), checks)
    _require("{x2,x3} = -2N x1", _br(x2, x3) + x1 * (2 * N), checks)
    return checks


def verify_dim2_brackets(W: WeightMatrix, include_cyclic_table: bool = True) -> Dim2BracketReport:
    from .invariants import dim2_data

    data = dim2_data(W)
    ell = len(data.form)
    n = ell + 1
    form = WeightMatrix.from_rows([list(r) for r in data.form])
    z = [CPolynomial.z(k, n) for k in range(n)]
    zb = [CPolynomial.zbar(k, n) for k in range(n)]
    expo = tuple(data.m_i) + (data.calA,)
    w = CPolynomial.monomial(expo, (0,) * n)
    rho1, rho2 = real_part(w), imag_part(w)
    rho3 = z[ell] * zb[ell]
    shell = [z[i] * zb[i] for i in range(ell)]
    A = data.calA
    checks: list = []
    _require("{rho1,rho3} = 2A rho2", _br(rho1, rho3) - rho2 * (2 * A), checks)
    _require("{rho2,rho3} = -2A rho1", _br(rho2, rho3) + rho1 * (2 * A), checks)
    b12 = _br(rho1, rho2)
    # product formula with denominators cleared against the monomial prefactor
    rhs = CPolynomial.zero(n)
    for k, e in enumerate(expo):
        if e:
            a = tuple(expo[j] - int(j == k) for j in range(n))
            rhs = rhs + CPolynomial.monomial(a, a, e * e)
    _require("{rho1,rho2} product formula", b12 - rhs, checks)
    for name, rho in [("rho1", rho1), ("rho2", rho2), ("rho3", rho3)] + [(f"rho{4 + i}", s) for i, s in enumerate(shell)]:
        if not is_real(rho):
            raise IdentityFailure(f"{name} real", rho - conjugate(rho))
        for J in moment_components(form):
            _require(f"{{J, {name}}} = 0", _br(J, rho), checks)
    # shell substitution |z_i|^2 -> (m_i / A) |z_{l+1}|^2 turns {rho1,rho2} into B rho3^(N-1)
    total = Fraction(0)
    for (a, b), c in b12.terms.items():
        if a != b or c.im:
            raise IdentityFailure("{rho1,rho2} is a polynomial in |z_k|^2", b12)
        if sum(a) != data.N - 1:
            raise IdentityFailure("{rho1,rho2} degree", b12)
        coef = c.re
        for i in range(ell):
            coef *= Fraction(data.m_i[i], A) ** a[i]
        total += coef
    if total != data.calB:
        raise IdentityFailure("{y1,y2} = B y3^(N-1)", f"{total} != {data.calB}")
    checks.append(("{y1,y2} = B y3^(N-1)", True))
    if include_cyclic_table:
        checks.extend(cyclic_quotient_table(data.N))
    return Dim2BracketReport(tuple(checks), data.calB, data.N)
