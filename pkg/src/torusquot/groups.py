"""Finite subgroups of U_2 following du Val's list (L/L_K; R/R_K)_phi.

Elements are 2x2 complex matrices in double precision. Diagonalisable abelian
groups (all of Type 1 and the l = 1 members of Types 2 and 3) additionally carry
an exact description as a lattice of exponent pairs, which gives an exact
conjugacy key and exact invariant counts without touching floating point.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Optional

import numpy as np

from .errors import BudgetError, ClosureBudget, InvalidParams, PhiAmbiguous

CLOSURE_BUDGET = 10_000
MAX_ENUM_CAP = 2000
_KEY_SCALE = 1e7


# --- specs ---------------------------------------------------------------

@dataclass(frozen=True)
class CyclicScalar:
    N: int

    def to_json(self):
        return {"type": "cyclic_scalar", "N": self.N}

    def label(self):
        return f"Z{self.N} scalar"


@dataclass(frozen=True)
class CyclicSU2:
    N: int

    def to_json(self):
        return {"type": "cyclic_su2", "N": self.N}

    def label(self):
        return f"Z{self.N} < SU2"


@dataclass(frozen=True)
class BinaryDihedral:
    N: int

    def to_json(self):
        return {"type": "binary_dihedral", "N": self.N}

    def label(self):
        return f"D{self.N}"


@dataclass(frozen=True)
class BinaryTetrahedral:
    def to_json(self):
        return {"type": "binary_tetrahedral"}

    def label(self):
        return "T24"


@dataclass(frozen=True)
class BinaryOctahedral:
    def to_json(self):
        return {"type": "binary_octahedral"}

    def label(self):
        return "O48"


@dataclass(frozen=True)
class BinaryIcosahedral:
    def to_json(self):
        return {"type": "binary_icosahedral"}

    def label(self):
        return "I120"


@dataclass(frozen=True)
class FromGenerators:
    """Generators as tuples of four complex entries (row-major)."""

    matrices: tuple

    def to_json(self):
        return {"type": "generators",
                "matrices": [[[z.real, z.imag] for z in m] for m in self.matrices]}

    def label(self):
        return f"<{len(self.matrices)} generators>"


@dataclass(frozen=True)
class DiagonalCyclic:
    """Cyclic group generated by diag(exp(2 pi i x/M), exp(2 pi i y/M)).

    A generator-based spec whose single generator is given exactly.
    """

    x: int
    y: int
    M: int

    def to_json(self):
        return {"type": "diagonal_cyclic", "x": self.x, "y": self.y, "M": self.M}

    def label(self):
        return f"<diag(w{self.M}^{self.x}, w{self.M}^{self.y})>"


@dataclass(frozen=True)
class DuValProduct:
    """(L/L_K; R/R_K)_phi. Type 3 uses variant 'a' for (Z4m/Z2m; Dl/Z2l) and
    'b' for (Z4m/Zm; Dl/Zl)."""

    type: int
    m: int
    n: int = 0
    f: int = 0
    g: int = 0
    d: int = 0
    l: int = 0
    variant: Optional[str] = None
    phi: Optional[int] = None

    def to_json(self):
        out = {"type": f"duval{self.type}", "m": self.m}
        if self.type == 1:
            out.update(n=self.n, f=self.f, g=self.g, d=self.d)
        if self.type in (2, 3, 4):
            out["l"] = self.l
        if self.variant:
            out["variant"] = self.variant
        if self.phi is not None:
            out["phi"] = self.phi
        return out

    def label(self):
        m, l = self.m, self.l
        t = self.type
        if t == 1:
            lk = "1" if self.f == 1 else f"Z{self.f}"
            rk = "1" if self.g == 1 else f"Z{self.g}"
            s = f"(Z{2 * m}/{lk}; Z{2 * self.n}/{rk})_{self.d}"
        elif t == 2:
            s = f"(Z{2 * m}/Z{2 * m}; D{l}/D{l})"
        elif t == 3 and self.variant == "a":
            s = f"(Z{4 * m}/Z{2 * m}; D{l}/Z{2 * l})"
        elif t == 3:
            s = f"(Z{4 * m}/{'1' if m == 1 else 'Z' + str(m)}; D{l}/{'1' if l == 1 else 'Z' + str(l)})"
        elif t == 4:
            s = f"(Z{4 * m}/Z{2 * m}; D{2 * l}/D{l})"
        elif t == 5:
            s = f"(Z{2 * m}/Z{2 * m}; T24/T24)"
        elif t == 6:
            s = f"(Z{6 * m}/Z{2 * m}; T24/D2)"
        elif t == 7:
            s = f"(Z{2 * m}/Z{2 * m}; O48/O48)"
        elif t == 8:
            s = f"(Z{4 * m}/Z{2 * m}; O48/T24)"
        else:
            s = f"(Z{2 * m}/Z{2 * m}; I120/I120)"
        return s if self.phi is None else f"{s}[phi={self.phi}]"


GroupSpec = (CyclicScalar, CyclicSU2, BinaryDihedral, BinaryTetrahedral, BinaryOctahedral,
             BinaryIcosahedral, FromGenerators, DiagonalCyclic, DuValProduct)


def spec_from_json(data: dict):
    t = data["type"]
    if t == "cyclic_scalar":
        return CyclicScalar(int(data["N"]))
    if t == "cyclic_su2":
        return CyclicSU2(int(data["N"]))
    if t == "binary_dihedral":
        return BinaryDihedral(int(data["N"]))
    if t == "binary_tetrahedral":
        return BinaryTetrahedral()
    if t == "binary_octahedral":
        return BinaryOctahedral()
    if t == "binary_icosahedral":
        return BinaryIcosahedral()
    if t == "generators":
        return FromGenerators(tuple(tuple(complex(re, im) for re, im in m) for m in data["matrices"]))
    if t == "diagonal_cyclic":
        return DiagonalCyclic(int(data["x"]), int(data["y"]), int(data["M"]))
    if t.startswith("duval"):
        return DuValProduct(int(t[5:]), int(data["m"]), int(data.get("n", 0)), int(data.get("f", 0)),
                            int(data.get("g", 0)), int(data.get("d", 0)), int(data.get("l", 0)),
                            data.get("variant"), data.get("phi"))
    raise InvalidParams(f"unknown group spec type {t!r}")


# --- exact diagonal groups ----------------------------------------------

def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _lattice(M, gens):
    """Hermite basis (a, b), (0, d) of M Z^2 + sum Z g, as integers."""
    a, b, d = M, 0, M
    for x, y in gens:
        x, y = x % M, y % M
        if x:
            g, s, t = _ext_gcd(a, x)
            other = (x // g) * b - (a // g) * y
            a, b = g, s * b + t * y
            d = math.gcd(d, other)
        else:
            d = math.gcd(d, y)
    return a, b % d, d


def _primitive(t):
    g = math.gcd(*t)
    return tuple(x // g for x in t)


@dataclass(frozen=True)
class DiagonalData:
    """Subgroup of the diagonal torus generated by exponent pairs (x, y) mod M."""

    M: int
    gens: tuple

    @cached_property
    def basis(self):
        return _lattice(self.M, self.gens)

    @property
    def order(self) -> int:
        a, _, d = self.basis
        return (self.M // a) * (self.M // d)

    def key(self) -> tuple:
        """Exact conjugacy key: Hermite form of the exponent lattice over Q,
        minimised over the coordinate swap."""
        M = self.M
        k1 = _primitive((M,) + self.basis)
        k2 = _primitive((M,) + _lattice(M, [(y, x) for x, y in self.gens]))
        # the same rational lattice has a unique primitive (M, a, b, d)
        return min(k1, k2)

    def exponent_pairs(self) -> np.ndarray:
        a, b, d = self.basis
        M = self.M
        i = np.arange(M // a)
        j = np.arange(M // d)
        x = np.repeat(i * a, len(j)) % M
        y = (np.repeat(i * b, len(j)) + np.tile(j * d, len(i))) % M
        return np.stack([x, y], axis=1)

    def elements(self) -> np.ndarray:
        xy = self.exponent_pairs()
        ang = 2j * np.pi * xy / self.M
        out = np.zeros((len(xy), 2, 2), dtype=complex)
        out[:, 0, 0] = np.exp(ang[:, 0])
        out[:, 1, 1] = np.exp(ang[:, 1])
        return out

    def trivial_on(self, u: int, v: int) -> bool:
        a, b, d = self.basis
        return (u * a + v * b) % self.M == 0 and (v * d) % self.M == 0


@lru_cache(maxsize=None)
def monomial_weight_table(k: int) -> tuple:
    """((u, v), count) over real monomials of degree k in z1, z2, zbar1, zbar2,
    grouped by the character exponents u = a1 - b1, v = a2 - b2."""
    counts: dict = {}
    for s1 in range(k + 1):
        s2 = k - s1
        for u in range(-s1, s1 + 1, 2):
            for v in range(-s2, s2 + 1, 2):
                counts[(u, v)] = counts.get((u, v), 0) + 1
    return tuple(sorted(counts.items()))


def diagonal_invariant_dim(data: DiagonalData, k: int) -> int:
    """Exact dimension of degree-k invariants (character count)."""
    a, b, d = data.basis
    M = data.M
    return sum(c for (u, v), c in monomial_weight_table(k) if (u * a + v * b) % M == 0 and (v * d) % M == 0)


@lru_cache(maxsize=200_000)
def cyclic_invariant_dim(x: int, y: int, M: int, k: int) -> int:
    """Exact degree-k invariant count of the cyclic group <diag(w_M^x, w_M^y)>."""
    return sum(c for (u, v), c in monomial_weight_table(k) if (u * x + v * y) % M == 0)


# --- matrices -------------------------------------------------------------

def quaternion(a, b, c, d) -> np.ndarray:
    return np.array([[complex(a, b), complex(c, d)], [complex(-c, d), complex(a, -b)]])


B_MATRIX = np.array([[0, 1], [-1, 0]], dtype=complex)


def _keys(arr: np.ndarray) -> list:
    r = np.rint(arr.reshape(len(arr), 4).view(float) * _KEY_SCALE).astype(np.int64)
    return [row.tobytes() for row in r]


def dedup(arr: np.ndarray) -> np.ndarray:
    r = np.rint(arr.reshape(len(arr), 4).view(float) * _KEY_SCALE).astype(np.int64)
    _, idx = np.unique(r, axis=0, return_index=True)
    return arr[np.sort(idx)]


def closure(gens, budget: int = CLOSURE_BUDGET) -> np.ndarray:
    gens = [np.asarray(g, dtype=complex).reshape(2, 2) for g in gens]
    ident = np.eye(2, dtype=complex)
    seen = {_keys(ident[None])[0]}
    elems = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                p = e @ g
                k = _keys(p[None])[0]
                if k not in seen:
                    seen.add(k)
                    elems.append(p)
                    nxt.append(p)
                    if len(elems) > budget:
                        raise ClosureBudget(f"closure exceeds {budget} elements")
        frontier = nxt
    return np.array(elems)


@lru_cache(maxsize=None)
def _exceptional(name: str) -> np.ndarray:
    h = 0.5
    if name == "T":
        g = closure([quaternion(0, 1, 0, 0), quaternion(-h, h, h, h)])
        want = 24
    elif name == "O":
        s = 1 / math.sqrt(2)
        g = closure([quaternion(0, 1, 0, 0), quaternion(-h, h, h, h), quaternion(s, s, 0, 0)])
        want = 48
    else:
        phi = (1 + math.sqrt(5)) / 2
        g = closure([quaternion(0, 1, 0, 0), quaternion(h, h, h, h), quaternion(phi / 2, 1 / (2 * phi), h, 0)])
        want = 120
    if len(g) != want:
        raise AssertionError(f"binary polyhedral construction gave order {len(g)}, expected {want}")
    g.setflags(write=False)
    return g


def _cyclic_su2(N):
    w = np.exp(2j * np.pi * np.arange(N) / N)
    out = np.zeros((N, 2, 2), dtype=complex)
    out[:, 0, 0] = w
    out[:, 1, 1] = w.conj()
    return out


@lru_cache(maxsize=None)
def _dihedral(N) -> np.ndarray:
    diag = _cyclic_su2(2 * N)
    g = np.concatenate([diag, diag @ B_MATRIX])
    g.setflags(write=False)
    return g


# --- finite subgroup -----------------------------------------------------

class FiniteSubgroup:
    """Explicit finite subgroup of U_2. Elements are built lazily."""

    def __init__(self, spec, order: int, builder: Optional[Callable[[], np.ndarray]] = None,
                 elements: Optional[np.ndarray] = None, diagonal: Optional[DiagonalData] = None):
        self.spec = spec
        self.order = order
        self.diagonal = diagonal
        self._builder = builder
        self._elements = elements
        self.gamma = None

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            e = self._builder()
            if len(e) != self.order:
                raise AssertionError(f"{self.spec.label()}: built {len(e)} elements, expected {self.order}")
            self._elements = e
        return self._elements

    def fingerprint(self) -> tuple:
        return conjugacy_key(self)

    def __repr__(self):
        return f"FiniteSubgroup({self.spec.label()}, order={self.order})"


def trace_det_fingerprint(elements: np.ndarray) -> bytes:
    tr = elements[:, 0, 0] + elements[:, 1, 1]
    det = elements[:, 0, 0] * elements[:, 1, 1] - elements[:, 0, 1] * elements[:, 1, 0]
    arr = np.stack([tr.real, tr.imag, det.real, det.imag], axis=1)
    r = np.rint(arr * 1e6).astype(np.int64)
    r = r[np.lexsort(r.T[::-1])]
    return r.tobytes()


def conjugacy_key(G: FiniteSubgroup) -> tuple:
    if G.diagonal is not None:
        return (G.order, 0, G.diagonal.key())
    return (G.order, 1, trace_det_fingerprint(G.elements))


# --- construction --------------------------------------------------------

def generate(spec) -> FiniteSubgroup:
    if isinstance(spec, CyclicScalar):
        N = _pos(spec.N)
        return FiniteSubgroup(spec, N, diagonal=DiagonalData(N, ((1, 1),)),
                              builder=lambda: np.exp(2j * np.pi * np.arange(N) / N)[:, None, None] * np.eye(2))
    if isinstance(spec, CyclicSU2):
        N = _pos(spec.N)
        return FiniteSubgroup(spec, N, diagonal=DiagonalData(N, ((1, N - 1),)), builder=lambda: _cyclic_su2(N))
    if isinstance(spec, DiagonalCyclic):
        data = DiagonalData(_pos(spec.M), ((spec.x, spec.y),))
        return FiniteSubgroup(spec, data.order, diagonal=data, builder=data.elements)
    if isinstance(spec, BinaryDihedral):
        N = _pos(spec.N)
        diag = None
        if N == 1:
            # <b> is conjugate to <diag(i, -i)>
            diag = DiagonalData(4, ((1, 3),))
        return FiniteSubgroup(spec, 4 * N, builder=lambda: np.array(_dihedral(N)), diagonal=diag)
    if isinstance(spec, BinaryTetrahedral):
        return FiniteSubgroup(spec, 24, elements=np.array(_exceptional("T")))
    if isinstance(spec, BinaryOctahedral):
        return FiniteSubgroup(spec, 48, elements=np.array(_exceptional("O")))
    if isinstance(spec, BinaryIcosahedral):
        return FiniteSubgroup(spec, 120, elements=np.array(_exceptional("I")))
    if isinstance(spec, FromGenerators):
        el = closure([np.array(m, dtype=complex).reshape(2, 2) for m in spec.matrices])
        return FiniteSubgroup(spec, len(el), elements=el)
    if isinstance(spec, DuValProduct):
        G = duval_product_group(spec)
        G.elements  # materialise and check the order
        return G
    raise InvalidParams(f"unknown spec {spec!r}")


def _pos(N):
    if not isinstance(N, int) or N < 1:
        raise InvalidParams("group parameters must be positive integers")
    return N


def type1_valid(m, n, f, g, d) -> bool:
    if min(m, n, f, g) < 1:
        return False
    if (2 * m) % f or (2 * n) % g or (2 * m) // f != (2 * n) // g:
        return False
    if (f - g) % 2:
        return False
    c = 2 * m // f
    return math.gcd(d, c) == 1


def _type1(spec: DuValProduct) -> FiniteSubgroup:
    m, n, f, g, d = spec.m, spec.n, spec.f, spec.g, spec.d
    if not type1_valid(m, n, f, g, d):
        raise InvalidParams(f"invalid Type 1 parameters {spec.to_json()}")
    c = 2 * m // f
    M = 2 * m * 2 * n // math.gcd(2 * m, 2 * n)
    p, q = M // (2 * m), M // (2 * n)
    gens = ((p + d * q, p - d * q), (c * q, -c * q), (c * p, c * p))
    data = DiagonalData(M, gens)
    order = n * f
    if data.order != order:
        raise AssertionError(f"Type 1 order {data.order} != {order}")
    return FiniteSubgroup(spec, order, builder=data.elements, diagonal=data)


@dataclass
class _Family:
    Lord: int
    LKord: int
    R: np.ndarray
    RK: np.ndarray
    RK_spec: object
    diag_gamma: object = None  # for l = 1 cases: exponent (x, y) mod 4 of gamma after diagonalising b


def _family(spec: DuValProduct) -> _Family:
    t, m, l = spec.type, spec.m, spec.l
    _pos(m)
    if t in (2, 3, 4):
        _pos(l)
    if t == 2:
        return _Family(2 * m, 2 * m, _dihedral(l), _dihedral(l), BinaryDihedral(l))
    if t == 3:
        if spec.variant == "a":
            return _Family(4 * m, 2 * m, _dihedral(l), _cyclic_su2(2 * l), CyclicSU2(2 * l))
        if spec.variant == "b":
            if m % 2 == 0 or l % 2 == 0:
                raise InvalidParams("(Z4m/Zm; Dl/Zl) needs m and l odd")
            return _Family(4 * m, m, _dihedral(l), _cyclic_su2(l), CyclicSU2(l))
        raise InvalidParams("Type 3 needs variant 'a' or 'b'")
    if t == 4:
        return _Family(4 * m, 2 * m, _dihedral(2 * l), _dihedral(l), BinaryDihedral(l))
    T = _exceptional("T")
    if t == 5:
        return _Family(2 * m, 2 * m, T, T, BinaryTetrahedral())
    if t == 6:
        return _Family(6 * m, 2 * m, T, _dihedral(2), BinaryDihedral(2))
    O = _exceptional("O")
    if t == 7:
        return _Family(2 * m, 2 * m, O, O, BinaryOctahedral())
    if t == 8:
        return _Family(4 * m, 2 * m, O, T, BinaryTetrahedral())
    if t == 9:
        I = _exceptional("I")
        return _Family(2 * m, 2 * m, I, I, BinaryIcosahedral())
    raise InvalidParams(f"unknown du Val type {t}")


def _coset_index(R, RK, gamma, c):
    """For each r in R, the j in 0..c-1 with r in gamma^j R_K."""
    rk = set(_keys(RK))
    idx = np.full(len(R), -1)
    ginv = np.linalg.inv(gamma)
    cur = R.copy()
    for j in range(c):
        keys = _keys(cur)
        for i, k in enumerate(keys):
            if idx[i] < 0 and k in rk:
                idx[i] = j
        cur = ginv @ cur
    if (idx < 0).any():
        raise AssertionError("quotient is not cyclic of the expected order")
    return idx


def _phi_generators(R, RK, c) -> list:
    """Matrices gamma whose cosets generate R/R_K (cyclic of order c): the
    powers gamma0^j, gcd(j, c) = 1, of one generator gamma0."""
    if c == 1:
        return [np.eye(2, dtype=complex)]
    rk = set(_keys(RK))
    power = R.copy()
    qorder = np.zeros(len(R), dtype=int)
    for k in range(1, c + 1):
        inside = np.array([key in rk for key in _keys(power)])
        qorder[(qorder == 0) & inside] = k
        power = power @ R
    hits = np.nonzero(qorder == c)[0]
    if not len(hits):
        raise AssertionError("quotient has no element of the expected order")
    g0 = R[hits[0]]
    out, p = [], np.eye(2, dtype=complex)
    for j in range(1, c):
        p = p @ g0
        if math.gcd(j, c) == 1:
            out.append(p.copy())
    return out


def _assemble(fam: _Family, gamma) -> np.ndarray:
    c = fam.Lord // fam.LKord
    Lw = np.exp(2j * np.pi * np.arange(fam.Lord) / fam.Lord)
    idx = np.zeros(len(fam.R), dtype=int) if c == 1 else _coset_index(fam.R, fam.RK, gamma, c)
    parts = [Lw[j] * fam.R[idx == (j % c)] for j in range(fam.Lord)]
    return dedup(np.concatenate(parts))


def _phi_classes(fam: _Family):
    """Distinct groups (by fingerprint) over the choices of phi, sorted."""
    c = fam.Lord // fam.LKord
    gammas = _phi_generators(fam.R, fam.RK, c)
    classes: dict = {}
    for gmat in gammas:
        el = _assemble(fam, gmat)
        fp = trace_det_fingerprint(el)
        classes.setdefault(fp, (gmat, el))
    return [classes[k] for k in sorted(classes)]


def _abelian_diag(spec: DuValProduct, gamma_exp) -> Optional[DiagonalData]:
    """Exact diagonal form for the l = 1 members of Types 2 and 3, using that
    b is conjugate to diag(i, -i)."""
    t, m = spec.type, spec.m
    if spec.l != 1 or t not in (2, 3):
        return None
    if t == 2:
        M = math.lcm(2 * m, 4)
        return DiagonalData(M, ((M // (2 * m), M // (2 * m)), (M // 4, -M // 4)))
    M = math.lcm(4 * m, 4)
    s = M // (4 * m)
    gx, gy = gamma_exp
    if spec.variant == "a":
        return DiagonalData(M, ((s + gx * M // 4, s + gy * M // 4), (2 * s, 2 * s), (M // 2, M // 2)))
    return DiagonalData(M, ((s + gx * M // 4, s + gy * M // 4), (4 * s, 4 * s)))


def _b_power(gmat) -> int:
    """k with gmat = b^k for an element of D_1 = <b>."""
    p = np.eye(2, dtype=complex)
    for k in range(4):
        if np.allclose(p, gmat, atol=1e-9):
            return k
        p = p @ B_MATRIX
    raise AssertionError("not a power of b")


def duval_product_group(spec: DuValProduct) -> FiniteSubgroup:
    if spec.type == 1:
        return _type1(spec)
    fam = _family(spec)
    classes = _phi_classes(fam)
    if spec.phi is not None:
        if not 0 <= spec.phi < len(classes):
            raise InvalidParams(f"phi index {spec.phi} out of range 0..{len(classes) - 1}")
        gmat, el = classes[spec.phi]
    elif len(classes) == 1:
        gmat, el = classes[0]
    else:
        raise PhiAmbiguous(f"{spec.label()} has {len(classes)} non-conjugate choices of phi; pass phi")
    return _finish(spec, fam, gmat, el)


def _finish(spec, fam, gmat, el) -> FiniteSubgroup:
    c = fam.Lord // fam.LKord
    order = len(fam.R) * fam.LKord // 2
    if len(el) != order:
        raise AssertionError(f"{spec.label()}: order {len(el)} != |R||L_K|/2 = {order}")
    diag = None
    if spec.l == 1 and spec.type in (2, 3):
        k = _b_power(gmat) if c > 1 else 0
        # b^k has eigenvalues i^k on the first and (-i)^k on the second coordinate
        diag = _abelian_diag(spec, (k % 4, (-k) % 4))
        if diag.order != order:
            raise AssertionError("diagonal model has the wrong order")
    G = FiniteSubgroup(spec, order, elements=el, diagonal=diag)
    G.gamma = np.exp(2j * np.pi / fam.Lord) * gmat
    return G


def family_rk_spec(spec: DuValProduct):
    return _family(spec).RK_spec, _family(spec).LKord


# --- enumeration ---------------------------------------------------------

def iter_type1_params(cap: int) -> Iterator[tuple]:
    """(m, n, f, g, d) with n f <= cap, in a fixed order."""
    for c in range(1, 2 * cap + 1):
        for f in range(1, 2 * cap + 1):
            if (c * f) % 2:
                continue
            if c * f // 2 > 2 * cap:
                break
            for g in range(1, 2 * cap + 1):
                if (g - f) % 2 or (c * g) % 2:
                    continue
                order = (c * g // 2) * f
                if order > cap:
                    break
                m, n = c * f // 2, c * g // 2
                for d in range(1, c + 1):
                    if math.gcd(d, c) == 1:
                        yield (m, n, f, g, d)


def iter_other_specs(cap: int) -> Iterator[DuValProduct]:
    for m in range(1, cap + 1):
        for l in range(1, cap + 1):
            if 4 * l * m > cap:
                break
            yield DuValProduct(2, m, l=l)
            yield DuValProduct(3, m, l=l, variant="a")
    for m in range(1, cap + 1, 2):
        for l in range(1, cap + 1, 2):
            if 2 * l * m > cap:
                break
            yield DuValProduct(3, m, l=l, variant="b")
    for m in range(1, cap + 1):
        for l in range(1, cap + 1):
            if 8 * l * m > cap:
                break
            yield DuValProduct(4, m, l=l)
    for t, unit in ((5, 24), (6, 24), (7, 48), (8, 48), (9, 120)):
        for m in range(1, cap // unit + 1):
            yield DuValProduct(t, m)


def family_groups(spec: DuValProduct) -> list:
    """All groups of a non-Type-1 family instance, one per class of phi."""
    fam = _family(spec)
    classes = _phi_classes(fam)
    if len(classes) == 1:
        return [_finish(spec, fam, *classes[0])]
    return [_finish(DuValProduct(spec.type, spec.m, l=spec.l, variant=spec.variant, phi=i), fam, *cl)
            for i, cl in enumerate(classes)]


def iter_duval(cap: int) -> Iterator[FiniteSubgroup]:
    """Every family instance of order <= cap (before deduplication); for
    non-cyclic quotients every class of phi is produced."""
    for m, n, f, g, d in iter_type1_params(cap):
        yield _type1(DuValProduct(1, m, n, f, g, d))
    for spec in iter_other_specs(cap):
        yield from family_groups(spec)


def enumerate_duval(order_cap: int) -> list[tuple]:
    """Deduplicated (spec, group) pairs sorted by (order, key).

    The first instance met in family order represents each conjugacy class."""
    if order_cap < 1 or order_cap > MAX_ENUM_CAP:
        raise BudgetError(f"order cap must lie in 1..{MAX_ENUM_CAP}")
    seen: dict = {}
    for G in iter_duval(order_cap):
        k = conjugacy_key(G)
        if k not in seen:
            seen[k] = G
    return [(seen[k].spec, seen[k]) for k in sorted(seen)]
