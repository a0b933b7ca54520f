"""Exact truncated power series and rational functions over cyclotomic-product denominators.

Rationals are ``fractions.Fraction``. Nothing in this module touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import Mismatch


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients c_0..c_order of a formal power series, exact."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(_frac(c) for c in self.coefficients)
        if not coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def of(cls, coefficients: Iterable) -> "TruncatedSeries":
        return cls(tuple(coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return len(self.coefficients)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coefficients[: order + 1])

    def as_ints(self) -> list[int]:
        out = []
        for c in self.coefficients:
            if c.denominator != 1:
                raise ValueError(f"non-integer coefficient {c}")
            out.append(int(c))
        return out

    def to_json(self) -> dict:
        return {"order": self.order, "coefficients": [_frac_str(c) for c in self.coefficients]}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        s = cls(tuple(Fraction(c) for c in data["coefficients"]))
        if s.order != data["order"]:
            raise ValueError("order does not match coefficient count")
        return s


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _strip(poly: Sequence[int]) -> tuple:
    p = list(poly)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


@dataclass(frozen=True)
class RationalFunctionProd:
    """numerator(t) / prod (1 - t^period)^multiplicity.

    The denominator is stored factored. Duplicate periods are merged and sorted on
    construction, and trailing zeros of the numerator are dropped.
    """

    numerator: tuple
    denominator: tuple = ()

    def __post_init__(self):
        num = []
        for c in self.numerator:
            if isinstance(c, bool) or not isinstance(c, int):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = int(c)
                else:
                    raise TypeError("numerator coefficients must be integers")
            num.append(int(c))
        merged: dict[int, int] = {}
        for period, mult in self.denominator:
            period, mult = int(period), int(mult)
            if period < 1 or mult < 0:
                raise ValueError("periods must be positive and multiplicities non-negative")
            if mult:
                merged[period] = merged.get(period, 0) + mult
        object.__setattr__(self, "numerator", _strip(num))
        object.__setattr__(self, "denominator", tuple(sorted(merged.items())))

    def to_json(self) -> dict:
        return {"numerator": list(self.numerator), "denominator": [list(f) for f in self.denominator]}

    @classmethod
    def from_json(cls, data: dict) -> "RationalFunctionProd":
        return cls(tuple(data["numerator"]), tuple(tuple(f) for f in data["denominator"]))


def poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def expand_denominator(denominator: Iterable) -> list[int]:
    """Multiply out prod (1 - t^p)^m as an integer polynomial."""
    poly = [1]
    for period, mult in denominator:
        factor = [1] + [0] * (period - 1) + [-1]
        for _ in range(mult):
            poly = poly_mul(poly, factor)
    return poly


def series_expand(rf: RationalFunctionProd, order: int) -> TruncatedSeries:
    if order < 0:
        raise ValueError("order must be non-negative")
    c = [Fraction(0)] * (order + 1)
    for i, a in enumerate(rf.numerator[: order + 1]):
        c[i] = Fraction(a)
    # divide by (1 - t^p) via a running sum with stride p
    for period, mult in rf.denominator:
        for _ in range(mult):
            for k in range(period, order + 1):
                c[k] += c[k - period]
    return TruncatedSeries(tuple(c))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    order = min(a.order, b.order)
    out = []
    for k in range(order + 1):
        out.append(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)))
    return TruncatedSeries(tuple(out))


def rf_equal(a: RationalFunctionProd, b: RationalFunctionProd) -> bool:
    lhs = _strip(poly_mul(a.numerator, expand_denominator(b.denominator)))
    rhs = _strip(poly_mul(b.numerator, expand_denominator(a.denominator)))
    return lhs == rhs


def rational_fit(s: TruncatedSeries, denominator: Iterable, max_degree: int | None = None) -> list[int]:
    """Numerator N with N / prod(1 - t^p)^m agreeing with ``s`` through ``s.order``.

    With ``max_degree`` the numerator is constrained to that degree and every
    coefficient of s*P above it (up to s.order) must vanish; the first one that
    does not raises Mismatch.
    """
    denominator = tuple(denominator)
    if max_degree is not None and max_degree > s.order:
        raise ValueError("series order is below the numerator degree budget")
    P = expand_denominator(RationalFunctionProd((1,), denominator).denominator)
    prod = []
    for k in range(s.order + 1):
        prod.append(sum((s[k - i] * P[i] for i in range(min(k, len(P) - 1) + 1)), Fraction(0)))
    for k, c in enumerate(prod):
        if c.denominator != 1:
            raise Mismatch(k, f"non-integer numerator coefficient at degree {k}")
    if max_degree is not None:
        for k in range(max_degree + 1, s.order + 1):
            if prod[k] != 0:
                raise Mismatch(k)
        prod = prod[: max_degree + 1]
    return list(_strip([int(c) for c in prod]))


def palindromic(p: Sequence[int]) -> bool:
    p = _strip(p)
    return all(p[i] == p[len(p) - 1 - i] for i in range(len(p)))
