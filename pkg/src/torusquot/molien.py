"""Molien series of finite subgroups of U_2 acting on C^2 + conj(C^2)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, IntegralityFailure
from .groups import FiniteSubgroup
from .series import RationalFunctionProd, TruncatedSeries

MAX_DEGREE = 64
DRIFT_BOUND = 1e-6


@dataclass(frozen=True)
class MolienResult:
    series: TruncatedSeries
    group_order: int
    max_integrality_drift: float

    @property
    def coefficients(self) -> list[int]:
        return self.series.as_ints()

    def to_json(self) -> dict:
        return {"order": self.series.order, "coefficients": self.coefficients,
                "group_order": self.group_order, "drift": self.max_integrality_drift}


def element_series(elements: np.ndarray, K: int) -> np.ndarray:
    """Per-element coefficients of 1/[(1 - 2Re(l1) t + t^2)(1 - 2Re(l2) t + t^2)].

    Only trace and determinant are used: Re l1 + Re l2 = Re tr, and with |l| = 1,
    Re l1 Re l2 = (Re det + (|tr|^2 - 2)/2) / 2.
    """
    tr = elements[:, 0, 0] + elements[:, 1, 1]
    det = elements[:, 0, 0] * elements[:, 1, 1] - elements[:, 0, 1] * elements[:, 1, 0]
    s = tr.real
    p = (det.real + (np.abs(tr) ** 2 - 2) / 2) / 2
    # denominator 1 - a1 t + a2 t^2 - a1 t^3 + t^4
    a1 = 2 * s
    a2 = 2 + 4 * p
    out = np.zeros((K + 1, len(elements)))
    for k in range(K + 1):
        v = np.full(len(elements), 1.0 if k == 0 else 0.0)
        if k >= 1:
            v += a1 * out[k - 1]
        if k >= 2:
            v -= a2 * out[k - 2]
        if k >= 3:
            v += a1 * out[k - 3]
        if k >= 4:
            v -= out[k - 4]
        out[k] = v
    return out


def molien_series(G: FiniteSubgroup, K: int) -> MolienResult:
    if K < 0 or K > MAX_DEGREE:
        raise BudgetError(f"Molien degree must lie in 0..{MAX_DEGREE}")
    el = G.elements
    per = element_series(el, K)
    coeffs, drift = [], 0.0
    for k in range(K + 1):
        # exactly rounded sum, so element order cannot matter
        v = math.fsum(per[k].tolist()) / len(el)
        r = round(v)
        drift = max(drift, abs(v - r))
        coeffs.append(r)
    if drift >= DRIFT_BOUND:
        raise IntegralityFailure(f"Molien coefficients drift {drift:.3g} from integers")
    if coeffs[0] != 1 or min(coeffs) < 0:
        raise IntegralityFailure("Molien series is not a valid Hilbert series")
    return MolienResult(TruncatedSeries(tuple(coeffs)), len(el), drift)


def dim_invariants(G: FiniteSubgroup, d: int) -> int:
    return molien_series(G, d).coefficients[d]


def cyclic_closed_form(N: int) -> RationalFunctionProd:
    if N < 2:
        raise ValueError("N must be at least 2")
    num = [0] * (2 * N + 3)
    num[0] += 1
    num[2] += 1
    num[N] += 2 * N
    num[2 * N] -= 1
    num[N + 2] -= 2 * N
    num[2 * N + 2] -= 1
    return RationalFunctionProd(tuple(num), ((2, 3), (N, 2)))


def dihedral_closed_form(N: int) -> RationalFunctionProd:
    if N < 1:
        raise ValueError("N must be at least 1")
    num = [0] * (4 * N + 7)
    for deg, c in ((0, 1), (4, 3), (2 * N, 2 * N - 1), (2 * N + 2, 2 * N + 3), (2 * N + 4, -(2 * N + 3)),
                   (2 * N + 6, -(2 * N - 1)), (4 * N + 2, -3), (4 * N + 6, -1)):
        num[deg] += c
    return RationalFunctionProd(tuple(num), ((2, 1), (4, 2), (2 * N, 2)))
