"""Pure-Python renormalization-sum kernels.

Fallback for the compiled extension; same summation order and the same
Kahan compensation, so the two backends agree to the last few ulps.
The double sums run over the exact support box ``|k| <= kmax`` of the
mollified weights, with ``k``, then ``k'`` ascending.
"""

from __future__ import annotations

import math

TWO_PI_SQ = 2.0 * math.pi**2


class _Kahan:
    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float):
        y = x - self.c
        t = self.s + y
        self.c = (t - self.s) - y
        self.s = t


def pair_sums(phi2, kmax: int, tilde: bool) -> tuple[float, float]:
    """The gradient-square and resonant-product counterterm double sums.

    ``phi2[j]`` must hold the squared mollifier weight at mode ``|k| = j``
    for ``j = 0 .. 2*kmax`` (the convolution index reaches ``2*kmax``).
    Returns ``(c_B, c_D)``; ``tilde`` selects the doubled-kernel weights.
    """
    phi2 = list(map(float, phi2))
    acc_b = _Kahan()
    acc_d = _Kahan()
    for k1 in range(-kmax, kmax + 1):
        if k1 == 0:
            continue
        p1 = phi2[abs(k1)]
        if p1 == 0.0:
            continue
        for k2 in range(-kmax, kmax + 1):
            if k2 == 0:
                continue
            k12 = k1 + k2
            if k12 == 0:
                continue
            p2 = phi2[abs(k2)]
            if p2 == 0.0:
                continue
            p12 = phi2[abs(k12)]
            denom = TWO_PI_SQ * (k1 * k1 + k2 * k2 + k12 * k12)
            if tilde:
                acc_b.add(p1 * p2 * p12 * p12 / denom)
                acc_d.add(-k12 * p1 * p1 * p2 * p12 / (denom * k1))
            else:
                acc_b.add(p1 * p2 / denom)
                acc_d.add(-k12 * p1 * p2 / (denom * k1))
    return acc_b.s, acc_d.s


def i1_sum(phi2, kmax: int) -> float:
    """The antisymmetric audit sum ``-sum phi^2 phi^2 / (2 pi^2 k1 k2)``.

    Unconstrained over ``k1, k2 != 0``; evenness of the weights makes it
    vanish, which the caller asserts.
    """
    phi2 = list(map(float, phi2))
    acc = _Kahan()
    for k1 in range(-kmax, kmax + 1):
        if k1 == 0:
            continue
        p1 = phi2[abs(k1)]
        for k2 in range(-kmax, kmax + 1):
            if k2 == 0:
                continue
            acc.add(-p1 * phi2[abs(k2)] / (TWO_PI_SQ * k1 * k2))
    return acc.s


def i2_sum(phi2, kmax: int) -> float:
    """``-sum_{k != 0} phi^4 / (2 pi^2 k^2)`` (single compensated sum)."""
    phi2 = list(map(float, phi2))
    acc = _Kahan()
    for k in range(-kmax, kmax + 1):
        if k == 0:
            continue
        p = phi2[abs(k)]
        acc.add(-p * p / (TWO_PI_SQ * k * k))
    return acc.s


def weighted_mode_sum(phi2, kmax: int) -> float:
    """``sum_{|k| <= kmax} phi^2`` including the zero mode."""
    phi2 = list(map(float, phi2))
    acc = _Kahan()
    for k in range(-kmax, kmax + 1):
        acc.add(phi2[abs(k)])
    return acc.s
