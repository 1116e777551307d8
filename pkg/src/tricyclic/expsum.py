"""Exponential sums S(alpha, beta, gamma) as exact Eisenstein integers.

S(a, b, g) = sum over x in F_q of zeta^Tr(a x^2 + b x^{p+1} + g x^{p^2+1})
with zeta a primitive cube root of unity, so every sum lives in Z[zeta].
With N_v = #{x : trace value = v} and 1 + zeta + zeta^2 = 0,

    S = N_0 + N_1 zeta + N_2 zeta^2 = (N_0 - N_2) + (N_1 - N_2) zeta.

For even m every sum falls into one of three exact families:

    zero form:  S = q                       (rank 0)
    even rank:  S = eps * 3^{(m+j)/2}       (j = m - r even)
    odd rank:   S = eps * (1+2 zeta) * 3^{(m+j-1)/2}
                                            (1+2 zeta = i sqrt(3), j odd)

classify() pattern-matches a sum into its family; the Legendre fast path in
module quadform must land every triple in the same family (the central
differential test of the package).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InternalInconsistencyError
from .gf import FieldContext, FieldElement

KIND_ZERO = "zero-triple"
KIND_EVEN = "even-rank"
KIND_ODD = "odd-rank"


@dataclass(frozen=True)
class EisensteinInteger:
    """a0 + a1*zeta with zeta = e^{2 pi i/3}; zeta^2 = -1 - zeta."""

    a0: int
    a1: int

    def __add__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        return EisensteinInteger(self.a0 + other.a0, self.a1 + other.a1)

    def __sub__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        return EisensteinInteger(self.a0 - other.a0, self.a1 - other.a1)

    def __neg__(self) -> "EisensteinInteger":
        return EisensteinInteger(-self.a0, -self.a1)

    def __mul__(self, other: "EisensteinInteger") -> "EisensteinInteger":
        a, b = self.a0, self.a1
        c, d = other.a0, other.a1
        return EisensteinInteger(a * c - b * d, a * d + b * c - b * d)

    def __pow__(self, k: int) -> "EisensteinInteger":
        if k < 0:
            raise ValueError("negative powers leave Z[zeta]")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __rmul__(self, c: int) -> "EisensteinInteger":
        return EisensteinInteger(c * self.a0, c * self.a1)

    def conjugate(self) -> "EisensteinInteger":
        # zeta bar = zeta^2 = -1 - zeta
        return EisensteinInteger(self.a0 - self.a1, -self.a1)

    @property
    def is_rational(self) -> bool:
        return self.a1 == 0

    def __repr__(self) -> str:
        return f"EisensteinInteger({self.a0}, {self.a1})"


ZERO = EisensteinInteger(0, 0)
ONE = EisensteinInteger(1, 0)
ZETA = EisensteinInteger(0, 1)


def zeta_power(k: int) -> EisensteinInteger:
    k %= 3
    if k == 0:
        return ONE
    if k == 1:
        return ZETA
    return EisensteinInteger(-1, -1)


@dataclass(frozen=True)
class ExpSumClass:
    """Family of an exponential sum: kind, sign eps, form rank r, and j = m - r.

    kind is KIND_ZERO for the rank-0 form (S = q; below m=6 some nonzero
    triples degenerate to it), KIND_EVEN / KIND_ODD otherwise.
    """

    kind: str
    epsilon: int
    rank: int
    j: int

    @property
    def m(self) -> int:
        return self.rank + self.j

    def sum_value(self, p: int = 3) -> EisensteinInteger:
        """The exact Eisenstein value of every sum in this family."""
        m, j = self.m, self.j
        if self.kind == KIND_ZERO:
            return EisensteinInteger(p**m, 0)
        if self.kind == KIND_EVEN:
            return EisensteinInteger(self.epsilon * p ** ((m + j) // 2), 0)
        t = self.epsilon * p ** ((m + j - 1) // 2)
        return EisensteinInteger(t, 2 * t)  # eps * (1 + 2 zeta) * 3^{(m+j-1)/2}


def _exact_log3(n: int) -> int | None:
    if n < 1:
        return None
    k = 0
    while n % 3 == 0:
        n //= 3
        k += 1
    return k if n == 1 else None


def direct_sum(
    ctx: FieldContext,
    alpha: FieldElement | int,
    beta: FieldElement | int,
    gamma: FieldElement | int,
) -> EisensteinInteger:
    """Literal q-term tally of S(alpha, beta, gamma); the slow oracle."""
    if ctx.p != 3:
        raise ConfigurationError("the tally-to-Eisenstein reduction needs p=3")
    a = ctx.element(alpha).to_int()
    b = ctx.element(beta).to_int()
    g = ctx.element(gamma).to_int()
    if ctx.q <= 6561:
        trp = ctx.trace_product_table()
        vals = (
            trp[a, ctx.power_map(2)]
            + trp[b, ctx.power_map(ctx.p + 1)]
            + trp[g, ctx.power_map(ctx.p**2 + 1)]
        ) % 3
        n = np.bincount(vals, minlength=3)
        n0, n1, n2 = int(n[0]), int(n[1]), int(n[2])
    else:
        ea, eb, eg = ctx.element(a), ctx.element(b), ctx.element(g)
        tally = [0, 0, 0]
        for x in ctx.elements():
            v = ctx.trace(
                ea * x**2 + eb * x ** (ctx.p + 1) + eg * x ** (ctx.p**2 + 1)
            )
            tally[v] += 1
        n0, n1, n2 = tally
    if n0 + n1 + n2 != ctx.q:
        raise InternalInconsistencyError("tally does not cover the field")
    return EisensteinInteger(n0 - n2, n1 - n2)


def classify(S: EisensteinInteger, m: int) -> ExpSumClass:
    """Match a sum against the three families; only defined for even m."""
    if m % 2:
        raise ConfigurationError("classification families are defined for even m")
    a0, a1 = S.a0, S.a1
    if a1 == 0:
        k = _exact_log3(abs(a0))
        if k is not None:
            j = 2 * k - m
            if 0 <= j <= m:  # j automatically even
                eps = 1 if a0 > 0 else -1
                if j == m:
                    if eps == 1:
                        return ExpSumClass(KIND_ZERO, 1, 0, m)
                else:
                    return ExpSumClass(KIND_EVEN, eps, m - j, j)
    elif a1 == 2 * a0:
        k = _exact_log3(abs(a0))
        if k is not None:
            j = 2 * k + 1 - m
            if 1 <= j <= m - 1:  # j automatically odd
                eps = 1 if a0 > 0 else -1
                return ExpSumClass(KIND_ODD, eps, m - j, j)
    raise InternalInconsistencyError(f"sum {S!r} matches no family at m={m}")


def r_sum(
    ctx: FieldContext,
    alpha: FieldElement | int,
    beta: FieldElement | int,
    gamma: FieldElement | int,
) -> int:
    """R = sum over a in F_p* of S(a alpha, a beta, a gamma); always rational."""
    a = ctx.element(alpha)
    b = ctx.element(beta)
    g = ctx.element(gamma)
    total = ZERO
    for c in range(1, ctx.p):
        s = ctx.scalar(c)
        total = total + direct_sum(ctx, s * a, s * b, s * g)
    if total.a1 != 0:
        raise InternalInconsistencyError(f"R-sum has a zeta component: {total!r}")
    return total.a0
