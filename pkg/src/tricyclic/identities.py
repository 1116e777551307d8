"""MacWilliams machinery and the eight-equation frequency solver.

The weight distribution for m >= 6 comes out of exact integer identities:
five power moments of the exponential sums, the sixth-moment relation, and
two MacWilliams moment identities of the dual code pin down the eight
frequency unknowns

    (n_{1,0}, n_{-1,0}, n_{1,2}, n_{-1,2}, n_{1,4}, n_{-1,4}, 2n_1, 2n_3)

exactly.  The solver runs the printed closed forms and an independent
rational Gaussian elimination of the raw system and requires bit-for-bit
agreement; any disagreement, negativity, or non-integrality is an error
carrying both candidate solutions.

Everything is exact: Fractions internally, integers at the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .code import WeightDistribution
from .errors import (
    ConfigurationError,
    IdentitySystemError,
    InternalInconsistencyError,
    InvalidDistributionError,
)


@dataclass(frozen=True)
class WeightLevels:
    """R00 = p^{m-1}(p-1) and the three symmetric offsets R_j."""

    R00: int
    R0: int
    R2: int
    R4: int


def weight_levels(p: int, m: int) -> WeightLevels:
    if m % 2 or m < 2:
        raise ConfigurationError("weight levels need even m >= 2")
    return WeightLevels(
        R00=p ** (m - 1) * (p - 1),
        R0=(p - 1) * p ** (m // 2 - 1),
        R2=(p - 1) * p ** ((m + 2) // 2 - 1),
        R4=(p - 1) * p ** ((m + 4) // 2 - 1),
    )


@dataclass(frozen=True)
class IdentityConstants:
    c1: int
    c2: int
    c3: int
    c4: int
    c5: int
    c6: int
    a: int
    b: int


@dataclass(frozen=True)
class FrequencyCounts:
    """Counts of nonzero triples per exponential-sum family.

    n_pJ / n_mJ count sums eps * p^{(m+J)/2} with eps = +1 / -1; two_n1 and
    two_n3 count the imaginary families (both signs together, which is all
    the identities determine and all the weight table needs).
    """

    n_p0: int
    n_m0: int
    n_p2: int
    n_m2: int
    n_p4: int
    n_m4: int
    two_n1: int
    two_n3: int

    def as_tuple(self) -> tuple[int, ...]:
        return (
            self.n_p0, self.n_m0, self.n_p2, self.n_m2,
            self.n_p4, self.n_m4, self.two_n1, self.two_n3,
        )

    def validate(self, p: int, m: int) -> None:
        if any(v < 0 for v in self.as_tuple()):
            raise IdentitySystemError("negative frequency count", solved=self.as_tuple())
        if self.two_n1 % 2 or self.two_n3 % 2:
            raise IdentitySystemError("odd two_n frequency", solved=self.as_tuple())
        if sum(self.as_tuple()) != p ** (3 * m) - 1:
            raise IdentitySystemError(
                "frequencies do not cover the nonzero triples", solved=self.as_tuple()
            )


def frequency_counts_from_census(census: dict[tuple[int, int], int], m: int) -> FrequencyCounts:
    """Map an (eps, j) classification census onto the eight frequency slots.

    Valid for any even m; degenerate rank-0 triples (j = m, below m=6) land
    in the n_pJ slot of j = m.  j in 5..m-1 would violate the rank bound and
    is rejected.
    """
    slots = {"n_p0": 0, "n_m0": 0, "n_p2": 0, "n_m2": 0, "n_p4": 0, "n_m4": 0,
             "two_n1": 0, "two_n3": 0}
    for (eps, j), c in census.items():
        if j in (0, 2, 4):
            slots[("n_p" if eps > 0 else "n_m") + str(j)] += c
        elif j in (1, 3):
            slots["two_n" + str(j)] += c
        else:
            raise InternalInconsistencyError(
                f"census bucket (eps={eps}, j={j}) outside the rank bound"
            )
    return FrequencyCounts(**slots)


# ---------------------------------------------------------------- MacWilliams


def macwilliams_transform(A: WeightDistribution, l: int, k_dim: int, p: int) -> WeightDistribution:
    """Dual weight distribution by exact polynomial expansion.

    A'_j = [y^j] (1/p^k) * sum_i A_i (1 + (p-1)y)^{l-i} (1 - y)^i.
    """
    if A.l != l:
        raise ConfigurationError(f"distribution length {A.l} does not match l={l}")
    if A.total != p**k_dim:
        raise InvalidDistributionError(
            f"sum of counts {A.total} is not p^k_dim = {p**k_dim}"
        )
    coeffs = [0] * (l + 1)
    for i, Ai in A.counts:
        # (1 + (p-1)y)^{l-i} * (1-y)^i, exact integer convolution
        for j in range(l + 1):
            acc = 0
            lo = max(0, j - (l - i))
            hi = min(i, j)
            for t in range(lo, hi + 1):
                acc += (
                    (-1) ** t
                    * comb(i, t)
                    * comb(l - i, j - t)
                    * (p - 1) ** (j - t)
                )
            coeffs[j] += Ai * acc
    scale = p**k_dim
    counts: dict[int, int] = {}
    for j, v in enumerate(coeffs):
        if v % scale:
            raise InvalidDistributionError(
                f"not a linear-code distribution: dual count at {j} is {v}/{scale}"
            )
        v //= scale
        if v < 0:
            raise InvalidDistributionError(
                f"not a linear-code distribution: negative dual count at {j}"
            )
        if v:
            counts[j] = v
    if counts.get(0) != 1:
        raise InvalidDistributionError("dual distribution lacks a unique zero word")
    return WeightDistribution.from_dict(l, counts)


def power_moments(
    A: WeightDistribution, l: int, k_dim: int, dual_A2: int, dual_A4: int, p: int = 3
) -> list[dict[str, object]]:
    """First, second, and fourth moment identities, both sides exact.

    Valid when the dual has no weight-1 or weight-3 words (the caller checks
    that via the transform).  Mismatches are reported, not raised: the
    report is the product.
    """
    counts = A.as_dict()
    m1 = sum(i * c for i, c in counts.items())
    m2 = sum(i * (i - 1) * c for i, c in counts.items())
    m4 = sum(i * (i - 1) * (i - 2) * (i - 3) * c for i, c in counts.items())
    fp = Fraction(p)
    rows = (
        ("first", m1, fp ** (k_dim - 1) * (p - 1) * l),
        ("second", m2, fp ** (k_dim - 2) * (l * (l - 1) * (p - 1) ** 2 + 2 * dual_A2)),
        (
            "fourth",
            m4,
            fp ** (k_dim - 4)
            * (
                l * (l - 1) * (l - 2) * (l - 3) * (p - 1) ** 4
                + 12 * dual_A2 * (l - 2) * (l - 3) * (p - 1) ** 2
                + 24 * dual_A4
            ),
        ),
    )
    return [
        {"name": name, "lhs": str(lhs), "rhs": str(rhs), "match": Fraction(lhs) == rhs}
        for name, lhs, rhs in rows
    ]


def dual_low_weights_closed(p: int, m: int) -> tuple[int, int, int, int, int]:
    """(A'_0 .. A'_4) in closed form; exact divisibility is asserted.

    Derived under the theorem hypothesis (p=3, even m >= 6) but evaluates at
    any even m for oracle comparison.
    """
    q = p**m
    num3 = (q - 1) * (2 * q - p - 3)
    if num3 % 3:
        raise InternalInconsistencyError("A'_4 first term not divisible by 3")
    num2 = (q - 1) * (q - 3)
    if num2 % 2:
        raise InternalInconsistencyError("A'_4 second term not divisible by 2")
    return (1, 0, q - 1, 0, num3 // 3 + num2 // 2)


# ---------------------------------------------------------------- the 8 equations


def constants(p: int, m: int, A2p: int, A4p: int) -> IdentityConstants:
    """The right-hand sides c1..c6 and the MacWilliams-derived a, b."""
    if m % 2 or m < 6:
        raise ConfigurationError("identity constants need even m >= 6")
    q = p**m
    h = p ** (m // 2)
    c1 = p ** (3 * m) - 1
    c2 = h * (p ** (2 * m) - 1)
    c3 = q * (q - 1)
    c4 = (p + 1) * p ** (3 * m // 2) * (q - 1)
    c5 = (8 * (q - 1) ** 2 - q + 1) * q
    c6 = (5 * (q - 1) * (8 * q - 2 * p - 10) - q * q + 1) * h

    a_num = (
        p ** (3 * m - 2) * ((q - 1) * (q - 2) * (p - 1) ** 2 + 2 * A2p)
        - p ** (2 * (m - 1)) * (p - 1) ** 2 * (p ** (3 * m) - 2 * p ** (2 * m) + 1)
        + (p - 1) * (q - 1) * p ** (3 * m - 1)
    )
    a_den = (p - 1) ** 2 * p ** (m - 2)
    if a_num % a_den:
        raise InternalInconsistencyError("a-constant division not exact")
    a = a_num // a_den

    b_num = (
        p ** (3 * m - 4)
        * (
            (q - 1) * (q - 2) * (q - 3) * (q - 4) * (p - 1) ** 4
            + 12 * A2p * (q - 3) * (q - 4) * (p - 1) ** 2
            + 24 * A4p
        )
        - (p - 1) ** 5 * p ** (3 * (m - 1)) * a
        - p ** (4 * (m - 1)) * (p - 1) ** 4 * (p ** (3 * m) - 4 * p ** (2 * m) - 16 * q + 19)
        + 6
        * (
            (p - 1) ** 3 * p ** (2 * (m - 1)) * a
            + p ** (3 * (m - 1)) * (p - 1) ** 3 * (p ** (3 * m) - p ** (2 * m + 1) - 4 * q + 6)
        )
        - 11
        * (
            (p - 1) ** 2 * p ** (m - 2) * a
            + p ** (2 * (m - 1)) * (p - 1) ** 2 * (p ** (3 * m) - 2 * p ** (2 * m) + 1)
        )
        + 6 * ((p - 1) * (q - 1) * p ** (3 * m - 1))
    )
    b_den = (p - 1) ** 4 * p ** (2 * m - 4)
    if b_num % b_den:
        raise InternalInconsistencyError("b-constant division not exact")
    b = b_num // b_den
    return IdentityConstants(c1, c2, c3, c4, c5, c6, a, b)


def _system_rows(consts: IdentityConstants, p: int) -> list[tuple[list[int], int]]:
    """The raw system in the unknown order of FrequencyCounts.as_tuple()."""
    c = consts
    return [
        ([1, 1, 1, 1, 1, 1, 1, 1], c.c1),
        ([1, -1, p, -p, p**2, -(p**2), 0, 0], c.c2),
        ([1, 1, p**2, p**2, p**4, p**4, -p, -(p**3)], c.c3),
        ([1, -1, p**3, -(p**3), p**6, -(p**6), 0, 0], c.c4),
        ([1, 1, p**4, p**4, p**8, p**8, p**2, p**6], c.c5),
        ([1, -1, p**5, -(p**5), p**10, -(p**10), 0, 0], c.c6),
        ([1, 1, p**2, p**2, p**4, p**4, 0, 0], c.a),
        ([1, 1, p**4, p**4, p**8, p**8, 0, 0], c.b),
    ]


def _solve_linear(rows: list[tuple[list[int], int]]) -> list[Fraction]:
    """Exact Gaussian elimination, natural pivot order."""
    n = len(rows[0][0])
    M = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in rows]
    if len(M) != n:
        raise InternalInconsistencyError("identity system is not square")
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise IdentitySystemError("identity system is singular")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _closed_form_solution(consts: IdentityConstants, p: int) -> list[Fraction]:
    """The printed closed forms for the eight unknowns."""
    c1, c2, c3, c4, c5, c6 = consts.c1, consts.c2, consts.c3, consts.c4, consts.c5, consts.c6
    a, b = consts.a, consts.b
    n_p0 = Fraction(
        -(b + c6 - a * p**2 - a * p**3 - a * p**4 - a * p**5 - b * p**2
          + c1 * p**6 + c2 * p**6 + c3 * p**3 + c3 * p**5
          - c4 * p**2 - c4 * p**4 + c5 * p**2),
        -2 * p**6 + 2 * p**4 + 2 * p**2 - 2,
    )
    n_m0 = Fraction(
        -(b - c6 - a * p**2 - a * p**3 - a * p**4 - a * p**5 - b * p**2
          + c1 * p**6 - c2 * p**6 + c3 * p**3 + c3 * p**5
          + c4 * p**2 + c4 * p**4 + c5 * p**2),
        -2 * p**6 + 2 * p**4 + 2 * p**2 - 2,
    )
    two_n1 = Fraction(-(b - c5 + a * p**3 - c3 * p**3), p**2 - p**4)
    n_p2 = Fraction(
        c4 - c6 + a * p - c5 * p + a * p**2 + a * p**4 + a * p**5
        - c1 * p**5 - c2 * p**4 - c3 * p**2 - c3 * p**4 + c4 * p**4,
        2 * p**7 - 4 * p**5 + 2 * p**3,
    )
    n_m2 = Fraction(
        -(c4 - c6 - a * p + c5 * p - a * p**2 - a * p**4 - a * p**5
          + c1 * p**5 - c2 * p**4 + c3 * p**2 + c3 * p**4 + c4 * p**4),
        2 * p**7 - 4 * p**5 + 2 * p**3,
    )
    two_n3 = Fraction(b - c5 + a * p - c3 * p, p**4 - p**6)
    n_p4 = Fraction(
        -(b + c4 - c5 - c6 + a * p - c3 * p + a * p**2 + a * p**3 + a * p**4
          - b * p**2 - c1 * p**4 - c2 * p**2 - c3 * p**3 + c4 * p**2),
        2 * p**10 - 2 * p**8 - 2 * p**6 + 2 * p**4,
    )
    n_m4 = Fraction(
        -(b - c4 - c5 + c6 + a * p - c3 * p + a * p**2 + a * p**3 + a * p**4
          - b * p**2 - c1 * p**4 + c2 * p**2 - c3 * p**3 - c4 * p**2),
        2 * p**10 - 2 * p**8 - 2 * p**6 + 2 * p**4,
    )
    return [n_p0, n_m0, n_p2, n_m2, n_p4, n_m4, two_n1, two_n3]


def solve_frequencies(consts: IdentityConstants, p: int, m: int) -> FrequencyCounts:
    """Solve the eight equations both ways; require exact agreement."""
    if m % 2 or m < 6:
        raise ConfigurationError("frequency solver needs even m >= 6")
    closed = _closed_form_solution(consts, p)
    solved = _solve_linear(_system_rows(consts, p))
    if closed != solved:
        raise IdentitySystemError(
            "closed-form and linear-solve frequencies disagree",
            closed=tuple(map(str, closed)),
            solved=tuple(map(str, solved)),
        )
    if any(v.denominator != 1 for v in solved):
        raise IdentitySystemError(
            "non-integral frequency solution",
            closed=tuple(map(str, closed)),
            solved=tuple(map(str, solved)),
        )
    fc = FrequencyCounts(*(int(v) for v in solved))
    fc.validate(p, m)
    return fc


def theorem_table(p: int, m: int) -> WeightDistribution:
    """The closed-form weight distribution (codeword counts, weight 0 included)."""
    if p != 3 or m % 2 or m < 6:
        raise ConfigurationError("theorem hypothesis m>=6 even (and p=3)")
    _, _, A2p, _, A4p = dual_low_weights_closed(p, m)
    fc = solve_frequencies(constants(p, m, A2p, A4p), p, m)
    lv = weight_levels(p, m)
    counts = {
        0: 1,
        lv.R00: fc.two_n1 + fc.two_n3,
        lv.R00 - lv.R0: fc.n_p0,
        lv.R00 + lv.R0: fc.n_m0,
        lv.R00 - lv.R2: fc.n_p2,
        lv.R00 + lv.R2: fc.n_m2,
        lv.R00 - lv.R4: fc.n_p4,
        lv.R00 + lv.R4: fc.n_m4,
    }
    if len(counts) != 8:
        raise InternalInconsistencyError("weight levels collide")
    return WeightDistribution.from_dict(p**m - 1, counts)


def sixth_moment_solution_count(fc: FrequencyCounts, p: int, m: int) -> int:
    """Number of solutions of the six-variable system predicted by the
    sixth-moment relation, from frequency counts."""
    return (
        fc.n_p0 + fc.n_m0
        + p**6 * (fc.n_p2 + fc.n_m2)
        + p**12 * (fc.n_p4 + fc.n_m4)
        - p**3 * fc.two_n1
        - p**9 * fc.two_n3
        + p ** (3 * m)
    )
