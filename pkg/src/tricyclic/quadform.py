"""Quadratic forms over F_p attached to trace sums, and their fast classification.

Over the prime field, Q(x) = Tr(alpha x^2 + beta x^{p+1} + gamma x^{p^2+1}) is a
quadratic form in the m coordinates of x.  Its Gram matrix H (with respect to a
fixed F_p-basis pi^0..pi^{m-1}) determines the exponential sum exactly:

    rank r, j = m - r, Delta = product of nonzero entries after a congruence
    diagonalization P H P^T = D, eps = (-1)^{floor(r/2)} * legendre(Delta).

For p = 3 (p = 3 mod 4) the sum is then eps * 3^{(m+j)/2} for even j and
eps * (1 + 2 zeta) * 3^{(m+j-1)/2} for odd j; rank 0 gives the zero form with
sum q (eps = +1, j = m, consistent with the empty-product convention).

Classification costs O(m^3) per triple instead of the O(q) tally, which is what
makes full enumeration at m = 6 possible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, InternalInconsistencyError
from .expsum import (
    KIND_EVEN,
    KIND_ODD,
    KIND_ZERO,
    EisensteinInteger,
    ExpSumClass,
    zeta_power,
)
from .gf import FieldContext, FieldElement


@dataclass(frozen=True)
class SymmetricMatrix:
    """Symmetric matrix over F_p, entries reduced to {0..p-1}."""

    p: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.rows)
        for row in self.rows:
            if len(row) != n:
                raise ConfigurationError("matrix is not square")
            for v in row:
                if not 0 <= v < self.p:
                    raise ConfigurationError("entry outside F_p")
        for i in range(n):
            for k in range(i + 1, n):
                if self.rows[i][k] != self.rows[k][i]:
                    raise ConfigurationError("matrix is not symmetric")

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.rows[ij[0]][ij[1]]

    def evaluate(self, x: tuple[int, ...]) -> int:
        """x H x^T mod p."""
        acc = 0
        for i, xi in enumerate(x):
            if xi:
                acc += xi * sum(h * xk for h, xk in zip(self.rows[i], x))
        return acc % self.p


def build_form(
    ctx: FieldContext,
    alpha: FieldElement | int,
    beta: FieldElement | int,
    gamma: FieldElement | int,
) -> SymmetricMatrix:
    """Gram matrix of Q(x) = Tr(alpha x^2 + beta x^{p+1} + gamma x^{p^2+1}).

    H[i][k] = inv(2) * (Q(pi^i + pi^k) - Q(pi^i) - Q(pi^k)) off the diagonal
    and H[i][i] = Q(pi^i), so x H x^T = Q(x) for every x.
    """
    p, m = ctx.p, ctx.m
    a = ctx.element(alpha)
    b = ctx.element(beta)
    g = ctx.element(gamma)
    e1, e2, e3 = 2, p + 1, p * p + 1

    def q_of(x: FieldElement) -> int:
        return ctx.trace(a * x**e1 + b * x**e2 + g * x**e3)

    basis = [ctx.primitive_power(i) for i in range(m)]
    diag = [q_of(v) for v in basis]
    inv2 = pow(2, p - 2, p)
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        rows[i][i] = diag[i]
        for k in range(i + 1, m):
            mixed = (q_of(basis[i] + basis[k]) - diag[i] - diag[k]) % p
            rows[i][k] = rows[k][i] = (inv2 * mixed) % p
    return SymmetricMatrix(p, tuple(tuple(r) for r in rows))


def diagonalize(H: SymmetricMatrix) -> tuple[SymmetricMatrix, tuple[tuple[int, ...], ...]]:
    """Congruence-diagonalize: returns (D, P) with P H P^T = D, P invertible.

    Plain symmetric Gaussian elimination; when a pivot position is zero but its
    row is not, adding a suitable later row first makes the pivot nonzero
    (possible since p is odd).
    """
    p, n = H.p, H.n
    M = [list(r) for r in H.rows]
    P = [[1 if i == k else 0 for k in range(n)] for i in range(n)]

    def add_row(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src, and the symmetric column op
        for k in range(n):
            M[dst][k] = (M[dst][k] + c * M[src][k]) % p
        for k in range(n):
            M[k][dst] = (M[k][dst] + c * M[k][src]) % p
        for k in range(n):
            P[dst][k] = (P[dst][k] + c * P[src][k]) % p

    for i in range(n):
        if M[i][i] == 0:
            pivot = next((k for k in range(i + 1, n) if M[k][i]), None)
            if pivot is None:
                continue
            if M[pivot][pivot]:
                # swap rows/cols i and pivot
                M[i], M[pivot] = M[pivot], M[i]
                for row in M:
                    row[i], row[pivot] = row[pivot], row[i]
                P[i], P[pivot] = P[pivot], P[i]
            else:
                add_row(i, pivot, 1)  # makes M[i][i] = 2*M[i][pivot] != 0
        if M[i][i] == 0:
            continue
        inv = pow(M[i][i], p - 2, p)
        for k in range(i + 1, n):
            if M[k][i]:
                add_row(k, i, (-M[k][i] * inv) % p)

    for i in range(n):
        for k in range(n):
            if i != k and M[i][k]:
                raise InternalInconsistencyError("diagonalization left residue")
    D = SymmetricMatrix(p, tuple(tuple(r) for r in M))
    return D, tuple(tuple(r) for r in P)


def rank(H: SymmetricMatrix) -> int:
    D, _ = diagonalize(H)
    return sum(1 for i in range(D.n) if D[i, i])


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    s = pow(a, (p - 1) // 2, p)
    return 1 if s == 1 else -1


def classify_via_legendre(H: SymmetricMatrix, m: int) -> ExpSumClass:
    """Family of the exponential sum read off the Gram matrix alone."""
    if m % 2:
        raise ConfigurationError("classification families are defined for even m")
    if H.n != m:
        raise ConfigurationError("form size does not match m")
    if H.p % 4 == 1:
        raise NotImplementedError("p = 1 mod 4 needs the other Gauss-sum sign rule")
    D, _ = diagonalize(H)
    diag = [D[i, i] for i in range(D.n)]
    r = sum(1 for d in diag if d)
    delta = 1
    for d in diag:
        if d:
            delta = (delta * d) % H.p
    eps = (-1) ** (r // 2) * legendre(delta, H.p)
    j = m - r
    if r == 0:
        return ExpSumClass(KIND_ZERO, 1, 0, m)
    return ExpSumClass(KIND_EVEN if j % 2 == 0 else KIND_ODD, eps, r, j)


def affine_exponential_sum(H: SymmetricMatrix, A: tuple[int, ...]) -> EisensteinInteger:
    """sum over x in F_p^m of zeta^(x H x^T + A x^T), exactly.

    Completing the square: if (2H) y^T = -A^T has a solution y, the sum is
    zeta^(A y^T / 2) times the homogeneous sum of H; otherwise the linear part
    is nontrivial on the radical and the sum vanishes.
    """
    p, m = H.p, H.n
    if p != 3:
        raise ConfigurationError("Eisenstein values are specific to p=3")
    if m % 2:
        raise ConfigurationError("affine reduction implemented for even m")
    if len(A) != m:
        raise ConfigurationError("linear part has wrong length")
    A = tuple(a % p for a in A)

    # solve (2H) y^T = -A^T by Gaussian elimination over F_p
    aug = [[(2 * H[i, k]) % p for k in range(m)] + [(-A[i]) % p] for i in range(m)]
    row = 0
    pivots = []
    for col in range(m):
        piv = next((r for r in range(row, m) if aug[r][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = pow(aug[row][col], p - 2, p)
        aug[row] = [(v * inv) % p for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(v - c * w) % p for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
    if any(r[m] for r in aug[row:]):
        return EisensteinInteger(0, 0)
    y = [0] * m
    for rr, col in enumerate(pivots):
        y[col] = aug[rr][m]

    base = classify_via_legendre(H, m).sum_value(p)
    inv2 = pow(2, p - 2, p)
    shift = (inv2 * sum(a * yi for a, yi in zip(A, y))) % p
    return zeta_power(shift) * base
