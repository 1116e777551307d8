"""Compiled hot loops behind the enumeration drivers.

Nothing in here sees a field element object.  Fields enter as integer tables
(exp/log, per-exponent power maps, trace-product tables), quadratic forms as
packed upper-triangle Gram contributions that are linear in each of alpha,
beta, gamma, and counting systems as base-8 packed digit vectors with a
digit-wise reduction lookup.  All kernels are deterministic; parallel ones
accumulate per-slice rows that the drivers sum in a fixed order.
"""

from __future__ import annotations

import numpy as np
from numba import config as _numba_config
from numba import njit, prange, set_num_threads

from . import quadform
from .gf import FieldContext


def set_parallelism(n: int) -> int:
    """Clamp to the threads numba was started with; returns the value used."""
    n = max(1, min(int(n), _numba_config.NUMBA_NUM_THREADS))
    set_num_threads(n)
    return n


# ---------------------------------------------------------------- table builders


def gram_tables(ctx: FieldContext) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Packed upper-triangle Gram contributions per coefficient code.

    The Gram matrix of Tr(alpha x^2 + beta x^{p+1} + gamma x^{p^2+1}) is
    F_p-linear in each coefficient, so the table for alpha is the digit matrix
    of all q codes times the m basis forms built from alpha = pi^d.  Entry
    range stays in 0..2; summing the three tables and reducing mod 3 gives the
    packed Gram matrix of any triple.
    """
    p, m, q = ctx.p, ctx.m, ctx.q
    if p != 3:
        raise ValueError("kernel tables assume p=3 digit packing")
    tri = m * (m + 1) // 2

    def basis_rows(which: int) -> np.ndarray:
        rows = np.zeros((m, tri), dtype=np.int64)
        for d in range(m):
            coeffs = [0, 0, 0]
            coeffs[which] = ctx.primitive_power(d)
            H = quadform.build_form(ctx, *coeffs)
            idx = 0
            for i in range(m):
                for k in range(i, m):
                    rows[d, idx] = H[i, k]
                    idx += 1
        return rows

    codes = np.arange(q, dtype=np.int64)
    digits = np.empty((q, m), dtype=np.int64)
    rem = codes.copy()
    for d in range(m):
        digits[:, d] = rem % 3
        rem //= 3

    out = []
    for which in range(3):
        rows = basis_rows(which)
        out.append(((digits @ rows) % 3).astype(np.int8))
    return out[0], out[1], out[2]


def tally_tables(ctx: FieldContext) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(trace-product table, x^2 map, x^{p+1} map, x^{p^2+1} map)."""
    trp = ctx.trace_product_table()
    return (
        trp,
        ctx.power_map(2),
        ctx.power_map(ctx.p + 1),
        ctx.power_map(ctx.p**2 + 1),
    )


def pow3_table(kmax: int) -> np.ndarray:
    return (3 ** np.arange(kmax + 1, dtype=np.int64)).astype(np.int64)


# ---------------------------------------------------------------- classification


@njit(cache=True, inline="always")
def _classify_form(M, m):
    """In-place symmetric elimination mod 3; returns (rank, eps).

    eps = (-1)^{floor(r/2)} * legendre(product of pivots) with legendre(1)=1,
    legendre(2)=-1 over F_3.
    """
    r = 0
    delta = 1
    for i in range(m):
        if M[i, i] == 0:
            sel = -1
            for k in range(i + 1, m):
                if M[k, i] != 0:
                    sel = k
                    break
            if sel >= 0:
                if M[sel, sel] != 0:
                    for t in range(m):
                        tmp = M[i, t]
                        M[i, t] = M[sel, t]
                        M[sel, t] = tmp
                    for t in range(m):
                        tmp = M[t, i]
                        M[t, i] = M[t, sel]
                        M[t, sel] = tmp
                else:
                    for t in range(m):
                        M[i, t] = (M[i, t] + M[sel, t]) % 3
                    for t in range(m):
                        M[t, i] = (M[t, i] + M[t, sel]) % 3
        piv = M[i, i]
        if piv == 0:
            continue
        delta = (delta * piv) % 3
        r += 1
        inv = piv  # 1 and 2 are self-inverse mod 3
        for k in range(i + 1, m):
            if M[k, i] != 0:
                c = (3 - (M[k, i] * inv) % 3) % 3
                if c != 0:
                    for t in range(m):
                        M[k, t] = (M[k, t] + c * M[i, t]) % 3
                    for t in range(m):
                        M[t, k] = (M[t, k] + c * M[t, i]) % 3
    eps = 1 if (r // 2) % 2 == 0 else -1
    if delta == 2:
        eps = -eps
    return r, eps


@njit(cache=True, parallel=True)
def census_range(a_lo, a_hi, q, m, AH, BH, CH):
    """Histogram of (eps, j) buckets over triples with alpha code in [a_lo, a_hi).

    Bucket index is 2*j + (0 if eps=+1 else 1), j = m - rank in 0..m; the
    rank-0 form lands in bucket 2*m with eps=+1 (this includes the all-zero
    triple when the range covers it; the driver subtracts it).
    """
    tri = m * (m + 1) // 2
    nb = 2 * (m + 1)
    na = a_hi - a_lo
    out = np.zeros((na, nb), dtype=np.int64)
    for ia in prange(na):
        a = a_lo + ia
        M = np.empty((m, m), dtype=np.int8)
        ab = np.empty(tri, dtype=np.int8)
        rowA = AH[a]
        for b in range(q):
            rowB = BH[b]
            for t in range(tri):
                ab[t] = rowA[t] + rowB[t]
            for c in range(q):
                rowC = CH[c]
                idx = 0
                for i in range(m):
                    for k in range(i, m):
                        v = (ab[idx] + rowC[idx]) % 3
                        M[i, k] = v
                        M[k, i] = v
                        idx += 1
                r, eps = _classify_form(M, m)
                j = m - r
                out[ia, 2 * j + (0 if eps > 0 else 1)] += 1
    total = np.zeros(nb, dtype=np.int64)
    for ia in range(na):
        for bkt in range(nb):
            total[bkt] += out[ia, bkt]
    return total


@njit(cache=True, inline="always")
def _tally_sum(a, b, c, q, TRP, P2, P4, P10):
    """Eisenstein components (a0, a1) of the q-term tally for one triple."""
    n0 = 0
    n1 = 0
    n2 = 0
    for x in range(q):
        v = (TRP[a, P2[x]] + TRP[b, P4[x]] + TRP[c, P10[x]]) % 3
        if v == 0:
            n0 += 1
        elif v == 1:
            n1 += 1
        else:
            n2 += 1
    return n0 - n2, n1 - n2


@njit(cache=True, inline="always")
def _check_one(a, b, c, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3):
    """1 if the rank classification disagrees with the tally for this triple."""
    tri = m * (m + 1) // 2
    M = np.empty((m, m), dtype=np.int8)
    idx = 0
    for i in range(m):
        for k in range(i, m):
            v = (AH[a, idx] + BH[b, idx] + CH[c, idx]) % 3
            M[i, k] = v
            M[k, i] = v
            idx += 1
    r, eps = _classify_form(M, m)
    j = m - r
    if r == 0:
        p0 = POW3[m]
        p1 = 0
    elif j % 2 == 0:
        p0 = eps * POW3[(m + j) // 2]
        p1 = 0
    else:
        t = eps * POW3[(m + j - 1) // 2]
        p0 = t
        p1 = 2 * t
    s0, s1 = _tally_sum(a, b, c, q, TRP, P2, P4, P10)
    return 0 if (s0 == p0 and s1 == p1) else 1


@njit(cache=True, parallel=True)
def differential_range(a_lo, a_hi, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3):
    """Exhaustive rank-vs-tally comparison over alpha codes in [a_lo, a_hi)."""
    na = a_hi - a_lo
    bad = np.zeros(na, dtype=np.int64)
    for ia in prange(na):
        a = a_lo + ia
        n = 0
        for b in range(q):
            for c in range(q):
                n += _check_one(a, b, c, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3)
        bad[ia] = n
    total = np.int64(0)
    for ia in range(na):
        total += bad[ia]
    return total


@njit(cache=True, parallel=True)
def differential_samples(A, B, C, q, m, AH, BH, CH, TRP, P2, P4, P10, POW3):
    """Rank-vs-tally comparison on explicit triple code arrays."""
    n = A.shape[0]
    bad = np.zeros(n, dtype=np.int64)
    for i in prange(n):
        bad[i] = _check_one(A[i], B[i], C[i], q, m, AH, BH, CH, TRP, P2, P4, P10, POW3)
    total = np.int64(0)
    for i in range(n):
        total += bad[i]
    return total


@njit(cache=True, parallel=True)
def rank_histogram_samples(A, B, C, q, m, AH, BH, CH):
    """Histogram of j = m - rank over explicit triple code arrays."""
    n = A.shape[0]
    out = np.zeros((n, m + 1), dtype=np.int64)
    for i in prange(n):
        tri = m * (m + 1) // 2
        M = np.empty((m, m), dtype=np.int8)
        idx = 0
        for r in range(m):
            for k in range(r, m):
                v = (AH[A[i], idx] + BH[B[i], idx] + CH[C[i], idx]) % 3
                M[r, k] = v
                M[k, r] = v
                idx += 1
        rk, _ = _classify_form(M, m)
        out[i, m - rk] += 1
    total = np.zeros(m + 1, dtype=np.int64)
    for i in range(n):
        for j in range(m + 1):
            total[j] += out[i, j]
    return total


@njit(cache=True, parallel=True)
def moment_components(q, m, TRP, P2, P4, P10):
    """Sum of S^k over all q^3 triples, k = 0..6, as Eisenstein components.

    int64 is safe for m <= 4: |S|^6 <= q^6 and q^3 triples keep every
    component under 3^{42} < 2^63.
    """
    out = np.zeros((q, 7, 2), dtype=np.int64)
    for a in prange(q):
        acc = np.zeros((7, 2), dtype=np.int64)
        for b in range(q):
            for c in range(q):
                s0, s1 = _tally_sum(a, b, c, q, TRP, P2, P4, P10)
                c0 = np.int64(1)
                c1 = np.int64(0)
                acc[0, 0] += 1
                for k in range(1, 7):
                    n0 = c0 * s0 - c1 * s1
                    n1 = c0 * s1 + c1 * s0 - c1 * s1
                    c0 = n0
                    c1 = n1
                    acc[k, 0] += c0
                    acc[k, 1] += c1
        for k in range(7):
            out[a, k, 0] = acc[k, 0]
            out[a, k, 1] = acc[k, 1]
    total = np.zeros((7, 2), dtype=np.int64)
    for a in range(q):
        for k in range(7):
            total[k, 0] += out[a, k, 0]
            total[k, 1] += out[a, k, 1]
    return total


@njit(cache=True, parallel=True)
def weight_hist_range(a_lo, a_hi, q, m, TRP, P2, P4, P10):
    """Histogram of w = q - N0 over triples with alpha code in [a_lo, a_hi)."""
    na = a_hi - a_lo
    out = np.zeros((na, q + 1), dtype=np.int64)
    for ia in prange(na):
        a = a_lo + ia
        for b in range(q):
            for c in range(q):
                n0 = 0
                for x in range(q):
                    v = (TRP[a, P2[x]] + TRP[b, P4[x]] + TRP[c, P10[x]]) % 3
                    if v == 0:
                        n0 += 1
                out[ia, q - n0] += 1
    total = np.zeros(q + 1, dtype=np.int64)
    for ia in range(na):
        for w in range(q + 1):
            total[w] += out[ia, w]
    return total


# ---------------------------------------------------------------- system counting


@njit(cache=True, inline="always")
def _key_hits(a, b, c, neg, keys, cnts):
    """Count of last-variable values whose packed triple equals the negation."""
    kk = neg[a] | (neg[b] << 21) | (neg[c] << 42)
    lo = 0
    hi = keys.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < kk:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == kk:
        return cnts[lo]
    return np.int64(0)


@njit(cache=True)
def count_tuples(n, q, x0_lo, x0_hi, TT, C0, red, neg, keys, cnts):
    """Solutions of the three packed digit equations, first variable in range.

    TT[e, v] is the base-8 packed value of sign_v * x^{exponent_e} per last
    axis x; C0[e] the packed affine constant.  Prefix sums stay canonical via
    red; the innermost variable is resolved by binary search over the sorted
    packed key table of the last variable.
    """
    total = np.int64(0)
    if n == 2:
        for x0 in range(x0_lo, x0_hi):
            a0 = red[C0[0] + TT[0, 0, x0]]
            b0 = red[C0[1] + TT[1, 0, x0]]
            c0 = red[C0[2] + TT[2, 0, x0]]
            total += _key_hits(a0, b0, c0, neg, keys, cnts)
    elif n == 3:
        for x0 in range(x0_lo, x0_hi):
            a0 = red[C0[0] + TT[0, 0, x0]]
            b0 = red[C0[1] + TT[1, 0, x0]]
            c0 = red[C0[2] + TT[2, 0, x0]]
            for x1 in range(q):
                a1 = red[a0 + TT[0, 1, x1]]
                b1 = red[b0 + TT[1, 1, x1]]
                c1 = red[c0 + TT[2, 1, x1]]
                total += _key_hits(a1, b1, c1, neg, keys, cnts)
    elif n == 4:
        for x0 in range(x0_lo, x0_hi):
            a0 = red[C0[0] + TT[0, 0, x0]]
            b0 = red[C0[1] + TT[1, 0, x0]]
            c0 = red[C0[2] + TT[2, 0, x0]]
            for x1 in range(q):
                a1 = red[a0 + TT[0, 1, x1]]
                b1 = red[b0 + TT[1, 1, x1]]
                c1 = red[c0 + TT[2, 1, x1]]
                for x2 in range(q):
                    a2 = red[a1 + TT[0, 2, x2]]
                    b2 = red[b1 + TT[1, 2, x2]]
                    c2 = red[c1 + TT[2, 2, x2]]
                    total += _key_hits(a2, b2, c2, neg, keys, cnts)
    elif n == 5:
        for x0 in range(x0_lo, x0_hi):
            a0 = red[C0[0] + TT[0, 0, x0]]
            b0 = red[C0[1] + TT[1, 0, x0]]
            c0 = red[C0[2] + TT[2, 0, x0]]
            for x1 in range(q):
                a1 = red[a0 + TT[0, 1, x1]]
                b1 = red[b0 + TT[1, 1, x1]]
                c1 = red[c0 + TT[2, 1, x1]]
                for x2 in range(q):
                    a2 = red[a1 + TT[0, 2, x2]]
                    b2 = red[b1 + TT[1, 2, x2]]
                    c2 = red[c1 + TT[2, 2, x2]]
                    for x3 in range(q):
                        a3 = red[a2 + TT[0, 3, x3]]
                        b3 = red[b2 + TT[1, 3, x3]]
                        c3 = red[c2 + TT[2, 3, x3]]
                        total += _key_hits(a3, b3, c3, neg, keys, cnts)
    elif n == 6:
        for x0 in range(x0_lo, x0_hi):
            a0 = red[C0[0] + TT[0, 0, x0]]
            b0 = red[C0[1] + TT[1, 0, x0]]
            c0 = red[C0[2] + TT[2, 0, x0]]
            for x1 in range(q):
                a1 = red[a0 + TT[0, 1, x1]]
                b1 = red[b0 + TT[1, 1, x1]]
                c1 = red[c0 + TT[2, 1, x1]]
                for x2 in range(q):
                    a2 = red[a1 + TT[0, 2, x2]]
                    b2 = red[b1 + TT[1, 2, x2]]
                    c2 = red[c1 + TT[2, 2, x2]]
                    for x3 in range(q):
                        a3 = red[a2 + TT[0, 3, x3]]
                        b3 = red[b2 + TT[1, 3, x3]]
                        c3 = red[c2 + TT[2, 3, x3]]
                        for x4 in range(q):
                            a4 = red[a3 + TT[0, 4, x4]]
                            b4 = red[b3 + TT[1, 4, x4]]
                            c4 = red[c3 + TT[2, 4, x4]]
                            total += _key_hits(a4, b4, c4, neg, keys, cnts)
    else:
        total = np.int64(-1)  # unsupported arity; drivers never request it
    return total
