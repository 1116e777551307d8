"""Eisenstein arithmetic, direct exponential sums, and family classification."""

import pytest

from tricyclic.errors import InternalInconsistencyError
from tricyclic.expsum import (
    KIND_EVEN,
    KIND_ODD,
    KIND_ZERO,
    EisensteinInteger,
    ExpSumClass,
    classify,
    direct_sum,
    r_sum,
    zeta_power,
)

Z = EisensteinInteger


def test_ring_axioms_on_samples(rng):
    vals = [Z(int(a), int(b)) for a, b in rng.integers(-50, 50, size=(30, 2))]
    for i in range(0, 27, 3):
        a, b, c = vals[i], vals[i + 1], vals[i + 2]
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a + (-a) == Z(0, 0)


def test_zeta_is_a_primitive_cube_root():
    zeta = Z(0, 1)
    assert zeta * zeta * zeta == Z(1, 0)
    assert zeta * zeta == Z(-1, -1)
    # 1 + zeta + zeta^2 = 0
    assert Z(1, 0) + zeta + zeta * zeta == Z(0, 0)
    for k in range(9):
        assert zeta_power(k) == zeta ** (k % 3)


def test_conjugation():
    z = Z(5, 3)
    assert z.conjugate() == Z(2, -3)
    # conjugation is multiplicative and fixes rationals
    w = Z(-2, 7)
    assert (z * w).conjugate() == z.conjugate() * w.conjugate()
    assert Z(4, 0).conjugate() == Z(4, 0)
    assert Z(4, 0).is_rational
    assert not z.is_rational


def test_pow():
    z = Z(1, 2)
    acc = Z(1, 0)
    for e in range(8):
        assert z**e == acc
        acc = acc * z
    with pytest.raises(ValueError):
        z**-1


def test_integer_scaling():
    assert 3 * Z(2, -1) == Z(6, -3)
    assert Z(2, -1) * Z(3, 0) == Z(6, -3)


def test_zero_triple_sum_is_q(ctx2, ctx4):
    for ctx in (ctx2, ctx4):
        assert direct_sum(ctx, 0, 0, 0) == Z(ctx.q, 0)


def test_known_sum_values(ctx2):
    # Tr(x^2) has full rank 2 and positive sign at m=2
    assert direct_sum(ctx2, 1, 0, 0) == Z(3, 0)
    # scaling alpha,beta,gamma by 2 conjugates the sum
    for code in (5, 17, 60):
        a, b, c = code % 9, (code * 3) % 9, (code * 7) % 9
        s = direct_sum(ctx2, a, b, c)
        two = [(2 * v) % 3 for v in range(3)]  # doubling permutes digits
        a2 = ctx2.element([two[d] for d in ctx2.element(a).coeffs]).to_int()
        b2 = ctx2.element([two[d] for d in ctx2.element(b).coeffs]).to_int()
        c2 = ctx2.element([two[d] for d in ctx2.element(c).coeffs]).to_int()
        assert direct_sum(ctx2, a2, b2, c2) == s.conjugate()


def test_classify_round_trip():
    for m in (2, 4, 6):
        families = [ExpSumClass(KIND_ZERO, 1, 0, m)]
        for j in range(0, m + 1, 2):
            if j < m:
                families.append(ExpSumClass(KIND_EVEN, 1, m - j, j))
                families.append(ExpSumClass(KIND_EVEN, -1, m - j, j))
        for j in range(1, m, 2):
            families.append(ExpSumClass(KIND_ODD, 1, m - j, j))
            families.append(ExpSumClass(KIND_ODD, -1, m - j, j))
        for fam in families:
            assert classify(fam.sum_value(), m) == fam


def test_classify_rejects_alien_values():
    with pytest.raises(InternalInconsistencyError):
        classify(Z(7, 0), 2)
    with pytest.raises(InternalInconsistencyError):
        classify(Z(3, 1), 2)


def test_classify_exhaustive_m2(ctx2):
    # every sum over all 3^6 triples falls in exactly one family, and the
    # full-sum family (S = q) is hit by 27 triples
    q_hits = 0
    kinds = set()
    for a in range(9):
        for b in range(9):
            for c in range(9):
                s = direct_sum(ctx2, a, b, c)
                fam = classify(s, 2)
                kinds.add(fam.kind)
                if s == Z(9, 0):
                    q_hits += 1
    assert q_hits == 27
    assert kinds == {KIND_ZERO, KIND_EVEN, KIND_ODD}


def test_r_sum_is_twice_real_minus_imag(ctx2, ctx4, rng):
    # R = S + conj(S) because scaling the triple by 2 conjugates S
    for ctx in (ctx2, ctx4):
        for _ in range(25):
            a, b, c = (int(v) for v in rng.integers(0, ctx.q, 3))
            s = direct_sum(ctx, a, b, c)
            assert r_sum(ctx, a, b, c) == 2 * s.a0 - s.a1
