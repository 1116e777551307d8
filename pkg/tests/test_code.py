"""Codewords, weight formulas, exhaustive enumeration, checkpoints, moments."""

import json
import os

import pytest

from tricyclic.code import (
    WeightDistribution,
    _checkpoint_path,
    _save_checkpoint,
    classification_census,
    code_dimension,
    codeword,
    collapse_to_codewords,
    cyclotomic_coset,
    dual_distribution_bruteforce,
    enumerate_distribution,
    generator_rank,
    moment_bruteforce,
    weight_direct,
    weight_via_expsum,
)
from tricyclic.errors import (
    BudgetExceededError,
    ConfigurationError,
    InternalInconsistencyError,
    InvalidDistributionError,
)
from tricyclic.expsum import EisensteinInteger, classify
from tricyclic.gf import field_context

import numpy as np

# triple-level distribution at m=2 (27 triples mapping onto each codeword)
M2_TRIPLES = {0: 27, 4: 324, 6: 216, 8: 162}
M2_CODEWORDS = {0: 1, 4: 12, 6: 8, 8: 6}
M2_DUAL = {0: 1, 2: 8, 4: 56, 5: 64, 6: 80, 7: 16, 8: 18}

# rank-classification census at m=2: 26 nonzero triples degenerate to the
# zero form (the coset of 2 and the coset of p^2+1 coincide at this m)
M2_CENSUS = {(1, 0): 324, (-1, 0): 162, (1, 1): 108, (-1, 1): 108, (1, 2): 26}

M4_CENSUS = {
    (1, 0): 189540,
    (-1, 0): 151632,
    (1, 1): 84240,
    (-1, 1): 84240,
    (1, 2): 14040,
    (-1, 2): 7020,
    (1, 3): 360,
    (-1, 3): 360,
    (1, 4): 8,
}


def test_cyclotomic_coset_values():
    cs = cyclotomic_coset(2, 3, 6)
    assert cs.elements == (2, 6, 18, 54, 162, 486)
    assert cs.size == 6
    # wrap-around: 10 * 3^4 = 810 = 82 mod 728
    assert 82 in cyclotomic_coset(10, 3, 6).elements


def test_coset_sizes_follow_the_size_rule():
    # |D_{1+p^i}| = m for 0 <= i <= t, and m/2 at i = t+1 when m = 2t+2;
    # D_2 is the i=0 case
    for m in range(2, 11):
        t = (m - 2) // 2 if m % 2 == 0 else (m - 1) // 2
        for i in (0, 1, 2):
            s = 1 + 3**i if i else 2
            expected = None
            if i <= t:
                expected = m
            elif m % 2 == 0 and i == t + 1:
                expected = m // 2
            if expected is not None:
                assert cyclotomic_coset(s, 3, m).size == expected, (m, i)


def test_code_dimension_handles_coset_merging():
    assert code_dimension(3, 2) == 3
    assert code_dimension(3, 4) == 10
    assert code_dimension(3, 6) == 18
    assert code_dimension(3, 8) == 24
    assert code_dimension(3, 10) == 30


def test_generator_rank_agrees_with_coset_union(ctx2, ctx4):
    assert generator_rank(ctx2) == 3
    assert generator_rank(ctx4) == 10


def test_codeword_basics(ctx4):
    zero = codeword(ctx4, 0, 0, 0)
    assert zero.length == ctx4.q - 1
    assert weight_direct(zero) == 0
    assert weight_via_expsum(ctx4, 0, 0, 0) == 0
    ones = zero.__class__(tuple([1] * zero.length))
    assert weight_direct(ones) == zero.length


def test_codeword_shift_closure(ctx4, rng):
    # shifting left by one position lands on the codeword of the triple
    # scaled by (pi^2, pi^{p+1}, pi^{p^2+1})
    pi2 = ctx4.primitive_power(2)
    pi4 = ctx4.primitive_power(ctx4.p + 1)
    pi10 = ctx4.primitive_power(ctx4.p**2 + 1)
    for _ in range(10):
        a, b, c = (ctx4.element(int(v)) for v in rng.integers(0, ctx4.q, 3))
        cw = codeword(ctx4, a, b, c).symbols
        succ = codeword(ctx4, a * pi2, b * pi4, c * pi10).symbols
        assert cw[1:] + cw[:1] == succ


def test_weight_formulas_agree_exhaustively_m2(ctx2):
    for a in range(9):
        for b in range(9):
            for c in range(9):
                cw = codeword(ctx2, a, b, c)
                assert weight_direct(cw) == weight_via_expsum(ctx2, a, b, c)


def test_weight_distribution_validation():
    with pytest.raises(InvalidDistributionError):
        WeightDistribution(8, ((9, 1),))
    with pytest.raises(InvalidDistributionError):
        WeightDistribution(8, ((2, -1),))
    with pytest.raises(InvalidDistributionError):
        WeightDistribution(8, ((3, 1), (3, 2)))
    d = WeightDistribution.from_dict(8, {0: 1, 5: 0, 4: 3})
    assert d.counts == ((0, 1), (4, 3))


def test_weight_distribution_serialization_round_trips():
    d = WeightDistribution.from_dict(728, {0: 1, 486: 124245576})
    assert WeightDistribution.from_json(d.to_json()) == d
    data = json.loads(d.to_json())
    assert data["counts"]["486"] == "124245576"
    csv = d.to_csv()
    assert csv.splitlines()[0] == "weight,count"
    assert "486,124245576" in csv


def test_enumeration_methods_agree_m2(ctx2):
    by_rank = enumerate_distribution(ctx2, method="rank")
    by_tally = enumerate_distribution(ctx2, method="direct")
    assert by_rank == by_tally
    assert by_rank.as_dict() == M2_TRIPLES
    assert by_rank.total == ctx2.q**3


def test_enumeration_budget_refusal(ctx2):
    with pytest.raises(BudgetExceededError):
        enumerate_distribution(ctx2, method="rank", budget=2)
    with pytest.raises(ConfigurationError):
        enumerate_distribution(ctx2, method="nonsense")


def test_collapse_to_codewords(ctx2):
    triples = enumerate_distribution(ctx2, method="rank")
    assert collapse_to_codewords(triples, 3, 2).as_dict() == M2_CODEWORDS
    broken = WeightDistribution.from_dict(8, {0: 1, 4: 5})
    with pytest.raises(InternalInconsistencyError):
        collapse_to_codewords(broken, 3, 2)


def test_classification_census_m2(ctx2):
    assert classification_census(ctx2) == M2_CENSUS


def test_classification_census_m4(ctx4):
    census = classification_census(ctx4)
    assert census == M4_CENSUS
    assert sum(census.values()) == ctx4.q**3 - 1


def test_census_checkpoint_resume(ctx2, tmp_path):
    from tricyclic import _kernels
    from tricyclic.code import _CENSUS_CACHE

    nb = 2 * (ctx2.m + 1)
    path = _checkpoint_path(str(tmp_path), 3, 2, "rank")

    # seed a genuine partial state (first three alpha rows), then resume
    part = _kernels.census_range(0, 3, ctx2.q, ctx2.m, *_kernels.gram_tables(ctx2))
    _save_checkpoint(path, ctx2, "rank", 3, part)
    _CENSUS_CACHE.clear()
    resumed = classification_census(ctx2, checkpoint_dir=str(tmp_path))
    assert resumed == M2_CENSUS
    assert not os.path.exists(path)  # cleaned up after a completed run

    # a checkpoint claiming everything is done must be taken at face value
    fake = np.zeros(nb, dtype=np.int64)
    fake[2 * ctx2.m] = ctx2.q**3  # everything in the zero-form bucket
    _save_checkpoint(path, ctx2, "rank", ctx2.q, fake)
    _CENSUS_CACHE.clear()
    poisoned = classification_census(ctx2, checkpoint_dir=str(tmp_path))
    assert poisoned == {(1, ctx2.m): ctx2.q**3 - 1}
    _CENSUS_CACHE.clear()


def test_checkpoint_mismatch_rejected(ctx2, tmp_path):
    from tricyclic.code import _CENSUS_CACHE

    path = _checkpoint_path(str(tmp_path), 3, 2, "rank")
    alt = field_context(3, 2, (2, 2, 1))  # same (p, m), different modulus
    _save_checkpoint(path, alt, "rank", 1, np.zeros(6, dtype=np.int64))
    _CENSUS_CACHE.clear()
    with pytest.raises(ConfigurationError):
        classification_census(ctx2, checkpoint_dir=str(tmp_path))
    _CENSUS_CACHE.clear()


def test_dual_bruteforce_m2(ctx2):
    assert dual_distribution_bruteforce(ctx2).as_dict() == M2_DUAL


def test_dual_bruteforce_refuses_large(ctx4):
    with pytest.raises(BudgetExceededError):
        dual_distribution_bruteforce(ctx4)


def test_moment_bruteforce_m2(ctx2):
    cube = ctx2.q**3
    expected = {1: cube, 2: cube, 3: 33 * cube, 4: 513 * cube, 5: 2241 * cube, 6: 14337 * cube}
    for k, v in expected.items():
        assert moment_bruteforce(ctx2, k) == EisensteinInteger(v, 0)
    with pytest.raises(ConfigurationError):
        moment_bruteforce(ctx2, 7)


def test_moment_census_route_agrees_with_tally_route(ctx2):
    # summing family values over the census must reproduce the kernel moments
    census = classification_census(ctx2)
    q = ctx2.q
    for k in (2, 3, 6):
        total = EisensteinInteger(q, 0) ** k  # zero triple contributes q^k
        for (eps, j), cnt in census.items():
            if j % 2 == 0:  # covers j == m too: there eps is +1 and 3^j = q
                fam = EisensteinInteger(eps * 3 ** ((ctx2.m + j) // 2), 0)
            else:
                half = eps * 3 ** ((ctx2.m + j - 1) // 2)
                fam = EisensteinInteger(half, 2 * half)
            total = total + cnt * fam**k
        assert total == moment_bruteforce(ctx2, k)
