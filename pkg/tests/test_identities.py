"""MacWilliams transform, power moments, and the frequency solver."""

import dataclasses

import pytest

from tricyclic.code import (
    WeightDistribution,
    classification_census,
    collapse_to_codewords,
    enumerate_distribution,
    moment_bruteforce,
)
from tricyclic.errors import (
    ConfigurationError,
    IdentitySystemError,
    InternalInconsistencyError,
    InvalidDistributionError,
)
from tricyclic.expsum import EisensteinInteger
from tricyclic.identities import (
    FrequencyCounts,
    constants,
    dual_low_weights_closed,
    frequency_counts_from_census,
    macwilliams_transform,
    power_moments,
    sixth_moment_solution_count,
    solve_frequencies,
    theorem_table,
    weight_levels,
)

M2_CODEWORDS = {0: 1, 4: 12, 6: 8, 8: 6}
M2_DUAL = {0: 1, 2: 8, 4: 56, 5: 64, 6: 80, 7: 16, 8: 18}

# the full m=6 table: l = 728, k = 18, counts are exact integers
M6_TABLE = {
    0: 1,
    324: 4732,
    432: 8591310,
    468: 128432304,
    486: 124245576,
    504: 119277522,
    540: 6866496,
    648: 2548,
}

M6_CONSTANTS = {
    "c1": 387420488,
    "c2": 14348880,
    "c3": 530712,
    "c4": 57316896,
    "c5": 3090335976,
    "c6": 557247600,
    "a": 387419760,
    "b": 1547556192,
}

M6_FREQUENCIES = (128432304, 119277522, 8591310, 6866496, 4732, 2548, 123655896, 589680)


def test_weight_levels_m6():
    lv = weight_levels(3, 6)
    assert (lv.R00, lv.R0, lv.R2, lv.R4) == (486, 18, 54, 162)
    with pytest.raises(ConfigurationError):
        weight_levels(3, 5)


def test_constants_m6():
    c = constants(3, 6, 728, 616616)
    assert dataclasses.asdict(c) == M6_CONSTANTS


def test_constants_need_even_m_at_least_6():
    with pytest.raises(ConfigurationError):
        constants(3, 4, 80, 7280)


def test_solve_frequencies_m6():
    fc = solve_frequencies(constants(3, 6, 728, 616616), 3, 6)
    assert fc.as_tuple() == M6_FREQUENCIES
    assert sum(fc.as_tuple()) == 3**18 - 1


def test_solver_rejects_small_m():
    with pytest.raises(ConfigurationError):
        solve_frequencies(constants(3, 6, 728, 616616), 3, 4)


def test_tampered_constant_is_caught():
    # a unit change in c5 makes the solution non-integral
    bad = dataclasses.replace(constants(3, 6, 728, 616616), c5=3090335977)
    with pytest.raises(IdentitySystemError):
        solve_frequencies(bad, 3, 6)


def test_theorem_table_m6():
    dist = theorem_table(3, 6)
    assert dist.l == 728
    assert dist.as_dict() == M6_TABLE
    assert dist.total == 3**18


def test_theorem_table_guards():
    for p, m in ((3, 4), (3, 7), (5, 6)):
        with pytest.raises(ConfigurationError):
            theorem_table(p, m)


def test_macwilliams_m2_and_involution():
    A = WeightDistribution.from_dict(8, M2_CODEWORDS)
    dual = macwilliams_transform(A, 8, 3, 3)
    assert dual.as_dict() == M2_DUAL
    # transforming the dual (dimension 8 - 3) must give back the primal
    back = macwilliams_transform(dual, 8, 5, 3)
    assert back.as_dict() == M2_CODEWORDS


def test_macwilliams_error_paths():
    A = WeightDistribution.from_dict(8, M2_CODEWORDS)
    with pytest.raises(ConfigurationError):
        macwilliams_transform(A, 7, 3, 3)
    short = WeightDistribution.from_dict(8, {0: 1, 4: 12})
    with pytest.raises(InvalidDistributionError):
        macwilliams_transform(short, 8, 3, 3)  # total is not 3^3
    lying = WeightDistribution.from_dict(8, {0: 1, 1: 26})
    with pytest.raises(InvalidDistributionError):
        macwilliams_transform(lying, 8, 3, 3)  # right total, not linear


def test_dual_low_weights_closed():
    assert dual_low_weights_closed(3, 2) == (1, 0, 8, 0, 56)
    assert dual_low_weights_closed(3, 4) == (1, 0, 80, 0, 7280)
    assert dual_low_weights_closed(3, 6) == (1, 0, 728, 0, 616616)


def test_dual_low_weights_match_transform_m4(ctx4):
    dist = collapse_to_codewords(enumerate_distribution(ctx4, method="rank"), 3, 4)
    dual = macwilliams_transform(dist, 80, 10, 3)
    dd = dual.as_dict()
    got = tuple(dd.get(i, 0) for i in range(5))
    assert got == dual_low_weights_closed(3, 4)


def test_power_moments_m2_balance():
    A = WeightDistribution.from_dict(8, M2_CODEWORDS)
    rows = power_moments(A, 8, 3, 8, 56, 3)
    assert [r["name"] for r in rows] == ["first", "second", "fourth"]
    assert all(r["match"] for r in rows)


def test_power_moments_report_mismatch():
    tampered = WeightDistribution.from_dict(8, {0: 1, 4: 13, 6: 8, 8: 6})
    rows = power_moments(tampered, 8, 3, 8, 56, 3)
    assert not all(r["match"] for r in rows)


def test_frequency_counts_from_census_m2(ctx2):
    fc = frequency_counts_from_census(classification_census(ctx2), 2)
    assert fc.as_tuple() == (324, 162, 26, 0, 0, 0, 216, 0)
    fc.validate(3, 2)


def test_frequency_counts_from_census_m4(ctx4):
    fc = frequency_counts_from_census(classification_census(ctx4), 4)
    assert fc.as_tuple() == (189540, 151632, 14040, 7020, 8, 0, 168480, 720)
    fc.validate(3, 4)


def test_census_bucket_outside_rank_bound_rejected():
    with pytest.raises(InternalInconsistencyError):
        frequency_counts_from_census({(1, 5): 3}, 8)


def test_validate_error_paths():
    with pytest.raises(IdentitySystemError, match="negative"):
        FrequencyCounts(-1, 0, 0, 0, 0, 0, 0, 0).validate(3, 6)
    with pytest.raises(IdentitySystemError, match="odd"):
        FrequencyCounts(0, 0, 0, 0, 0, 0, 1, 0).validate(3, 6)
    with pytest.raises(IdentitySystemError, match="cover"):
        FrequencyCounts(1, 0, 0, 0, 0, 0, 0, 0).validate(3, 6)


def test_sixth_moment_count_m2(ctx2):
    fc = frequency_counts_from_census(classification_census(ctx2), 2)
    assert sixth_moment_solution_count(fc, 3, 2) == 14337


def test_sixth_moment_count_matches_tally_m4(ctx4):
    fc = frequency_counts_from_census(classification_census(ctx4), 4)
    n6 = sixth_moment_solution_count(fc, 3, 4)
    assert moment_bruteforce(ctx4, 6) == EisensteinInteger(n6 * 3**12, 0)
