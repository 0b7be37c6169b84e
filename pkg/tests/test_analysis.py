import math

import mpmath
import numpy as np
import pytest
from scipy import stats

from qpp import analysis
from qpp.analysis import (
    CHI2_CRITICAL_0001,
    EnumerationLimitError,
    commuting_fraction,
    commuting_pairs_exact,
    count_mappings,
    entropy_report,
    enumerate_group,
    log2_factorial,
    mapping_count_matrix,
    uniformity_chi_square,
    xor_subgroup_report,
)

from oracles import commuting_ordered_pairs, count_maps_to


def test_log2_factorial_small():
    assert log2_factorial(1) == 0
    assert log2_factorial(8) == pytest.approx(math.log2(40320), rel=1e-12)
    assert 15 < log2_factorial(8) < 16
    assert log2_factorial(8) == pytest.approx(15.2992, abs=1e-4)


def test_log2_factorial_256_magnitude():
    log10 = log2_factorial(256) * math.log10(2)
    assert 506.5 <= log10 <= 507.5


@pytest.mark.parametrize("N", [2, 10, 256, 1000, 65536])
def test_log2_factorial_against_mpmath(N):
    with mpmath.workdps(40):
        expected = mpmath.loggamma(N + 1) / mpmath.log(2)
        assert abs(log2_factorial(N) - float(expected)) <= 1e-12 * float(expected)


def test_log2_factorial_monotone():
    values = [log2_factorial(N) for N in range(1, 300)]
    assert all(b >= a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("n", range(1, 17))
def test_entropy_identity(n):
    lhs = log2_factorial(2**n)
    rhs = n + log2_factorial(2**n - 1)
    assert abs(lhs - rhs) <= 1e-9 * lhs
    report = entropy_report(n, 3)
    assert abs(report.qpp_bits - report.split_form_bits) <= 1e-6 * report.qpp_bits
    if n >= 2:
        assert report.qpp_bits > report.otp_bits


def test_entropy_report_values():
    report = entropy_report(8, 16)
    assert report.otp_bits == 128
    assert abs(report.qpp_bits - 16 * log2_factorial(256)) < 1e-9
    assert report.qpp_bits == pytest.approx(26944, abs=1)
    one = entropy_report(1, 1)
    assert one.qpp_bits == one.otp_bits == 1


@pytest.mark.parametrize("n,count", [(1, 2), (2, 24), (3, 40320)])
def test_enumerate_group(n, count):
    tables = list(enumerate_group(n))
    assert len(tables) == count
    assert len(set(tables)) == count
    maps = [t.tolist() for t in tables]
    assert maps == sorted(maps)


def test_enumerate_group_guard():
    with pytest.raises(EnumerationLimitError):
        next(enumerate_group(4))


def test_count_mappings():
    assert count_mappings(3, 3, 5) == 5040 == count_maps_to(8, 3, 5)
    assert count_mappings(1, 0, 1) == 1
    with pytest.raises(EnumerationLimitError):
        count_mappings(4, 0, 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_degeneracy_identity(n):
    counts = mapping_count_matrix(n)
    size = 2**n
    assert (counts == math.factorial(size - 1)).all()
    assert (counts.sum(axis=1) == math.factorial(size)).all()
    if n < 3:
        for m in range(size):
            for c in range(size):
                assert counts[m, c] == count_mappings(n, m, c)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_xor_subgroup_report(n):
    report = xor_subgroup_report(n)
    assert report.passed
    assert report.size == 2**n
    assert report.commuting_pairs == 2**n * (2**n - 1) // 2
    if n == 8:
        assert report.commuting_pairs == 32640


@pytest.mark.parametrize("n,expected", [(1, (4, 4)), (2, (120, 576))])
def test_commuting_pairs_exact_matches_oracle(n, expected):
    assert commuting_pairs_exact(n) == commuting_ordered_pairs(2**n) == expected


def test_commuting_pairs_class_equation():
    # Ordered commuting pairs = |G| * (number of conjugacy classes); S_4 has 5 classes.
    assert commuting_pairs_exact(2)[0] == 24 * 5


def test_commuting_fraction_modes():
    assert commuting_fraction(1, "exact") == 1.0
    assert commuting_fraction(2, "exact") == pytest.approx(120 / 576)
    with pytest.raises(EnumerationLimitError):
        commuting_fraction(3, "exact")
    with pytest.raises(ValueError):
        commuting_fraction(2, "guess")


def test_commuting_fraction_sampled_s4_agrees_with_exact(stat_seed):
    estimate = commuting_fraction(2, "sampled", 200_000, seed=stat_seed)
    # Binomial standard error is about 0.0009; allow 5 sigma.
    assert abs(estimate - 120 / 576) < 0.0046


def test_commuting_fraction_sampled_s8(stat_seed):
    # S_8 has 22 conjugacy classes, so the true fraction is 22/40320.
    fraction = commuting_fraction(3, "sampled", 10**6, seed=stat_seed)
    assert fraction < 0.01


@pytest.mark.parametrize("dof", sorted(CHI2_CRITICAL_0001))
def test_embedded_critical_values(dof):
    assert CHI2_CRITICAL_0001[dof] == pytest.approx(stats.chi2.ppf(0.999, dof), abs=5e-4)


def test_chi_square_statistic_matches_scipy():
    observed = [12, 9, 11, 8, 10, 13, 7, 10]
    assert analysis.chi_square_statistic(observed) == pytest.approx(
        stats.chisquare(observed).statistic
    )


def test_uniformity_unbiased_passes(stat_seed):
    result = uniformity_chi_square(3, 3, 10**5, seed=stat_seed)
    assert result.dof == 7 and result.critical == 24.322
    assert sum(result.histogram) == 10**5
    assert result.passed, result


def test_uniformity_n1_is_even():
    result = uniformity_chi_square(1, 0, 10**4, seed=3)
    assert result.histogram[0] == pytest.approx(5000, abs=300)
    assert result.passed


def test_uniformity_paper_shuffle_is_reported():
    result = uniformity_chi_square(3, 3, 10**4, seed=0, generator="paper")
    assert result.statistic >= 0
    assert sum(result.histogram) == 10**4


def test_uniformity_sample_guard():
    with pytest.raises(ValueError):
        uniformity_chi_square(3, 3, 799)


def test_secrecy_report():
    report = analysis.secrecy_report(3, samples=10**4, seed=1, commute_samples=10**4)
    assert report.group_order == 40320
    assert report.degeneracy_per_pair == 5040
    assert report.degeneracy_per_pair * 2**3 == report.group_order
    assert report.degeneracy_uniform
    assert 0 <= report.commuting_pair_fraction <= 1
    small = analysis.secrecy_report(2, samples=10**4, seed=1)
    assert small.commuting_pairs == (120, 576)
    big = analysis.secrecy_report(4, samples=1600, seed=1, commute_samples=1000)
    assert big.group_order is None and big.degeneracy_per_pair is None
    assert big.log2_group_order == pytest.approx(math.log2(math.factorial(16)))
