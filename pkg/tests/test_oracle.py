import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from rom_mis.geometry import HyperRect, intersects, is_independent_set
from rom_mis.greedy import greedy_run
from rom_mis.oracle import (brute_force_mis, exact_max_gap_distribution, gap_bound,
                            hypergeometric_tail_report, max_gap, random_subset,
                            sample_hypergeometric, sample_hypergeometric_many, sample_max_gap,
                            sample_max_gaps, tail_thresholds)


def naive_mis(objs):
    # plain subset enumeration, largest first
    for r in range(len(objs), 0, -1):
        for sub in combinations(objs, r):
            if is_independent_set(sub):
                return r
    return 0


def test_brute_force_examples():
    mutual = [HyperRect([0, 0], [3, 3]), HyperRect([1, 1], [4, 4]), HyperRect([2, 2], [5, 5])]
    assert brute_force_mis(mutual)[0] == 1
    disjoint = [HyperRect([3 * i, 0], [3 * i + 1, 1]) for i in range(5)]
    assert brute_force_mis(disjoint)[0] == 5
    assert brute_force_mis([]) == (0, [])


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_mis([HyperRect.interval(0, 1)] * 25)


def test_brute_force_at_size_limit():
    rng = np.random.default_rng(1)
    objs = [HyperRect([int(a), int(b)], [int(a) + 3, int(b) + 3]) for a, b in rng.integers(0, 12, (24, 2))]
    size, wit = brute_force_mis(objs)
    assert is_independent_set(wit) and len(wit) == size


boxes = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 4), st.integers(0, 12), st.integers(0, 4)),
                 max_size=10)


@settings(max_examples=120, deadline=None)
@given(boxes)
def test_brute_force_matches_enumeration(rows):
    objs = [HyperRect([a, c], [a + b, c + e]) for a, b, c, e in rows]
    size, witness = brute_force_mis(objs)
    assert size == naive_mis(objs)
    assert is_independent_set(witness) and len(witness) == size
    assert size >= len(greedy_run(objs))


def test_hypergeometric_degenerate_cases():
    rng = np.random.default_rng(0)
    assert all(sample_hypergeometric(20, 0, 7, rng) == 0 for _ in range(50))
    assert all(sample_hypergeometric(20, 6, 20, rng) == 6 for _ in range(50))
    with pytest.raises(ValueError):
        sample_hypergeometric(5, 6, 2, rng)
    with pytest.raises(ValueError):
        sample_hypergeometric(5, 2, 6, rng)


def test_hypergeometric_mean():
    rng = np.random.default_rng(1)
    N, M, n = 50, 20, 15
    xs = [sample_hypergeometric(N, M, n, rng) for _ in range(100_000)]
    mean = n * M / N
    var = n * M / N * (1 - M / N) * (N - n) / (N - 1)
    assert abs(np.mean(xs) - mean) <= 3 * math.sqrt(var / len(xs))


def test_fisher_yates_sampler_matches_pmf():
    rng = np.random.default_rng(2)
    N, M, n, draws = 30, 12, 10, 40_000
    xs = np.array([sample_hypergeometric(N, M, n, rng) for _ in range(draws)])
    ks = np.arange(0, n + 1)
    expected = stats.hypergeom(N, M, n).pmf(ks) * draws
    observed = np.bincount(xs, minlength=n + 1)
    keep = expected > 5
    chi2 = (((observed[keep] - expected[keep]) ** 2) / expected[keep]).sum()
    assert chi2 < stats.chi2(keep.sum() - 1).ppf(0.999)


def test_numpy_sampler_matches_pmf():
    rng = np.random.default_rng(3)
    N, M, n, draws = 1000, 100, 500, 100_000
    xs = sample_hypergeometric_many(N, M, n, draws, rng)
    ks = np.arange(0, n + 1)
    expected = stats.hypergeom(N, M, n).pmf(ks) * draws
    observed = np.bincount(xs, minlength=n + 1)
    keep = expected > 5
    chi2 = (((observed[keep] - expected[keep]) ** 2) / expected[keep]).sum()
    assert chi2 < stats.chi2(keep.sum() - 1).ppf(0.999)


def test_tail_thresholds_exact():
    # pn = 500, delta = 0.2: X >= 600 and X <= 400
    assert tail_thresholds(10_000, 1_000, 5_000, 0.2) == (600, 400)
    assert tail_thresholds(10, 3, 5, "0.1") == (2, 1)


def test_tail_report_small():
    rep = hypergeometric_tail_report(200, 50, 80, 0.5, 20_000, np.random.default_rng(4))
    assert 0 <= rep.empirical_upper_tail <= 1 and 0 <= rep.empirical_lower_tail <= 1
    assert rep.ok
    assert rep.bound_upper == pytest.approx(math.exp(-0.25 * 20 / 3))


def test_max_gap_convention():
    assert max_gap([1], 2) == 1
    assert max_gap([2], 2) == 1
    assert max_gap([2, 3], 4) == 1
    assert max_gap([1, 4], 4) == 3
    assert max_gap([1, 2], 4) == 2


def test_exact_gap_distribution_small_cases():
    assert exact_max_gap_distribution(2) == {1: Fraction(1)}
    dist4 = exact_max_gap_distribution(4)
    assert sum(dist4.values()) == 1
    # the six 2-subsets of [4]: {1,4} leaves gap 3, every other subset leaves gap <= 2
    assert dist4 == {1: Fraction(1, 6), 2: Fraction(4, 6), 3: Fraction(1, 6)}


@pytest.mark.parametrize("n", range(2, 13))
def test_gap_bound_holds_exhaustively(n):
    dist = exact_max_gap_distribution(n)
    assert max(dist) <= gap_bound(n)


def test_sampled_gaps_match_exact_law():
    rng = np.random.default_rng(5)
    for n in (5, 8, 12):
        exact = exact_max_gap_distribution(n)
        draws = 20_000
        emp = np.bincount(sample_max_gaps(n, draws, rng), minlength=n + 1) / draws
        tv = 0.5 * sum(abs(emp[g] - float(exact.get(g, 0))) for g in range(n + 1))
        assert tv < 0.02
        single = [sample_max_gap(n, rng) for _ in range(4000)]
        emp1 = np.bincount(single, minlength=n + 1) / len(single)
        assert 0.5 * sum(abs(emp1[g] - float(exact.get(g, 0))) for g in range(n + 1)) < 0.04


def test_random_subset_uniform_positions():
    rng = np.random.default_rng(6)
    counts = np.zeros(6)
    for _ in range(30_000):
        counts[random_subset(6, 3, rng) - 1] += 1
    assert np.allclose(counts / 30_000, 0.5, atol=0.02)


def test_brute_force_independent_of_greedy_order():
    rng = np.random.default_rng(7)
    objs = [HyperRect([int(a)], [int(a) + int(b)]) for a, b in zip(rng.integers(0, 30, 16), rng.integers(0, 6, 16))]
    size = brute_force_mis(objs)[0]
    for _ in range(10):
        order = [objs[i] for i in rng.permutation(16)]
        assert size == brute_force_mis(order)[0]
        out = greedy_run(order)
        assert len(out) <= size
        assert all(any(intersects(h, g) for g in out) for h in order)
