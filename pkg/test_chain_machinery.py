#!/usr/bin/env python3
"""
Chain Machinery Test - min-max chain masses, interval statistics and pair-count lemmas
"""

from math import factorial

import numpy as np
import pytest

from chain_machinery import (antichain_cap_check, avoiding_paths, chain_pair_count,
                             diamond_lb, exhaustive_lemma_check, interval_antichain,
                             interval_counts, minmax_stats)
from embedding_engine import count_copies
from errors import BadParam, TooLarge
from poset_core import diamond
from subset_lattice import SetFamily, level_family, middle_levels, walk_all_families


def test_masses_on_the_full_square():
    stats = minmax_stats(SetFamily.full(2))
    assert stats.mass(0, 3) == 2
    assert stats.mass(0, 1) == 0
    assert stats.mass(1, 1) == 0
    assert stats.empty_mass == 0
    assert stats.total_mass() == 2


def test_masses_for_a_single_set():
    stats = minmax_stats(SetFamily.from_codes(2, [1]))
    assert stats.mass(1, 1) == 1
    assert stats.empty_mass == 1


@pytest.mark.parametrize("F", [middle_levels(5, 2), level_family(4, [1, 3]), SetFamily.full(3)],
                         ids=["middle", "gapped", "full"])
def test_total_mass_is_every_maximal_chain(F):
    assert minmax_stats(F, antichains=False).total_mass() == factorial(F.ground_n)


def test_path_counting_matches_walking_every_chain():
    rng = np.random.default_rng(4)
    for _ in range(5):
        F = SetFamily(5, rng.random(32) < 0.3)
        dp = minmax_stats(F, "dp", antichains=False)
        walk = minmax_stats(F, "walk", antichains=False)
        assert [p.mass for p in dp.pairs] == [p.mass for p in walk.pairs]
        assert dp.empty_mass == walk.empty_mass


def test_sampled_masses_are_scaled_to_n_factorial():
    stats = minmax_stats(middle_levels(6, 2), "sample", samples=500, seed=9)
    assert not stats.exact
    assert stats.samples == 500
    assert stats.total_mass() == factorial(6)


def test_method_checks():
    with pytest.raises(BadParam):
        minmax_stats(SetFamily.full(2), "guess")
    with pytest.raises(BadParam):
        minmax_stats(SetFamily.full(2), "sample", samples=0)
    with pytest.raises(TooLarge):
        minmax_stats(SetFamily.empty(11), "walk")


def test_interval_statistics():
    full2 = SetFamily.full(2)
    counts = interval_counts(full2)
    assert counts[(0, 3)] == 2
    assert counts[(0, 1)] == 0
    assert counts[(0, 0)] == 0
    assert interval_antichain(full2, 0, 3) == 2
    assert interval_antichain(full2, 1, 3) == 1


def test_interval_antichain_fits_inside_the_interval():
    rng = np.random.default_rng(17)
    for _ in range(10):
        F = SetFamily.from_codes(5, np.flatnonzero(rng.random(32) < 0.5))
        for (A, C), b in interval_counts(F).items():
            a = interval_antichain(F, A, C)
            # A and C are comparable to everything in [A, C]
            assert 1 <= a <= max(1, b) <= b + 2


def test_avoiding_paths_without_blocks():
    paths = avoiding_paths(4, np.zeros(16, dtype=bool))
    assert paths[15] == factorial(4)
    assert paths[0b0011] == 2


def test_diamond_lower_bound_values():
    assert diamond_lb(SetFamily.full(3), 2) == 21
    assert diamond_lb(middle_levels(4, 2), 2) == 0
    with pytest.raises(BadParam):
        diamond_lb(SetFamily.full(3), 1)


@pytest.mark.parametrize("s", [2, 3])
def test_diamond_identity_on_three_elements(s):
    """Copies of a diamond are counted exactly by the interval sum"""
    D = diamond(s)
    for _, _, members in walk_all_families(3):
        F = SetFamily.from_codes(3, members)
        assert count_copies(D, F).copies == diamond_lb(F, s)


@pytest.mark.parametrize("s", [2, 3])
def test_diamond_identity_on_random_four_element_families(s):
    rng = np.random.default_rng(s)
    D = diamond(s)
    for _ in range(150):
        F = SetFamily(4, rng.random(16) < rng.uniform(0.2, 0.9))
        assert count_copies(D, F).copies == diamond_lb(F, s)


@pytest.mark.slow
@pytest.mark.parametrize("s", [2, 3])
def test_diamond_identity_on_every_four_element_family(s):
    D = diamond(s)
    for _, _, members in walk_all_families(4):
        F = SetFamily.from_codes(4, members)
        assert count_copies(D, F).copies == diamond_lb(F, s)


def test_chain_pair_counts():
    assert chain_pair_count(SetFamily.full(3)) == 4 * factorial(3)
    assert chain_pair_count(level_family(3, [1])) == 6
    ok, pairs = antichain_cap_check(level_family(4, [2]), 3)
    assert not ok
    assert pairs == 6 * 2 * 2


def test_pair_count_lemmas_on_three_elements():
    report = exhaustive_lemma_check(3)
    assert report.families == 256
    assert report.ok


@pytest.mark.slow
def test_pair_count_lemmas_on_four_elements():
    report = exhaustive_lemma_check(4)
    assert report.families == 1 << 16
    assert report.ok
