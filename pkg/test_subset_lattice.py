#!/usr/bin/env python3
"""
Subset Lattice Test - set families, levels, Lubell values and chain counts
"""

import json
from fractions import Fraction
from math import comb, factorial

import pytest

from errors import BadParam, GroundTooLarge
from subset_lattice import (SetFamily, centered_family, check_binom_tail_bound,
                            binom_tail_bound_holds, check_ground, code_to_set,
                            comparability_digraph, comparable_pair_count, count_k_chains, level_family, lubell,
                            middle_level_range, middle_levels, parse_family, popcounts,
                            set_to_code, walk_all_families)


def test_codes_and_sets():
    assert set_to_code([1, 3]) == 5
    assert code_to_set(5) == [1, 3]
    assert code_to_set(0) == []
    with pytest.raises(BadParam):
        set_to_code([0, 2])


def test_popcounts_are_read_only():
    sizes = popcounts(3)
    assert list(sizes) == [0, 1, 1, 2, 1, 2, 2, 3]
    with pytest.raises(ValueError):
        sizes[0] = 5


def test_ground_guard():
    with pytest.raises(BadParam):
        check_ground(0)
    with pytest.raises(GroundTooLarge):
        check_ground(21)


def test_family_construction():
    F = SetFamily.from_sets(3, [[1], [1, 2]])
    assert list(F.codes) == [1, 3]
    assert F.sets() == [[1], [1, 2]]
    assert 3 in F and 2 not in F and 99 not in F
    assert len(SetFamily.full(3)) == 8
    assert len(SetFamily.empty(3)) == 0
    with pytest.raises(BadParam):
        SetFamily.from_codes(3, [8])
    with pytest.raises(BadParam):
        SetFamily.from_sets(2, [[3]])


def test_family_is_immutable():
    F = SetFamily.from_codes(2, [1])
    with pytest.raises(ValueError):
        F.membership[0] = True
    G = F.with_codes([2])
    assert list(F.codes) == [1]
    assert list(G.codes) == [1, 2]


def test_set_algebra():
    A = SetFamily.from_codes(3, [0, 1, 2])
    B = SetFamily.from_codes(3, [2, 3])
    assert list(A.union(B).codes) == [0, 1, 2, 3]
    assert list(A.intersection(B).codes) == [2]
    assert list(A.difference(B).codes) == [0, 1]
    assert A.intersection(B).issubfamily(A)
    assert not A.issubfamily(B)
    with pytest.raises(BadParam):
        A.union(SetFamily.empty(2))


def test_dual_complements_members():
    F = SetFamily.from_codes(3, [0, 1])
    assert list(F.dual().codes) == [6, 7]


def test_level_counts_and_restriction():
    F = SetFamily.full(4)
    assert F.level_counts() == {0: 1, 1: 4, 2: 6, 3: 4, 4: 1}
    assert len(F.restrict_levels([2])) == 6


def test_bytes_and_json_codecs():
    F = middle_levels(5, 2)
    assert SetFamily.from_bytes(F.to_bytes()) == F
    assert SetFamily.from_json(F.to_json()) == F
    assert SetFamily.from_codes(3, [6, 1]).to_json() == {"n": 3, "codes": [1, 6]}
    assert SetFamily.from_json(F.to_json(use_codes=False)) == F
    assert SetFamily.from_json({"n": 3, "codes": [1, 6]}) == SetFamily.from_sets(3, [[1], [2, 3]])
    with pytest.raises(BadParam):
        SetFamily.from_bytes(bytes([3, 0, 0]))


@pytest.mark.parametrize("n, m, levels", [
    (4, 2, [1, 2]),
    (5, 2, [2, 3]),
    (4, 3, [1, 2, 3]),
    (4, 5, [0, 1, 2, 3, 4]),
    (5, 1, [2]),
])
def test_middle_level_range_prefers_lower_window(n, m, levels):
    assert list(middle_level_range(n, m)) == levels


def test_middle_level_range_bounds():
    with pytest.raises(BadParam):
        middle_level_range(4, 0)
    with pytest.raises(BadParam):
        middle_level_range(4, 6)
    assert len(middle_levels(4, 2)) == 10


def test_centered_family():
    assert set(centered_family(4, 7).codes) == {1, 3, 5, 6, 9, 10, 12}
    assert set(centered_family(3, 4).codes) == {1, 2, 3, 4}
    assert len(centered_family(3, 8)) == 8
    with pytest.raises(BadParam):
        centered_family(3, 9)


def test_lubell():
    assert lubell(SetFamily.full(3)) == 4
    assert lubell(level_family(4, [2])) == 1
    assert lubell(middle_levels(4, 2)) == 2
    assert lubell(SetFamily.from_codes(3, [1])) == Fraction(1, 3)


def test_comparable_pairs_and_chains():
    full2 = SetFamily.full(2)
    assert comparable_pair_count(full2) == 5
    assert count_k_chains(full2, 1) == 4
    assert count_k_chains(full2, 2) == 5
    assert count_k_chains(full2, 3) == 2
    assert count_k_chains(SetFamily.full(3), 4) == factorial(3)
    assert count_k_chains(level_family(4, [2]), 2) == 0


def test_comparability_digraph():
    assert len(comparability_digraph(SetFamily.full(2))) == 5
    assert comparability_digraph(level_family(4, [2])) == []
    chain_family = SetFamily.from_codes(2, [0, 1, 3])
    assert set(comparability_digraph(chain_family)) == {(0, 1), (0, 3), (1, 3)}


def test_walk_visits_every_family_once():
    seen = set()
    for code, added, members in walk_all_families(2):
        seen.add(frozenset(members))
    assert len(seen) == 16


def test_binomial_tail_bound():
    assert check_binom_tail_bound(200) == []
    assert binom_tail_bound_holds(10, 5)
    with pytest.raises(BadParam):
        binom_tail_bound_holds(10, 0)
    with pytest.raises(BadParam):
        binom_tail_bound_holds(10, 6)


def test_parse_family():
    assert parse_family("middle:4:2") == middle_levels(4, 2)
    assert len(parse_family("levels:3:0,3")) == 2
    assert parse_family("full:2") == SetFamily.full(2)
    assert len(parse_family("centered:4:7")) == 7
    assert parse_family('{"n": 2, "sets": [[1]]}') == SetFamily.from_codes(2, [1])
    assert len(parse_family("levels:4:2")) == comb(4, 2)
    with pytest.raises(BadParam):
        parse_family("pyramid:3")
    with pytest.raises(BadParam):
        parse_family("middle:x:2")


def test_parse_family_from_files(tmp_path):
    F = middle_levels(4, 2)
    (tmp_path / "f.json").write_text(json.dumps(F.to_json()))
    (tmp_path / "f.bin").write_bytes(F.to_bytes())
    assert parse_family(f"@{tmp_path / 'f.json'}") == F
    assert parse_family(f"@{tmp_path / 'f.bin'}") == F
