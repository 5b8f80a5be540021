#!/usr/bin/env python3
"""
Poset Core Test - construction, Hasse diagrams, trees and named posets
"""

import json

import pytest

from errors import BadParam, CycleError, NotMonotoneTree, PosetIndexError
from poset_core import (Poset, TreeKind, antichain, butterfly, chain, classify_tree,
                        complete_multipartite, diamond, dualize, hasse, height,
                        height_two_trees, is_connected, is_isomorphic, leaf_ranks,
                        m_values, make_poset, monotone_trees, parse_poset, tree_root, vee,
                        wedge, x_monotone_formula)


def test_relations_are_closed_transitively():
    P = make_poset(3, [(0, 1), (1, 2)])
    assert P.lt(0, 2)
    assert not P.lt(2, 0)
    assert P.relation_count == 3


def test_cycles_and_bad_indices_are_rejected():
    with pytest.raises(CycleError):
        make_poset(2, [(0, 1), (1, 0)])
    with pytest.raises(PosetIndexError):
        make_poset(2, [(0, 5)])
    with pytest.raises(IndexError):
        make_poset(2, [(-1, 0)])
    with pytest.raises(BadParam):
        make_poset(0, [])


def test_hasse_drops_implied_relations():
    assert hasse(chain(3)).cover_edges == ((0, 1), (1, 2))
    assert len(hasse(diamond(2)).cover_edges) == 4
    assert len(hasse(complete_multipartite(2, 1, 2)).cover_edges) == 4


def test_height_and_connectivity():
    assert height(chain(4)) == 4
    assert height(antichain(3)) == 1
    assert height(diamond(3)) == 3
    assert is_connected(butterfly())
    assert not is_connected(antichain(2))


@pytest.mark.parametrize("P, kind", [
    (chain(1), TreeKind.UPWARD),
    (chain(3), TreeKind.UPWARD),
    (vee(3), TreeKind.UPWARD),
    (wedge(3), TreeKind.DOWNWARD),
    (complete_multipartite(2, 1, 2), TreeKind.TREE),
    (butterfly(), TreeKind.NOT_TREE),
    (diamond(2), TreeKind.NOT_TREE),
    (antichain(2), TreeKind.NOT_TREE),
])
def test_classify_tree(P, kind):
    assert classify_tree(P) is kind


def test_tree_root():
    assert tree_root(vee(2)) == 0
    assert tree_root(wedge(2)) == 2
    with pytest.raises(NotMonotoneTree):
        tree_root(butterfly())


def test_leaf_ranks_and_x_formula():
    # 0 < 1 < 2 and 0 < 3: leaves at ranks 3 and 2
    T = make_poset(4, [(0, 1), (1, 2), (0, 3)])
    assert leaf_ranks(T) == [(2, 3), (3, 2)]
    assert x_monotone_formula(T) == 4
    assert x_monotone_formula(chain(5)) == 4
    assert x_monotone_formula(vee(2)) == 2
    assert x_monotone_formula(chain(1)) == 0


def test_dual_and_isomorphism():
    assert is_isomorphic(dualize(vee(2)), wedge(2))
    assert is_isomorphic(dualize(diamond(3)), diamond(3))
    assert not is_isomorphic(chain(3), antichain(3))
    assert not is_isomorphic(vee(2), wedge(2))


def test_named_posets_parse():
    assert parse_poset("chain:3") == chain(3)
    assert parse_poset("K:1,2,1") == diamond(2)
    assert parse_poset("butterfly") == complete_multipartite(2, 2)
    assert parse_poset(' {"size": 2, "lt": [[0, 1]]} ') == chain(2)
    assert str(parse_poset("vee:2")) == "vee:2"


def test_parse_rejects_unknown_names():
    with pytest.raises(BadParam):
        parse_poset("lattice:3")
    with pytest.raises(BadParam):
        parse_poset("chain:x")
    with pytest.raises(BadParam):
        parse_poset("diamond:1")


def test_poset_from_file(tmp_path):
    path = tmp_path / "d3.json"
    path.write_text(json.dumps(diamond(3).to_json()))
    assert parse_poset(f"@{path}") == diamond(3)
    assert Poset.from_json(diamond(3).to_json()) == diamond(3)


@pytest.mark.parametrize("s, m_s, m_star", [(2, 2, 2), (3, 3, 3), (4, 3, 4), (6, 3, 4), (10, 4, 5)])
def test_m_values(s, m_s, m_star):
    values = m_values(s)
    assert values.m_s == m_s
    assert values.m_star_s == m_star


def test_m_values_window():
    assert m_values(3).window == (3, 4)
    assert m_values(3).in_window
    assert m_values(4).in_window
    assert not m_values(2).in_window
    assert not m_values(6).in_window


@pytest.mark.parametrize("k, expected", [(1, 1), (2, 1), (3, 3), (4, 7), (5, 17)])
def test_monotone_tree_counts(k, expected):
    """Rooted trees on k nodes, both orientations, chains counted once"""
    trees = monotone_trees(k)
    assert len(trees) == expected
    assert all(classify_tree(T).monotone for T in trees)


@pytest.mark.parametrize("k, expected", [(2, 1), (3, 2), (4, 3)])
def test_height_two_tree_counts(k, expected):
    trees = height_two_trees(k)
    assert len(trees) == expected
    assert all(height(T) == 2 and classify_tree(T) is not TreeKind.NOT_TREE for T in trees)
