#!/usr/bin/env python3
"""
Tree Counting Test - certified bounds against exact counts
"""

from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from embedding_engine import count_copies
from errors import BadParam, BadTree, ConditionFailed
from poset_core import butterfly, chain, complete_multipartite, height_two_trees, vee, wedge
from subset_lattice import level_family, middle_levels
from tree_counting import (LayeredWitness, as_tree_digraph, build_layered_witness,
                           check_conditions, complete_bipartite_digraph, greedy_cut,
                           height_two_tree_run, layered_witness_check, tree_count_lemma)


def test_trees_with_directed_paths_are_refused():
    with pytest.raises(BadTree):
        as_tree_digraph(chain(3))
    with pytest.raises(BadTree):
        as_tree_digraph(nx.DiGraph([(0, 1), (2, 3)]))
    assert as_tree_digraph(vee(2)).number_of_edges() == 2


def test_greedy_cut_orients_more_edges_forward():
    graph = nx.gnp_random_graph(20, 0.3, seed=2, directed=True)
    side_a, side_b = greedy_cut(graph)
    assert side_a | side_b == set(graph.nodes)
    assert not side_a & side_b
    forward = sum(1 for u, v in graph.edges if u in side_a and v in side_b)
    backward = sum(1 for u, v in graph.edges if u in side_b and v in side_a)
    assert forward >= backward


def test_single_edge_in_complete_bipartite_digraph():
    digraph = complete_bipartite_digraph(8, 8)
    assert isinstance(digraph, nx.DiGraph)
    assert digraph.number_of_edges() == 64
    assert all(u < 8 <= v for u, v in digraph.edges)
    run = tree_count_lemma(digraph, chain(2))
    assert run.exact_embeddings == 64
    assert 0 < run.certified_embeddings <= 64


@pytest.mark.parametrize("seed", range(12))
def test_certified_bound_never_exceeds_exact_count(seed):
    trees = [chain(2), vee(2), wedge(2), vee(3)] + height_two_trees(4) + height_two_trees(5)
    digraph = nx.gnp_random_graph(14 + seed, 0.35, seed=seed, directed=True)
    for T in trees:
        run = tree_count_lemma(digraph, T)
        assert run.exact_embeddings is not None
        assert run.certified_embeddings <= run.exact_embeddings
        assert run.certified_copies <= run.exact_copies


@pytest.mark.slow
@pytest.mark.parametrize("batch", range(10))
def test_certified_bound_on_a_thousand_random_instances(batch):
    rng = np.random.default_rng(batch)
    trees = [T for k in (2, 3, 4, 5) for T in height_two_trees(k)]
    for _ in range(100):
        T = trees[rng.integers(len(trees))]
        m = int(rng.integers(2, 257))
        p = min(1.0, rng.uniform(1, 4) / (m - 1))
        digraph = nx.gnp_random_graph(m, p, seed=int(rng.integers(1 << 30)), directed=True)
        run = tree_count_lemma(digraph, T)
        assert run.exact_embeddings is not None
        assert run.certified_embeddings <= run.exact_embeddings


def test_greedy_embedding_uses_real_edges():
    digraph = complete_bipartite_digraph(6, 6)
    run = tree_count_lemma(digraph, vee(2))
    if run.greedy_embedding is not None:
        image = run.greedy_embedding
        assert len(set(image.values())) == 3
        assert digraph.has_edge(image[0], image[1])
        assert digraph.has_edge(image[0], image[2])


def test_height_two_route_counts_copies_exactly():
    F = middle_levels(5, 2)
    for T in (vee(2), wedge(2), vee(3)):
        run = height_two_tree_run(F, T)
        assert run.exact_copies == count_copies(T, F).copies
        assert run.certified_copies <= run.exact_copies
    with pytest.raises(BadTree):
        height_two_tree_run(F, chain(3))
    with pytest.raises(BadTree):
        height_two_tree_run(F, complete_multipartite(2, 2))


def test_layered_witness_on_three_middle_levels():
    F = middle_levels(8, 3)
    W = build_layered_witness(F, 3, Fraction(1, 6))
    assert [len(layer) for layer in W.families] == [182, 126, 56]
    ok, bound = layered_witness_check(W, chain(3))
    assert ok
    assert bound == 1120 // 6
    assert bound <= count_copies(chain(3), F).copies


def test_layered_witness_conditions():
    with pytest.raises(BadParam):
        check_conditions(LayeredWitness([level_family(4, [1]), level_family(4, [2])],
                                        Fraction(1), Fraction(1), Fraction(1)))
    with pytest.raises(ConditionFailed) as caught:
        check_conditions(LayeredWitness([middle_levels(4, 1)], Fraction(2), Fraction(1), Fraction(1)))
    assert caught.value.condition == "i"


def test_layered_check_needs_matching_monotone_tree():
    W = build_layered_witness(middle_levels(8, 3), 3, Fraction(1, 6))
    with pytest.raises(BadTree):
        layered_witness_check(W, butterfly())
    with pytest.raises(BadParam):
        layered_witness_check(W, vee(2))
