#!/usr/bin/env python3
"""
Tree Counting
Constructive lower bounds for the number of copies of a tree: the cut and
prune pipeline for trees without directed 2-paths in a digraph, and the
layered embedding of monotone trees into a chain of nested families.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from errors import BadParam, BadTree, ConditionFailed
from lab_config import limit
from poset_core import Poset, TreeKind, classify_tree, dualize, hasse_graph, height, leaf_ranks, tree_root
from subset_lattice import SetFamily, comparability_digraph, strict_supersets_in

logger = logging.getLogger(__name__)


# --- digraph pipeline -------------------------------------------------------

@dataclass
class TreeCountingRun:
    vertices: int
    edges: int
    tree_edges: int
    side_a: List
    side_b: List
    cut_size: int
    pruned: List[nx.DiGraph]
    certified_embeddings: int
    automorphisms: int
    exact_embeddings: Optional[int]
    greedy_embedding: Optional[Dict] = None

    @property
    def certified_copies(self) -> int:
        return self.certified_embeddings // self.automorphisms

    @property
    def exact_copies(self) -> Optional[int]:
        if self.exact_embeddings is None:
            return None
        return self.exact_embeddings // self.automorphisms

    def to_json(self) -> Dict:
        return {"vertices": self.vertices, "edges": self.edges, "tree_edges": self.tree_edges,
                "cut_size": self.cut_size, "retained": self.pruned[0].number_of_edges(),
                "pruned_edges": [H.number_of_edges() for H in self.pruned],
                "certified_embeddings": str(self.certified_embeddings),
                "certified_copies": str(self.certified_copies),
                "exact_embeddings": None if self.exact_embeddings is None else str(self.exact_embeddings),
                "exact_copies": None if self.exact_copies is None else str(self.exact_copies)}


def as_tree_digraph(T) -> nx.DiGraph:
    """Accept a Poset (its Hasse diagram) or a DiGraph; require a tree with no directed 2-path."""
    graph = hasse_graph(T, directed=True) if isinstance(T, Poset) else nx.DiGraph(T)
    if graph.number_of_edges() == 0:
        raise BadTree("tree needs at least one edge")
    if not nx.is_tree(graph.to_undirected()):
        raise BadTree("underlying graph is not a tree")
    for v in graph.nodes:
        if graph.in_degree(v) and graph.out_degree(v):
            raise BadTree(f"vertex {v} is the middle of a directed 2-path")
    return graph


def complete_bipartite_digraph(left: int, right: int) -> nx.DiGraph:
    """Every edge from 0..left-1 to left..left+right-1."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(left + right))
    graph.add_edges_from((u, left + v) for u in range(left) for v in range(right))
    return graph


def greedy_cut(graph: nx.DiGraph) -> Tuple[set, set]:
    """Place vertices one by one on the side that cuts more edges to placed neighbours."""
    side_a, side_b = set(), set()
    undirected = graph.to_undirected(as_view=True)
    for v in sorted(graph.nodes, key=repr):
        to_a = sum(1 for u in undirected.neighbors(v) if u in side_a)
        to_b = sum(1 for u in undirected.neighbors(v) if u in side_b)
        (side_b if to_a >= to_b else side_a).add(v)
    forward = sum(1 for u, v in graph.edges if u in side_a and v in side_b)
    backward = sum(1 for u, v in graph.edges if u in side_b and v in side_a)
    if backward > forward:
        side_a, side_b = side_b, side_a
    return side_a, side_b


def _edge_order(tree: nx.DiGraph) -> List[Tuple]:
    """Tree edges ordered so each one after the first touches an earlier edge."""
    start = min(tree.nodes, key=repr)
    undirected = tree.to_undirected(as_view=True)
    order = []
    for u, v in nx.bfs_edges(undirected, start):
        order.append((u, v) if tree.has_edge(u, v) else (v, u))
    return order


def _count_embeddings(tree: nx.DiGraph, host: nx.DiGraph) -> int:
    """Injective maps of tree into host preserving edge directions, by backtracking."""
    start = min(tree.nodes, key=repr)
    undirected = tree.to_undirected(as_view=True)
    steps = [(parent, child, tree.has_edge(parent, child))
             for parent, child in nx.bfs_edges(undirected, start)]
    image: Dict = {}
    used = set()

    def extend(k: int) -> int:
        if k == len(steps):
            return 1
        parent, child, outward = steps[k]
        anchor = image[parent]
        candidates = host.successors(anchor) if outward else host.predecessors(anchor)
        total = 0
        for w in candidates:
            if w in used:
                continue
            image[child] = w
            used.add(w)
            total += extend(k + 1)
            used.discard(w)
        image.pop(child, None)
        return total

    total = 0
    for v in host.nodes:
        image[start] = v
        used.add(v)
        total += extend(0)
        used.discard(v)
    return total


def tree_count_lemma(digraph: nx.DiGraph, T) -> TreeCountingRun:
    """
    Run the cut, prune and greedy-embed pipeline and certify a lower bound
    on embeddings of T into the digraph.

    Args:
        digraph: simple digraph
        T: tree without directed 2-paths (Poset of height <= 2 or DiGraph)

    Returns:
        TreeCountingRun with the certified bound and, for small digraphs,
        the exact embedding count
    """
    tree = as_tree_digraph(T)
    t = tree.number_of_edges()
    m = digraph.number_of_nodes()
    total_edges = digraph.number_of_edges()
    side_a, side_b = greedy_cut(digraph)
    H = nx.DiGraph()
    H.add_nodes_from(digraph.nodes)
    H.add_edges_from((u, v) for u, v in digraph.edges if u in side_a and v in side_b)
    cut_size = sum(1 for u, v in digraph.edges if (u in side_a) != (v in side_a))

    threshold = Fraction(total_edges, 8 * t * m) if m else Fraction(0)
    pruned = [H]
    for _ in range(t - 1):
        prev = pruned[-1]
        keep = [v for v in prev.nodes if prev.degree(v) > threshold]
        pruned.append(prev.subgraph(keep).copy())
    logger.info("Tree pipeline: %d edges, cut %d, retained %d, pruning threshold %s",
                total_edges, cut_size, H.number_of_edges(), threshold)

    order = _edge_order(tree)
    # step i (0-based) embeds order[i] into pruned[t-1-i]
    certified = pruned[t - 1].number_of_edges()
    embedded = set(order[0])
    for i in range(1, t):
        u, w = order[i]
        outward = u in embedded
        host, anchors = pruned[t - 1 - i], pruned[t - i]
        degrees = [host.out_degree(v) if outward else host.in_degree(v)
                   for v in anchors.nodes
                   if (anchors.out_degree(v) if outward else anchors.in_degree(v)) > 0]
        least = min(degrees) if degrees else 0
        certified *= max(0, least - i)
        embedded.update((u, w))

    automorphisms = sum(1 for _ in DiGraphMatcher(tree, tree).isomorphisms_iter())
    exact = None
    if m <= limit("tree_exact_max_vertices"):
        exact = _count_embeddings(tree, digraph)
    run = TreeCountingRun(m, total_edges, t, sorted(side_a, key=repr), sorted(side_b, key=repr),
                          cut_size, pruned, certified, automorphisms, exact,
                          _greedy_embedding(order, pruned))
    logger.debug("certified %d embeddings, exact %s", certified, exact)
    return run


def _greedy_embedding(order: List[Tuple], pruned: List[nx.DiGraph]) -> Optional[Dict]:
    t = len(order)
    image: Dict = {}
    for i, (u, w) in enumerate(order):
        host = pruned[t - 1 - i]
        used = set(image.values())
        if i == 0:
            edge = next(((a, b) for a, b in sorted(host.edges, key=repr)), None)
            if edge is None:
                return None
            image[u], image[w] = edge
            continue
        if u in image:
            choices = [b for b in host.successors(image[u]) if b not in used] if image[u] in host else []
            if not choices:
                return None
            image[w] = min(choices, key=repr)
        else:
            choices = [a for a in host.predecessors(image[w]) if a not in used] if image[w] in host else []
            if not choices:
                return None
            image[u] = min(choices, key=repr)
    return image


def comparability_graph(F: SetFamily) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(int(c) for c in F.codes)
    graph.add_edges_from(comparability_digraph(F))
    return graph


def height_two_tree_run(F: SetFamily, T: Poset) -> TreeCountingRun:
    """Count a height-2 tree poset in F through its comparability digraph."""
    if height(T) != 2:
        raise BadTree(f"{T} does not have height 2")
    return tree_count_lemma(comparability_graph(F), T)


# --- layered witnesses ------------------------------------------------------

@dataclass
class LayeredWitness:
    families: List[SetFamily]
    delta1: Fraction
    delta2: Fraction
    delta3: Fraction

    @property
    def layers(self) -> int:
        return len(self.families)

    def to_json(self) -> Dict:
        return {"layers": [f.to_json(use_codes=True) for f in self.families],
                "delta1": str(self.delta1), "delta2": str(self.delta2), "delta3": str(self.delta3)}


def _check_nested(families: Sequence[SetFamily]) -> None:
    for upper, lower in zip(families, families[1:]):
        if not lower.issubfamily(upper):
            raise BadParam("layers must be nested: F_1 ⊇ F_2 ⊇ ... ⊇ F_h")


def check_conditions(W: LayeredWitness) -> None:
    """Raise ConditionFailed for the first violated layer condition."""
    if not W.families:
        raise BadParam("a layered witness needs at least one layer")
    _check_nested(W.families)
    n = W.families[0].ground_n
    middle = comb(n, n // 2)
    top = W.families[-1]
    if not (W.delta1 > 0 and len(top) >= W.delta1 * middle):
        raise ConditionFailed("i", len(top),
                              f"last layer has {len(top)} sets, needs {W.delta1}·{middle} with δ1 > 0")
    base = W.families[0]
    for i in range(2, W.layers + 1):
        layer, previous = W.families[i - 1], W.families[i - 2]
        for code in layer:
            if len(strict_supersets_in(previous, code)) < W.delta2 * n:
                raise ConditionFailed("ii", code)
            if len(strict_supersets_in(base, code)) < W.delta3 * n ** (i - 1):
                raise ConditionFailed("iii", code)


def _chain_expectation(F: SetFamily, code: int) -> Fraction:
    """Expected number of members of F on a random maximal chain from `code` up to [n] (code counts)."""
    n = F.ground_n
    size = code.bit_count()
    total = Fraction(1)
    for other in strict_supersets_in(F, code):
        total += Fraction(1, comb(n - size, int(other).bit_count() - size))
    return total


def build_layered_witness(F: SetFamily, h: int, eps_prime: Fraction) -> LayeredWitness:
    """
    Nested layers from F: F_1 keeps sets within n^(2/3) of n/2, and F_i keeps
    the members of F_(i-1) whose expected count of F_(i-1) members on a random
    chain up to [n] is at least 1 + eps_prime. The deltas are the largest the
    layers satisfy.
    """
    if h < 1:
        raise BadParam("need at least one layer")
    eps_prime = Fraction(eps_prime)
    n = F.ground_n
    near = [c for c in F if abs(2 * c.bit_count() - n) ** 3 < 8 * n * n]
    layers = [SetFamily.from_codes(n, near)]
    for _ in range(2, h + 1):
        previous = layers[-1]
        layers.append(SetFamily.from_codes(
            n, [c for c in previous if _chain_expectation(previous, c) >= 1 + eps_prime]))

    middle = comb(n, n // 2)
    delta1 = Fraction(len(layers[-1]), middle)
    delta2 = delta3 = None
    for i in range(2, h + 1):
        for code in layers[i - 1]:
            d2 = Fraction(len(strict_supersets_in(layers[i - 2], code)), n)
            d3 = Fraction(len(strict_supersets_in(layers[0], code)), n ** (i - 1))
            delta2 = d2 if delta2 is None else min(delta2, d2)
            delta3 = d3 if delta3 is None else min(delta3, d3)
    logger.info("Layered witness sizes: %s", [len(layer) for layer in layers])
    return LayeredWitness(layers, delta1,
                          Fraction(1) if delta2 is None else delta2,
                          Fraction(1) if delta3 is None else delta3)


def layered_witness_check(W: LayeredWitness, T: Poset) -> Tuple[bool, int]:
    """
    Verify the layer conditions, then count the embeddings the rank-by-rank
    procedure generates and turn them into a copy lower bound.

    Returns:
        (True, floor(generated embeddings / |T|!))
    """
    kind = classify_tree(T)
    if not kind.monotone:
        raise BadTree(f"{T} is not a monotone tree")
    families = W.families
    if kind is TreeKind.DOWNWARD and T.size > 1:
        T = dualize(T)
        families = [f.dual() for f in families]
        W = LayeredWitness(families, W.delta1, W.delta2, W.delta3)
    h = height(T)
    if h != W.layers:
        raise BadParam(f"tree height {h} differs from the number of layers {W.layers}")
    check_conditions(W)

    root = tree_root(T)
    leaves = {leaf for leaf, _ in leaf_ranks(T)}
    graph = hasse_graph(T, directed=True)
    order = [root] + [child for _, child in nx.bfs_edges(graph, root)]
    parent = {child: p for p, child in nx.bfs_edges(graph, root)}
    depth = nx.single_source_shortest_path_length(graph, root)
    image: Dict[int, int] = {}
    used = set()

    def extend(k: int) -> int:
        if k == len(order):
            return 1
        x = order[k]
        if k == 0:
            candidates = families[h - 1].codes
        else:
            rank = depth[x] + 1
            target = families[0] if x in leaves else families[h - rank]
            candidates = strict_supersets_in(target, image[parent[x]])
        total = 0
        for c in candidates:
            c = int(c)
            if c in used:
                continue
            image[x] = c
            used.add(c)
            total += extend(k + 1)
            used.discard(c)
        image.pop(x, None)
        return total

    generated = extend(0)
    logger.info("Layered embedding generated %d embeddings of %s", generated, T)
    return True, generated // factorial(T.size)


def main():
    """Demo function"""
    from poset_core import chain, vee
    from subset_lattice import middle_levels

    logging.basicConfig(level=logging.INFO)
    digraph = complete_bipartite_digraph(8, 8)
    run = tree_count_lemma(digraph, chain(2))
    print(f"K(8,8), single edge: certified {run.certified_embeddings}, exact {run.exact_embeddings}")
    F = middle_levels(6, 2)
    run = height_two_tree_run(F, vee(2))
    print(f"vee:2 in middle_levels(6,2): {run.to_json()}")
    W = build_layered_witness(middle_levels(8, 3), 3, Fraction(1, 6))
    print(f"layered witness on middle_levels(8,3): {layered_witness_check(W, chain(3))}")


if __name__ == "__main__":
    main()
