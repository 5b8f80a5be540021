#!/usr/bin/env python3
"""
Poset Core
Finite posets stored as one bitmask row per element, their Hasse diagrams,
tree classification and the named posets used throughout posetlab.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import product
from math import comb
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple

import networkx as nx

from errors import BadParam, CycleError, NotMonotoneTree, PosetIndexError

logger = logging.getLogger(__name__)

MAX_ELEMENTS = 64


@dataclass(frozen=True)
class Poset:
    """
    Immutable strict partial order on range(size).

    Bit j of strict_lt[i] is set iff i < j. Rows are always transitively
    closed, irreflexive and antisymmetric (make_poset enforces this).
    """

    size: int
    strict_lt: Tuple[int, ...]
    name: str = field(default="", compare=False)

    def lt(self, i: int, j: int) -> bool:
        return bool(self.strict_lt[i] >> j & 1)

    def comparable(self, i: int, j: int) -> bool:
        return self.lt(i, j) or self.lt(j, i)

    @cached_property
    def down_masks(self) -> Tuple[int, ...]:
        down = [0] * self.size
        for i, row in enumerate(self.strict_lt):
            for j in _bits(row):
                down[j] |= 1 << i
        return tuple(down)

    def up_mask(self, i: int) -> int:
        return self.strict_lt[i]

    def down_mask(self, i: int) -> int:
        return self.down_masks[i]

    def relations(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, row in enumerate(self.strict_lt) for j in _bits(row)]

    @property
    def relation_count(self) -> int:
        return sum(row.bit_count() for row in self.strict_lt)

    def is_antichain(self) -> bool:
        return not any(self.strict_lt)

    def linear_extension(self) -> List[int]:
        # an element's down-set is strictly smaller than that of anything above it
        return sorted(range(self.size), key=lambda i: (self.down_masks[i].bit_count(), i))

    def to_json(self) -> Dict:
        return {"size": self.size, "lt": [list(pair) for pair in self.relations()]}

    @classmethod
    def from_json(cls, data: Dict) -> "Poset":
        if "size" not in data:
            raise BadParam("poset JSON needs a 'size' field")
        return make_poset(int(data["size"]), [tuple(p) for p in data.get("lt", [])],
                          name=data.get("name", ""))

    def __str__(self) -> str:
        return self.name or f"poset({self.size}, {self.relations()})"


@dataclass(frozen=True)
class HasseDiagram:
    size: int
    cover_edges: Tuple[Tuple[int, int], ...]


class TreeKind(Enum):
    NOT_TREE = "not_tree"
    TREE = "tree"
    UPWARD = "upward_monotone_tree"
    DOWNWARD = "downward_monotone_tree"

    @property
    def monotone(self) -> bool:
        return self in (TreeKind.UPWARD, TreeKind.DOWNWARD)


@dataclass(frozen=True)
class MValues:
    s: int
    m_s: int
    m_star_s: int
    window: Tuple[int, int]

    @property
    def in_window(self) -> bool:
        return self.window[0] <= self.s <= self.window[1]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def make_poset(size: int, relations: Sequence[Tuple[int, int]], name: str = "") -> Poset:
    """
    Build a poset from strict relations, closing them transitively.

    Args:
        size: number of elements (1..64)
        relations: ordered pairs (i, j) meaning i < j

    Returns:
        The transitively closed Poset
    """
    if not 1 <= size <= MAX_ELEMENTS:
        raise BadParam(f"poset size must be in 1..{MAX_ELEMENTS}, got {size}")
    rows = [0] * size
    for pair in relations:
        i, j = pair
        if not (0 <= i < size and 0 <= j < size):
            raise PosetIndexError(f"relation {pair} out of range for size {size}")
        rows[i] |= 1 << j

    # Warshall on bit rows
    for k in range(size):
        bit = 1 << k
        row_k = rows[k]
        for i in range(size):
            if rows[i] & bit:
                rows[i] |= row_k
    for i in range(size):
        if rows[i] >> i & 1:
            raise CycleError(f"element {i} ends up below itself")
    return Poset(size, tuple(rows), name)


def hasse(P: Poset) -> HasseDiagram:
    """Transitive reduction: (p, q) is a cover iff p < q with nothing strictly between."""
    covers = []
    for p in range(P.size):
        up = P.strict_lt[p]
        for q in _bits(up):
            if up & P.down_masks[q] == 0:
                covers.append((p, q))
    return HasseDiagram(P.size, tuple(covers))


def hasse_graph(P: Poset, directed: bool = False):
    graph = nx.DiGraph() if directed else nx.Graph()
    graph.add_nodes_from(range(P.size))
    graph.add_edges_from(hasse(P).cover_edges)
    return graph


def is_connected(P: Poset) -> bool:
    if P.size == 1:
        return True
    return nx.is_connected(hasse_graph(P))


def components(P: Poset) -> List[List[int]]:
    return sorted(sorted(c) for c in nx.connected_components(hasse_graph(P)))


def height(P: Poset) -> int:
    longest = [1] * P.size
    for i in P.linear_extension():
        for j in _bits(P.down_masks[i]):
            longest[i] = max(longest[i], longest[j] + 1)
    return max(longest)


def classify_tree(P: Poset) -> TreeKind:
    if P.size == 1:
        return TreeKind.UPWARD
    if not nx.is_tree(hasse_graph(P)):
        return TreeKind.NOT_TREE
    edges = hasse(P).cover_edges
    lower = [0] * P.size
    upper = [0] * P.size
    for p, q in edges:
        upper[p] += 1
        lower[q] += 1
    if max(lower) <= 1:
        return TreeKind.UPWARD
    if max(upper) <= 1:
        return TreeKind.DOWNWARD
    return TreeKind.TREE


def tree_root(T: Poset) -> int:
    kind = classify_tree(T)
    if not kind.monotone:
        raise NotMonotoneTree(f"{T} classifies as {kind.value}")
    if kind is TreeKind.UPWARD:
        return next(i for i in range(T.size) if T.down_masks[i] == 0)
    return next(i for i in range(T.size) if T.strict_lt[i] == 0)


def leaf_ranks(T: Poset) -> List[Tuple[int, int]]:
    """
    Leaves of a monotone tree with their ranks (root has rank 1).

    Args:
        T: upward or downward monotone tree poset

    Returns:
        (leaf index, rank) pairs in ascending leaf order
    """
    root = tree_root(T)
    if T.size == 1:
        return []
    graph = hasse_graph(T)
    distance = nx.single_source_shortest_path_length(graph, root)
    return [(v, distance[v] + 1) for v in sorted(graph.nodes)
            if v != root and graph.degree(v) == 1]


def x_monotone_formula(T: Poset) -> int:
    ranks = leaf_ranks(T)
    if T.size == 1:
        return 0
    h = height(T)
    return T.size - 1 + sum(h - r for _, r in ranks)


def dualize(P: Poset) -> Poset:
    name = f"dual({P.name})" if P.name else ""
    return Poset(P.size, P.down_masks, name)


def restrict(P: Poset, elements: Sequence[int]) -> Poset:
    """Induced subposet on the given elements, re-indexed in the given order."""
    index = {e: k for k, e in enumerate(elements)}
    rows = []
    for e in elements:
        row = 0
        for f in _bits(P.strict_lt[e]):
            if f in index:
                row |= 1 << index[f]
        rows.append(row)
    return Poset(len(elements), tuple(rows))


def is_isomorphic(P: Poset, Q: Poset) -> bool:
    if (P.size, P.relation_count) != (Q.size, Q.relation_count):
        return False
    if sorted(r.bit_count() for r in P.strict_lt) != sorted(r.bit_count() for r in Q.strict_lt):
        return False
    return nx.is_isomorphic(hasse_graph(P, directed=True), hasse_graph(Q, directed=True))


def unique_up_to_isomorphism(posets) -> List[Poset]:
    kept: List[Poset] = []
    for P in posets:
        if not any(is_isomorphic(P, Q) for Q in kept):
            kept.append(P)
    return kept


# --- named posets ---------------------------------------------------------

def chain(k: int) -> Poset:
    if k < 1:
        raise BadParam("chain needs k >= 1")
    return make_poset(k, [(i, i + 1) for i in range(k - 1)], name=f"chain:{k}")


def antichain(k: int) -> Poset:
    if k < 1:
        raise BadParam("antichain needs k >= 1")
    return make_poset(k, [], name=f"antichain:{k}")


def complete_multipartite(*parts: int) -> Poset:
    if not parts or any(r < 1 for r in parts):
        raise BadParam(f"complete multipartite poset needs parts >= 1, got {parts}")
    levels, start = [], 0
    for r in parts:
        levels.append(range(start, start + r))
        start += r
    relations = [(a, b) for lo, hi in zip(levels, levels[1:]) for a in lo for b in hi]
    return make_poset(start, relations, name="K:" + ",".join(map(str, parts)))


def vee(r: int) -> Poset:
    P = complete_multipartite(1, r)
    return Poset(P.size, P.strict_lt, f"vee:{r}")


def wedge(r: int) -> Poset:
    P = complete_multipartite(r, 1)
    return Poset(P.size, P.strict_lt, f"wedge:{r}")


def diamond(s: int) -> Poset:
    if s < 2:
        raise BadParam("diamond needs s >= 2")
    P = complete_multipartite(1, s, 1)
    return Poset(P.size, P.strict_lt, f"diamond:{s}")


def butterfly() -> Poset:
    P = complete_multipartite(2, 2)
    return Poset(P.size, P.strict_lt, "butterfly")


NAMED = {
    "chain": chain,
    "antichain": antichain,
    "vee": vee,
    "wedge": wedge,
    "diamond": diamond,
    "butterfly": butterfly,
    "K": complete_multipartite,
    "complete_multipartite": complete_multipartite,
}


def named(kind: str, *params: int) -> Poset:
    try:
        builder = NAMED[kind]
    except KeyError:
        raise BadParam(f"unknown named poset '{kind}' (known: {', '.join(sorted(NAMED))})")
    try:
        return builder(*params)
    except TypeError as e:
        raise BadParam(f"bad parameters {params} for {kind}: {e}")


def parse_poset(text: str) -> Poset:
    """
    Parse CLI poset syntax: 'chain:3', 'K:2,1,2', 'butterfly', inline JSON
    or '@file.json'.
    """
    text = text.strip()
    if text.startswith("@"):
        with open(Path(text[1:]), "r", encoding="utf-8") as f:
            return Poset.from_json(json.load(f))
    if text.startswith("{"):
        return Poset.from_json(json.loads(text))
    kind, _, args = text.partition(":")
    try:
        params = [int(a) for a in args.split(",")] if args else []
    except ValueError:
        raise BadParam(f"cannot parse poset parameters in '{text}'")
    return named(kind, *params)


def m_values(s: int) -> MValues:
    """m_s = ceil(log2(s+2)) and m*_s = min{m : s <= C(m, ceil(m/2))}."""
    if s < 2:
        raise BadParam("m_values needs s >= 2")
    m_s = (s + 1).bit_length()
    m_star = 1
    while comb(m_star, (m_star + 1) // 2) < s:
        m_star += 1
    window = (2 ** (m_s - 1) - 1, 2 ** m_s - comb(m_s, (m_s + 1) // 2) - 1)
    return MValues(s, m_s, m_star, window)


# --- enumerators ------------------------------------------------------------

def monotone_trees(k: int) -> List[Poset]:
    """All monotone tree posets on k elements, one per isomorphism type."""
    if k < 1:
        raise BadParam("monotone_trees needs k >= 1")
    upward = []
    for parents in product(*(range(i) for i in range(1, k))):
        upward.append(make_poset(k, [(p, i + 1) for i, p in enumerate(parents)]))
    upward = unique_up_to_isomorphism(upward)
    return unique_up_to_isomorphism(upward + [dualize(T) for T in upward])


def height_two_trees(k: int) -> List[Poset]:
    """All tree posets of height 2 on k >= 2 elements, one per isomorphism type."""
    if k < 2:
        raise BadParam("height_two_trees needs k >= 2")
    found = []
    for tree in nx.nonisomorphic_trees(k):
        colour = nx.bipartite.color(tree)
        for bottom in (0, 1):
            edges = [(u, v) if colour[u] == bottom else (v, u) for u, v in tree.edges]
            found.append(make_poset(k, edges))
    return unique_up_to_isomorphism(found)


def main():
    """Demo function"""
    logging.basicConfig(level=logging.INFO)
    for text in ("chain:3", "vee:3", "K:2,1,2", "diamond:2", "butterfly"):
        P = parse_poset(text)
        print(f"{text:10s} height={height(P)} kind={classify_tree(P).value} "
              f"covers={list(hasse(P).cover_edges)}")
    for s in (2, 3, 4, 10):
        mv = m_values(s)
        print(f"s={s}: m_s={mv.m_s} m*_s={mv.m_star_s} window={mv.window} inside={mv.in_window}")


if __name__ == "__main__":
    main()
