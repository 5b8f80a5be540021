#!/usr/bin/env python3
"""
Embedding Engine
Finds and counts (induced) copies of a poset inside a set family, and
computes the antichain quantities built on top of inclusion: maximum
antichains, up-sets, weights and the down/up split used for K_{s,1,t}.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from errors import EmptyFamily
from lab_config import require_at_most
from poset_core import Poset
from subset_lattice import SetFamily, popcounts, strict_subsets_in, strict_supersets_in

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CopyRecord:
    """One copy of P: assignment[p] is the code of the set playing element p."""

    assignment: Tuple[int, ...]

    @property
    def subfamily(self) -> Tuple[int, ...]:
        return tuple(sorted(self.assignment))

    @property
    def bottom(self) -> int:
        a = -1
        for code in self.assignment:
            a &= code
        return a if self.assignment else 0

    @property
    def top(self) -> int:
        b = 0
        for code in self.assignment:
            b |= code
        return b

    @property
    def m_G(self) -> int:
        return self.bottom.bit_count()

    @property
    def M_G(self) -> int:
        return self.top.bit_count()

    @property
    def span(self) -> int:
        return self.M_G - self.m_G

    def to_json(self) -> Dict:
        return {"assignment": {str(p): code for p, code in enumerate(self.assignment)},
                "A": self.bottom, "B": self.top}


@dataclass(frozen=True)
class CopyCount:
    copies: int
    embeddings: int


@dataclass(frozen=True)
class DUSplit:
    down: SetFamily
    up: SetFamily
    rest: SetFamily


def search_order(P: Poset, first: Optional[int] = None) -> List[int]:
    """
    Element order for backtracking: each next element has the most
    comparabilities with those already placed (ties: higher total degree,
    then lower index). For connected P every element after the first is
    comparable to an earlier one.
    """
    degree = [(P.strict_lt[i] | P.down_masks[i]).bit_count() for i in range(P.size)]
    order: List[int] = []
    placed = 0
    remaining = set(range(P.size))
    if first is not None:
        order.append(first)
        placed |= 1 << first
        remaining.discard(first)
    while remaining:
        best = max(remaining, key=lambda i: (((P.strict_lt[i] | P.down_masks[i]) & placed).bit_count(),
                                             degree[i], -i))
        order.append(best)
        placed |= 1 << best
        remaining.discard(best)
    return order


def iter_embeddings(P: Poset, F: SetFamily, induced: bool = False,
                    fixed: Optional[Tuple[int, int]] = None) -> Iterator[Tuple[int, ...]]:
    """
    Yield every witnessing bijection of P into F as a tuple of codes indexed
    by poset element.

    Args:
        P: the pattern poset
        F: the host family
        induced: require incomparable elements to map to incomparable sets
        fixed: optional (element, code) pinned before the search starts
    """
    codes = F.codes
    if P.size > len(codes):
        return
    full = (1 << F.ground_n) - 1
    order = search_order(P, fixed[0] if fixed else None)
    image = [-1] * P.size

    def candidates(i: int) -> np.ndarray:
        lower, upper = 0, full
        incomparable = []
        used = []
        for j in range(P.size):
            y = image[j]
            if y < 0:
                continue
            used.append(y)
            if P.lt(j, i):
                lower |= y
            elif P.lt(i, j):
                upper &= y
            elif induced:
                incomparable.append(y)
        ok = ((codes & lower) == lower) & ((codes & ~upper) == 0)
        for y in incomparable:
            ok &= ((codes & ~y) != 0) & ((y & ~codes) != 0)
        if used:
            ok &= ~np.isin(codes, used)
        return codes[ok]

    def extend(depth: int) -> Iterator[Tuple[int, ...]]:
        if depth == P.size:
            yield tuple(image)
            return
        i = order[depth]
        if depth == 0 and fixed is not None:
            choices = [fixed[1]] if fixed[1] in F else []
        else:
            choices = candidates(i)
        for c in choices:
            image[i] = int(c)
            yield from extend(depth + 1)
        image[i] = -1

    yield from extend(0)


def find_copy(P: Poset, F: SetFamily, induced: bool = False) -> Optional[CopyRecord]:
    for assignment in iter_embeddings(P, F, induced):
        return CopyRecord(assignment)
    return None


def is_p_free(P: Poset, F: SetFamily, induced: bool = False) -> bool:
    return find_copy(P, F, induced) is None


def count_copies(P: Poset, F: SetFamily, induced: bool = False) -> CopyCount:
    """
    Count copies (distinct subfamilies) and embeddings (witnessing bijections).

    Args:
        P: pattern poset
        F: host family
        induced: count induced copies only

    Returns:
        CopyCount with both numbers
    """
    require_at_most("copy_count_max_family", len(F))
    images = set()
    embeddings = 0
    for assignment in iter_embeddings(P, F, induced):
        embeddings += 1
        images.add(tuple(sorted(assignment)))
    logger.debug("%s in %r: %d copies, %d embeddings", P, F, len(images), embeddings)
    return CopyCount(len(images), embeddings)


def copies_through(P: Poset, F: SetFamily, code: int, induced: bool = False) -> set:
    """Distinct copies of P in F that use the member `code`."""
    images = set()
    if code not in F:
        return images
    for p in range(P.size):
        for assignment in iter_embeddings(P, F, induced, fixed=(p, code)):
            images.add(tuple(sorted(assignment)))
    return images


def count_copies_through(P: Poset, F: SetFamily, code: int, induced: bool = False) -> int:
    return len(copies_through(P, F, code, induced))


def has_copy_through(P: Poset, F: SetFamily, code: int, induced: bool = False) -> bool:
    if code not in F:
        return False
    for p in range(P.size):
        for _ in iter_embeddings(P, F, induced, fixed=(p, code)):
            return True
    return False


# --- antichains -------------------------------------------------------------

def _inclusion_graph(codes: Sequence[int]) -> Tuple[nx.Graph, List]:
    graph = nx.Graph()
    left = [("L", int(c)) for c in codes]
    graph.add_nodes_from(left)
    graph.add_nodes_from(("R", int(c)) for c in codes)
    arr = np.asarray(codes, dtype=np.int64)
    for b in arr:
        below = arr[((arr & ~b) == 0) & (arr != b)]
        graph.add_edges_from((("L", int(a)), ("R", int(b))) for a in below)
    return graph, left


def inclusion_matrix(codes: Sequence[int]) -> csr_matrix:
    """Sparse k x k matrix with a 1 at (i, j) iff codes[i] ⊊ codes[j]."""
    arr = np.asarray(codes, dtype=np.int64)
    rows, cols = [], []
    for i, a in enumerate(arr):
        above = np.flatnonzero(((arr & a) == a) & (arr != a))
        rows.append(np.full(len(above), i, dtype=np.int64))
        cols.append(above)
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    return csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(arr), len(arr)))


def max_antichain_of_codes(codes: Sequence[int]) -> int:
    """Dilworth: largest antichain = |S| - maximum matching in the strict-inclusion bipartite graph."""
    if len(codes) == 0:
        return 0
    matched = maximum_bipartite_matching(inclusion_matrix(codes), perm_type="column")
    return len(codes) - int(np.count_nonzero(matched >= 0))


def antichain_witness_of_codes(codes: Sequence[int]) -> List[int]:
    """A largest antichain: the sets with neither copy in a minimum vertex cover (König)."""
    if len(codes) == 0:
        return []
    graph, left = _inclusion_graph(codes)
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    cover = nx.bipartite.to_vertex_cover(graph, matching, top_nodes=left)
    return sorted(int(c) for c in codes if ("L", int(c)) not in cover and ("R", int(c)) not in cover)


def max_antichain(S: SetFamily) -> int:
    return max_antichain_of_codes(S.codes)


def antichain_witness(S: SetFamily) -> List[int]:
    return antichain_witness_of_codes(S.codes)


def up_set(G: SetFamily, code: int) -> SetFamily:
    codes = G.codes
    return SetFamily.from_codes(G.ground_n, codes[(code & ~codes) == 0])


def g_weight(G: SetFamily, code: int) -> int:
    """Size of the largest antichain among members of G containing `code`."""
    return max_antichain(up_set(G, code))


def strict_up_weight(G: SetFamily, code: int) -> int:
    return max_antichain_of_codes(strict_supersets_in(G, code))


def strict_down_weight(G: SetFamily, code: int) -> int:
    return max_antichain_of_codes(strict_subsets_in(G, code))


def max_up_weight(F: SetFamily) -> Tuple[int, int]:
    """
    The member that is the bottom of the widest induced vee in F.

    Returns:
        (witness code, weight) with weight taken over strict supersets;
        ties go to the smallest code
    """
    if len(F) == 0:
        raise EmptyFamily("max_up_weight needs a nonempty family")
    best_code, best_weight = -1, -1
    for code in F:
        w = strict_up_weight(F, code)
        if w > best_weight:
            best_code, best_weight = code, w
    return best_code, best_weight


def find_induced_vee(F: SetFamily, r: int) -> Optional[Tuple[int, List[int]]]:
    """(bottom, r tops) of an induced vee with r tops in F, if any."""
    for code in F:
        above = strict_supersets_in(F, code)
        if len(above) >= r and max_antichain_of_codes(above) >= r:
            return code, antichain_witness_of_codes(above)[:r]
    return None


def du_decomposition(F: SetFamily, s: int, t: int) -> DUSplit:
    """
    Split F into D (members whose strict down-set has no antichain of size s),
    U (members whose strict up-set has no antichain of size t) and the rest.
    """
    down, up = [], []
    for code in F:
        if strict_down_weight(F, code) < s:
            down.append(code)
        if strict_up_weight(F, code) < t:
            up.append(code)
    D = SetFamily.from_codes(F.ground_n, down)
    U = SetFamily.from_codes(F.ground_n, up)
    return DUSplit(D, U, F.difference(D.union(U)))


def level_span(F: SetFamily) -> Tuple[int, int]:
    """Smallest and largest member size; (0, 0) for the empty family."""
    if not len(F):
        return 0, 0
    sizes = popcounts(F.ground_n)[F.codes]
    return int(sizes.min()), int(sizes.max())


def main():
    """Demo function"""
    from poset_core import chain, diamond, vee
    from subset_lattice import middle_levels

    logging.basicConfig(level=logging.INFO)
    full2 = SetFamily.full(2)
    for P in (chain(2), vee(2), diamond(2)):
        print(f"{P} in 2^[2]: {count_copies(P, full2)}")
    F = middle_levels(4, 3)
    print(f"max_antichain(middle_levels(4,3)) = {max_antichain(F)}")
    print(f"max_up_weight(middle_levels(4,3)) = {max_up_weight(F)}")


if __name__ == "__main__":
    main()
