#!/usr/bin/env python3
"""
Span Search
Decides how many consecutive levels a connected poset needs and how far
apart the bottom and top of its copies can be inside the tightest window.

The ground set is never materialized. A partial copy is kept as a list of
Venn regions: each region is (mask over the already placed elements, number
of ground elements with exactly that membership pattern). Ground elements
are interchangeable, so this is the whole state up to symmetry, and the
search stays small even where 2^[N] itself would be astronomically large.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

from embedding_engine import CopyRecord, search_order
from errors import DisconnectedPoset
from poset_core import Poset, components, height, is_connected, restrict

logger = logging.getLogger(__name__)

Regions = List[Tuple[int, int]]


@dataclass(frozen=True)
class SpanResult:
    """Outcome of one window search. witness is None when no copy exists."""

    spread: int
    span: int
    ground_n: int
    witness: Optional[CopyRecord]
    nodes: int

    @property
    def found(self) -> bool:
        return self.witness is not None


class SpanSearch:
    """
    Backtracking over region splits for one connected poset.

    Elements are placed in search_order, so every element after the first
    is comparable to an earlier one. The first image gets (|P|-1)*spread
    ground elements: any copy can be shifted up by adding common elements,
    and after removing its common intersection the first image has at most
    that many elements.
    """

    def __init__(self, P: Poset, induced: bool = False):
        if not is_connected(P):
            raise DisconnectedPoset(f"{P} is not connected")
        self.P = P
        self.induced = induced
        self.order = search_order(P)
        k = P.size
        position = {element: t for t, element in enumerate(self.order)}
        self.below: List[int] = []
        self.above: List[int] = []
        self.incomparable: List[List[int]] = []
        self.related_below: List[int] = [0] * k
        self.related_above: List[int] = [0] * k
        for t, i in enumerate(self.order):
            for j in range(P.size):
                if P.lt(j, i):
                    self.related_below[t] |= 1 << position[j]
                elif P.lt(i, j):
                    self.related_above[t] |= 1 << position[j]
            earlier = (1 << t) - 1
            self.below.append(self.related_below[t] & earlier)
            self.above.append(self.related_above[t] & earlier)
            self.incomparable.append([q for q in range(t)
                                      if not (earlier & (self.related_below[t] | self.related_above[t])) >> q & 1])
        self.nodes = 0

    # --- public entry points ---

    def exists(self, spread: int, slack: int = 0) -> SpanResult:
        return self._run(spread, maximize=False, slack=slack)

    def max_span(self, spread: int, slack: int = 0) -> SpanResult:
        return self._run(spread, maximize=True, slack=slack)

    # --- search ---

    def _sandwiched_after(self, t: int) -> int:
        """Future span bound per unit spread: elements >= t not yet boxed in from both sides."""
        placed = (1 << t) - 1
        return sum(1 for u in range(t, self.P.size)
                   if not (self.related_below[u] & placed and self.related_above[u] & placed))

    def _run(self, spread: int, maximize: bool, slack: int) -> SpanResult:
        k = self.P.size
        s0 = (k - 1) * spread + slack
        self.spread = spread
        self.maximize = maximize
        self.best_span = -1
        self.best_regions: Optional[Regions] = None
        self.nodes = 0
        self.future = [spread * self._sandwiched_after(t) for t in range(k + 1)]

        regions: Regions = [(1, s0)] if s0 > 0 else []
        self._place(1, regions, [s0])
        logger.debug("span search %s spread=%d maximize=%s: %d nodes, best span %d",
                     self.P, spread, maximize, self.nodes, self.best_span)

        if self.best_regions is None:
            return SpanResult(spread, -1, 0, None, self.nodes)
        witness, ground_n = self._witness(self.best_regions)
        return SpanResult(spread, self.best_span, ground_n, witness, self.nodes)

    def _done(self) -> bool:
        return self.best_regions is not None and not self.maximize

    def _place(self, t: int, regions: Regions, sizes: List[int]) -> None:
        self.nodes += 1
        k = self.P.size
        if t == k:
            full = (1 << k) - 1
            span = sum(c for mask, c in regions if mask != full)
            if span > self.best_span:
                self.best_span = span
                self.best_regions = list(regions)
            return
        if self.maximize:
            placed_all = (1 << t) - 1
            current = sum(c for mask, c in regions if mask != placed_all)
            if current + self.future[t] <= self.best_span:
                return

        below, above = self.below[t], self.above[t]
        lo = max(sizes) - self.spread
        hi = min(sizes) + self.spread
        for q in range(t):
            if below >> q & 1:
                lo = max(lo, sizes[q] + 1)
            elif above >> q & 1:
                hi = min(hi, sizes[q] - 1)
        lo = max(lo, 0)
        if lo > hi:
            return

        take = [0] * len(regions)
        forced = 0
        free: List[int] = []
        for idx, (mask, count) in enumerate(regions):
            if mask & below:
                take[idx] = count
                forced += count
            elif mask & above == above:
                free.append(idx)
        fresh_ok = above == 0
        capacity = [0] * (len(free) + 1)
        for pos in range(len(free) - 1, -1, -1):
            capacity[pos] = capacity[pos + 1] + regions[free[pos]][1]

        def choose(pos: int, current: int) -> None:
            if self._done() or current > hi:
                return
            if not fresh_ok and current + capacity[pos] < lo:
                return
            if pos == len(free):
                if fresh_ok:
                    fresh_range = range(hi - current, max(0, lo - current) - 1, -1)
                else:
                    fresh_range = range(0, 1) if lo <= current else range(0)
                for fresh in fresh_range:
                    if self._done():
                        return
                    self._branch(t, regions, sizes, take, fresh, current + fresh)
                return
            idx = free[pos]
            for f in range(regions[idx][1], -1, -1):
                take[idx] = f
                choose(pos + 1, current + f)
            take[idx] = 0

        choose(0, forced)

    def _branch(self, t: int, regions: Regions, sizes: List[int], take: List[int],
                fresh: int, size: int) -> None:
        for q in self.incomparable[t]:
            bit = 1 << q
            inside_q = fresh == 0 and all(take[idx] == 0 or mask & bit
                                          for idx, (mask, _) in enumerate(regions))
            contains_q = all(take[idx] == count
                             for idx, (mask, count) in enumerate(regions) if mask & bit)
            if self.induced and (inside_q or contains_q):
                return
            if inside_q and contains_q:
                return

        bit_t = 1 << t
        split: Regions = []
        for idx, (mask, count) in enumerate(regions):
            if take[idx]:
                split.append((mask | bit_t, take[idx]))
            if count - take[idx]:
                split.append((mask, count - take[idx]))
        if fresh:
            split.append((bit_t, fresh))
        self._place(t + 1, split, sizes + [size])

    def _witness(self, regions: Regions) -> Tuple[CopyRecord, int]:
        images = [0] * self.P.size
        next_index = 0
        for mask, count in regions:
            block = ((1 << count) - 1) << next_index
            next_index += count
            for t, element in enumerate(self.order):
                if mask >> t & 1:
                    images[element] |= block
        return CopyRecord(tuple(images)), next_index


def min_spread(P: Poset, induced: bool = False) -> int:
    """Smallest spread of set sizes over (induced) copies of P; this is e(P)."""
    if P.size == 1:
        return 0
    if not is_connected(P):
        # components get private fresh elements of equal count, keeping them apart
        return max(min_spread(restrict(P, part), induced) for part in components(P))
    search = SpanSearch(P, induced)
    spread = height(P) - 1
    while not search.exists(spread).found:
        logger.info("%s does not fit in %d levels", P, spread + 1)
        spread += 1
    return spread


def max_span(P: Poset, induced: bool = False, spread: Optional[int] = None,
             slack: int = 0) -> SpanResult:
    """Largest M_G - m_G over copies of connected P whose sizes spread at most `spread` (default e(P))."""
    if spread is None:
        spread = min_spread(P, induced)
    if P.size == 1:
        return SpanResult(spread, 0, 0, CopyRecord((0,)), 0)
    return SpanSearch(P, induced).max_span(spread, slack)


def main():
    """Demo function"""
    from poset_core import diamond, complete_multipartite

    logging.basicConfig(level=logging.INFO)
    for P in (diamond(2), diamond(3), complete_multipartite(2, 1, 2)):
        e = min_spread(P)
        result = max_span(P, spread=e)
        print(f"{P}: e={e} x={result.span} witness={result.witness.to_json()}")


if __name__ == "__main__":
    main()
