#!/usr/bin/env python3
"""
Extremal Lab
The poset parameters e, x and d, the copy count M(n,P) in the e(P)+1 middle
levels, exact La(n,P) at small n, supersaturation minima, counts of P-free
families and empirical supersaturation probes.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, floor, log2
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from chain_machinery import diamond_lb
from embedding_engine import (antichain_witness, count_copies, count_copies_through,
                              has_copy_through, is_p_free, max_antichain_of_codes)
from errors import BadParam, DisconnectedPoset
from lab_config import get_config, require_at_most
from poset_core import (Poset, components, is_connected, make_poset, restrict,
                        unique_up_to_isomorphism)
from span_search import SpanResult, max_span, min_spread
from subset_lattice import (SetFamily, centered_family, centered_order, check_ground,
                            comparable_pair_count, level_family, middle_level_range,
                            middle_levels, popcounts, walk_all_families)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PosetParams:
    e: int
    e_star: int
    x: Optional[int]
    x_star: Optional[int]
    d: Optional[Fraction]
    d_star: Optional[Fraction]

    def to_json(self) -> Dict:
        as_text = lambda v: None if v is None else str(v)
        return {"e": self.e, "e_star": self.e_star, "x": self.x, "x_star": self.x_star,
                "d": as_text(self.d), "d_star": as_text(self.d_star)}


@dataclass(frozen=True)
class LaResult:
    size: int
    witness: SetFamily
    nodes: int = 0
    method: str = "dfs"


@dataclass(frozen=True)
class DParam:
    value: Fraction
    attained_by: Poset
    mode: str
    candidates: int


def is_chain2(P: Poset) -> bool:
    return P.size == 2 and P.relation_count == 1


# --- e and x ----------------------------------------------------------------

def e_param(P: Poset, induced: bool = False) -> int:
    """Largest m such that m consecutive levels never hold an (induced) copy of P."""
    return min_spread(P, induced)


def x_search(P: Poset, induced: bool = False, slack: int = 0) -> SpanResult:
    if not is_connected(P):
        raise DisconnectedPoset(f"x is only defined for connected posets; components: {components(P)}")
    return max_span(P, induced, slack=slack)


def x_param(P: Poset, induced: bool = False, slack: int = 0) -> int:
    """max(M_G - m_G) over copies of connected P inside e(P)+1 consecutive levels."""
    if P.size == 1:
        logger.warning("x of a one-element poset is reported as 0 by convention")
        return 0
    return x_search(P, induced, slack).span


def component_x(P: Poset, induced: bool = False) -> List[int]:
    return [x_param(restrict(P, part), induced) for part in components(P)]


def poset_params(P: Poset, with_d: bool = True) -> PosetParams:
    logger.info("Computing parameters of %s...", P)
    e, e_star = e_param(P), e_param(P, True)
    x = x_star = d = d_star = None
    if is_connected(P):
        x, x_star = x_param(P), x_param(P, True)
        if with_d and P.size >= 2:
            d = d_param(P).value
            d_star = d_param(P, True).value
    return PosetParams(e, e_star, x, x_star, d, d_star)


# --- M(n, P) ----------------------------------------------------------------

def m_count(n: int, P: Poset, induced: bool = False) -> int:
    check_ground(n)
    window = min(e_param(P, induced) + 1, n + 1)
    F = middle_levels(n, window)
    logger.info("Counting %s in %d middle levels of 2^[%d] (%d sets)...", P, window, n, len(F))
    if is_chain2(P):
        return comparable_pair_count(F)
    return count_copies(P, F, induced).copies


# --- La(n, P) ---------------------------------------------------------------

def _free_window(n: int, P: Poset, induced: bool) -> SetFamily:
    """The e(P) middle levels of 2^[n], which hold no copy of P."""
    e = e_param(P, induced)
    if e == 0:
        return SetFamily.empty(n)
    return middle_levels(n, min(e, n + 1))


class _FreeSearch:
    """Include/exclude DFS over sets in a fixed order, keeping the family P-free."""

    def __init__(self, n: int, P: Poset, induced: bool, order=None):
        self.n, self.P, self.induced = n, P, induced
        self.order = [int(c) for c in (centered_order(n) if order is None else order)]
        self.membership = np.zeros(1 << n, dtype=bool)
        self.nodes = 0

    def fits(self, code: int) -> bool:
        self.membership[code] = True
        ok = not has_copy_through(self.P, SetFamily(self.n, self.membership), code, self.induced)
        self.membership[code] = False
        return ok

    def run(self, incumbent: List[int]) -> List[int]:
        """Largest free subfamily of the ordered sets; `incumbent` seeds the bound."""
        best = list(incumbent)
        total = len(self.order)
        chosen: List[int] = []

        def dfs(pos: int) -> None:
            nonlocal best
            self.nodes += 1
            if len(chosen) + total - pos <= len(best):
                return
            if pos == total:
                best = list(chosen)
                return
            code = self.order[pos]
            if self.fits(code):
                self.membership[code] = True
                chosen.append(code)
                dfs(pos + 1)
                chosen.pop()
                self.membership[code] = False
            dfs(pos + 1)

        dfs(0)
        return best


def largest_free_subfamily(F: SetFamily, P: Poset, induced: bool = False,
                           incumbent: Optional[SetFamily] = None) -> Tuple[SetFamily, int]:
    """Exact largest (induced) P-free subfamily of F; returns (witness, nodes visited)."""
    order = [c for c in centered_order(F.ground_n) if F.membership[c]]
    search = _FreeSearch(F.ground_n, P, induced, order)
    seed = list(incumbent) if incumbent is not None else []
    codes = search.run(seed)
    return SetFamily.from_codes(F.ground_n, codes), search.nodes


def la_exact(n: int, P: Poset, induced: bool = False) -> LaResult:
    """
    Largest (induced) P-free family of 2^[n] with a witness.

    Args:
        n: ground set size
        P: forbidden poset
        induced: forbid induced copies only

    Returns:
        LaResult with size and witness family
    """
    check_ground(n)
    if is_chain2(P):
        require_at_most("la_chain_max_n", n)
        witness = antichain_witness(SetFamily.full(n))
        return LaResult(len(witness), SetFamily.from_codes(n, witness), method="matching")
    require_at_most("la_exact_max_n", n)

    incumbent = _free_window(n, P, induced)
    if not is_p_free(P, incumbent, induced):
        incumbent = SetFamily.empty(n)
    logger.info("Searching La(%d, %s)...", n, P)
    witness, nodes = largest_free_subfamily(SetFamily.full(n), P, induced, incumbent)
    logger.debug("La search visited %d nodes", nodes)
    return LaResult(len(witness), witness, nodes)


# --- supersaturation minima and free-family counts -------------------------

def min_copies_table(n: int, P: Poset, induced: bool = False) -> List[int]:
    """Minimum copy count over families of each size 0..2^n, by an incremental Gray-code walk."""
    require_at_most("min_copies_max_n", n)
    best = [None] * ((1 << n) + 1)
    membership = np.zeros(1 << n, dtype=bool)
    copies = 0
    for code, added, members in walk_all_families(n):
        if code >= 0:
            # copies through `code` are counted with `code` present, before or after the flip
            membership[code] = True
            through = count_copies_through(P, SetFamily(n, membership), code, induced)
            membership[code] = added
            copies += through if added else -through
        size = len(members)
        if best[size] is None or copies < best[size]:
            best[size] = copies
    return best


def min_copies(n: int, P: Poset, m: int, induced: bool = False) -> int:
    if not 0 <= m <= 1 << n:
        raise BadParam(f"family size must be in 0..2^{n}, got {m}")
    return min_copies_table(n, P, induced)[m]


def _vee_arity(P: Poset) -> Optional[int]:
    """r when P is vee(r) (chain(2) is vee(1)), otherwise None."""
    everyone = (1 << P.size) - 1
    if P.size >= 2 and P.relation_count == P.size - 1 and any(
            P.strict_lt[i] == everyone ^ (1 << i) for i in range(P.size)):
        return P.size - 1
    return None


def _top_down_order(n: int) -> List[int]:
    sizes = popcounts(n)
    return sorted(range(1 << n), key=lambda code: (-int(sizes[code]), code))


def _shift_strict_subsets(above: List[int], code: int, delta: int) -> None:
    if code == 0:
        return
    sub = (code - 1) & code
    while True:
        above[sub] += delta
        if sub == 0:
            return
        sub = (sub - 1) & code


def _count_vee_free(n: int, r: int) -> int:
    """
    Families in which every member has fewer than r strict supersets.
    Sets are decided largest first, so a set's supersets are settled when it
    is reached; the rest of the sweep only depends on the capped superset
    counts of the undecided sets, which is the memo key.
    """
    order = _top_down_order(n)
    total = len(order)
    above = [0] * (1 << n)
    memo: Dict[Tuple[int, bytes], int] = {}

    def count(pos: int) -> int:
        if pos == total:
            return 1
        key = (pos, bytes(min(above[c], r) for c in order[pos:]))
        if key in memo:
            return memo[key]
        code = order[pos]
        found = count(pos + 1)
        if above[code] < r:
            _shift_strict_subsets(above, code, 1)
            found += count(pos + 1)
            _shift_strict_subsets(above, code, -1)
        memo[key] = found
        return found

    return count(0)


def _count_induced_vee_free(n: int, r: int) -> int:
    """Families in which no member has r pairwise incomparable strict supersets."""
    order = _top_down_order(n)
    total = len(order)
    chosen: List[int] = []

    def count(pos: int) -> int:
        if pos == total:
            return 1
        code = order[pos]
        found = count(pos + 1)
        upper = [c for c in chosen if c & code == code]
        if len(upper) < r or max_antichain_of_codes(upper) < r:
            chosen.append(code)
            found += count(pos + 1)
            chosen.pop()
        return found

    return count(0)


def count_free_by_search(n: int, P: Poset, induced: bool = False) -> int:
    """
    Exact number of (induced) P-free families of 2^[n] for any P. Freeness
    is hereditary, so a DFS that only extends free families visits each once.
    """
    check_ground(n)
    require_at_most("count_free_max_n", n)
    search = _FreeSearch(n, P, induced)
    total = len(search.order)
    counted = 0

    def dfs(pos: int) -> None:
        nonlocal counted
        if pos == total:
            counted += 1
            return
        code = search.order[pos]
        dfs(pos + 1)
        if search.fits(code):
            search.membership[code] = True
            dfs(pos + 1)
            search.membership[code] = False

    dfs(0)
    return counted


def count_free_families(n: int, P: Poset, induced: bool = False) -> int:
    """
    Exact number of (induced) P-free families of 2^[n]. chain(2) and vee(r)
    use a top-down sweep that only checks the new member's supersets and
    reach one more ground element; other posets go through the generic search.
    """
    check_ground(n)
    r = _vee_arity(P)
    if r is None:
        require_at_most("count_free_max_n", n)
        logger.info("Counting %s-free families of 2^[%d]...", P, n)
        return count_free_by_search(n, P, induced)
    require_at_most("count_free_special_max_n", n)
    logger.info("Counting %s-free families of 2^[%d] top-down...", P, n)
    if induced and r > 1:
        return _count_induced_vee_free(n, r)
    return _count_vee_free(n, r)


@dataclass(frozen=True)
class CountingExponent:
    n: int
    free_families: int
    exponent: float
    e: int


def counting_exponent(n: int, P: Poset, induced: bool = False) -> CountingExponent:
    """log2(#free families) / binom(n, n/2), to set against e(P)."""
    total = count_free_families(n, P, induced)
    return CountingExponent(n, total, log2(total) / comb(n, n // 2), e_param(P, induced))


# --- d(P) -------------------------------------------------------------------

def _closed(relations: Tuple[Tuple[int, int], ...]) -> bool:
    rel = set(relations)
    return all((i, k) in rel for i, j in rel for j2, k in rel if j == j2)


def _subposets(P: Poset, weak: bool) -> List[Poset]:
    found = []
    for size in range(2, P.size + 1):
        for elements in combinations(range(P.size), size):
            Q = restrict(P, elements)
            if not weak:
                found.append(Q)
                continue
            relations = Q.relations()
            for r in range(len(relations) + 1):
                for subset in combinations(relations, r):
                    if _closed(subset):
                        found.append(make_poset(size, subset))
    connected = [Q for Q in found if is_connected(Q)]
    buckets: Dict[Tuple[int, int], List[Poset]] = {}
    for Q in connected:
        buckets.setdefault((Q.size, Q.relation_count), []).append(Q)
    return [Q for bucket in buckets.values() for Q in unique_up_to_isomorphism(bucket)]


def d_param(P: Poset, induced: bool = False, mode: Optional[str] = None) -> DParam:
    """
    min x(P')/(|P'|-1) over connected subposets P' with e(P') = e(P).

    Args:
        P: a connected poset on at most d_param_max_size elements
        induced: use e*, x* instead of e, x
        mode: "weak" (all weak subposets) or "induced" (restrictions only);
              defaults to weak for d and induced for d*
    """
    mode = mode or ("induced" if induced else "weak")
    if mode not in ("weak", "induced"):
        raise BadParam(f"unknown subposet mode '{mode}'")
    require_at_most("d_param_max_size", P.size)
    if mode == "weak":
        require_at_most("d_param_max_relations", P.relation_count)
    target = e_param(P, induced)
    best: Optional[Tuple[Fraction, Poset]] = None
    candidates = _subposets(P, weak=mode == "weak")
    for Q in candidates:
        if e_param(Q, induced) != target:
            continue
        value = Fraction(x_param(Q, induced), Q.size - 1)
        if best is None or value < best[0]:
            best = (value, Q)
    if best is None:
        raise BadParam(f"no connected subposet of {P} has e = {target}")
    logger.info("d%s(%s) = %s (%s subposets, attained by %s)",
                "*" if induced else "", P, best[0], mode, best[1])
    return DParam(best[0], best[1], mode, len(candidates))


# --- supersaturation probes -------------------------------------------------

GENERATORS = ("centered", "middle_random", "shifted")


def _grow(n: int, base: SetFamily, size: int, levels, rng) -> SetFamily:
    """Add random sets from `levels` to reach `size`, then fill from anywhere."""
    membership = base.membership.copy()
    sizes = popcounts(n)
    pool = np.flatnonzero(np.isin(sizes, list(levels)) & ~membership)
    need = size - int(membership.sum())
    if need > 0:
        pick = rng.permutation(pool)[:need]
        membership[pick] = True
        need -= len(pick)
    if need > 0:
        rest = centered_order(n)
        rest = rest[~membership[rest]][:need]
        membership[rest] = True
    return SetFamily(n, membership)


def generate_family(n: int, size: int, e: int, generator: str, rng) -> SetFamily:
    if generator == "centered":
        return centered_family(n, size)
    window = middle_level_range(n, min(max(e, 1), n + 1))
    if generator == "middle_random":
        base = middle_levels(n, len(window)) if e >= 1 else SetFamily.empty(n)
        return _grow(n, base, size, [window.start - 1, window.stop], rng)
    if generator == "shifted":
        low = max(window.start - 1, 0)
        levels = range(low, min(low + len(window), n + 1))
        base = level_family(n, levels)
        if len(base) > size:
            base = SetFamily.from_codes(n, rng.permutation(base.codes)[:size])
        return _grow(n, base, size, [levels.stop, low - 1], rng)
    raise BadParam(f"unknown generator '{generator}', expected one of {GENERATORS}")


def kchain_lower_bound(n: int, eps: Fraction) -> Fraction:
    """ε·n/8·binom(n, n/2): the 2-chain supersaturation floor for |F| = (1+ε)binom."""
    return Fraction(eps) * n / 8 * comb(n, n // 2)


def _diamond_size(P: Poset) -> Optional[int]:
    """s when P is a diamond with s middle elements."""
    if P.size < 4:
        return None
    tops = [i for i in range(P.size) if P.strict_lt[i] == 0]
    bottoms = [i for i in range(P.size) if P.down_masks[i] == 0]
    if len(tops) != 1 or len(bottoms) != 1:
        return None
    middle = P.size - 2
    if P.relation_count == 2 * middle + 1 and all(
            P.strict_lt[i] == 1 << tops[0] for i in range(P.size) if i not in (tops[0], bottoms[0])):
        return middle
    return None


def supersat_probe(n: int, P: Poset, eps: Fraction, trials: int = 1,
                   generator: str = "centered", induced: bool = False,
                   seed: Optional[int] = None) -> pd.DataFrame:
    """
    Copy counts in families of size (e(P)+ε)·binom(n, n/2).

    Returns:
        DataFrame with one row per trial: n, poset, generator, size, copies,
        ratio_to_n_x_binom and, for 2-chains, the ε·n/8·binom floor
    """
    check_ground(n)
    require_at_most("supersat_max_n", n)
    eps = Fraction(eps)
    if seed is None:
        seed = get_config()["settings"]["default_seed"]
    e = e_param(P, induced)
    x = x_param(P, induced) if is_connected(P) and P.size > 1 else None
    middle = comb(n, n // 2)
    size = min(floor((e + eps) * middle), 1 << n)
    s = _diamond_size(P)
    logger.info("Supersaturation probe for %s at n=%d, size %d (%s)...", P, n, size, generator)

    rows = []
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        F = generate_family(n, size, e, generator, rng)
        if is_chain2(P):
            copies = comparable_pair_count(F)
        elif s is not None and not induced:
            copies = diamond_lb(F, s)
        else:
            copies = count_copies(P, F, induced).copies
        row = {"n": n, "poset": str(P), "generator": generator, "trial": trial,
               "size": len(F), "copies": copies,
               "ratio_to_n_x_binom": None if x is None else Fraction(copies, n ** x * middle)}
        if is_chain2(P):
            row["kchain_floor"] = kchain_lower_bound(n, eps)
        rows.append(row)
    return pd.DataFrame(rows)


def main():
    """Demo function"""
    from poset_core import chain, diamond, vee

    logging.basicConfig(level=logging.INFO)
    print("Extremal Lab - Demo")
    print("=" * 30)
    for P in (chain(2), chain(3), vee(2), diamond(2)):
        print(f"{P}: {poset_params(P).to_json()}")
    print(f"La(4, chain:3) = {la_exact(4, chain(3)).size}")
    print(f"M(6, chain:2) = {m_count(6, chain(2))}")
    print(supersat_probe(8, chain(2), Fraction(1, 2)))


if __name__ == "__main__":
    main()
