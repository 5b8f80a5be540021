#!/usr/bin/env python3
"""
Chain Machinery
Maximal chains of 2^[n] grouped by the first and last family member they
meet (the min-max partition), interval statistics b(A,C) and a(A,C), and the
pair-count lemmas that bound Σ|G|!(k-|G|)! for diamond-free and thin families.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from embedding_engine import is_p_free, max_antichain, max_antichain_of_codes
from errors import BadParam
from lab_config import get_config, require_at_most
from poset_core import diamond, m_values
from subset_lattice import SetFamily, popcounts, walk_all_families

logger = logging.getLogger(__name__)

METHODS = ("dp", "walk", "sample")


@dataclass(frozen=True)
class PairStats:
    A: int
    C: int
    b: int
    a: Optional[int]
    mass: object  # int when exact, Fraction estimate when sampled

    def to_json(self) -> Dict:
        return {"A": self.A, "C": self.C, "b": self.b, "a": self.a, "mass": str(self.mass)}


@dataclass
class ChainStats:
    ground_n: int
    pairs: List[PairStats]
    empty_mass: object
    exact: bool
    method: str
    samples: int = 0
    extra: Dict = field(default_factory=dict)

    def total_mass(self):
        return self.empty_mass + sum(p.mass for p in self.pairs)

    def mass(self, A: int, C: int):
        for p in self.pairs:
            if (p.A, p.C) == (A, C):
                return p.mass
        return 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_json() for p in self.pairs],
                            columns=["A", "C", "b", "a", "mass"])

    def to_json(self) -> Dict:
        return {"pairs": [p.to_json() for p in self.pairs],
                "empty_mass": str(self.empty_mass), "exact": self.exact,
                "method": self.method, "samples": self.samples}


# --- interval statistics ------------------------------------------------------

def interval_counts(F: SetFamily) -> Dict[Tuple[int, int], int]:
    """b(A,C) for every pair A ⊆ C of members, diagonal included (b(A,A) = 0)."""
    counts: Dict[Tuple[int, int], int] = {}
    codes = F.codes
    for A in codes:
        above = codes[(A & ~codes) == 0]
        # strict[x, y]: above[x] ⊊ above[y]
        strict = (((above[:, None] & ~above[None, :]) == 0)
                  & (above[:, None] != above[None, :]))
        between = strict[above != A].sum(axis=0)
        for C, b in zip(above, between):
            counts[(int(A), int(C))] = int(b) if C != A else 0
    return counts


def interval_antichain(F: SetFamily, A: int, C: int) -> int:
    """a(A,C): largest antichain of F ∩ [A, C]."""
    codes = F.codes
    inside = codes[((A & ~codes) == 0) & ((codes & ~C) == 0)]
    return max_antichain_of_codes(inside)


# --- chain masses -------------------------------------------------------------

def avoiding_paths(n: int, blocked: np.ndarray) -> np.ndarray:
    """
    paths[X] = number of chains ∅ ⊂ ... ⊂ X, one element per step, that use
    no blocked set (X itself included).
    """
    sizes = popcounts(n)
    paths = np.zeros(1 << n, dtype=np.int64)
    paths[0] = 0 if blocked[0] else 1
    for level in range(1, n + 1):
        layer = np.flatnonzero(sizes == level)
        total = np.zeros(len(layer), dtype=np.int64)
        for bit in range(n):
            has = (layer >> bit & 1).astype(bool)
            total[has] += paths[layer[has] ^ (1 << bit)]
        total[blocked[layer]] = 0
        paths[layer] = total
    return paths


def _reach(n: int, paths: np.ndarray, code: int) -> int:
    """Chains from ∅ to code that avoid blocked sets strictly before code."""
    if code == 0:
        return 1
    return int(sum(int(paths[code ^ (1 << b)]) for b in range(n) if code >> b & 1))


def _masses_dp(F: SetFamily, pair_keys) -> Tuple[Dict, int]:
    n = F.ground_n
    blocked = F.membership
    down = avoiding_paths(n, blocked)
    up = avoiding_paths(n, blocked[::-1])
    full = (1 << n) - 1
    reach_down = {A: _reach(n, down, A) for A in F}
    reach_up = {C: _reach(n, up, full ^ C) for C in F}
    masses = {}
    for A, C in pair_keys:
        gap = popcounts(n)[C] - popcounts(n)[A]
        masses[(A, C)] = reach_down[A] * factorial(int(gap)) * reach_up[C]
    return masses, int(down[full])


def _chain_min_max(members: np.ndarray, order) -> Tuple[int, int]:
    code = 0
    lowest = highest = -1
    if members[0]:
        lowest = highest = 0
    for element in order:
        code |= 1 << element
        if members[code]:
            if lowest < 0:
                lowest = code
            highest = code
    return lowest, highest


def _masses_walk(F: SetFamily) -> Tuple[Dict, int]:
    require_at_most("chain_walk_max_n", F.ground_n)
    members = F.membership
    masses: Dict[Tuple[int, int], int] = {}
    empty = 0
    for order in permutations(range(F.ground_n)):
        key = _chain_min_max(members, order)
        if key[0] < 0:
            empty += 1
        else:
            masses[key] = masses.get(key, 0) + 1
    return masses, empty


def _masses_sample(F: SetFamily, samples: int, seed: int) -> Tuple[Dict, Fraction]:
    rng = np.random.default_rng(seed)
    members = F.membership
    n = F.ground_n
    hits: Dict[Tuple[int, int], int] = {}
    empty = 0
    for _ in range(samples):
        key = _chain_min_max(members, rng.permutation(n))
        if key[0] < 0:
            empty += 1
        else:
            hits[key] = hits.get(key, 0) + 1
    scale = Fraction(factorial(n), samples)
    return {k: v * scale for k, v in hits.items()}, empty * scale


def minmax_stats(F: SetFamily, method: str = "dp", samples: int = 10000,
                 seed: Optional[int] = None, antichains: bool = True) -> ChainStats:
    """
    Min-max partition of the maximal chains of 2^[n] with respect to F.

    Args:
        F: the family
        method: "dp" (exact path counting), "walk" (all n! chains, n <= 10)
                or "sample" (random chains, masses are estimates)
        samples: chain sample size for method "sample"
        seed: sampler seed, defaults to settings.default_seed
        antichains: also compute a(A,C) for every pair

    Returns:
        ChainStats with one entry per pair A ⊆ C of members
    """
    if method not in METHODS:
        raise BadParam(f"unknown method '{method}', expected one of {METHODS}")
    logger.info("Computing min-max chain statistics (%s) for %r...", method, F)
    intervals = interval_counts(F)
    if method == "dp":
        masses, empty = _masses_dp(F, intervals.keys())
    elif method == "walk":
        masses, empty = _masses_walk(F)
    else:
        if samples < 1:
            raise BadParam("samples must be positive")
        if seed is None:
            seed = get_config()["settings"]["default_seed"]
        masses, empty = _masses_sample(F, samples, seed)

    pairs = [PairStats(A, C, b, interval_antichain(F, A, C) if antichains else None,
                       masses.get((A, C), 0))
             for (A, C), b in sorted(intervals.items())]
    return ChainStats(F.ground_n, pairs, empty, exact=method != "sample", method=method,
                      samples=samples if method == "sample" else 0)


def diamond_lb(F: SetFamily, s: int) -> int:
    """Σ over strictly comparable pairs of binom(b(A,C), s)."""
    if s < 2:
        raise BadParam("diamond_lb needs s >= 2")
    return sum(comb(b, s) for (A, C), b in interval_counts(F).items() if A != C)


# --- pair-count lemmas --------------------------------------------------------

def chain_pair_count(G: SetFamily) -> int:
    """Pairs (member, maximal chain through it) = Σ |G|!(k-|G|)!."""
    k = G.ground_n
    return sum(count * factorial(size) * factorial(k - size)
               for size, count in G.level_counts().items())


def antichain_cap_check(G: SetFamily, cap: int) -> Tuple[bool, int]:
    return max_antichain(G) <= cap, chain_pair_count(G)


@dataclass
class LemmaReport:
    k: int
    s: int
    families: int = 0
    diamond_checked: int = 0
    antichain_checked: int = 0
    diamond_violations: List[List[int]] = field(default_factory=list)
    antichain_violations: List[List[int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diamond_violations and not self.antichain_violations


def exhaustive_lemma_check(k: int, s: int = 3) -> LemmaReport:
    """
    Walk every family of 2^[k] and confirm both pair-count bounds:
    D_s-free families have at most m_s·k! pairs and families without an
    antichain of size 4 have at most 4·k! pairs. Only families above a bound
    need the expensive freeness test.
    """
    require_at_most("count_free_max_n", k)
    m_s = m_values(s).m_s
    fact = factorial(k)
    weight = [factorial(int(size)) * factorial(k - int(size)) for size in popcounts(k)]
    D = diamond(s)
    report = LemmaReport(k, s)
    pairs = 0
    for code, added, members in walk_all_families(k):
        if code >= 0:
            pairs += weight[code] if added else -weight[code]
        report.families += 1
        if pairs > m_s * fact:
            report.diamond_checked += 1
            F = SetFamily.from_codes(k, members)
            if is_p_free(D, F):
                report.diamond_violations.append(sorted(members))
        if pairs > 4 * fact:
            report.antichain_checked += 1
            if max_antichain_of_codes(sorted(members)) <= 3:
                report.antichain_violations.append(sorted(members))
    logger.info("Pair-count lemmas on 2^[%d]: %d families, %d diamond checks, %d antichain checks",
                k, report.families, report.diamond_checked, report.antichain_checked)
    return report


def main():
    """Demo function"""
    from subset_lattice import middle_levels

    logging.basicConfig(level=logging.INFO)
    F = middle_levels(6, 3)
    stats = minmax_stats(F, antichains=False)
    print(f"middle_levels(6,3): {len(stats.pairs)} pairs, total mass {stats.total_mass()} (6! = 720)")
    print(f"diamond_lb(2^[3], 2) = {diamond_lb(SetFamily.full(3), 2)}")
    print(stats.to_frame().head())


if __name__ == "__main__":
    main()
