#!/usr/bin/env python3
"""
Random Lab
Experiments in the random model P(n,p): every subset of [n] is kept
independently with probability p. Samples come from a counter-based
generator keyed by (seed, code), so any single membership can be
recomputed without drawing the rest of the sample.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from embedding_engine import antichain_witness, du_decomposition, is_p_free, iter_embeddings
from errors import BadParam, InvariantViolation, PosetLabError
from extremal_lab import d_param, e_param, is_chain2, largest_free_subfamily
from lab_config import get_config, limit, require_at_most
from poset_core import Poset, complete_multipartite, parse_poset
from subset_lattice import SetFamily, check_ground, middle_levels

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def as_probability(p) -> Fraction:
    """Exact rational probability from a Fraction, int, float or "p/q" string."""
    try:
        value = Fraction(p)
    except (TypeError, ValueError) as exc:
        raise BadParam(f"not a probability: {p!r}") from exc
    if not 0 <= value <= 1:
        raise BadParam(f"probability must be in [0, 1], got {value}")
    return value


def power_probability(n: int, gamma: float) -> Fraction:
    """p = n^(-gamma) as a rational."""
    return Fraction(float(n) ** -float(gamma)).limit_denominator(10 ** 12)


def splitmix64(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + GOLDEN
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def uniform_bits(seed: int, codes: np.ndarray) -> np.ndarray:
    """64 pseudo-random bits per code, a pure function of (seed, code)."""
    key = splitmix64(np.array([seed & MASK64], dtype=np.uint64))[0]
    return splitmix64(np.asarray(codes, dtype=np.uint64) ^ key)


def sample_pnp(n: int, p, seed: int) -> SetFamily:
    """
    Draw P(n,p).

    Args:
        n: ground set size (at most max_ground_n)
        p: membership probability, exact rational in [0, 1]
        seed: 64-bit seed

    Returns:
        SetFamily containing code c iff bits(seed, c) < floor(p * 2^64)
    """
    check_ground(n)
    p = as_probability(p)
    if p == 1:
        return SetFamily.full(n)
    threshold = np.uint64(p.numerator * (1 << 64) // p.denominator)
    bits = uniform_bits(seed, np.arange(1 << n, dtype=np.uint64))
    return SetFamily(n, bits < threshold)


@dataclass
class RandomExperiment:
    n: int
    p: Fraction
    seed: int
    sample: SetFamily
    stats: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def draw(cls, n: int, p, seed: int) -> "RandomExperiment":
        return cls(n, as_probability(p), seed, sample_pnp(n, p, seed))

    def middle_part(self, levels: int) -> SetFamily:
        """M_p: the sample restricted to `levels` middle levels."""
        return self.sample.intersection(middle_levels(self.n, min(levels, self.n + 1)))

    def to_json(self) -> Dict:
        return {"n": self.n, "p": str(self.p), "seed": self.seed,
                "sample_size": len(self.sample), **self.stats}


# --- removing copies ---------------------------------------------------------

def _all_copies(P: Poset, F: SetFamily, induced: bool) -> List[Tuple[int, ...]]:
    require_at_most("copy_count_max_family", len(F))
    return list({tuple(sorted(a)) for a in iter_embeddings(P, F, induced)})


def remove_copies(F: SetFamily, P: Poset, induced: bool = False) -> Tuple[SetFamily, int]:
    """
    Delete sets until no copy of P is left, always the set lying in the most
    remaining copies (ties to the smallest code). Copies inside a subfamily
    are exactly the old copies that avoid the deleted sets, so they are
    listed once.
    """
    copies = _all_copies(P, F, induced)
    removed: List[int] = []
    while copies:
        cover: Dict[int, int] = {}
        for copy in copies:
            for code in copy:
                cover[code] = cover.get(code, 0) + 1
        victim = min(cover, key=lambda c: (-cover[c], c))
        removed.append(victim)
        copies = [copy for copy in copies if victim not in copy]
    return F.without_codes(removed), len(removed)


def removal_construction(n: int, p, seed: int, P: Poset,
                         induced: bool = False) -> Tuple[SetFamily, int]:
    """
    The random lower-bound construction: take the sample inside the e(P)+1
    middle levels and remove copies of P from it.

    Returns:
        (P-free family, number of removed sets)
    """
    check_ground(n)
    require_at_most("removal_max_n", n)
    e = e_param(P, induced)
    M_p = RandomExperiment.draw(n, p, seed).middle_part(e + 1)
    logger.info("Removal construction: n=%d p=%s seed=%d, |M_p|=%d", n, p, seed, len(M_p))
    family, removed = remove_copies(M_p, P, induced)
    if not is_p_free(P, family, induced):
        raise InvariantViolation("removal construction", "a copy of P survived")
    return family, removed


# --- largest free subfamily --------------------------------------------------

@dataclass(frozen=True)
class FreeResult:
    size: int
    lower_witness: SetFamily
    exact: bool
    method: str

    def to_json(self) -> Dict:
        return {"size": self.size, "exact": self.exact, "method": self.method,
                "witness": self.lower_witness.to_json(use_codes=True)}


def _level_window(sample: SetFamily, e: int) -> SetFamily:
    """Sample ∩ the e consecutive levels holding most of it."""
    n = sample.ground_n
    if e <= 0:
        return SetFamily.empty(n)
    counts = sample.level_counts()
    width = min(e, n + 1)
    low = max(range(n - width + 2), key=lambda j: (sum(counts.get(j + i, 0) for i in range(width)), -j))
    return sample.restrict_levels(range(low, low + width))


def heuristic_free(sample: SetFamily, P: Poset, induced: bool = False) -> SetFamily:
    """Best of the repaired level window and copy removal inside the e+1 middle levels."""
    n = sample.ground_n
    e = e_param(P, induced)
    window, _ = remove_copies(_level_window(sample, e), P, induced)
    middle = sample.intersection(middle_levels(n, min(e + 1, n + 1)))
    removal, _ = remove_copies(middle, P, induced)
    return max(window, removal, key=len)


def largest_free_in_sample(sample: SetFamily, P: Poset, induced: bool = False) -> FreeResult:
    """
    Largest (induced) P-free subfamily of a sample.

    Exact for 2-chains (a maximum antichain) and for samples of at most
    exact_sample_max sets (exhaustive search); a certified free lower bound
    otherwise.
    """
    if is_chain2(P):
        witness = SetFamily.from_codes(sample.ground_n, antichain_witness(sample))
        return FreeResult(len(witness), witness, True, "antichain")
    guess = heuristic_free(sample, P, induced)
    if len(guess) == len(sample):
        return FreeResult(len(guess), guess, True, "whole sample")
    if len(sample) <= limit("exact_sample_max"):
        witness, nodes = largest_free_subfamily(sample, P, induced, guess)
        logger.debug("exact free search over %d sets: %d nodes", len(sample), nodes)
        return FreeResult(len(witness), witness, True, "exhaustive")
    return FreeResult(len(guess), guess, False, "heuristic")


# --- sweeps ------------------------------------------------------------------

def _regime(gamma: float, d: Optional[Fraction]) -> str:
    """p = n^-gamma sits below the threshold n^-d when gamma > d."""
    if d is None:
        return "unknown"
    if gamma > d:
        return "below d"
    if gamma < d:
        return "above d"
    return "at d"


def _sweep_row(P: Poset, induced: bool, n: int, gamma: float, p: Fraction,
               seed: int, regime: str) -> Dict[str, Any]:
    sample = sample_pnp(n, p, seed)
    result = largest_free_in_sample(sample, P, induced)
    scale = p * comb(n, n // 2)
    return {"n": n, "p": str(p), "gamma": gamma, "seed": seed, "sample": len(sample),
            "size": result.size, "normalized": float(result.size / scale) if scale else None,
            "exact_flag": result.exact, "regime": regime}


def threshold_sweep(P: Poset, induced: bool, ns: Sequence[int], gammas: Sequence[float],
                    seeds: Sequence[int], threads: Optional[int] = None,
                    p_mode: str = "n^-gamma") -> pd.DataFrame:
    """
    Largest free subfamily of P(n, n^-gamma) over a grid, normalized by
    p·binom(n, n/2), with each gamma marked against d(P).

    Args:
        P: forbidden poset
        induced: forbid induced copies
        ns: ground set sizes
        gammas: exponents, or probabilities when p_mode is "fixed"
        seeds: one row per seed
        threads: worker threads, defaults to settings.default_threads

    Returns:
        DataFrame with columns n, p, gamma, seed, sample, size, normalized,
        exact_flag, regime
    """
    if p_mode not in ("n^-gamma", "fixed"):
        raise BadParam(f"unknown p_mode '{p_mode}'")
    columns = ["n", "p", "gamma", "seed", "sample", "size", "normalized", "exact_flag", "regime"]
    if not seeds:
        return pd.DataFrame(columns=columns)
    for n in ns:
        check_ground(n)
        require_at_most("removal_max_n", n)
    try:
        d = d_param(P, induced).value
    except PosetLabError as exc:
        logger.warning("d(%s) unavailable (%s); regimes left unmarked", P, exc)
        d = None

    jobs = []
    for n in ns:
        for gamma in gammas:
            if p_mode == "fixed":
                p, regime = as_probability(gamma), "fixed"
            else:
                p, regime = power_probability(n, gamma), _regime(gamma, d)
            jobs.extend((P, induced, n, gamma, p, seed, regime) for seed in seeds)
    threads = threads or get_config()["settings"]["default_threads"]
    logger.info("Threshold sweep for %s: %d runs on %d threads", P, len(jobs), threads)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(lambda job: _sweep_row(*job), jobs))
    return pd.DataFrame(rows, columns=columns)


def run_experiment_config(config: Dict[str, Any], threads: Optional[int] = None) -> pd.DataFrame:
    """Run a sweep described by {"poset", "induced", "n", "gamma", "seeds", "p_mode"}."""
    missing = [key for key in ("poset", "n", "gamma", "seeds") if key not in config]
    if missing:
        raise BadParam(f"experiment config is missing {missing}")
    P = parse_poset(config["poset"]) if isinstance(config["poset"], str) else Poset.from_json(config["poset"])
    return threshold_sweep(P, bool(config.get("induced", False)), config["n"], config["gamma"],
                           config["seeds"], threads, config.get("p_mode", "n^-gamma"))


def du_bound_probe(n: int, p, seeds: Sequence[int], s: int, t: int) -> pd.DataFrame:
    """
    For induced K_{s,1,t}: every member of a free family falls in its D or U
    part, so the free witness found in each sample satisfies
    |witness| <= |D| + |U|. Reports both sides and the sample's own split.
    """
    P = complete_multipartite(s, 1, t)
    rows = []
    for seed in seeds:
        sample = sample_pnp(n, p, seed)
        result = largest_free_in_sample(sample, P, induced=True)
        own = du_decomposition(result.lower_witness, s, t)
        whole = du_decomposition(sample, s, t)
        rows.append({"n": n, "p": str(as_probability(p)), "seed": seed, "sample": len(sample),
                     "free_size": result.size, "exact_flag": result.exact,
                     "D": len(own.down), "U": len(own.up), "rest": len(own.rest),
                     "bound_holds": result.size <= len(own.down) + len(own.up),
                     "sample_D": len(whole.down), "sample_U": len(whole.up)})
    return pd.DataFrame(rows)


def main():
    """Demo function"""
    from poset_core import chain, vee

    logging.basicConfig(level=logging.INFO)
    n = 10
    sample = sample_pnp(n, Fraction(1, 2), 7)
    print(f"P({n}, 1/2) with seed 7: {len(sample)} sets")
    print(f"largest antichain in it: {largest_free_in_sample(sample, chain(2)).size}")
    family, removed = removal_construction(n, Fraction(1, 30), 7, chain(2))
    print(f"removal construction: {len(family)} sets left after {removed} removals")
    print(threshold_sweep(vee(2), True, [8], [0.5, 1.5], [1, 2]))


if __name__ == "__main__":
    main()
