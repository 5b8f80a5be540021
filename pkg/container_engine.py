#!/usr/bin/env python3
"""
Container Engine
Two-phase container algorithm for induced vee-free families. Every induced
∨_{r+1}-free F ⊆ 2^[n] is mapped to disjoint H1, H2 ⊆ F and families
f(H1), g(H1 ∪ H2) with H2 ⊆ f(H1), (H1 ∪ H2) ∩ g = ∅ and
F ⊆ H1 ∪ H2 ∪ g.
"""

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, log2
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from embedding_engine import find_induced_vee, has_copy_through, max_antichain_of_codes
from errors import BadParam, GroundTooLarge, InvariantViolation, NotVeeFree
from lab_config import get_config, require_at_most
from poset_core import vee
from subset_lattice import SetFamily, check_ground, level_family, popcounts, strict_supersets_in

logger = logging.getLogger(__name__)


@dataclass
class TraceEntry:
    round: int
    code: Optional[int]
    weight: int
    phase: int
    branch: str
    removed: List[int]

    def to_json(self) -> Dict:
        return {"round": self.round, "g": self.code, "w": self.weight, "phase": self.phase,
                "branch": self.branch, "removed": self.removed}


@dataclass
class ContainerOutput:
    n: int
    t: int
    r: int
    eps: Fraction
    H1: SetFamily
    H2: SetFamily
    f_H1: SetFamily
    g_H1H2: SetFamily
    trace: List[TraceEntry] = field(default_factory=list)
    phase_boundary: Optional[int] = None
    exhausted: bool = False
    eps_warning: bool = False

    def fingerprint(self):
        return (tuple(self.H1), tuple(self.H2))

    def to_json(self) -> Dict:
        family = lambda fam: fam.to_json(use_codes=True)
        return {"n": self.n, "t": self.t, "r": self.r, "eps": str(self.eps),
                "H1": family(self.H1), "H2": family(self.H2),
                "f_H1": family(self.f_H1), "g_H1H2": family(self.g_H1H2),
                "phase_boundary": self.phase_boundary, "exhausted": self.exhausted,
                "eps_warning": self.eps_warning,
                "trace": [entry.to_json() for entry in self.trace]}

    @classmethod
    def from_json(cls, data: Dict) -> "ContainerOutput":
        n = int(data["n"])

        def family(key: str) -> SetFamily:
            # {"n", "codes"} object or a bare code list
            value = data.get(key, [])
            if isinstance(value, dict):
                return SetFamily.from_json(value)
            return SetFamily.from_codes(n, value)

        trace = [TraceEntry(e["round"], e["g"], e["w"], e["phase"], e["branch"], list(e["removed"]))
                 for e in data.get("trace", [])]
        return cls(n, int(data["t"]), int(data["r"]), Fraction(data["eps"]),
                   family("H1"), family("H2"), family("f_H1"), family("g_H1H2"), trace,
                   data.get("phase_boundary"), bool(data.get("exhausted", False)),
                   bool(data.get("eps_warning", False)))


def phase_one_heavy(weight: int, n: int, t: int) -> bool:
    """weight > n^(t + 0.9), compared through tenth powers."""
    return weight ** 10 > n ** (10 * t + 9)


def phase_two_heavy(weight: int, n: int, t: int, eps: Fraction) -> bool:
    return weight > eps * eps * n ** t


class ContainerRun:
    """
    One execution of the algorithm. The candidate family G shrinks every
    round; weights only go down as it shrinks, so a heap of stale weights
    is a valid upper bound and only the popped set needs recomputing.
    """

    def __init__(self, F: SetFamily, t: int, r: int, eps: Fraction):
        self.F = F
        self.n = F.ground_n
        self.t, self.r, self.eps = t, r, Fraction(eps)
        self.alive = np.ones(1 << self.n, dtype=bool)
        self.in_family = F.membership
        self.family_left = len(F)
        sizes = popcounts(self.n)
        self.heap = [(-comb(self.n - int(s), (self.n - int(s)) // 2), code)
                     for code, s in enumerate(sizes)]
        heapq.heapify(self.heap)
        self.trace: List[TraceEntry] = []

    def alive_codes(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    def up_set(self, code: int) -> np.ndarray:
        live = self.alive_codes()
        return live[(live & code) == code]

    def weight(self, code: int) -> int:
        """Largest antichain among live sets containing `code` (code itself included)."""
        return max(1, max_antichain_of_codes(strict_supersets_in(self.F, code, self.up_set(code))))

    def pick(self):
        """Live set of largest weight, ties to the smallest code."""
        while self.heap:
            stale, code = heapq.heappop(self.heap)
            if not self.alive[code]:
                continue
            w = self.weight(code)
            if w == -stale:
                return code, w
            heapq.heappush(self.heap, (-w, code))
        return None, 0

    def canonical_antichain(self, code: int, w: int) -> List[int]:
        """Lexicographically smallest sorted code sequence among maximum antichains of the up-set."""
        upper = self.up_set(code)
        if w == 1:
            return [code]
        chosen: List[int] = []
        for c in upper:
            c = int(c)
            if any((c & d) == c or (c & d) == d for d in chosen):
                continue
            later = upper[upper > c]
            free = later[((later & c) != c) & ((later & c) != later)]
            for d in chosen:
                free = free[((free & d) != d) & ((free & d) != free)]
            if len(chosen) + 1 + max_antichain_of_codes(free) == w:
                chosen.append(c)
                if len(chosen) == w:
                    break
        return chosen

    def remove(self, codes) -> None:
        for c in codes:
            if self.alive[c]:
                self.alive[c] = False
                if self.in_family[c]:
                    self.family_left -= 1

    def run(self) -> ContainerOutput:
        n, t = self.n, self.t
        H = {1: [], 2: []}
        phase = 1
        boundary = None
        f_family = None
        round_index = 0
        exhausted = False
        while True:
            round_index += 1
            # with F used up and every weight heavy, Phase II only skips until G is empty
            if phase == 2 and self.family_left == 0 and phase_two_heavy(1, n, t, self.eps):
                removed = [int(c) for c in self.alive_codes()]
                self.trace.append(TraceEntry(round_index, None, 0, phase, "exhausted", removed))
                self.alive[:] = False
                exhausted = True
                break
            code, w = self.pick()
            if code is None:
                break
            heavy = phase_one_heavy(w, n, t) if phase == 1 else phase_two_heavy(w, n, t, self.eps)
            if not heavy:
                # a light pick ends the phase whether or not it lies in F
                self.trace.append(TraceEntry(round_index, code, w, phase, "end", []))
                if phase == 1:
                    f_family = self.alive.copy()
                    boundary = round_index
                    phase = 2
                    # the set that ended Phase I stays live and is picked again in Phase II
                    heapq.heappush(self.heap, (-w, code))
                    continue
                break
            if not self.in_family[code]:
                self.remove([code])
                self.trace.append(TraceEntry(round_index, code, w, phase, "skip", [code]))
                continue
            antichain = self.canonical_antichain(code, w)
            removed = sorted(set(antichain) | {code})
            H[phase].extend(c for c in removed if self.in_family[c])
            self.remove(removed)
            self.trace.append(TraceEntry(round_index, code, w, phase, "remove", removed))

        empty = np.zeros(1 << n, dtype=bool)
        f_mask = f_family if f_family is not None else empty
        result = ContainerOutput(
            n, t, self.r, self.eps,
            SetFamily.from_codes(n, H[1]), SetFamily.from_codes(n, H[2]),
            SetFamily(n, f_mask), SetFamily(n, self.alive.copy()),
            self.trace, boundary, exhausted)
        return result


def run_container(F: SetFamily, t: int, r: int, eps: Fraction) -> ContainerOutput:
    """
    Run the container algorithm on an induced ∨_{r+1}-free family.

    Args:
        F: the family (validated to be induced ∨_{r+1}-free)
        t, r: positive integers
        eps: ε > 0; values above 1/(2t)^(t+1) run with eps_warning set

    Returns:
        ContainerOutput, already checked for coverage
    """
    if t < 1 or r < 1:
        raise BadParam("t and r must be positive")
    eps = Fraction(eps)
    if eps <= 0:
        raise BadParam("eps must be positive")
    check_ground(F.ground_n)
    require_at_most("container_max_n", F.ground_n, GroundTooLarge)
    vee_found = find_induced_vee(F, r + 1)
    if vee_found is not None:
        raise NotVeeFree(*vee_found)
    warn = eps > Fraction(1, (2 * t) ** (t + 1))
    if warn:
        logger.warning("eps=%s exceeds 1/(2t)^(t+1); running anyway", eps)
    logger.info("Running container algorithm: n=%d |F|=%d t=%d r=%d eps=%s",
                F.ground_n, len(F), t, r, eps)
    out = ContainerRun(F, t, r, eps).run()
    out.eps_warning = warn
    covered = out.H1.union(out.H2).union(out.g_H1H2)
    if not F.issubfamily(covered):
        raise InvariantViolation("coverage", "F is not inside H1 ∪ H2 ∪ g")
    logger.debug("container run: %d rounds, |H1|=%d |H2|=%d |f|=%d |g|=%d", len(out.trace),
                 len(out.H1), len(out.H2), len(out.f_H1), len(out.g_H1H2))
    return out


@dataclass
class ContainerReport:
    structural: bool
    accounting: bool
    termination: bool
    bounds: Dict[str, bool]

    def to_json(self) -> Dict:
        return {"structural": self.structural, "accounting": self.accounting,
                "termination": self.termination, "bounds": self.bounds}


def verify_container(out: ContainerOutput, F: SetFamily, t: int, r: int,
                     eps: Fraction) -> ContainerReport:
    """
    Re-check a run independently. Structural, accounting and termination
    failures raise InvariantViolation; the size bounds that only hold for
    large n are reported.
    """
    eps = Fraction(eps)
    n = F.ground_n
    H1, H2, f, g = out.H1, out.H2, out.f_H1, out.g_H1H2
    if len(H1.intersection(H2)):
        raise InvariantViolation("H1 ∩ H2 = ∅")
    if len(H1.union(H2).intersection(g)):
        raise InvariantViolation("(H1 ∪ H2) ∩ g = ∅")
    if not H2.issubfamily(f):
        raise InvariantViolation("H2 ⊆ f(H1)")
    if not F.issubfamily(H1.union(H2).union(g)):
        raise InvariantViolation("F ⊆ H1 ∪ H2 ∪ g")
    if not H1.union(H2).issubfamily(F):
        raise InvariantViolation("H1 ∪ H2 ⊆ F")

    for entry in out.trace:
        if entry.branch != "remove":
            continue
        if len(entry.removed) < entry.weight:
            raise InvariantViolation("removal size", f"round {entry.round} removed "
                                     f"{len(entry.removed)} sets at weight {entry.weight}")
        if entry.phase == 1:
            added = sum(1 for c in entry.removed if c in F)
            if added > r + 1:
                raise InvariantViolation("H1 growth", f"round {entry.round} added {added} > r+1")
            if not phase_one_heavy(entry.weight, n, t):
                raise InvariantViolation("phase I threshold", f"round {entry.round}")
        elif not phase_two_heavy(entry.weight, n, t, eps):
            raise InvariantViolation("phase II threshold", f"round {entry.round}")

    threshold = eps * eps * n ** t
    for code in g:
        w = max(1, max_antichain_of_codes(strict_supersets_in(g, code)))
        if w > threshold:
            raise InvariantViolation("termination weight",
                                     f"{code} has weight {w} > ε²n^t = {threshold}")

    middle = comb(n, n // 2)
    bounds = {
        "H1 <= (r+1)2^n/n^(t+0.9)": len(H1) ** 10 * n ** (10 * t + 9) <= ((r + 1) << n) ** 10,
        "f <= (t+1+eps)binom": len(f) <= (t + 1 + eps) * middle,
        "H2 <= (r+1)(t+2)binom/(eps^2 n^t)": len(H2) * eps * eps * n ** t <= (r + 1) * (t + 2) * middle,
        "g <= (t+eps)binom": len(g) <= (t + eps) * middle,
    }
    return ContainerReport(True, True, True, bounds)


# --- census ------------------------------------------------------------------

def random_vee_free_family(n: int, r: int, rng, levels=None) -> SetFamily:
    """Greedy induced ∨_{r+1}-free family over `levels` (default: the two middle levels)."""
    if levels is None:
        levels = [n // 2, n // 2 + 1] if n >= 2 else [0, 1]
    candidates = rng.permutation(level_family(n, [j for j in levels if 0 <= j <= n]).codes)
    membership = np.zeros(1 << n, dtype=bool)
    V = vee(r + 1)
    for code in candidates:
        membership[code] = True
        if has_copy_through(V, SetFamily(n, membership), int(code), induced=True):
            membership[code] = False
    return SetFamily(n, membership)


def middle_antichain_family(n: int, rng, density: float = 0.5) -> SetFamily:
    level = level_family(n, [n // 2]).codes
    return SetFamily.from_codes(n, level[rng.random(len(level)) < density])


GENERATORS = ("greedy", "antichain")


@dataclass(frozen=True)
class ContainerCountBound:
    n: int
    r: int
    eps: Fraction
    fingerprint_size: int
    log2_containers: float
    log2_families: float

    @property
    def exponent(self) -> float:
        return self.log2_families / comb(self.n, self.n // 2)


def container_count_bound(n: int, r: int, eps: Fraction) -> ContainerCountBound:
    """
    log2 of the bound on induced ∨_{r+1}-free families obtained from containers
    with t = 1: choose H1 ∪ H2, split it, then take any subfamily of the
    (1+2ε)binom-sized container.
    """
    eps = Fraction(eps)
    middle = comb(n, n // 2)
    size = int((r + 1) * 3 * middle / (eps * eps * n))
    size = min(size, 1 << n)
    log2_containers = log2(comb(1 << n, size)) + size if size else 0.0
    log2_families = log2_containers + float((1 + 2 * eps) * middle)
    return ContainerCountBound(n, r, eps, size, log2_containers, log2_families)


def container_census(n: int, t: int, r: int, eps: Fraction, generator: str = "greedy",
                     trials: int = 10, seed: Optional[int] = None) -> pd.DataFrame:
    """
    Run the algorithm on generated induced ∨_{r+1}-free families and tabulate
    container sizes. The frame's attrs carry the summary: distinct
    containers, largest |H1 ∪ H2| and the counting bound.
    """
    require_at_most("census_max_n", n)
    if generator not in GENERATORS:
        raise BadParam(f"unknown generator '{generator}', expected one of {GENERATORS}")
    if seed is None:
        seed = get_config()["settings"]["default_seed"]
    rng = np.random.default_rng(seed)
    rows = []
    fingerprints = set()
    for trial in range(trials):
        if generator == "greedy":
            F = random_vee_free_family(n, r, rng)
        else:
            F = middle_antichain_family(n, rng)
        out = run_container(F, t, r, eps)
        report = verify_container(out, F, t, r, eps)
        fingerprints.add(out.fingerprint())
        rows.append({"trial": trial, "family": len(F), "H1": len(out.H1), "H2": len(out.H2),
                     "f": len(out.f_H1), "g": len(out.g_H1H2), "rounds": len(out.trace),
                     "fingerprint": hash(out.fingerprint()),
                     **{f"bound: {k}": v for k, v in report.bounds.items()}})
    table = pd.DataFrame(rows)
    bound = container_count_bound(n, r, eps)
    table.attrs["distinct_containers"] = len(fingerprints)
    table.attrs["max_H1_H2"] = int((table["H1"] + table["H2"]).max()) if rows else 0
    table.attrs["fingerprint_bits"] = table.attrs["max_H1_H2"] * n
    table.attrs["container_bound_bits"] = float((1 + 2 * Fraction(eps)) * comb(n, n // 2))
    table.attrs["count_bound_exponent"] = bound.exponent
    logger.info("Census: %d trials, %d distinct containers", trials, len(fingerprints))
    return table


def main():
    """Demo function"""
    logging.basicConfig(level=logging.INFO)
    F = level_family(6, [3])
    out = run_container(F, 1, 1, Fraction(1, 8))
    print(f"middle level of 2^[6]: |H1|={len(out.H1)} |H2|={len(out.H2)} "
          f"|f|={len(out.f_H1)} |g|={len(out.g_H1H2)} rounds={len(out.trace)}")
    print(verify_container(out, F, 1, 1, Fraction(1, 8)).to_json())


if __name__ == "__main__":
    main()
