#!/usr/bin/env python3
"""
Subset Lattice
Families of subsets of [n] stored as membership bitmaps over the 2^n subset
codes (bit i of a code means element i+1 is present), plus level families,
centered families, the Lubell function and inclusion-chain counting.
"""

import json
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Tuple

import numpy as np

from errors import BadParam, GroundTooLarge
from lab_config import require_at_most

logger = logging.getLogger(__name__)


def check_ground(n: int) -> None:
    if n < 1:
        raise BadParam(f"ground set size must be at least 1, got {n}")
    require_at_most("max_ground_n", n, GroundTooLarge)


@lru_cache(maxsize=None)
def popcounts(n: int) -> np.ndarray:
    """Set size of every code in 0..2^n-1."""
    codes = np.arange(1 << n, dtype=np.int64)
    sizes = np.zeros(1 << n, dtype=np.int8)
    for bit in range(n):
        sizes += (codes >> bit & 1).astype(np.int8)
    sizes.flags.writeable = False
    return sizes


def set_to_code(members: Iterable[int]) -> int:
    code = 0
    for e in members:
        if e < 1:
            raise BadParam(f"set elements are 1-based, got {e}")
        code |= 1 << (e - 1)
    return code


def code_to_set(code: int) -> List[int]:
    return [i + 1 for i in range(code.bit_length()) if code >> i & 1]


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


class SetFamily:
    """
    A family F ⊆ 2^[n]. Treated as immutable: every operation returns a
    new family and the bitmap is marked read-only.
    """

    def __init__(self, ground_n: int, membership: np.ndarray):
        check_ground(ground_n)
        membership = np.asarray(membership, dtype=bool)
        if membership.shape != (1 << ground_n,):
            raise BadParam(f"membership must have length 2^{ground_n}")
        self.ground_n = ground_n
        self.membership = membership.copy()
        self.membership.flags.writeable = False
        self.cardinality = int(self.membership.sum())
        self._codes = None

    # --- constructors ---

    @classmethod
    def empty(cls, n: int) -> "SetFamily":
        check_ground(n)
        return cls(n, np.zeros(1 << n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "SetFamily":
        check_ground(n)
        return cls(n, np.ones(1 << n, dtype=bool))

    @classmethod
    def from_codes(cls, n: int, codes: Iterable[int]) -> "SetFamily":
        check_ground(n)
        membership = np.zeros(1 << n, dtype=bool)
        codes = list(codes)
        if codes:
            arr = np.asarray(codes, dtype=np.int64)
            if arr.min() < 0 or arr.max() >= 1 << n:
                raise BadParam(f"subset code out of range for n={n}")
            membership[arr] = True
        return cls(n, membership)

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        codes = []
        for s in sets:
            code = set_to_code(s)
            if code >= 1 << n:
                raise BadParam(f"set {list(s)} is not a subset of [{n}]")
            codes.append(code)
        return cls.from_codes(n, codes)

    # --- views ---

    @property
    def codes(self) -> np.ndarray:
        if self._codes is None:
            self._codes = np.flatnonzero(self.membership).astype(np.int64)
            self._codes.flags.writeable = False
        return self._codes

    def sizes(self) -> np.ndarray:
        return popcounts(self.ground_n)[self.codes]

    def level_counts(self) -> Dict[int, int]:
        values, counts = np.unique(self.sizes(), return_counts=True)
        return {int(v): int(c) for v, c in zip(values, counts)}

    def sets(self) -> List[List[int]]:
        return [code_to_set(int(c)) for c in self.codes]

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, code: int) -> bool:
        return 0 <= code < len(self.membership) and bool(self.membership[code])

    def __iter__(self) -> Iterator[int]:
        return (int(c) for c in self.codes)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SetFamily) and self.ground_n == other.ground_n
                and np.array_equal(self.membership, other.membership))

    def __hash__(self) -> int:
        return hash((self.ground_n, self.membership.tobytes()))

    def __repr__(self) -> str:
        return f"SetFamily(n={self.ground_n}, |F|={self.cardinality})"

    # --- set algebra ---

    def _check_same_ground(self, other: "SetFamily") -> None:
        if self.ground_n != other.ground_n:
            raise BadParam(f"ground sets differ: {self.ground_n} vs {other.ground_n}")

    def union(self, other: "SetFamily") -> "SetFamily":
        self._check_same_ground(other)
        return SetFamily(self.ground_n, self.membership | other.membership)

    def intersection(self, other: "SetFamily") -> "SetFamily":
        self._check_same_ground(other)
        return SetFamily(self.ground_n, self.membership & other.membership)

    def difference(self, other: "SetFamily") -> "SetFamily":
        self._check_same_ground(other)
        return SetFamily(self.ground_n, self.membership & ~other.membership)

    def issubfamily(self, other: "SetFamily") -> bool:
        self._check_same_ground(other)
        return not np.any(self.membership & ~other.membership)

    def with_codes(self, codes: Iterable[int]) -> "SetFamily":
        membership = self.membership.copy()
        membership[list(codes)] = True
        return SetFamily(self.ground_n, membership)

    def without_codes(self, codes: Iterable[int]) -> "SetFamily":
        membership = self.membership.copy()
        membership[list(codes)] = False
        return SetFamily(self.ground_n, membership)

    def restrict_levels(self, levels: Iterable[int]) -> "SetFamily":
        keep = np.isin(popcounts(self.ground_n), list(levels))
        return SetFamily(self.ground_n, self.membership & keep)

    def dual(self) -> "SetFamily":
        """Complement every member; the complement of code c is 2^n-1-c."""
        return SetFamily(self.ground_n, self.membership[::-1])

    # --- codecs ---

    def to_json(self, use_codes: bool = True) -> Dict:
        if use_codes:
            return {"n": self.ground_n, "codes": [int(c) for c in self.codes]}
        return {"n": self.ground_n, "sets": self.sets()}

    @classmethod
    def from_json(cls, data: Dict) -> "SetFamily":
        if "n" not in data:
            raise BadParam("family JSON needs an 'n' field")
        n = int(data["n"])
        if "codes" in data:
            return cls.from_codes(n, data["codes"])
        return cls.from_sets(n, data.get("sets", []))

    def to_bytes(self) -> bytes:
        bitmap = np.packbits(self.membership, bitorder="little")
        return bytes([self.ground_n]) + bitmap.tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "SetFamily":
        if not data:
            raise BadParam("empty family bitmap")
        n = data[0]
        check_ground(n)
        expected = -(-(1 << n) // 8)
        if len(data) - 1 != expected:
            raise BadParam(f"bitmap for n={n} needs {expected} bytes, got {len(data) - 1}")
        bits = np.unpackbits(np.frombuffer(data[1:], dtype=np.uint8), bitorder="little")
        return cls(n, bits[: 1 << n].astype(bool))


# --- named families ---------------------------------------------------------

def level_family(n: int, levels: Iterable[int]) -> SetFamily:
    check_ground(n)
    levels = set(levels)
    bad = [j for j in levels if not 0 <= j <= n]
    if bad:
        raise BadParam(f"levels {sorted(bad)} outside 0..{n}")
    return SetFamily(n, np.isin(popcounts(n), sorted(levels)))


def middle_level_range(n: int, m: int) -> range:
    """The m consecutive levels closest to n/2, the lower window on ties."""
    if not 1 <= m <= n + 1:
        raise BadParam(f"need 1 <= m <= n+1, got m={m}, n={n}")
    low = (n - m + 1) // 2
    return range(low, low + m)


def middle_levels(n: int, m: int) -> SetFamily:
    check_ground(n)
    return level_family(n, middle_level_range(n, m))


def centered_order(n: int) -> np.ndarray:
    """All codes sorted by distance of their size from n/2, lower level first, then by code."""
    sizes = popcounts(n).astype(np.int64)
    distance = np.abs(2 * sizes - n)
    return np.lexsort((np.arange(1 << n), sizes, distance))


def centered_family(n: int, m: int) -> SetFamily:
    check_ground(n)
    if not 0 <= m <= 1 << n:
        raise BadParam(f"need 0 <= m <= 2^{n}, got {m}")
    membership = np.zeros(1 << n, dtype=bool)
    membership[centered_order(n)[:m]] = True
    return SetFamily(n, membership)


def lubell(F: SetFamily) -> Fraction:
    """λ_n(F) = Σ 1/binom(n, |F|) over members, exactly."""
    n = F.ground_n
    return sum((Fraction(count, comb(n, size)) for size, count in F.level_counts().items()),
               Fraction(0))


# --- inclusion structure ----------------------------------------------------

def strict_subsets_in(F: SetFamily, code: int, codes: np.ndarray = None) -> np.ndarray:
    codes = F.codes if codes is None else codes
    return codes[((codes & ~code) == 0) & (codes != code)]


def strict_supersets_in(F: SetFamily, code: int, codes: np.ndarray = None) -> np.ndarray:
    codes = F.codes if codes is None else codes
    return codes[((code & ~codes) == 0) & (codes != code)]


def comparability_digraph(F: SetFamily) -> List[Tuple[int, int]]:
    """All pairs (A, B) of members with A ⊊ B."""
    edges = []
    codes = F.codes
    for b in codes:
        b = int(b)
        edges.extend((int(a), b) for a in strict_subsets_in(F, b, codes))
    return edges


def comparable_pair_count(F: SetFamily) -> int:
    codes = F.codes
    return sum(len(strict_subsets_in(F, int(b), codes)) for b in codes)


def count_k_chains(F: SetFamily, k: int) -> int:
    """
    Number of k-element chains F_1 ⊊ ... ⊊ F_k inside F.

    Args:
        F: the family
        k: chain length in sets (k >= 1)

    Returns:
        Exact chain count
    """
    if k < 1:
        raise BadParam("count_k_chains needs k >= 1")
    codes = F.codes
    if k == 1:
        return len(codes)
    order = codes[np.argsort(F.sizes(), kind="stable")]
    position = {int(c): i for i, c in enumerate(order)}
    below = [np.array([position[int(a)] for a in strict_subsets_in(F, int(c), codes)],
                      dtype=np.int64) for c in order]

    # ending[i] = chains of the current length whose top is order[i]
    ending = [1] * len(order)
    for _ in range(k - 1):
        ending = [sum(ending[j] for j in below[i]) for i in range(len(order))]
    return sum(ending)


# --- exhaustive family walks ------------------------------------------------

def gray_flips(length: int) -> Iterator[int]:
    """Bit indices to flip, in order, to visit all 2^length masks by reflected Gray code."""
    for i in range(1, 1 << length):
        yield (i & -i).bit_length() - 1


def walk_all_families(n: int) -> Iterator[Tuple[int, bool, set]]:
    """
    Visit every family of 2^[n] once, changing one member per step.

    Yields (code flipped, whether it was added, current member set) after each
    flip; the empty family comes first with code -1. The member set is shared
    and mutated in place between steps.
    """
    check_ground(n)
    members: set = set()
    yield -1, False, members
    for code in gray_flips(1 << n):
        if code in members:
            members.discard(code)
            yield code, False, members
        else:
            members.add(code)
            yield code, True, members


# --- binomial tail ----------------------------------------------------------

def binom_tail_bound_holds(n: int, l: int) -> bool:
    """Σ_{i<l} binom(n,i) <= 2·sqrt(n)·binom(n,l), compared after squaring."""
    if not 1 <= l <= n // 2:
        raise BadParam(f"need 1 <= l <= n/2, got l={l}, n={n}")
    tail = sum(comb(n, i) for i in range(l))
    return tail * tail <= 4 * n * comb(n, l) ** 2


def check_binom_tail_bound(max_n: int = 200) -> List[Tuple[int, int]]:
    """Return every (n, l) with n <= max_n where the tail bound fails (expected: none)."""
    failures = []
    for n in range(2, max_n + 1):
        tail = 0
        for l in range(1, n // 2 + 1):
            tail += comb(n, l - 1)
            if tail * tail > 4 * n * comb(n, l) ** 2:
                failures.append((n, l))
    logger.debug("binomial tail bound checked up to n=%d, %d failures", max_n, len(failures))
    return failures


# --- parsing ----------------------------------------------------------------

def parse_family(text: str) -> SetFamily:
    """
    Parse CLI family syntax: '@file.json', '@file.bin', inline JSON,
    'full:n', 'levels:n:1,2', 'middle:n:m' or 'centered:n:m'.
    """
    text = text.strip()
    if text.startswith("@"):
        path = Path(text[1:])
        if path.suffix == ".bin":
            return SetFamily.from_bytes(path.read_bytes())
        with open(path, "r", encoding="utf-8") as f:
            return SetFamily.from_json(json.load(f))
    if text.startswith("{"):
        return SetFamily.from_json(json.loads(text))
    parts = text.split(":")
    try:
        kind, n = parts[0], int(parts[1])
        args = [int(a) for a in parts[2].split(",")] if len(parts) > 2 and parts[2] else []
    except (IndexError, ValueError):
        raise BadParam(f"cannot parse family '{text}'")
    if kind == "full":
        return SetFamily.full(n)
    if kind == "empty":
        return SetFamily.empty(n)
    if kind == "levels":
        return level_family(n, args)
    if kind == "middle" and len(args) == 1:
        return middle_levels(n, args[0])
    if kind == "centered" and len(args) == 1:
        return centered_family(n, args[0])
    raise BadParam(f"unknown family syntax '{text}'")


def main():
    """Demo function"""
    logging.basicConfig(level=logging.INFO)
    for n, m in ((4, 1), (4, 2), (5, 3)):
        F = middle_levels(n, m)
        print(f"middle_levels({n},{m}): {len(F)} sets, levels {F.level_counts()}, "
              f"lubell={lubell(F)}")
    F = SetFamily.full(3)
    print(f"2^[3]: {comparable_pair_count(F)} comparable pairs, "
          f"{count_k_chains(F, 4)} maximal chains")
    print(f"binomial tail failures up to 200: {check_binom_tail_bound(200)}")


if __name__ == "__main__":
    main()
