"""Hyperbolic index boxes, the prime arrangement over them, and the products built from it.

The box of level ``k`` is the set of integer pairs ``(i, j)`` with
``max(1, |i|) * max(1, |j|) <= k``; level 0 is the single pair ``(0, 0)``.
Primes are attached to pairs shell by shell, so the first ``omega(k)`` primes
always land exactly on the level-``k`` box.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, isqrt, prod
from typing import Dict, Iterator, List, Tuple

Pair = Tuple[int, int]


def level(i: int, j: int) -> int:
    """Smallest ``k >= 1`` whose box contains ``(i, j)``."""
    return max(1, abs(i)) * max(1, abs(j))


def in_omega(pair: Pair, k: int) -> bool:
    if k == 0:
        return pair == (0, 0)
    return level(*pair) <= k


def omega_set(k: int) -> List[Pair]:
    """All pairs of the level-``k`` box, sorted lexicographically."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return [(0, 0)]
    out = []
    for i in range(-k, k + 1):
        jmax = k // max(1, abs(i))
        out.extend((i, j) for j in range(-jmax, jmax + 1))
    return out


def omega_cardinality(k: int) -> int:
    """Size of the level-``k`` box via the divisor-sum identity."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 1
    # sum_{i<=k} floor(k/i) in O(sqrt k) using the hyperbola method
    r = isqrt(k)
    d = 2 * sum(k // i for i in range(1, r + 1)) - r * r
    return 4 * k + 1 + 4 * d


def shell(k: int) -> List[Pair]:
    """Pairs that enter at level ``k`` (lexicographic)."""
    if k == 0:
        return [(0, 0)]
    prev = set(omega_set(k - 1))
    return [p for p in omega_set(k) if p not in prev]


class PrimeSieve:
    """Segmented sieve of Eratosthenes that grows on demand."""

    def __init__(self, segment: int = 1 << 15):
        self.segment = segment
        mark = bytearray([1]) * segment
        mark[0:2] = b"\x00\x00"
        for p in range(2, isqrt(segment - 1) + 1):
            if mark[p]:
                mark[p * p::p] = bytes(len(range(p * p, segment, p)))
        self.primes: List[int] = [i for i, m in enumerate(mark) if m]
        self._limit = segment  # every prime below this is in self.primes

    def _extend(self) -> None:
        # hi <= 2 * lo <= lo**2, so the stored primes cover sqrt(hi)
        lo, hi = self._limit, self._limit + self.segment
        mark = bytearray([1]) * (hi - lo)
        for p in self.primes:
            if p * p >= hi:
                break
            start = max(p * p, -(-lo // p) * p)
            mark[start - lo::p] = bytes(len(range(start - lo, hi - lo, p)))
        self.primes.extend(lo + i for i, m in enumerate(mark) if m)
        self._limit = hi

    def first(self, n: int) -> List[int]:
        while len(self.primes) < n:
            self._extend()
        return self.primes[:n]


_SIEVE = PrimeSieve()


def first_primes(n: int) -> List[int]:
    return _SIEVE.first(n)


@dataclass
class PrimeArrangement:
    """Shell-respecting bijection from the level-``max_shell`` box onto the first primes.

    ``policy`` is ``"canonical"`` (lexicographic pairs get increasing primes
    within each shell) or ``"seeded"`` (each shell permuted by a PRNG keyed on
    ``seed``).
    """

    max_shell: int
    assignment: Dict[Pair, int]
    shells: List[List[Pair]]
    policy: str = "canonical"
    seed: int | None = None
    _P: List[int] = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        self._P = []
        acc = 1
        for sh in self.shells:
            acc *= prod(self.assignment[p] for p in sh)
            self._P.append(acc)

    def prime(self, i: int, j: int) -> int:
        return self.assignment[(i, j)]

    def _check_k(self, k: int) -> None:
        if not 0 <= k <= self.max_shell:
            raise IndexError(f"shell {k} outside 0..{self.max_shell}")

    def primorial(self, k: int) -> int:
        self._check_k(k)
        return self._P[k]

    def cofactor(self, k: int) -> int:
        """``P_k / P_{k-1}`` for ``k >= 1``."""
        if k < 1:
            raise IndexError("cofactor is defined for k >= 1")
        self._check_k(k)
        return self._P[k] // self._P[k - 1]

    def row_product(self, i: int, k: int) -> int:
        self._check_k(k)
        if abs(i) > k:
            raise IndexError(f"row {i} outside |i| <= {k}")
        if k == 0:
            return self.assignment[(0, 0)]
        jmax = k // max(1, abs(i))
        return prod(self.assignment[(i, j)] for j in range(-jmax, jmax + 1))

    def col_product(self, j: int, k: int) -> int:
        self._check_k(k)
        if abs(j) > k:
            raise IndexError(f"column {j} outside |j| <= {k}")
        if k == 0:
            return self.assignment[(0, 0)]
        imax = k // max(1, abs(j))
        return prod(self.assignment[(i, j)] for i in range(-imax, imax + 1))

    def to_json(self) -> dict:
        return {
            "max_shell": str(self.max_shell),
            "policy": self.policy,
            "seed": None if self.seed is None else str(self.seed),
            "shells": [
                [[[str(i), str(j)], str(self.assignment[(i, j)])] for i, j in sh]
                for sh in self.shells
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PrimeArrangement":
        shells, assignment = [], {}
        for sh in data["shells"]:
            pairs = []
            for (i, j), p in sh:
                i, j = int(i), int(j)
                pairs.append((i, j))
                assignment[(i, j)] = int(p)
            shells.append(pairs)
        seed = data.get("seed")
        return cls(
            max_shell=len(shells) - 1,
            assignment=assignment,
            shells=shells,
            policy=data.get("policy", "canonical"),
            seed=None if seed is None else int(seed),
        )


def _shell_order(k: int, pairs: List[Pair], policy: str, seed: int | None) -> List[Pair]:
    if policy == "canonical" or k == 0:
        return pairs
    if policy == "seeded":
        rng = random.Random(f"coprime-approx/{seed}/{k}")
        out = list(pairs)
        rng.shuffle(out)
        return out
    raise ValueError(f"unknown permutation policy {policy!r}")


def arrange_primes(K: int, policy: str = "canonical", seed: int | None = None) -> PrimeArrangement:
    if K < 0:
        raise ValueError("K must be non-negative")
    if policy == "seeded" and seed is None:
        raise ValueError("seeded policy needs a seed")
    primes = first_primes(omega_cardinality(K))
    assignment: Dict[Pair, int] = {}
    shells = []
    used = 0
    for k in range(K + 1):
        sh = shell(k)
        order = _shell_order(k, sh, policy, seed)
        for pair, p in zip(order, primes[used:used + len(sh)]):
            assignment[pair] = p
        used += len(sh)
        shells.append(sh)
    return PrimeArrangement(K, assignment, shells, policy, seed)


def iter_cross_gcd_law(arr: PrimeArrangement, k_max: int) -> Iterator[Tuple[int, int, int, int, int, int]]:
    """Yield ``(k1, k2, i, j, observed, expected)`` for the row/column gcd law."""
    for k1 in range(k_max + 1):
        for k2 in range(k_max + 1):
            m = min(k1, k2)
            for i in range(-k1, k1 + 1):
                a = arr.row_product(i, k1)
                for j in range(-k2, k2 + 1):
                    expected = arr.prime(i, j) if in_omega((i, j), m) else 1
                    yield k1, k2, i, j, gcd(a, arr.col_product(j, k2)), expected
