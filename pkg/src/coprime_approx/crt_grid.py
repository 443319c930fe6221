"""CRT pairs whose translated grid is non-coprime, and the small-box coprimality search."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import ConstructionError
from .omega_primes import Pair, PrimeArrangement, omega_set


class BoxNotFound(LookupError):
    pass


def crt(residues: Sequence[int], moduli: Sequence[int]) -> Tuple[int, int]:
    """Garner-style incremental CRT. Returns ``(x, M)`` with ``0 <= x < M``."""
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        if gcd(M, m) != 1:
            raise ValueError(f"moduli not coprime: {M} and {m}")
        # x + M*t = r (mod m)
        t = (r - x) * pow(M, -1, m) % m
        x += M * t
        M *= m
    return x % M, M


@dataclass(frozen=True)
class CrtPair:
    k: int
    X: int
    Y: int

    def to_json(self) -> dict:
        return {"k": str(self.k), "X": str(self.X), "Y": str(self.Y)}

    @classmethod
    def from_json(cls, d: dict) -> "CrtPair":
        return cls(int(d["k"]), int(d["X"]), int(d["Y"]))


def _congruences(arr: PrimeArrangement, k: int):
    rows = [(-i, arr.row_product(i, k)) for i in range(-k, k + 1)]
    cols = [(-j, arr.col_product(j, k)) for j in range(-k, k + 1)]
    return rows, cols


def solve_crt_pair(arr: PrimeArrangement, k: int, order: Iterable[int] | None = None) -> CrtPair:
    """Solve ``X + i = 0 (mod A_i)``, ``Y + j = 0 (mod B_j)`` with ``P_k <= X, Y < 2 P_k``.

    ``order`` optionally permutes the congruences (indices into ``-k..k``);
    the result is the same for any order.
    """
    rows, cols = _congruences(arr, k)
    idx = list(range(2 * k + 1)) if order is None else [i + k for i in order]
    P = arr.primorial(k)
    x, mx = crt([rows[t][0] for t in idx], [rows[t][1] for t in idx])
    y, my = crt([cols[t][0] for t in idx], [cols[t][1] for t in idx])
    assert mx == my == P
    return CrtPair(k, x + P, y + P)


def crt_chain(arr: PrimeArrangement, k_max: int) -> List[CrtPair]:
    return [solve_crt_pair(arr, k) for k in range(k_max + 1)]


@dataclass
class GridCertificate:
    k: int
    entries: Dict[Pair, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": str(self.k),
            "entries": [[[str(i), str(j)], str(w)] for (i, j), w in sorted(self.entries.items())],
        }


def grid_certificate(arr: PrimeArrangement, pair: CrtPair) -> GridCertificate:
    cert = GridCertificate(pair.k)
    for i, j in omega_set(pair.k):
        w = arr.prime(i, j)
        if (pair.X + i) % w or (pair.Y + j) % w:
            raise ConstructionError(
                "(xy)", f"p[{i},{j}]={w} does not divide X_{pair.k}+{i} and Y_{pair.k}+{j}"
            )
        cert.entries[(i, j)] = w
    return cert


def erdos_min_box(x: int, y: int, t_max: int) -> int:
    """Smallest ``t`` such that some ``0 <= i, j <= t`` has ``gcd(x+i, y+j) == 1``."""
    for t in range(t_max + 1):
        # the new L-infinity shell of size t, lexicographic
        for i in range(t + 1):
            js = range(t + 1) if i == t else (t,)
            for j in js:
                if gcd(x + i, y + j) == 1:
                    return t
    raise BoxNotFound(f"no coprime pair within t <= {t_max} for ({x}, {y})")


def gcd_table(X: int, Y: int, k: int) -> List[List[int]]:
    """``gcd(X+i, Y+j)`` for ``-k <= i, j <= k`` (rows indexed by i)."""
    return [[gcd(X + i, Y + j) for j in range(-k, k + 1)] for i in range(-k, k + 1)]


def erdos_b_stats(samples: int = 1000, bound: int = 10**6, seed: int = 0, t_max: int = 64) -> dict:
    """Distribution of ``erdos_min_box`` over random ``x <= y <= bound``."""
    rng = random.Random(seed)
    hist: Dict[int, int] = {}
    worst = (-1, 0, 0)
    for _ in range(samples):
        a, b = rng.randint(1, bound), rng.randint(1, bound)
        x, y = min(a, b), max(a, b)
        t = erdos_min_box(x, y, t_max)
        hist[t] = hist.get(t, 0) + 1
        if t > worst[0]:
            worst = (t, x, y)
    return {
        "samples": samples,
        "bound": bound,
        "seed": seed,
        "histogram": {str(t): n for t, n in sorted(hist.items())},
        "max_t": worst[0],
        "argmax": [worst[1], worst[2]],
    }
