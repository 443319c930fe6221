from math import gcd, prod

import numpy as np
import pytest

from coprime_approx.omega_primes import (
    PrimeArrangement, PrimeSieve, arrange_primes, first_primes, in_omega,
    iter_cross_gcd_law, level, omega_cardinality, omega_set, shell,
)


def brute_cardinalities(k_max):
    """Count grid points by level with numpy; independent of the hyperbola formula."""
    r = np.arange(-k_max, k_max + 1)
    m = np.maximum(1, np.abs(r))
    lv = np.outer(m, m).ravel()
    lv = lv[lv <= k_max]
    counts = np.bincount(lv, minlength=k_max + 1)
    out = np.cumsum(counts)
    out[0] = 1  # only (0, 0) at k = 0
    return out


def trial_division_primes(n):
    ps, c = [], 2
    while len(ps) < n:
        if all(c % p for p in ps if p * p <= c):
            ps.append(c)
        c += 1
    return ps


def test_omega_small_sets():
    assert omega_set(0) == [(0, 0)]
    assert sorted(omega_set(1)) == [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]
    assert omega_cardinality(0) == 1
    assert omega_cardinality(1) == 9


def test_cardinality_matches_enumeration_up_to_1000():
    brute = brute_cardinalities(1000)
    assert [omega_cardinality(k) for k in range(1001)] == brute.tolist()


def test_omega_set_matches_cardinality():
    for k in range(40):
        s = omega_set(k)
        assert len(s) == len(set(s)) == omega_cardinality(k)
        assert all(in_omega(p, k) for p in s)


def test_shells_partition():
    seen = set()
    for k in range(12):
        sh = shell(k)
        assert all(level(*p) == k or (k == 0 and p == (0, 0)) for p in sh)
        assert not seen & set(sh)
        seen |= set(sh)
        assert seen == set(omega_set(k))


def test_sieve_against_trial_division():
    assert first_primes(500) == trial_division_primes(500)
    small = PrimeSieve(segment=64)  # force many segments
    assert small.first(300) == trial_division_primes(300)


def test_canonical_arrangement_first_shells():
    arr = arrange_primes(1)
    assert arr.prime(0, 0) == 2
    ring = sorted(p for p in omega_set(1) if p != (0, 0))
    assert [arr.prime(*p) for p in ring] == [3, 5, 7, 11, 13, 17, 19, 23]


def test_primorials():
    arr = arrange_primes(7)
    assert arr.primorial(0) == 2
    assert arr.primorial(1) == 2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 == 223092870
    for k in range(8):
        assert arr.primorial(k) == prod(first_primes(omega_cardinality(k)))
    for k in range(7):
        assert gcd(arr.primorial(k), arr.cofactor(k + 1)) == 1
    with pytest.raises(IndexError):
        arr.primorial(8)


def test_row_col_products():
    arr = arrange_primes(4)
    assert arr.row_product(0, 0) == arr.col_product(0, 0) == 2
    for k in range(5):
        rows = [arr.row_product(i, k) for i in range(-k, k + 1)]
        cols = [arr.col_product(j, k) for j in range(-k, k + 1)]
        assert prod(rows) == prod(cols) == arr.primorial(k)
        for a in range(len(rows)):
            for b in range(a):
                assert gcd(rows[a], rows[b]) == 1
                assert gcd(cols[a], cols[b]) == 1


def test_cross_gcd_law():
    arr = arrange_primes(5)
    n = 0
    for k1, k2, i, j, observed, expected in iter_cross_gcd_law(arr, 5):
        assert observed == expected
        n += 1
    assert n > 0
    # the (0, 0) prime is shared even at shell 0
    assert gcd(arr.row_product(0, 0), arr.col_product(0, 3)) == 2


def test_seeded_arrangement_is_shell_respecting():
    a = arrange_primes(5, "seeded", 7)
    b = arrange_primes(5, "seeded", 7)
    c = arrange_primes(5, "canonical")
    assert a.assignment == b.assignment
    assert a.assignment != c.assignment
    for k in range(6):
        assert a.primorial(k) == c.primorial(k)


def test_arrangement_json_round_trip():
    arr = arrange_primes(4, "seeded", 3)
    again = PrimeArrangement.from_json(arr.to_json())
    assert again.assignment == arr.assignment
    assert again.primorial(4) == arr.primorial(4)
