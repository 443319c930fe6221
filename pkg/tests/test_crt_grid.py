import json
from math import gcd

import pytest

from coprime_approx.crt_grid import (
    BoxNotFound, crt, crt_chain, erdos_b_stats, erdos_min_box, gcd_table,
    grid_certificate, solve_crt_pair,
)
from coprime_approx.errors import ConstructionError
from coprime_approx.omega_primes import arrange_primes, omega_set


@pytest.fixture(scope="module")
def arr():
    return arrange_primes(4)


def test_crt_small():
    assert crt([2, 3, 2], [3, 5, 7]) == (23, 105)
    with pytest.raises(ValueError):
        crt([0, 1], [4, 6])


def test_shell_zero_pair(arr):
    p = solve_crt_pair(arr, 0)
    assert (p.X, p.Y) == (2, 2)


def test_shell_one_against_residue_scan(arr):
    """Oracle: scan one residue class of the largest row modulus."""
    p = solve_crt_pair(arr, 1)
    P = arr.primorial(1)
    A = {i: arr.row_product(i, 1) for i in (-1, 0, 1)}
    big = max(A, key=A.get)
    found = [x for x in range(P + (-big) % A[big], 2 * P, A[big])
             if all((x + i) % A[i] == 0 for i in A)]
    assert found == [p.X]
    assert (p.X - 1) % A[-1] == 0 and p.X % A[0] == 0 and (p.X + 1) % A[1] == 0
    assert P <= p.Y < 2 * P
    assert all((p.Y + j) % arr.col_product(j, 1) == 0 for j in (-1, 0, 1))


def test_congruence_order_does_not_matter(arr):
    base = solve_crt_pair(arr, 3)
    assert solve_crt_pair(arr, 3, order=[3, -3, 0, 1, -1, 2, -2]) == base


def test_chain(arr):
    chain = crt_chain(arr, 4)
    for k in range(4):
        P = arr.primorial(k)
        assert chain[k + 1].X % P == chain[k].X % P
        assert chain[k + 1].Y % P == chain[k].Y % P


def test_grid_certificate(arr):
    pair = solve_crt_pair(arr, 2)
    cert = grid_certificate(arr, pair)
    assert set(cert.entries) == set(omega_set(2))
    w = cert.entries[(1, 2)]
    assert w == arr.prime(1, 2)
    assert (pair.X + 1) % w == 0 and (pair.Y + 2) % w == 0
    json.dumps(cert.to_json())  # witness primes are strings


def test_grid_certificate_rejects_bad_pair(arr):
    pair = solve_crt_pair(arr, 2)
    bad = type(pair)(2, pair.X + 1, pair.Y)
    with pytest.raises(ConstructionError) as e:
        grid_certificate(arr, bad)
    assert e.value.tag == "(xy)"


def test_gcd_table_shape(arr):
    pair = solve_crt_pair(arr, 2)
    t = gcd_table(pair.X, pair.Y, 2)
    assert len(t) == 5 and all(len(r) == 5 for r in t)
    assert t[2][2] == gcd(pair.X, pair.Y)


def test_min_box_examples(arr):
    assert erdos_min_box(1, 1, 5) == 0
    assert erdos_min_box(2, 4, 5) == 1
    pair = solve_crt_pair(arr, 2)
    assert erdos_min_box(pair.X, pair.Y, 10) >= 2
    with pytest.raises(BoxNotFound):
        erdos_min_box(pair.X, pair.Y, 1)


def test_b_stats_reproducible():
    a = erdos_b_stats(100, 10**6, 1)
    assert a == erdos_b_stats(100, 10**6, 1)
    assert sum(a["histogram"].values()) == 100
