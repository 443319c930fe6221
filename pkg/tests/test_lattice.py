from fractions import Fraction
from math import gcd
from types import SimpleNamespace

import pytest

from coprime_approx.errors import ConstructionError
from coprime_approx.lattice import (
    choose_lambda, combine, frak_coords, lattice_membership, select_lambda_star,
)


def test_origin_and_coordinates(state16):
    assert state16.levels[0].Z == (0, 0)
    for k in range(1, 17):
        rec = state16.levels[k]
        assert frak_coords(rec.Z, state16.conv, k) == (rec.frakX, rec.frakY)
        assert combine(state16.conv, k, rec.frakX, rec.frakY) == rec.Z
        assert lattice_membership(rec.Z, state16, k)


def test_tri_congruence(state16):
    for k in range(0, 15):
        l = k // 2
        nxt = state16.levels[k + 1]
        pair = state16.crt[l + 1]
        want = pair.Y if k % 2 == 0 else pair.X
        assert (nxt.frakX - want) % state16.arr.primorial(l + 1) == 0


def test_first_level_inverse_of_two(state16):
    Q1 = state16.arr.cofactor(1)
    lam_star = select_lambda_star(state16, 0)
    target = state16.crt[1].Y
    a1 = state16.schedule.quotient(1)
    rec = state16.levels[0]
    assert (2 * lam_star - (target - rec.frakY + rec.frakX * a1)) % Q1 == 0
    assert 1 <= lam_star <= Q1


def test_lambda_positive_and_bounded(state16):
    for k in range(16):
        l = k // 2
        Q = state16.arr.cofactor(l + 1)
        lam = state16.levels[k + 1].lam
        W = state16.W(k)
        assert lam >= 1
        assert lam >= Fraction(W * Q, 2) - Fraction(Q, 2)


def test_from_points_are_not_primitive(state16):
    assert gcd(*state16.levels[4].Z) > 1
    for k in range(2, 17):
        assert gcd(*state16.levels[k].Z) % 2 == 0


def _fake(a_next, P, Q):
    arr = SimpleNamespace(primorial=lambda l: P, cofactor=lambda l: Q)
    sched = SimpleNamespace(quotient=lambda k: a_next)
    return SimpleNamespace(arr=arr, schedule=sched)


def test_lambda_tie_rounds_down():
    # a/(2P) = 10, Q = 4, residue 2: representatives 6, 10, 14 -> exact hit
    assert choose_lambda(_fake(20, 1, 4), 0, 2) == 10
    # a/(2P) = 10, residue 0 mod 4: 8 and 12 are equidistant -> take 8
    assert choose_lambda(_fake(20, 1, 4), 0, 4) == 8
    # just past the midpoint goes up
    assert choose_lambda(_fake(21, 1, 4), 0, 4) == 12


def test_lambda_rejects_nonpositive():
    with pytest.raises(ConstructionError) as e:
        choose_lambda(_fake(2, 1, 8), 0, 8)
    assert e.value.tag == "(bound)"
