from fractions import Fraction

import mpmath
import pytest

from coprime_approx.intervals import RationalInterval, ln_enclosure, sqrt_enclosure

F = Fraction
mpmath.mp.dps = 60


def test_basic_arithmetic():
    a = RationalInterval(F(1), F(2))
    b = RationalInterval(F(-1), F(3))
    assert a + b == RationalInterval(F(0), F(5))
    assert a - b == RationalInterval(F(-2), F(3))
    assert a * b == RationalInterval(F(-2), F(6))
    assert a / RationalInterval(F(2), F(4)) == RationalInterval(F(1, 4), F(1))
    assert abs(b) == RationalInterval(F(0), F(3))
    assert a * 3 - 1 == RationalInterval(F(2), F(5))
    with pytest.raises(ZeroDivisionError):
        a / b


def test_three_valued_comparisons():
    a = RationalInterval(F(1), F(2))
    assert a.lt(3) is True
    assert a.gt(3) is False
    assert a.lt(F(3, 2)) is None
    assert RationalInterval(F(-2), F(-1)).sign() == -1
    assert RationalInterval(F(-1), F(1)).sign() is None


def test_outward_contains_original():
    a = RationalInterval(F(2, 7), F(1, 3))
    b = a.outward(20)
    assert b.lo <= a.lo and a.hi <= b.hi
    assert (1 << 20) % b.lo.denominator == 0 and (1 << 20) % b.hi.denominator == 0


def test_json_round_trip():
    a = RationalInterval(F(-22, 7), F(355, 113))
    d = a.to_json()
    assert d == {"lo": "-22/7", "hi": "355/113"}
    assert RationalInterval.from_json(d) == a


@pytest.mark.parametrize("x", [F(1), F(2), F(1, 3), F(10**9 + 7), F(7, 10**12), F(3, 2)])
def test_ln_against_mpmath(x):
    iv = ln_enclosure(x)
    ref = mpmath.log(mpmath.mpf(x.numerator) / x.denominator)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
    assert ref <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator
    assert iv.width < F(1, 2**64)


@pytest.mark.parametrize("x", [F(2), F(1, 4), F(10**20 + 1), F(5, 3)])
def test_sqrt_against_mpmath(x):
    iv = sqrt_enclosure(x)
    ref = mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)
    assert mpmath.mpf(iv.lo.numerator) / iv.lo.denominator <= ref
    assert ref <= mpmath.mpf(iv.hi.numerator) / iv.hi.denominator


def test_ln_of_interval_is_monotone_hull():
    iv = ln_enclosure(RationalInterval(F(2), F(3)))
    assert iv.lo <= ln_enclosure(2).lo and ln_enclosure(3).hi <= iv.hi
