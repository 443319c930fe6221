from fractions import Fraction

import pytest

from coprime_approx.errors import PrecisionError
from coprime_approx.eta_series import (
    certified_digits, companion_same_sign, digits_of, eta_enclosure, residual_decreases,
    residual_enclosure, residual_sign, sandwich_bounds, sandwich_check, summands_decrease,
)
from coprime_approx.intervals import RationalInterval
from coprime_approx.state import build


def test_enclosures_nest(state16):
    prev = None
    for k in range(0, 12):
        iv = eta_enclosure(state16, k).interval
        if prev is not None:
            assert prev.lo <= iv.lo and iv.hi <= prev.hi
        prev = iv


def test_width_respects_upper_bound(state16):
    for k in range(1, 12):
        iv = eta_enclosure(state16, k).interval
        assert iv.width <= sandwich_bounds(state16, k)[1] + Fraction(2, state16.conv.e(k + 4)[0])


def test_sandwich_at_three_minimal_build():
    s = build(5)
    assert sandwich_check(s, 3)


def test_sandwich_and_signs(state16):
    for k in range(0, 13):
        assert sandwich_check(state16, k)
        assert residual_sign(state16, k) == (-1) ** k
        assert residual_decreases(state16, k) is True
        assert companion_same_sign(state16, k) is True


def test_summands_shrink(state16):
    res = summands_decrease(state16, 13, 15)
    assert all(res.values())


def test_shallow_state_signals_precision():
    s = build(3)
    with pytest.raises(PrecisionError):
        eta_enclosure(s, 2, 6)


def test_residual_contains_true_gap(state16):
    # the level-k residual enclosure must contain the deeper partial-value difference
    k = 4
    r = residual_enclosure(state16, k, 10)
    far = eta_enclosure(state16, 12, 14).interval
    from coprime_approx.eta_series import partial_value
    from coprime_approx.continued_fraction import alpha_enclosure
    s = partial_value(state16, k, alpha_enclosure(state16.conv, 14))
    gap = far - s
    assert r.lo <= gap.hi and gap.lo <= r.hi


def test_digits_of():
    iv = RationalInterval(Fraction(31415, 10000), Fraction(31416, 10000))
    assert digits_of(iv, 3) == "3.141"
    assert digits_of(iv, 4) is None
    neg = RationalInterval(Fraction(-2719, 1000), Fraction(-2718, 1000))
    assert digits_of(neg, 2) == "-2.71"


def test_certified_digits_are_prefix_stable(state16):
    d10 = certified_digits(state16, 10)
    d30 = certified_digits(state16, 30)
    for name in ("alpha", "eta"):
        assert d30[name].startswith(d10[name])
    assert d30["eta"].startswith("0.4579923055")
    with pytest.raises(PrecisionError):
        certified_digits(build(2), 40)
