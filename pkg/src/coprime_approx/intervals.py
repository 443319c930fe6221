"""Closed intervals with exact rational endpoints, plus certified ln and sqrt."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, ceil, isqrt
from typing import Optional, Union

from .errors import PrecisionError  # noqa: F401  (re-exported)

Number = Union[int, Fraction]


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> "RationalInterval":
        return cls(x, x)

    @classmethod
    def hull_of(cls, *xs: Union[Number, "RationalInterval"]) -> "RationalInterval":
        los, his = [], []
        for x in xs:
            if isinstance(x, RationalInterval):
                los.append(x.lo)
                his.append(x.hi)
            else:
                los.append(Fraction(x))
                his.append(Fraction(x))
        return cls(min(los), max(his))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def _coerce(self, other) -> "RationalInterval":
        return other if isinstance(other, RationalInterval) else RationalInterval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, RationalInterval):
            c = Fraction(other)
            if c >= 0:
                return RationalInterval(self.lo * c, self.hi * c)
            return RationalInterval(self.hi * c, self.lo * c)
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RationalInterval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("divisor interval contains zero")
        return self * RationalInterval(1 / o.hi, 1 / o.lo)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(0, max(-self.lo, self.hi))

    # three-valued comparisons: True / False when certified, None when the intervals overlap

    def lt(self, other) -> Optional[bool]:
        o = self._coerce(other)
        if self.hi < o.lo:
            return True
        if self.lo >= o.hi:
            return False
        return None

    def gt(self, other) -> Optional[bool]:
        return self._coerce(other).lt(self)

    def sign(self) -> Optional[int]:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def outward(self, bits: int) -> "RationalInterval":
        """Widen to dyadic endpoints with denominator ``2**bits``."""
        s = 1 << bits
        return RationalInterval(
            Fraction(floor(self.lo * s), s), Fraction(ceil(self.hi * s), s)
        )

    def to_json(self) -> dict:
        return {"lo": _frac_str(self.lo), "hi": _frac_str(self.hi)}

    @classmethod
    def from_json(cls, data: dict) -> "RationalInterval":
        return cls(Fraction(data["lo"]), Fraction(data["hi"]))

    def __str__(self) -> str:
        return f"[{float(self.lo):.6g}, {float(self.hi):.6g}]"


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# --- certified elementary functions -------------------------------------------

LN_BITS = 80


def _atanh_scaled(a: int, b: int, bits: int) -> tuple[int, int]:
    """Bracket ``atanh(a/b) * 2**bits`` for ``0 <= a/b <= 1/3``.

    Returns ``(s, err)`` with the true value in ``[s, s + err]``: every
    floor division rounds down and the truncated tail is bounded by a
    geometric series.
    """
    one = 1 << bits
    p = one * a // b  # t^(2n+1), scaled
    a2, b2 = a * a, b * b
    s, n = 0, 0
    while p:
        s += p // (2 * n + 1)
        p = p * a2 // b2
        n += 1
    # each power is low by < 9/8 ulp, so each term by < 2.2 ulp; the tail
    # left once p reaches 0 is < 81/64 ulp
    return s, 3 * n + 2


@lru_cache(maxsize=None)
def _ln2_half(bits: int) -> tuple[int, int]:
    return _atanh_scaled(1, 3, bits)


def _ln_scaled_pos(a: int, b: int, bits: int) -> tuple[int, int]:
    """Bracket ``ln(a/b) * 2**bits`` for positive integers ``a``, ``b``."""
    e = a.bit_length() - b.bit_length()
    # a/b = m * 2**e with m in [1, 2)
    if e >= 0:
        mn, md = a, b << e
    else:
        mn, md = a << -e, b
    if mn < md:
        e -= 1
        mn <<= 1
    s_m, err_m = _atanh_scaled(mn - md, mn + md, bits)
    s_2, err_2 = _ln2_half(bits)
    s = 2 * s_m + 2 * e * s_2
    err = 2 * err_m + 2 * abs(e) * err_2
    if e >= 0:
        return s, err
    # e < 0 flips the sign of the ln2 error contribution
    return s - 2 * abs(e) * err_2, err


def ln_enclosure(x: Union[Number, RationalInterval], bits: int = LN_BITS) -> RationalInterval:
    """Certified enclosure of the natural log over a positive rational or interval."""
    if isinstance(x, RationalInterval):
        lo_x, hi_x = x.lo, x.hi
    else:
        lo_x = hi_x = Fraction(x)
    if lo_x <= 0:
        raise ValueError("ln needs a positive argument")
    one = 1 << bits
    s_lo, err_lo = _ln_scaled_pos(lo_x.numerator, lo_x.denominator, bits)
    if hi_x == lo_x:
        s_hi, err_hi = s_lo, err_lo
    else:
        s_hi, err_hi = _ln_scaled_pos(hi_x.numerator, hi_x.denominator, bits)
    return RationalInterval(Fraction(s_lo - 1, one), Fraction(s_hi + err_hi + 1, one))


def sqrt_enclosure(x: Union[Number, RationalInterval], bits: int = LN_BITS) -> RationalInterval:
    if isinstance(x, RationalInterval):
        lo_x, hi_x = x.lo, x.hi
    else:
        lo_x = hi_x = Fraction(x)
    if lo_x < 0:
        raise ValueError("sqrt needs a non-negative argument")
    scale = 1 << (2 * bits)
    lo = isqrt(floor(lo_x * scale))
    y = ceil(hi_x * scale)
    hi = isqrt(y)
    if hi * hi < y:
        hi += 1
    return RationalInterval(Fraction(lo, 1 << bits), Fraction(hi, 1 << bits))
