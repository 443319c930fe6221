"""Scheduled partial quotients and exact convergents of alpha."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .intervals import RationalInterval, ln_enclosure
from .omega_primes import PrimeArrangement

MIN_W = 5


@dataclass(frozen=True)
class WPolicy:
    """Growth factors ``W_k = slope * k + offset``."""

    slope: int = 1
    offset: int = 5

    @classmethod
    def parse(cls, text: str) -> "WPolicy":
        """Accepts ``linear``, ``linear:C`` (``W_k = k + C``) or ``affine:M:C``."""
        parts = text.split(":")
        try:
            if parts[0] == "linear" and len(parts) <= 2:
                pol = cls(1, int(parts[1]) if len(parts) == 2 else 5)
            elif parts[0] == "affine" and len(parts) == 3:
                pol = cls(int(parts[1]), int(parts[2]))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"bad W policy {text!r}") from None
        pol.validate()
        return pol

    def validate(self) -> None:
        if self.slope < 1:
            raise ValueError("W policy must be unbounded (slope >= 1)")
        if self.offset < MIN_W:
            raise ValueError(f"W policy must give W_k >= {MIN_W}")

    def __call__(self, k: int) -> int:
        return self.slope * k + self.offset

    def descriptor(self) -> str:
        if self.slope == 1:
            return f"linear:{self.offset}"
        return f"affine:{self.slope}:{self.offset}"


@dataclass
class QuotientSchedule:
    a0: int
    a: List[int]  # a[0] is a_1
    W: List[int]  # W[0] is W_0
    gamma_min: Fraction
    gamma_argmax: int

    def quotient(self, k: int) -> int:
        return self.a0 if k == 0 else self.a[k - 1]

    @property
    def depth(self) -> int:
        return len(self.a)


def gamma_ratio(a_k: int, k: int) -> RationalInterval:
    """Enclosure of ``ln(a_k) / (k ln(k)^2)`` for ``k >= 2``."""
    lk = ln_enclosure(k)
    return ln_enclosure(a_k) / (lk * lk * k)


def build_schedule(arr: PrimeArrangement, K: int, w_policy: WPolicy | None = None, a0: int = 0) -> QuotientSchedule:
    """``a_{k+1} = W_k * P_{k//2 + 1}`` for ``k = 0..K-1``."""
    w_policy = w_policy or WPolicy()
    need = (K - 1) // 2 + 1
    if arr.max_shell < need:
        raise ValueError(f"arrangement must cover shell {need} for depth {K}")
    a, W = [], []
    for k in range(K):
        w = w_policy(k)
        if w < MIN_W:
            raise ValueError(f"W_{k} = {w} < {MIN_W}")
        if W and w < W[-1]:
            raise ValueError("W policy must be nondecreasing")
        W.append(w)
        a.append(w * arr.primorial(k // 2 + 1))
    gamma, arg = Fraction(0), 0
    for k in range(2, K + 1):
        g = gamma_ratio(a[k - 1], k).outward(64).hi
        if g > gamma:
            gamma, arg = g, k
    return QuotientSchedule(a0, a, W, gamma, arg)


@dataclass
class ConvergentSeq:
    """Vectors ``e_k = (v_k, u_k)`` for ``k = -1..K``; stored with an offset of one."""

    v: List[int]
    u: List[int]

    def e(self, k: int) -> Tuple[int, int]:
        if k < -1 or k + 1 >= len(self.v):
            raise IndexError(f"convergent e_{k} not built (depth {self.depth})")
        return self.v[k + 1], self.u[k + 1]

    @property
    def depth(self) -> int:
        return len(self.v) - 2


def convergents(s: QuotientSchedule, K: int | None = None) -> ConvergentSeq:
    K = s.depth if K is None else K
    if K > s.depth:
        raise ValueError(f"schedule has depth {s.depth} < {K}")
    v, u = [0, 1], [1, s.a0]
    for k in range(1, K + 1):
        ak = s.a[k - 1]
        v.append(ak * v[-1] + v[-2])
        u.append(ak * u[-1] + u[-2])
    return ConvergentSeq(v, u)


def alpha_enclosure(c: ConvergentSeq, k: int) -> RationalInterval:
    """Interval between ``u_k/v_k`` and ``u_{k+1}/v_{k+1}``; alpha lies strictly inside."""
    vk, uk = c.e(k)
    vn, un = c.e(k + 1)
    return RationalInterval.hull_of(Fraction(uk, vk), Fraction(un, vn))
