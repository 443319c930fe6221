"""Affine lattices on convergent bases and the recursive points ``Z_k = (b_k, c_k)``.

The functions here take a construction state (see ``state.ConstructionState``)
exposing ``arr``, ``crt``, ``schedule``, ``conv`` and ``levels``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd
from typing import TYPE_CHECKING, Optional, Tuple

from .errors import ConstructionError

if TYPE_CHECKING:
    from .continued_fraction import ConvergentSeq
    from .state import ConstructionState

Vec = Tuple[int, int]


@dataclass(frozen=True)
class LevelRecord:
    k: int
    lambda_star: Optional[int]  # multipliers that produced Z_k; None at k = 0
    lam: Optional[int]
    b: int
    c: int
    frakX: int
    frakY: int

    @property
    def l(self) -> int:
        return self.k // 2

    @property
    def Z(self) -> Vec:
        return self.b, self.c

    def to_json(self) -> dict:
        return {
            "k": str(self.k),
            "lambda_star": None if self.lambda_star is None else str(self.lambda_star),
            "lambda": None if self.lam is None else str(self.lam),
            "b": str(self.b),
            "c": str(self.c),
            "frakX": str(self.frakX),
            "frakY": str(self.frakY),
        }

    @classmethod
    def from_json(cls, d: dict) -> "LevelRecord":
        opt = lambda s: None if s is None else int(s)  # noqa: E731
        return cls(int(d["k"]), opt(d["lambda_star"]), opt(d["lambda"]),
                   int(d["b"]), int(d["c"]), int(d["frakX"]), int(d["frakY"]))


@dataclass(frozen=True)
class AffineLatticeSpec:
    """Points ``x e_{k-1} + y e_k`` with ``x = x_res (mod x_mod)``, ``y = y_res (mod y_mod)``."""

    k: int
    basis: Tuple[Vec, Vec]
    x_res: int
    x_mod: int
    y_res: int
    y_mod: int

    def contains_coords(self, x: int, y: int) -> bool:
        return (x - self.x_res) % self.x_mod == 0 and (y - self.y_res) % self.y_mod == 0


def frak_coords(z: Vec, c: "ConvergentSeq", k: int) -> Vec:
    """Integers ``(x, y)`` with ``z = x e_{k-1} + y e_k``."""
    v0, u0 = c.e(k - 1)
    v1, u1 = c.e(k)
    det = v0 * u1 - v1 * u0
    if det not in (1, -1):
        raise ConstructionError("(qqq)", f"basis at k={k} has determinant {det}")
    q, r = z
    return (u1 * q - v1 * r) * det, (v0 * r - u0 * q) * det


def combine(c: "ConvergentSeq", k: int, x: int, y: int) -> Vec:
    v0, u0 = c.e(k - 1)
    v1, u1 = c.e(k)
    return x * v0 + y * v1, x * u0 + y * u1


def lattice_spec(state: "ConstructionState", k: int) -> AffineLatticeSpec:
    l = k // 2
    P = state.arr.primorial
    basis = (state.conv.e(k - 1), state.conv.e(k))
    if k % 2 == 0:
        return AffineLatticeSpec(k, basis, state.crt[l].X, P(l), state.crt[l].Y, P(l))
    return AffineLatticeSpec(k, basis, state.crt[l + 1].Y, P(l + 1), state.crt[l].X, P(l))


def lattice_membership(z: Vec, state: "ConstructionState", k: int) -> bool:
    x, y = frak_coords(z, state.conv, k)
    return lattice_spec(state, k).contains_coords(x, y)


def _xy_target(state: "ConstructionState", k: int) -> int:
    l = k // 2
    pair = state.crt[l + 1]
    return pair.Y if k % 2 == 0 else pair.X


def select_lambda_star(state: "ConstructionState", k: int) -> int:
    """Residue of ``lambda_{k+1}`` mod ``Q_{l+1}`` that puts ``Z_{k+1}`` on the next lattice."""
    l = k // 2
    P, Q = state.arr.primorial(l), state.arr.cofactor(l + 1)
    rec = state.levels[k]
    a_next = state.schedule.quotient(k + 1)
    try:
        inv = pow(P, -1, Q)
    except ValueError:
        raise ConstructionError("(Q)", f"P_{l} not invertible mod Q_{l + 1}") from None
    # frakX_{k+1} = frakY_k + P*lam - frakX_k*a_{k+1} = target (mod Q)
    lam = (_xy_target(state, k) - rec.frakY + rec.frakX * a_next) * inv % Q
    return lam or Q


def choose_lambda(state: "ConstructionState", k: int, lambda_star: int) -> int:
    """Representative of ``lambda_star (mod Q_{l+1})`` closest to ``a_{k+1} / (2 P_l)``.

    Ties round toward the smaller integer.
    """
    l = k // 2
    P, Q = state.arr.primorial(l), state.arr.cofactor(l + 1)
    a_next = state.schedule.quotient(k + 1)
    target = Fraction(a_next, 2 * P * Q) - Fraction(lambda_star, Q)
    lam = lambda_star + ceil(target - Fraction(1, 2)) * Q
    if abs(lam - Fraction(a_next, 2 * P)) > Fraction(Q, 2):
        raise ConstructionError("(bound)", f"|lambda - a/(2P)| > Q/2 at k={k + 1}")
    if lam < 1:
        raise ConstructionError("(bound)", f"lambda_{k + 1} = {lam} is not positive")
    return lam


def extend_point(state: "ConstructionState", k: int) -> LevelRecord:
    """Build ``Z_{k+1}`` from ``Z_k`` and check that it lands where it should."""
    l = k // 2
    rec = state.levels[k]
    P = state.arr.primorial(l)
    a_next = state.schedule.quotient(k + 1)
    lam_star = select_lambda_star(state, k)
    lam = choose_lambda(state, k, lam_star)
    vk, uk = state.conv.e(k)
    step = P * lam
    b, c = rec.b + step * vk, rec.c + step * uk
    fX = rec.frakY + step - rec.frakX * a_next
    fY = rec.frakX
    new = LevelRecord(k + 1, lam_star, lam, b, c, fX, fY)

    if combine(state.conv, k + 1, fX, fY) != (b, c):
        raise ConstructionError("(z12)", f"frak coordinates disagree with Z_{k + 1}")
    if not lattice_spec(state, k + 1).contains_coords(fX, fY):
        raise ConstructionError("(tri)", f"Z_{k + 1} not in its lattice")
    check_be(state, new)
    if k + 1 >= 2 and gcd(b, c) == 1:
        raise ConstructionError("(from)", f"Z_{k + 1} is primitive")
    return new


def check_be(state: "ConstructionState", rec: LevelRecord) -> None:
    """``|b_k - v_k/2| <= 2 P_l v_{k-1}`` with ``l = (k-1)//2 + 1``."""
    k = rec.k
    if k == 0:
        return
    v_prev, _ = state.conv.e(k - 1)
    v_k, _ = state.conv.e(k)
    P_next = state.arr.primorial((k - 1) // 2 + 1)
    if abs(2 * rec.b - v_k) > 4 * P_next * v_prev:
        raise ConstructionError("(be)", f"|b_{k} - v_{k}/2| > 2 P v_{k - 1}")
