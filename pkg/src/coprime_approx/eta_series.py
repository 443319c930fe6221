"""Certified enclosures of eta = lim (b_k alpha - c_k).

eta is never held as a number. The series for eta alternates with strictly
shrinking terms, so eta sits between any two consecutive partial values
``S_k = b_k alpha - c_k``; every enclosure here is a hull of such values,
evaluated over a convergent enclosure of alpha.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Optional, Tuple

from .continued_fraction import alpha_enclosure
from .errors import PrecisionError
from .intervals import RationalInterval

if TYPE_CHECKING:
    from .state import ConstructionState

ALPHA_EXTRA = 4  # default alpha depth is k + ALPHA_EXTRA


@dataclass(frozen=True)
class EtaEnclosure:
    level: int
    alpha_depth: int
    interval: RationalInterval
    point: Tuple[int, int]

    def to_json(self) -> dict:
        return {
            "level": str(self.level),
            "alpha_depth": str(self.alpha_depth),
            "interval": self.interval.to_json(),
            "point": [str(self.point[0]), str(self.point[1])],
        }


def _alpha(state: "ConstructionState", depth: int) -> RationalInterval:
    if depth + 1 > state.conv.depth:
        raise PrecisionError(f"alpha depth {depth} needs convergents through {depth + 1}; "
                             f"state has depth {state.conv.depth}")
    return alpha_enclosure(state.conv, depth)


def _default_depth(state: "ConstructionState", k: int) -> int:
    return min(k + ALPHA_EXTRA, state.conv.depth - 1)


def _need_level(state: "ConstructionState", k: int) -> None:
    if k > state.depth:
        raise PrecisionError(f"level {k} needed; state has depth {state.depth}")


def linear_value(m: int, n: int, alpha: RationalInterval) -> RationalInterval:
    """Enclosure of ``m alpha - n``."""
    return alpha * m - n


def partial_value(state: "ConstructionState", k: int, alpha: RationalInterval) -> RationalInterval:
    _need_level(state, k)
    rec = state.levels[k]
    return linear_value(rec.b, rec.c, alpha)


def eta_enclosure(state: "ConstructionState", k: int, alpha_depth: int | None = None) -> EtaEnclosure:
    alpha_depth = k + ALPHA_EXTRA if alpha_depth is None else alpha_depth
    if alpha_depth < k + 2:
        raise ValueError("alpha_depth must be at least k + 2")
    _need_level(state, k + 1)
    alpha = _alpha(state, alpha_depth)
    s0, s1 = partial_value(state, k, alpha), partial_value(state, k + 1, alpha)
    if s0.lt(s1) is None:
        raise PrecisionError(f"partial values at levels {k}, {k + 1} overlap; deepen alpha")
    return EtaEnclosure(k, alpha_depth, RationalInterval.hull_of(s0, s1), state.levels[k].Z)


def residual_enclosure(state: "ConstructionState", k: int, alpha_depth: int | None = None) -> RationalInterval:
    """Enclosure of ``eta - S_k``, using ``eta`` between ``S_{k+1}`` and ``S_{k+2}``.

    Each bound is a single linear form in alpha, so no dependency blow-up.
    """
    alpha_depth = k + ALPHA_EXTRA if alpha_depth is None else alpha_depth
    _need_level(state, k + 2)
    alpha = _alpha(state, alpha_depth)
    r0 = state.levels[k]
    forms = [linear_value(state.levels[m].b - r0.b, state.levels[m].c - r0.c, alpha)
             for m in (k + 1, k + 2)]
    return RationalInterval.hull_of(*forms)


def sandwich_bounds(state: "ConstructionState", k: int) -> Tuple[Fraction, Fraction]:
    W = state.W(k)
    v = state.conv.e(k)[0]
    return (Fraction(1, 2) - Fraction(2, W)) / v, (Fraction(1, 2) + Fraction(1, 2 * W)) / v


def _deepening(state, k, alpha_depth, cap):
    cap = state.conv.depth - 1 if cap is None else min(cap, state.conv.depth - 1)
    start = min(k + ALPHA_EXTRA, cap) if alpha_depth is None else alpha_depth
    if start > cap:
        raise PrecisionError(f"alpha depth {start} needs a state of depth {start + 1}")
    return range(start, cap + 1)


def sandwich_check(state: "ConstructionState", k: int, alpha_depth: int | None = None,
                   cap: int | None = None) -> bool:
    """Certify ``lower < |eta - S_k| < upper`` for the two-sided bound on the residual.

    Overlaps deepen alpha up to ``cap``; a result still undecided there
    raises ``PrecisionError`` rather than returning a guess.
    """
    lower, upper = sandwich_bounds(state, k)
    for d in _deepening(state, k, alpha_depth, cap):
        r = abs(residual_enclosure(state, k, d))
        above, below = r.gt(lower), r.lt(upper)
        if above is False or below is False:
            return False
        if above and below:
            return True
    raise PrecisionError(f"sandwich at k={k} undecided up to the available depth")


def residual_sign(state: "ConstructionState", k: int, alpha_depth: int | None = None,
                  cap: int | None = None) -> int:
    for d in _deepening(state, k, alpha_depth, cap):
        s = residual_enclosure(state, k, d).sign()
        if s is not None:
            return s
    raise PrecisionError(f"sign of eta - S_{k} undecided")


def residual_decreases(state: "ConstructionState", k: int, alpha_depth: int | None = None) -> Optional[bool]:
    """Three-valued ``|eta - S_{k+1}| < |eta - S_k|``."""
    d = _default_depth(state, k + 1) if alpha_depth is None else alpha_depth
    return abs(residual_enclosure(state, k + 1, d)).lt(abs(residual_enclosure(state, k, d)))


def companion_same_sign(state: "ConstructionState", k: int, alpha_depth: int | None = None) -> Optional[bool]:
    """Do ``eta - S_k`` and ``eta - ((b_{k+1}-v_k) alpha - (c_{k+1}-u_k))`` share a sign?"""
    d = _default_depth(state, k + 1) if alpha_depth is None else alpha_depth
    vk, uk = state.conv.e(k)
    alpha = _alpha(state, d)
    # eta - companion = (eta - S_{k+1}) + (v_k alpha - u_k)
    comp = residual_enclosure(state, k + 1, d) + linear_value(vk, uk, alpha)
    s0, s1 = residual_enclosure(state, k, d).sign(), comp.sign()
    if s0 is None or s1 is None:
        return None
    return s0 == s1


def summand(state: "ConstructionState", j: int, alpha: RationalInterval) -> RationalInterval:
    """Enclosure of ``P_{(j-1)//2} lambda_j (v_{j-1} alpha - u_{j-1})`` for ``j >= 1``."""
    rec = state.levels[j]
    v, u = state.conv.e(j - 1)
    return linear_value(v, u, alpha) * (state.arr.primorial((j - 1) // 2) * rec.lam)


def summands_decrease(state: "ConstructionState", j_max: int, alpha_depth: int | None = None) -> Dict[int, Optional[bool]]:
    """For each ``1 <= j < j_max``: is ``|summand_{j+1}| < |summand_j|`` certified?"""
    d = j_max + 1 if alpha_depth is None else alpha_depth
    alpha = _alpha(state, d)
    mags = [abs(summand(state, j, alpha)) for j in range(1, j_max + 1)]
    return {j: mags[j].lt(mags[j - 1]) for j in range(1, j_max)}


# --- decimal digits ---------------------------------------------------------------

def digits_of(iv: RationalInterval, n: int) -> Optional[str]:
    """Decimal expansion truncated to ``n`` places if both endpoints agree, else None."""
    if iv.lo < 0 < iv.hi:
        return None
    neg = iv.hi <= 0 and iv.lo < 0
    a, b = (-iv.hi, -iv.lo) if neg else (iv.lo, iv.hi)
    scale = 10 ** n
    na, nb = (a * scale).__floor__(), (b * scale).__floor__()
    if na != nb:
        return None
    ip, fp = divmod(na, scale)
    return f"{'-' if neg else ''}{ip}.{fp:0{n}d}"


def _decimal(x: Fraction, n: int, up: bool) -> str:
    scale = 10 ** n
    m = -((-x * scale).__floor__()) if up else (x * scale).__floor__()
    sign = "-" if m < 0 else ""
    ip, fp = divmod(abs(m), scale)
    return f"{sign}{ip}.{fp:0{n}d}"


def _interval_text(iv: RationalInterval, n: int) -> str:
    return f"[{_decimal(iv.lo, n + 2, False)}, {_decimal(iv.hi, n + 2, True)}]"


def certified_digits(state: "ConstructionState", n: int) -> Dict[str, str]:
    """``n`` certified decimals of alpha and eta (or an interval if they straddle a boundary)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    target = Fraction(1, 10 ** (n + 2))
    out = {}

    alpha_ivs = [alpha_enclosure(state.conv, d) for d in range(state.conv.depth)]
    out["alpha"] = _pick(alpha_ivs, target, n, "alpha", state)

    eta_ivs = []
    for k in range(state.depth):
        try:
            eta_ivs.append(eta_enclosure(state, k, min(k + ALPHA_EXTRA, state.conv.depth - 1)).interval)
        except (PrecisionError, ValueError):
            break
    out["eta"] = _pick(eta_ivs, target, n, "eta", state)
    return out


def _pick(ivs, target, n, name, state) -> str:
    narrow = [iv for iv in ivs if iv.width < target]
    if not narrow:
        raise PrecisionError(f"{name}: no enclosure narrower than 10^-{n + 2} "
                             f"within depth {state.depth}; build deeper")
    for iv in narrow:
        text = digits_of(iv, n)
        if text is not None:
            return text
    return _interval_text(narrow[-1], n)
