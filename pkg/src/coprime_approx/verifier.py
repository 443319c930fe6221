"""Scan ``q`` and bound ``q |q alpha - eta - r|`` from below over coprime ``(q, r)``.

For each q only ``r`` in ``{r0 - 1, r0, r0 + 1}`` is examined, where ``r0`` is
the integer nearest to the enclosure of ``q alpha - eta``. Any other ``r`` is
at distance >= 1/2, so its product is at least ``q/2 >= 50`` for ``q > 100``.
All comparisons use enclosure endpoints.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd
from typing import TYPE_CHECKING, Dict, List, Optional, Tuple

from .errors import ConstructionError, PrecisionError
from .eta_series import ALPHA_EXTRA, eta_enclosure
from .continued_fraction import alpha_enclosure
from .intervals import RationalInterval, ln_enclosure, sqrt_enclosure

if TYPE_CHECKING:
    from .state import ConstructionState

Q_MIN = 101
DEPTH_SLACK = 10**9  # scan levels need v_k >= q_max**2 * DEPTH_SLACK
CANDIDATE_NOTE = (
    "r ranges over the nearest integer to q*alpha - eta and its two neighbours; "
    "every other r is at distance >= 1/2, so q*|q*alpha - eta - r| >= q/2 >= 50."
)


@dataclass(frozen=True)
class ApproxRecord:
    q: int
    r: int
    err: RationalInterval
    coprime: bool
    product: RationalInterval
    normalized: Optional[RationalInterval] = None

    def key(self):
        return (self.product.lo, self.q, self.r)

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "r": str(self.r),
            "coprime": self.coprime,
            "err": self.err.to_json(),
            "product": self.product.to_json(),
            "normalized": None if self.normalized is None else self.normalized.to_json(),
        }


NORM_BITS = 96


@lru_cache(maxsize=1 << 16)
def normalizer(q: int) -> RationalInterval:
    """Enclosure of ``ln ln q / sqrt(ln q)`` for ``q >= 3``, dyadic with ``NORM_BITS``."""
    L = ln_enclosure(q)
    return (ln_enclosure(L) / sqrt_enclosure(L)).outward(NORM_BITS)


def best_approximants(q: int, alpha: RationalInterval, eta: RationalInterval,
                      normalize: bool = True) -> List[ApproxRecord]:
    x = alpha * q - eta
    if x.width >= Fraction(1, 10**6 * q):
        raise PrecisionError(f"enclosure of q*alpha - eta too wide at q={q}")
    r0 = floor(x.mid + Fraction(1, 2))
    norm = normalizer(q) if normalize and q >= 3 else None
    out = []
    for r in (r0 - 1, r0, r0 + 1):
        err = abs(x - r)
        prod = err * q
        out.append(ApproxRecord(q, r, err, gcd(q, r) == 1, prod,
                                None if norm is None else prod * norm))
    return out


def _min_rec(a: Optional[ApproxRecord], b: Optional[ApproxRecord], key) -> Optional[ApproxRecord]:
    if a is None:
        return b
    if b is None:
        return a
    return a if key(a) <= key(b) else b


def _norm_key(rec: ApproxRecord):
    return (rec.normalized.lo, rec.q, rec.r)


@dataclass
class Bucket:
    count: int = 0
    min_primitive_normalized: Optional[Fraction] = None
    min_product: Optional[Fraction] = None

    def merge(self, other: "Bucket") -> "Bucket":
        def m(a, b):
            return b if a is None else a if b is None else min(a, b)
        return Bucket(self.count + other.count,
                      m(self.min_primitive_normalized, other.min_primitive_normalized),
                      m(self.min_product, other.min_product))

    def to_json(self) -> dict:
        f = lambda x: None if x is None else f"{x.numerator}/{x.denominator}"  # noqa: E731
        return {"count": str(self.count),
                "min_primitive_normalized_lo": f(self.min_primitive_normalized),
                "min_product_lo": f(self.min_product)}


@dataclass
class ScanReport:
    q_min: int
    q_max: int
    best_primitive: Optional[ApproxRecord] = None
    best_nonprimitive: Optional[ApproxRecord] = None
    best_global: Optional[ApproxRecord] = None
    histogram: Dict[int, Bucket] = field(default_factory=dict)
    unresolved: List[int] = field(default_factory=list)
    eta_level: Optional[int] = None
    alpha_depth: Optional[int] = None

    @property
    def c_hat_lower(self) -> Optional[Fraction]:
        return None if self.best_primitive is None else self.best_primitive.normalized.lo

    @property
    def partial(self) -> bool:
        return bool(self.unresolved)

    def merge(self, other: "ScanReport") -> "ScanReport":
        """Associative merge of reports over adjacent q ranges."""
        hist = dict(self.histogram)
        for d, b in other.histogram.items():
            hist[d] = hist[d].merge(b) if d in hist else b
        return ScanReport(
            min(self.q_min, other.q_min),
            max(self.q_max, other.q_max),
            _min_rec(self.best_primitive, other.best_primitive, _norm_key),
            _min_rec(self.best_nonprimitive, other.best_nonprimitive, ApproxRecord.key),
            _min_rec(self.best_global, other.best_global, ApproxRecord.key),
            dict(sorted(hist.items())),
            sorted(self.unresolved + other.unresolved),
            self.eta_level if self.eta_level is not None else other.eta_level,
            self.alpha_depth if self.alpha_depth is not None else other.alpha_depth,
        )

    def contrast_ratio(self) -> Optional[Fraction]:
        """Certified lower bound on best primitive normalized / best non-primitive product."""
        if self.best_primitive is None or self.best_nonprimitive is None:
            return None
        return self.best_primitive.normalized.lo / self.best_nonprimitive.product.hi

    def to_json(self) -> dict:
        rec = lambda r: None if r is None else r.to_json()  # noqa: E731
        c = self.c_hat_lower
        ratio = self.contrast_ratio()
        return {
            "q_min": str(self.q_min),
            "q_max": str(self.q_max),
            "eta_level": None if self.eta_level is None else str(self.eta_level),
            "alpha_depth": None if self.alpha_depth is None else str(self.alpha_depth),
            "c_hat_lower": None if c is None else f"{c.numerator}/{c.denominator}",
            "contrast_ratio_lower": None if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
            "best_primitive": rec(self.best_primitive),
            "best_nonprimitive": rec(self.best_nonprimitive),
            "best_global": rec(self.best_global),
            "histogram": {f"1e{d}": b.to_json() for d, b in sorted(self.histogram.items())},
            "unresolved": [str(q) for q in self.unresolved],
            "partial": self.partial,
            "candidates": CANDIDATE_NOTE,
        }

    def summary(self) -> str:
        lines = [f"scan q in [{self.q_min}, {self.q_max}]  (eta level {self.eta_level}, "
                 f"alpha depth {self.alpha_depth})"]
        c = self.c_hat_lower
        lines.append(f"c_hat_lower = {float(c):.6f}" if c is not None else "c_hat_lower = n/a")
        ratio = self.contrast_ratio()
        if ratio is not None:
            lines.append(f"contrast ratio >= {float(ratio):.6g}")
        lines.append(f"{'record':<14}{'q':>14}{'r':>12}  {'product':<28}{'normalized':<28}coprime")
        for name, r in (("best primitive", self.best_primitive),
                        ("best non-prim", self.best_nonprimitive),
                        ("global min", self.best_global)):
            if r is None:
                continue
            lines.append(f"{name:<14}{r.q:>14}{r.r:>12}  {str(r.product):<28}"
                         f"{str(r.normalized) if r.normalized else '-':<28}{r.coprime}")
        if self.unresolved:
            lines.append(f"UNRESOLVED q: {len(self.unresolved)} (report is partial)")
        return "\n".join(lines)


def _decade(q: int) -> int:
    return len(str(q)) - 1


def _scaled(iv: RationalInterval, D: int) -> Tuple[int, int]:
    lo, hi = iv.lo * D, iv.hi * D
    if lo.denominator != 1 or hi.denominator != 1:
        raise ValueError("enclosure endpoints must have denominators dividing D")
    return int(lo), int(hi)


def scan_range(q_lo: int, q_hi: int, alpha: RationalInterval, eta: RationalInterval,
               q_min: int = Q_MIN) -> ScanReport:
    """Scan ``q_lo..q_hi`` against fixed dyadic enclosures (worker entry point).

    Runs on integers scaled by a common power of two; the winning records
    are rebuilt with ``best_approximants`` at the end.
    """
    D = max(alpha.lo.denominator, alpha.hi.denominator, eta.lo.denominator, eta.hi.denominator)
    if D & (D - 1):
        raise ValueError("scan enclosures must have dyadic endpoints (see RationalInterval.outward)")
    al, ah = _scaled(alpha, D)
    el, eh = _scaled(eta, D)
    rep = ScanReport(q_lo, q_hi)
    buckets: Dict[int, list] = {}  # decade -> [count, min prim normalized (scaled), min product (scaled)]
    best_g = best_n = best_p = None  # (scaled key, q, r)
    NS = 1 << NORM_BITS
    for q in range(q_lo, q_hi + 1):
        xl, xh = q * al - eh, q * ah - el
        if (xh - xl) * 10**6 * q >= D:
            rep.unresolved.append(q)
            continue
        r0 = (xl + xh + D) // (2 * D)
        bucket = buckets.setdefault(_decade(q), [0, None, None])
        bucket[0] += 1
        prim = None
        for r in (r0 - 1, r0, r0 + 1):
            lo, hi = xl - r * D, xh - r * D
            elo = lo if lo >= 0 else (-hi if hi <= 0 else 0)
            key = (q * elo, q, r)
            if best_g is None or key < best_g:
                best_g = key
            if bucket[2] is None or key[0] < bucket[2]:
                bucket[2] = key[0]
            if gcd(q, r) == 1:
                if prim is None or key < prim:
                    prim = key
            elif best_n is None or key < best_n:
                best_n = key
        if prim is not None and q >= q_min:
            nkey = (prim[0] * int(normalizer(q).lo * NS), q, prim[2])
            if best_p is None or nkey < best_p:
                best_p = nkey
            if bucket[1] is None or nkey[0] < bucket[1]:
                bucket[1] = nkey[0]

    def rebuild(key, normalize=False):
        if key is None:
            return None
        _, q, r = key
        recs = best_approximants(q, alpha, eta, normalize=normalize)
        return next(x for x in recs if x.r == r)

    rep.best_global, rep.best_nonprimitive = rebuild(best_g), rebuild(best_n)
    rep.best_primitive = rebuild(best_p, normalize=True)
    rep.histogram = {
        d: Bucket(n, None if pm is None else Fraction(pm, D * NS), None if gm is None else Fraction(gm, D))
        for d, (n, pm, gm) in sorted(buckets.items())
    }
    return rep


def _scan_job(args):
    return scan_range(*args)


def scan_level(state: "ConstructionState", q_max: int) -> int:
    """Smallest level ``k`` with ``v_k >= q_max**2 * DEPTH_SLACK`` (the depth policy)."""
    need = q_max * q_max * DEPTH_SLACK
    k = 0
    while True:
        if k > state.conv.depth:
            state = state.deepened(k + 2)
        if state.conv.e(k)[0] >= need:
            return k
        k += 1


def scan_enclosures(state: "ConstructionState", q_max: int, extra: int = 0):
    """Outward-rounded enclosures of alpha and eta for a scan up to ``q_max``.

    Returns ``(state, level, alpha_depth, alpha, eta)``; ``state`` may have been deepened.
    """
    k = scan_level(state, q_max) + extra
    d = k + ALPHA_EXTRA
    state = state.deepened(d + 1)
    bits = 2 * q_max.bit_length() + 64
    alpha = alpha_enclosure(state.conv, d).outward(bits)
    eta = eta_enclosure(state, k, d).interval.outward(bits)
    return state, k, d, alpha, eta


def coprime_scan(state: "ConstructionState", q_max: int, q_min: int = Q_MIN, jobs: int = 1,
                 chunk: int = 5000, q_start: Optional[int] = None, deepen_cap: int = 3) -> ScanReport:
    """Scan ``q`` in ``[q_start, q_max]``; only ``q >= q_min`` enter ``c_hat_lower``.

    ``q_start`` defaults to ``q_min``. Unresolved q are retried with up to
    ``deepen_cap`` deeper enclosures before being reported.
    """
    q_start = q_min if q_start is None else q_start
    if q_max < q_start:
        raise ValueError("q_max must be >= q_start")
    state, k, d, alpha, eta = scan_enclosures(state, q_max)
    tasks = [(lo, min(lo + chunk - 1, q_max), alpha, eta, q_min)
             for lo in range(q_start, q_max + 1, chunk)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_scan_job, tasks))
    else:
        parts = [_scan_job(t) for t in tasks]
    report = parts[0]
    for p in parts[1:]:
        report = report.merge(p)
    report.eta_level, report.alpha_depth = k, d

    for extra in range(1, deepen_cap + 1):
        if not report.unresolved:
            break
        pending = report.unresolved
        report.unresolved = []
        state, _, _, alpha, eta = scan_enclosures(state, q_max, extra)
        for q in pending:
            report = report.merge(scan_range(q, q, alpha, eta, q_min))
    return report


def nonprimitive_certificate(state: "ConstructionState", k: int) -> Dict[Tuple[int, int], int]:
    """gcd witness for every ``Z_k + x e_{k-1} + y e_k`` with ``max(1,|x|) max(1,|y|) <= k/2``."""
    from .lattice import combine

    rec = state.levels[k]
    half = k // 2
    out = {}
    for x in range(-half, half + 1):
        ymax = half // max(1, abs(x)) if half else -1
        for y in range(-ymax, ymax + 1):
            dq, dr = combine(state.conv, k, x, y)
            g = gcd(rec.b + dq, rec.c + dr)
            if g == 1:
                raise ConstructionError("(from)", f"coprime point at k={k}, (x, y)=({x}, {y})")
            out[(x, y)] = g
    return out


@dataclass(frozen=True)
class Margin:
    value: Fraction
    q: int
    r: int
    contrast: Optional[Fraction]


def theorem1_margin(report: ScanReport) -> Margin:
    if report.best_primitive is None:
        raise ValueError("scan contains no primitive record (needs q_max >= 102)")
    c = report.c_hat_lower
    if c <= 0:
        raise ConstructionError("(main)", f"non-positive margin {c} at q={report.best_primitive.q}")
    return Margin(c, report.best_primitive.q, report.best_primitive.r, report.contrast_ratio())
