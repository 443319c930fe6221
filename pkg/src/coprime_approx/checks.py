"""Invariant suites over a (possibly reloaded) construction state.

Every check reads the stored values and re-derives nothing it is meant to
test, so a corrupted state file fails here. Results are tagged with the
law they test, e.g. ``(xy)`` or ``(bound)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Callable, List

from .continued_fraction import gamma_ratio
from .crt_grid import grid_certificate
from .errors import ConstructionError, PrecisionError
from .eta_series import residual_decreases, residual_sign, sandwich_check, summands_decrease
from .lattice import combine, lattice_membership, lattice_spec
from .omega_primes import first_primes, in_omega, iter_cross_gcd_law, omega_cardinality, omega_set
from .state import ConstructionState
from .verifier import nonprimitive_certificate

PHI_UPPER = Fraction(16181, 10000)  # > golden ratio
GCD_LAW_MAX_SHELL = 6
NONPRIM_MAX_LEVEL = 8


@dataclass
class CheckResult:
    tag: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.tag:<10} {self.detail}"


class _Fail(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _Fail(msg)


def check_arrangement(s: ConstructionState) -> str:
    arr = s.arr
    _require(arr.assignment.get((0, 0)) == 2, "p[0,0] != 2")
    primes = first_primes(omega_cardinality(arr.max_shell))
    used = 0
    for k, sh in enumerate(arr.shells):
        n = omega_cardinality(k) - (omega_cardinality(k - 1) if k else 0)
        _require(len(sh) == n, f"shell {k} has {len(sh)} pairs, expected {n}")
        _require(all(in_omega(p, k) and (k == 0 or not in_omega(p, k - 1)) for p in sh),
                 f"shell {k} holds pairs outside its shell")
        got = sorted(arr.assignment[p] for p in sh)
        _require(got == primes[used:used + n], f"shell {k} is not the next {n} primes")
        used += n
    return f"bijection onto first {used} primes, shell-respecting"


def check_primorials(s: ConstructionState) -> str:
    arr = s.arr
    for k in range(arr.max_shell + 1):
        P = arr.primorial(k)
        _require(P == prod(arr.assignment[p] for p in omega_set(k)), f"P_{k} != product over box")
        if k:
            _require(arr.cofactor(k) * arr.primorial(k - 1) == P, f"Q_{k} P_{k - 1} != P_{k}")
            _require(gcd(arr.primorial(k - 1), arr.cofactor(k)) == 1, f"gcd(P_{k - 1}, Q_{k}) != 1")
        rows = prod(arr.row_product(i, k) for i in range(-k, k + 1))
        cols = prod(arr.col_product(j, k) for j in range(-k, k + 1))
        _require(rows == cols == P, f"row/column products differ from P_{k}")
    _require(arr.primorial(0) == 2, "P_0 != 2")
    return f"P_0..P_{arr.max_shell}, gcd(P_k, Q_k+1) = 1"


def check_ab(s: ConstructionState) -> str:
    arr = s.arr
    K = min(arr.max_shell, GCD_LAW_MAX_SHELL)
    for k in range(K + 1):
        for i1 in range(-k, k + 1):
            for i2 in range(i1 + 1, k + 1):
                _require(gcd(arr.row_product(i1, k), arr.row_product(i2, k)) == 1,
                         f"rows {i1},{i2} share a factor at k={k}")
                _require(gcd(arr.col_product(i1, k), arr.col_product(i2, k)) == 1,
                         f"columns {i1},{i2} share a factor at k={k}")
    return f"pairwise coprime rows/columns, k <= {K}"


def check_ab1(s: ConstructionState) -> str:
    K = min(s.arr.max_shell, GCD_LAW_MAX_SHELL)
    n = 0
    for k1, k2, i, j, got, want in iter_cross_gcd_law(s.arr, K):
        _require(got == want, f"gcd(A_{i}^[{k1}], B_{j}^[{k2}]) = {got}, expected {want}")
        n += 1
    return f"{n} cross gcds, k1, k2 <= {K}"


def check_crt(s: ConstructionState) -> str:
    arr = s.arr
    for pair in s.crt:
        k, P = pair.k, arr.primorial(pair.k)
        _require(P <= pair.X <= 2 * P - 1 and P <= pair.Y <= 2 * P - 1, f"X_{k}/Y_{k} out of range")
        for i in range(-k, k + 1):
            _require((pair.X + i) % arr.row_product(i, k) == 0, f"X_{k}+{i} not divisible by A_{i}")
            _require((pair.Y + i) % arr.col_product(i, k) == 0, f"Y_{k}+{i} not divisible by B_{i}")
    _require(s.crt[0].X == s.crt[0].Y == 2, "X_0, Y_0 != 2")
    return f"congruences and range for k <= {len(s.crt) - 1}"


def check_xy(s: ConstructionState) -> str:
    n = 0
    for pair in s.crt:
        try:
            n += len(grid_certificate(s.arr, pair).entries)
        except ConstructionError as exc:
            raise _Fail(str(exc)) from None
    return f"{n} grid witnesses"


def check_xky(s: ConstructionState) -> str:
    for a, b in zip(s.crt, s.crt[1:]):
        P = s.arr.primorial(a.k)
        _require((b.X - a.X) % P == 0 and (b.Y - a.Y) % P == 0, f"chain broken at k={a.k}")
    return f"chain k <= {len(s.crt) - 2}"


def check_schedule(s: ConstructionState) -> str:
    sch = s.schedule
    for k, (a, W) in enumerate(zip(sch.a, sch.W)):
        _require(W >= 5, f"W_{k} < 5")
        _require(k == 0 or W >= sch.W[k - 1], f"W not nondecreasing at {k}")
        _require(a % s.arr.primorial(k // 2) == 0, f"(pe): a_{k + 1} not divisible by P_{k // 2}")
        _require(a >= W * s.arr.primorial(k // 2 + 1), f"(boo): a_{k + 1} < W_{k} P_{k // 2 + 1}")
    return f"a_1..a_{len(sch.a)}"


def check_gamma(s: ConstructionState) -> str:
    sch = s.schedule
    K = len(sch.a)
    ratios = {k: gamma_ratio(sch.a[k - 1], k) for k in range(2, K + 1)}
    for k, r in ratios.items():
        _require(r.hi <= sch.gamma_min, f"ln a_{k} / (k ln^2 k) exceeds gamma_min")
    return f"gamma_min = {float(sch.gamma_min):.6f} (attained at k={sch.gamma_argmax})"


def check_convergents(s: ConstructionState) -> str:
    c, sch = s.conv, s.schedule
    _require(c.e(-1) == (0, 1) and c.e(0) == (1, sch.a0), "bad seed vectors")
    for k in range(0, c.depth):
        a = sch.quotient(k + 1)
        v0, u0 = c.e(k - 1)
        v1, u1 = c.e(k)
        v2, u2 = c.e(k + 1)
        _require((v2, u2) == (a * v1 + v0, a * u1 + u0), f"(qqq) fails at k={k + 1}")
    for k in range(0, c.depth + 1):
        v0, u0 = c.e(k - 1)
        v1, u1 = c.e(k)
        det = v1 * u0 - v0 * u1
        _require(det == (-1) ** k, f"determinant {det} at k={k}")
        _require(gcd(v1, u1) == 1, f"gcd(v_{k}, u_{k}) != 1")
        _require(k < 1 or v1 > v0, f"v not increasing at {k}")
        _require(k < 1 or v1 >= PHI_UPPER ** (k - 1), f"Fibonacci bound fails at {k}")
    return f"e_-1..e_{c.depth}"


def check_levels(s: ConstructionState) -> str:
    arr, c = s.arr, s.conv
    recs = s.levels
    _require(recs[0].Z == (0, 0) and (recs[0].frakX, recs[0].frakY) == (0, 0), "Z_0 != (0,0)")
    for rec in recs:
        _require(combine(c, rec.k, rec.frakX, rec.frakY) == rec.Z, f"(ze) frak coords at k={rec.k}")
        _require(lattice_membership(rec.Z, s, rec.k), f"(ze) Z_{rec.k} not in its lattice")
    sum_b = sum_c = 0
    for prev, rec in zip(recs, recs[1:]):
        k = prev.k
        l = k // 2
        P, Q = arr.primorial(l), arr.cofactor(l + 1)
        a = s.schedule.quotient(k + 1)
        v, u = c.e(k)
        lam = rec.lam
        _require(rec.Z == (prev.b + P * lam * v, prev.c + P * lam * u), f"(z2) at k={k + 1}")
        _require(rec.frakY == prev.frakX, f"(z11) at k={k + 1}")
        _require(rec.frakX == prev.frakY + P * lam - prev.frakX * a, f"(z12) at k={k + 1}")
        _require(1 <= rec.lambda_star <= Q, f"lambda*_{k + 1} outside 1..Q")
        _require((lam - rec.lambda_star) % Q == 0, f"lambda_{k + 1} != lambda* mod Q")
        target = s.crt[l + 1].Y if k % 2 == 0 else s.crt[l + 1].X
        _require((rec.frakX - target) % arr.primorial(l + 1) == 0, f"(tri) at k={k + 1}")
        _require(lam >= 1, f"lambda_{k + 1} < 1")
        _require(abs(2 * P * lam - a) <= P * Q, f"(bound) at k={k + 1}")
        P_next = arr.primorial(l + 1)
        vk1 = c.e(k + 1)[0]
        _require(abs(2 * rec.b - vk1) <= 4 * P_next * v, f"(be) at k={k + 1}")
        if rec.k >= 2:
            _require(gcd(rec.b, rec.c) > 1, f"Z_{rec.k} is primitive")
        sum_b += P * lam * v
        sum_c += P * lam * u
        _require((sum_b, sum_c) == rec.Z, f"series identity for b_{rec.k}, c_{rec.k}")
    return f"Z_0..Z_{s.depth}"


def check_lattice_spec(s: ConstructionState) -> str:
    for rec in s.levels:
        spec = lattice_spec(s, rec.k)
        _require(spec.x_mod >= 2 and spec.y_mod >= 2, f"degenerate lattice at k={rec.k}")
    return "moduli >= 2"


def check_sandwich(s: ConstructionState) -> str:
    top = min(s.depth - 2, s.conv.depth - 1)
    ks = range(0, top + 1)
    if not ks:
        return "skipped (state too shallow)"
    for k in ks:
        try:
            _require(sandwich_check(s, k), f"sandwich fails at k={k}")
        except PrecisionError as exc:
            raise _Fail(f"undecided at k={k}: {exc}") from None
    return f"k = 0..{top}"


def check_signs(s: ConstructionState) -> str:
    top = s.depth - 2
    if top < 0:
        return "skipped (state too shallow)"
    for k in range(top + 1):
        _require(residual_sign(s, k) == (-1) ** k, f"sign of eta - S_{k}")
    for k in range(top):
        _require(residual_decreases(s, k) is True, f"|eta - S_k| not decreasing at k={k}")
    j_max = min(s.depth, s.conv.depth - 2)
    if j_max >= 2:
        dec = summands_decrease(s, j_max, s.conv.depth - 1)
        _require(all(v is True for v in dec.values()), "summands not decreasing")
    return f"alternating and shrinking, k = 0..{top}"


def check_from(s: ConstructionState) -> str:
    n = 0
    for k in range(min(s.depth, NONPRIM_MAX_LEVEL) + 1):
        try:
            n += len(nonprimitive_certificate(s, k))
        except ConstructionError as exc:
            raise _Fail(str(exc)) from None
    return f"{n} non-primitive points, k <= {min(s.depth, NONPRIM_MAX_LEVEL)}"


SUITE: List[tuple[str, Callable[[ConstructionState], str]]] = [
    ("arrange", check_arrangement),
    ("(p)/(Q)", check_primorials),
    ("(ab)", check_ab),
    ("(ab1)", check_ab1),
    ("CRT", check_crt),
    ("(xy)", check_xy),
    ("(xky)", check_xky),
    ("(pe)/(boo)", check_schedule),
    ("(iiee)", check_gamma),
    ("(qqq)", check_convergents),
    ("lattice", check_lattice_spec),
    ("(z0)-(be)", check_levels),
    ("(eta1/2)", check_sandwich),
    ("signs", check_signs),
    ("(from)", check_from),
]


def run_checks(state: ConstructionState) -> List[CheckResult]:
    out = []
    for tag, fn in SUITE:
        try:
            out.append(CheckResult(tag, True, fn(state)))
        except _Fail as exc:
            out.append(CheckResult(tag, False, str(exc)))
        except (ConstructionError, IndexError, KeyError, ValueError, ZeroDivisionError) as exc:
            out.append(CheckResult(tag, False, f"{type(exc).__name__}: {exc}"))
    return out
