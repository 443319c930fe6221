"""Command-line entry point.

Exit codes: 0 pass, 1 invariant failure, 2 usage error, 3 precision shortfall
or partial scan, 4 unreadable or incompatible state file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .checks import run_checks
from .crt_grid import BoxNotFound, erdos_b_stats, gcd_table, grid_certificate, solve_crt_pair
from .errors import ConstructionError, PrecisionError
from .eta_series import certified_digits
from .omega_primes import arrange_primes
from .state import ConstructionState, StateFormatError, build
from .verifier import Q_MIN, coprime_scan, theorem1_margin

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PARTIAL, EXIT_BADSTATE = 0, 1, 2, 3, 4
OUT_ENV = "COPRIME_APPROX_OUT"


def _out_dir() -> Path:
    return Path(os.environ.get(OUT_ENV, "."))


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _load(path: str) -> ConstructionState:
    try:
        return ConstructionState.load(path)
    except OSError as exc:
        raise StateFormatError(f"cannot read {path}: {exc}") from exc


def cmd_build(args) -> int:
    if args.depth < 2:
        print("error: --depth must be at least 2", file=sys.stderr)
        return EXIT_USAGE
    if args.perm == "seeded" and args.seed is None:
        print("error: --perm seeded needs --seed", file=sys.stderr)
        return EXIT_USAGE
    try:
        state = build(args.depth, args.w_policy, args.perm, args.seed)
    except ConstructionError as exc:
        print(f"{exc} (during build)", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = [r for r in run_checks(state) if not r.ok]
    for r in failed:
        print(r.line(), file=sys.stderr)
    out = Path(args.out) if args.out else _out_dir() / f"state-d{args.depth}.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    state.save(out)
    print(f"wrote {out} (depth {state.depth}, shells 0..{state.arr.max_shell})")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_check(args) -> int:
    state = _load(args.state)
    results = run_checks(state)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def cmd_scan(args) -> int:
    if args.qmax < Q_MIN:
        print(f"error: --qmax must be at least {Q_MIN}", file=sys.stderr)
        return EXIT_USAGE
    q_start = args.qstart if args.qstart is not None else args.qmin
    if q_start > args.qmax or args.jobs < 1:
        print("error: empty q range or bad --jobs", file=sys.stderr)
        return EXIT_USAGE
    state = _load(args.state)
    report = coprime_scan(state, args.qmax, q_min=args.qmin, jobs=args.jobs, q_start=q_start)
    prefix = Path(args.out) if args.out else _out_dir() / f"scan-q{args.qmax}"
    prefix.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{prefix}.json").write_text(_dump(report.to_json()), encoding="utf-8")
    text = report.summary()
    Path(f"{prefix}.txt").write_text(text + "\n", encoding="utf-8")
    print(text)
    if report.best_primitive is None:
        return EXIT_PARTIAL if report.partial else EXIT_OK
    try:
        theorem1_margin(report)
    except ConstructionError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PARTIAL if report.partial else EXIT_OK


def cmd_erdos_grid(args) -> int:
    arr = arrange_primes(args.k, args.perm, args.seed)
    pair = solve_crt_pair(arr, args.k)
    cert = grid_certificate(arr, pair)
    if args.json:
        sys.stdout.write(_dump({"X": str(pair.X), "Y": str(pair.Y), "certificate": cert.to_json()}))
        return EXIT_OK
    k = args.k
    print(f"X_{k} = {pair.X}\nY_{k} = {pair.Y}")
    print("gcd(X+i, Y+j); rows i, columns j; * marks the certified box")
    table = gcd_table(pair.X, pair.Y, k)
    width = max(len(str(g)) for row in table for g in row) + 2
    print(" " * 5 + "".join(f"{j:>{width}}" for j in range(-k, k + 1)))
    for i, row in zip(range(-k, k + 1), table):
        cells = []
        for j, g in zip(range(-k, k + 1), row):
            mark = "*" if (i, j) in cert.entries else " "
            cells.append(f"{g}{mark}".rjust(width))
        print(f"{i:>5}" + "".join(cells))
    return EXIT_OK


def cmd_erdos_b(args) -> int:
    try:
        stats = erdos_b_stats(args.samples, args.bound, args.seed, args.tmax)
    except BoxNotFound as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PARTIAL
    sys.stdout.write(_dump(stats))
    return EXIT_OK


def cmd_digits(args) -> int:
    if args.digits < 1:
        print("error: --digits must be positive", file=sys.stderr)
        return EXIT_USAGE
    state = _load(args.state)
    for _ in range(args.max_extra + 1):
        try:
            out = certified_digits(state, args.digits)
            break
        except PrecisionError:
            state = state.deepened(state.depth + 2)
    else:
        print(f"error: {args.digits} digits need more than depth {state.depth}", file=sys.stderr)
        return EXIT_PARTIAL
    print(f"alpha = {out['alpha']}")
    print(f"eta   = {out['eta']}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coprime-approx", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct alpha, eta data and write a state file")
    b.add_argument("--depth", type=int, default=16)
    b.add_argument("--w-policy", default="linear:5", help="linear[:C] or affine:M:C (W_k = M k + C)")
    b.add_argument("--perm", choices=["canonical", "seeded"], default="canonical")
    b.add_argument("--seed", type=int)
    b.add_argument("--out")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run every invariant suite on a state file")
    c.add_argument("state")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("scan", help="scan q and certify the coprime lower bound")
    s.add_argument("state")
    s.add_argument("--qmax", type=int, default=10**5)
    s.add_argument("--qmin", type=int, default=Q_MIN, help="smallest q entering c_hat")
    s.add_argument("--qstart", type=int, help="first q scanned (defaults to --qmin)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out", help="output prefix for .json and .txt")
    s.set_defaults(func=cmd_scan)

    g = sub.add_parser("erdos-grid", help="gcd table of the CRT grid for shell k")
    g.add_argument("--k", "--depth", dest="k", type=int, default=2)
    g.add_argument("--perm", choices=["canonical", "seeded"], default="canonical")
    g.add_argument("--seed", type=int)
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_erdos_grid)

    e = sub.add_parser("erdos-b", help="minimal coprime box over random (x, y)")
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--bound", type=int, default=10**6)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tmax", type=int, default=64)
    e.set_defaults(func=cmd_erdos_b)

    d = sub.add_parser("digits", help="certified decimal digits of alpha and eta")
    d.add_argument("state")
    d.add_argument("--digits", type=int, default=30)
    d.add_argument("--max-extra", type=int, default=8, help="extra depth steps allowed")
    d.set_defaults(func=cmd_digits)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BADSTATE


if __name__ == "__main__":
    sys.exit(main())
