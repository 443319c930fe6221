"""The full construction as one value, and its canonical JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List

from .continued_fraction import (
    ConvergentSeq,
    QuotientSchedule,
    WPolicy,
    build_schedule,
    convergents,
)
from .crt_grid import CrtPair, crt_chain
from .lattice import LevelRecord, extend_point
from .omega_primes import PrimeArrangement, arrange_primes

FORMAT_VERSION = "1"


class StateFormatError(ValueError):
    pass


@dataclass
class Parameters:
    depth: int
    w_policy: str = "linear:5"
    perm: str = "canonical"
    seed: int | None = None
    a0: int = 0

    def to_json(self) -> dict:
        return {
            "depth": str(self.depth),
            "w_policy": self.w_policy,
            "perm": self.perm,
            "seed": None if self.seed is None else str(self.seed),
            "a0": str(self.a0),
        }

    @classmethod
    def from_json(cls, d: dict) -> "Parameters":
        return cls(int(d["depth"]), d["w_policy"], d["perm"],
                   None if d["seed"] is None else int(d["seed"]), int(d["a0"]))


@dataclass
class ConstructionState:
    params: Parameters
    arr: PrimeArrangement
    schedule: QuotientSchedule
    conv: ConvergentSeq
    crt: List[CrtPair]
    levels: List[LevelRecord] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def W(self, k: int) -> int:
        return self.schedule.W[k]

    def deepened(self, depth: int) -> "ConstructionState":
        """Same construction carried to a larger depth (prefix is unchanged)."""
        if depth <= self.depth:
            return self
        p = self.params
        return build(depth, p.w_policy, p.perm, p.seed, p.a0)

    # --- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        s = self.schedule
        return {
            "format_version": FORMAT_VERSION,
            "parameters": self.params.to_json(),
            "arrangement": self.arr.to_json(),
            "schedule": {
                "a0": str(s.a0),
                "a": [str(x) for x in s.a],
                "W": [str(x) for x in s.W],
                "gamma_min": f"{s.gamma_min.numerator}/{s.gamma_min.denominator}",
                "gamma_argmax": str(s.gamma_argmax),
            },
            "convergents": [[str(v), str(u)] for v, u in zip(self.conv.v, self.conv.u)],
            "crt_pairs": [p.to_json() for p in self.crt],
            "levels": [r.to_json() for r in self.levels],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"), indent=None) + "\n"

    @classmethod
    def from_json(cls, d: dict) -> "ConstructionState":
        from fractions import Fraction

        if d.get("format_version") != FORMAT_VERSION:
            raise StateFormatError(f"unsupported format_version {d.get('format_version')!r}")
        try:
            sd = d["schedule"]
            schedule = QuotientSchedule(
                int(sd["a0"]), [int(x) for x in sd["a"]], [int(x) for x in sd["W"]],
                Fraction(sd["gamma_min"]), int(sd["gamma_argmax"]),
            )
            conv = ConvergentSeq([int(v) for v, _ in d["convergents"]],
                                 [int(u) for _, u in d["convergents"]])
            return cls(
                Parameters.from_json(d["parameters"]),
                PrimeArrangement.from_json(d["arrangement"]),
                schedule,
                conv,
                [CrtPair.from_json(p) for p in d["crt_pairs"]],
                [LevelRecord.from_json(r) for r in d["levels"]],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise StateFormatError(f"malformed state: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "ConstructionState":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise StateFormatError("top-level JSON value must be an object")
        return cls.from_json(data)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "ConstructionState":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def build(depth: int, w_policy: str | WPolicy = "linear:5", perm: str = "canonical",
          seed: int | None = None, a0: int = 0) -> ConstructionState:
    """Construct levels ``0..depth``; any broken invariant raises ``ConstructionError``."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    pol = WPolicy.parse(w_policy) if isinstance(w_policy, str) else w_policy
    pol.validate()
    shells = (depth - 1) // 2 + 1
    arr = arrange_primes(shells, perm, seed)
    schedule = build_schedule(arr, depth, pol, a0)
    state = ConstructionState(
        Parameters(depth, pol.descriptor(), perm, seed, a0),
        arr,
        schedule,
        convergents(schedule),
        crt_chain(arr, shells),
        [LevelRecord(0, None, None, 0, 0, 0, 0)],
    )
    for k in range(depth):
        state.levels.append(extend_point(state, k))
    return state
