"""Las Vegas certification of a fingerprint function for the Monte Carlo query.

The query only ever compares ``phi(T[k*tau : k*tau + 2**l * tau])`` with
``phi(T[j : j + 2**l * tau])``. For each l the block fingerprints go into a
table keyed by residue, a window slides over every j, and each residue hit
is confirmed symbol by symbol. A hit that does not confirm is a collision.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .fingerprint import PhiParams, pick_random_phi
from .mc import BitGeometry, McStructure, build_mc
from .text import Text

__all__ = [
    "LevelStats",
    "VerificationReport",
    "VerificationFailed",
    "window_fingerprints",
    "verify_phi",
    "build_las_vegas",
]


@dataclass
class LevelStats:
    level: int
    length: int
    blocks: int = 0
    windows: int = 0
    matches: int = 0
    symbols_compared: int = 0


@dataclass
class VerificationReport:
    collision_free: bool
    witness: tuple[int, int, int] | None = None  # (block start, j, length)
    levels: list[LevelStats] = field(default_factory=list)
    trials: int = 1
    p: int = 0
    xs: tuple[int, ...] = ()

    @property
    def outcome(self) -> str:
        return "collision-free" if self.collision_free else "collision"

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "witness": list(self.witness) if self.witness else None,
            "trials": self.trials,
            "p": self.p,
            "xs": list(self.xs),
            "levels": [vars(s) for s in self.levels],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, report: VerificationReport):
        super().__init__(message)
        self.report = report


def window_fingerprints(phi, t: Text, length: int) -> list:
    """``phi(T[j : j+length])`` for every j, one entry per start position.

    Entries are ints for a single base and tuples for several. Computed as
    ``(F(j+length) - F(j)) * x**-j`` from the prefix sums.
    """
    n, seq, p = t.n, t.seq, phi.p
    if not 1 <= length <= n:
        raise ValueError(f"window length {length} outside [1, {n}]")
    cols = []
    for x in phi.xs:
        if x == 0:
            cols.append([v % p for v in seq[: n - length + 1]])
            continue
        x_inv = pow(x, -1, p)
        pref = [0] * (n + 1)
        acc, pw = 0, 1
        for q in range(n):
            acc = (acc + seq[q] * pw) % p
            pw = pw * x % p
            pref[q + 1] = acc
        out = []
        inv = 1
        for q in range(n - length + 1):
            out.append((pref[q + length] - pref[q]) * inv % p)
            inv = inv * x_inv % p
        cols.append(out)
    if len(cols) == 1:
        return cols[0]
    return list(zip(*cols))


def verify_phi(t: Text, tau: int, phi) -> VerificationReport:
    """Check every (block, window, level) comparison the query can make.

    Blocks sharing a residue are confirmed against the first block of that
    residue when inserted; a window hit is then confirmed against that one
    representative, which covers every block in the bucket.
    """
    g = BitGeometry(t.n, tau)
    n, T = t.n, g.tau
    report = VerificationReport(True, p=phi.p, xs=tuple(phi.xs))
    for l in range(g.lg_blocks):
        length = T << l
        if length > n:
            break
        st = LevelStats(l, length)
        report.levels.append(st)
        fps = window_fingerprints(phi, t, length)
        table: dict = {}
        for start in range(0, n - length + 1, T):
            st.blocks += 1
            bucket = table.get(fps[start])
            if bucket is None:
                table[fps[start]] = [start]
                continue
            st.matches += 1
            st.symbols_compared += length
            if not t.range_equal(bucket[0], start, length):
                report.collision_free = False
                report.witness = (bucket[0], start, length)
                return report
            bucket.append(start)
        for j, fp in enumerate(fps):
            st.windows += 1
            bucket = table.get(fp)
            if bucket is None:
                continue
            st.matches += 1
            st.symbols_compared += length
            if not t.range_equal(bucket[0], j, length):
                report.collision_free = False
                report.witness = (bucket[0], j, length)
                return report
    return report


def build_las_vegas(
    t: Text,
    tau: int,
    seed: int = 0,
    c: float = 1.0,
    max_trials: int = 32,
    modulus: int | None = None,
) -> tuple[McStructure, VerificationReport]:
    """Draw phi until verify_phi certifies it, then build the Monte Carlo structure.

    ``modulus`` pins p (the base stays random), which is how small-p stress
    runs force retries. Trial seeds derive from ``seed`` deterministically.
    """
    rng = random.Random(seed)
    report = None
    for trial in range(1, max_trials + 1):
        sub = rng.getrandbits(63)
        if modulus is None:
            phi = pick_random_phi(t.n, c, seed=sub)
        else:
            phi = PhiParams(modulus, random.Random(sub).randint(1, modulus - 1), c, sub)
        report = verify_phi(t, tau, phi)
        report.trials = trial
        if report.collision_free:
            return build_mc(t, tau, phi), report
    raise VerificationFailed(f"no collision-free phi in {max_trials} trials", report)
