"""LCE for index pairs at distance at most tau, via per-block periodicity.

For every window ``T_k = T[k*tau : (k+2)*tau]`` that is periodic (smallest
period p_k <= tau) the structure keeps p_k and the length l_k of the longest
substring starting at ``k*tau`` that has period p_k. A query aligns the
smaller index to a block boundary, compares at most 2*tau + 1 symbol pairs
and, if they all match, reads the answer off l_k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stats import QueryStats
from .text import Text, border_period

__all__ = ["NearbyStructure", "build_nearby", "nearby_query"]


@dataclass
class NearbyStructure:
    tau: int
    n: int
    period: list[int]  # 0 marks an aperiodic (or truncated) window
    run: list[int]

    @property
    def entries(self) -> int:
        return sum(1 for p in self.period if p)

    @property
    def words(self) -> int:
        return 2 * len(self.period)

    def to_arrays(self) -> dict[str, np.ndarray]:
        return {
            "period": np.asarray(self.period, dtype=np.int64),
            "run": np.asarray(self.run, dtype=np.int64),
        }

    @classmethod
    def from_arrays(cls, tau: int, n: int, arrays: dict[str, np.ndarray]) -> "NearbyStructure":
        return cls(tau, n, arrays["period"].tolist(), arrays["run"].tolist())


def pair_extends(t: Text, tau: int, k: int, p: int) -> bool:
    """True iff ``T[k*tau : (k+4)*tau]`` has period p (the pairwise bit)."""
    start = k * tau
    return t.range_equal(start, start + p, 4 * tau - p)


def build_nearby(t: Text, tau: int) -> NearbyStructure:
    """Periods by failure function per window, run lengths by a right-to-left sweep.

    A window cut short by the text end keeps a period only when the
    truncated window (length >= 2) is periodic. Queries never read such an
    entry, since 2*tau + 1 matching symbols cannot fit before the end.
    """
    n = t.n
    if not 1 <= tau <= n:
        raise ValueError(f"tau={tau} outside [1, {n}]")
    blocks = n // tau
    period = [0] * blocks
    run = [0] * blocks
    seq = t.seq
    full = [k for k in range(blocks) if (k + 2) * tau <= n]
    for k in full:
        p = border_period(seq[k * tau:(k + 2) * tau])
        if p <= tau:
            period[k] = p
    for k in range(len(full), blocks):
        start = k * tau
        if n - start >= 2:
            p = border_period(seq[start:n])
            if 2 * p <= n - start:
                period[k] = p
                run[k] = p + t.match_length(start, start + p, n - start - p)
    # descending order so that run[k + 2] is ready when the pair bit is set
    for k in reversed(full):
        p = period[k]
        if not p:
            continue
        start = k * tau
        if (k + 4) * tau <= n and pair_extends(t, tau, k, p):
            assert period[k + 2] == p, "pair with short period must share p_k"
            run[k] = run[k + 2] + 2 * tau
        else:
            limit = min(4 * tau, n - start) - p
            run[k] = p + t.match_length(start, start + p, limit)
    return NearbyStructure(tau, n, period, run)


def nearby_query(ns: NearbyStructure, t: Text, i: int, j: int, stats: QueryStats | None = None) -> int:
    """LCE(i, j) for ``|i - j| <= tau``."""
    n = t.n
    if i == j:
        return n - i
    if i > j:
        i, j = j, i
    d = j - i
    tau = ns.tau
    if d > tau:
        raise ValueError(f"nearby query needs |i-j| <= tau, got {d} > {tau}")

    # step to the next block boundary by direct comparison
    align = -i % tau
    limit = min(align, n - j)
    m = t.match_length(i, j, limit)
    comps = m + (m < limit)
    if m < align:
        if stats is not None:
            stats.char_comparisons += comps
            stats.align_comparisons += comps
            stats.max_round_comparisons = max(stats.max_round_comparisons, comps)
        return m
    if stats is not None:
        stats.align_comparisons += comps
    i += align
    j += align

    # compare T[i+delta] and T[j+delta] for delta in [0, 2*tau]
    span = 2 * tau + 1
    limit = min(span, n - j)
    m = t.match_length(i, j, limit)
    comps += m + (m < limit)
    if stats is not None:
        stats.char_comparisons += comps
        stats.max_round_comparisons = max(stats.max_round_comparisons, comps)
    if m < span:
        return align + m
    k = i // tau
    assert ns.period[k], "matched 2*tau+1 symbols at distance <= tau in an aperiodic window"
    return align + ns.run[k] - d
