"""Constant-time LCE for long extensions over a difference-cover-style sample.

A position i is sampled when ``i mod tau**2`` lies in
``D = {0, ..., tau} | {m*tau : 2 <= m <= tau-1}``. For any i, j below
``n - tau**2`` the shift ``delta(i, j)`` moves both into the sample, where
sparse suffix and reversed-prefix oracles answer in O(1). A query either
returns LCE(i, j) exactly or certifies that it is at most tau**2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .baseline import BaselineIndex, SuffixIndex
from .mc import McStructure, mc_query
from .rmq import BlockRMQ
from .stats import QueryStats
from .text import Text

__all__ = [
    "DcResult",
    "SparseOracle",
    "DcStructure",
    "cover_set",
    "delta",
    "in_sample",
    "build_dc",
    "dc_query",
    "combined_query",
]


class DcResult(NamedTuple):
    exact: bool
    value: int  # the LCE when exact, otherwise the bound tau**2


def cover_set(tau: int) -> list[int]:
    """Residues mod tau**2 that are sampled."""
    if tau < 1:
        raise ValueError("tau must be >= 1")
    sq = tau * tau
    return sorted({r for r in range(tau + 1) if r < sq} | {m * tau for m in range(2, tau)})


def delta(i: int, j: int, tau: int) -> int:
    sq = tau * tau
    return (((i - j) % tau) - i) % sq


def in_sample(i: int, tau: int) -> bool:
    r = i % (tau * tau)
    return r <= tau or r % tau == 0


class SparseOracle:
    """O(1) LCE among a fixed set of suffixes: local ranks, LCP and a linear RMQ."""

    def __init__(self, index: SuffixIndex, positions: np.ndarray):
        positions = np.asarray(positions, dtype=np.int64)
        self.size = int(positions.size)
        order = np.argsort(index.rank[positions], kind="stable")
        local = np.empty(self.size, dtype=np.int64)
        local[order] = np.arange(self.size, dtype=np.int64)
        lcp = np.zeros(self.size, dtype=np.int64)
        if self.size > 1:
            ranked = index.rank[positions[order]]
            lcp[1:] = index.lce_with_ranks(ranked[:-1], ranked[1:])
        self.rank = local.tolist()
        self.lcp = lcp
        self.rmq = BlockRMQ(lcp.tolist()) if self.size else None

    @classmethod
    def from_parts(cls, rank, lcp) -> "SparseOracle":
        self = cls.__new__(cls)
        self.rank = [int(r) for r in rank]
        self.size = len(self.rank)
        self.lcp = np.asarray(lcp, dtype=np.int64)
        self.rmq = BlockRMQ(self.lcp.tolist()) if self.size else None
        return self

    def lce(self, a: int, b: int) -> int:
        """LCE between the a-th and b-th stored suffixes (a != b)."""
        if a == b:
            raise ValueError("sparse oracle needs two distinct samples")
        ra, rb = self.rank[a], self.rank[b]
        if ra > rb:
            ra, rb = rb, ra
        return self.rmq.query(ra + 1, rb + 1)

    @property
    def words(self) -> int:
        return self.size + (self.rmq.words if self.rmq is not None else 0)


@dataclass
class DcStructure:
    tau: int
    n: int
    fwd: SparseOracle | None
    rev: SparseOracle | None

    @property
    def vacuous(self) -> bool:
        return self.fwd is None

    @property
    def cover(self) -> list[int]:
        return cover_set(self.tau)

    def sample_index(self, i: int) -> int:
        """Dense index of a sampled position, by arithmetic."""
        tau = self.tau
        sq = tau * tau
        q, r = divmod(i, sq)
        width = 1 if tau == 1 else 2 * tau - 1
        return q * width + (r if r <= tau else tau + r // tau - 1)

    def sampled(self) -> np.ndarray:
        sq = self.tau * self.tau
        cover = np.asarray(cover_set(self.tau), dtype=np.int64)
        starts = np.arange(0, self.n, sq, dtype=np.int64)
        pos = (starts[:, None] + cover[None, :]).ravel()
        return pos[pos < self.n]

    @property
    def samples(self) -> int:
        return 0 if self.vacuous else self.fwd.size

    def to_arrays(self) -> dict[str, np.ndarray]:
        if self.vacuous:
            return {}
        return {
            "fwd.rank": np.asarray(self.fwd.rank, dtype=np.int64),
            "fwd.lcp": self.fwd.lcp,
            "rev.rank": np.asarray(self.rev.rank, dtype=np.int64),
            "rev.lcp": self.rev.lcp,
        }

    @classmethod
    def from_arrays(cls, tau: int, n: int, arrays: dict[str, np.ndarray]) -> "DcStructure":
        if "fwd.rank" not in arrays:
            return cls(tau, n, None, None)
        fwd = SparseOracle.from_parts(arrays["fwd.rank"].tolist(), arrays["fwd.lcp"])
        rev = SparseOracle.from_parts(arrays["rev.rank"].tolist(), arrays["rev.lcp"])
        return cls(tau, n, fwd, rev)

    @property
    def words(self) -> int:
        if self.vacuous:
            return 0
        return self.fwd.words + self.rev.words


def build_dc(t: Text, tau: int, oracle: BaselineIndex | None = None) -> DcStructure:
    """Sparse oracles over the sampled suffixes and reversed prefixes.

    Built from the full-text suffix arrays; with ``tau**2 > n`` nothing is
    stored and every query certifies.
    """
    n = t.n
    if tau < 1:
        raise ValueError("tau must be >= 1")
    ds = DcStructure(tau, n, None, None)
    if tau * tau > n:
        return ds
    if oracle is None:
        oracle = BaselineIndex(t)
    pos = ds.sampled()
    ds.fwd = SparseOracle(oracle.fwd, pos)
    ds.rev = SparseOracle(oracle.rev, n - 1 - pos)
    return ds


def dc_query(dc: DcStructure, t: Text, i: int, j: int, stats: QueryStats | None = None) -> DcResult:
    """Exact LCE(i, j) or the certificate LCE(i, j) <= tau**2.

    Prefix ends are inclusive for the reverse oracle, so LCE_R(i+d, j+d) >= d+1
    says ``T[i..i+d] == T[j..j+d]`` (d+1 symbols), and then
    ``LCE(i, j) = d + LCE(i+d, j+d)``. If it fails, the two ranges differ and
    ``LCE(i, j) <= d < tau**2``.
    """
    t.check_index(i, j)
    tau, n = dc.tau, dc.n
    sq = tau * tau
    if stats is not None:
        stats.path = stats.path or "dc"
    if i == j:
        return DcResult(True, n - i)
    if dc.vacuous or i >= n - sq or j >= n - sq:
        return DcResult(False, sq)
    d = delta(i, j, tau)
    a = dc.sample_index(i + d)
    b = dc.sample_index(j + d)
    if dc.rev.lce(a, b) < d + 1:
        return DcResult(False, sq)
    return DcResult(True, d + dc.fwd.lce(a, b))


def combined_query(
    ms: McStructure,
    dc: DcStructure,
    t: Text,
    i: int,
    j: int,
    stats: QueryStats | None = None,
    debug: bool = False,
) -> int:
    """Constant-time long-LCE path first, Monte Carlo fallback on a certificate."""
    if ms.tau != dc.tau:
        raise ValueError(f"tau mismatch: mc {ms.tau} vs dc {dc.tau}")
    res = dc_query(dc, t, i, j)
    if res.exact:
        if stats is not None:
            stats.path = stats.path or "dc"
        return res.value
    return mc_query(ms, t, i, j, stats, debug)
