"""Deterministic trade-off: recursive interval decomposition plus nearby queries.

Intervals are half-open ``[a, b)``. With ``mid = (a + b - 1) // 2`` the left
half is ``[a, mid]`` and the right half ``[mid + 1, b)``; for even lengths
this is the usual split into equal halves. Each interval longer than tau
samples the right-half positions ``b - 1 - k*tau`` and stores,
for each, the left-half position with maximal LCE against it (smallest index
on ties) together with that LCE value.

Nodes are numbered heap-style (root 0, children ``2v+1`` / ``2v+2``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baseline import BaselineIndex
from .nearby import NearbyStructure, build_nearby, nearby_query
from .rmq import SparseTable
from .stats import QueryStats
from .text import Text, naive_lce

__all__ = ["DetStructure", "build_det", "det_query", "split_node"]


@dataclass
class DetStructure:
    tau: int
    n: int
    node_offset: dict[int, int]
    partner: list[int]
    lce: list[int]
    nearby: NearbyStructure

    @property
    def samples(self) -> int:
        return len(self.partner)

    @property
    def words(self) -> int:
        return 2 * len(self.partner) + len(self.node_offset) + self.nearby.words

    def node_samples(self, node: int, a: int, b: int) -> list[tuple[int, int, int]]:
        """``(position, partner, lce)`` triples stored for one interval."""
        off = self.node_offset[node]
        mid = (a + b - 1) // 2
        count = (b - mid - 2) // self.tau + 1
        return [(b - 1 - k * self.tau, self.partner[off + k], self.lce[off + k]) for k in range(count)]

    def to_arrays(self) -> dict[str, np.ndarray]:
        ids = sorted(self.node_offset)
        arrays = {
            "node_id": np.asarray(ids, dtype=np.int64),
            "node_offset": np.asarray([self.node_offset[v] for v in ids], dtype=np.int64),
            "partner": np.asarray(self.partner, dtype=np.int64),
            "lce": np.asarray(self.lce, dtype=np.int64),
        }
        arrays.update({"nearby." + k: v for k, v in self.nearby.to_arrays().items()})
        return arrays

    @classmethod
    def from_arrays(cls, tau: int, n: int, arrays: dict[str, np.ndarray]) -> "DetStructure":
        nearby = NearbyStructure.from_arrays(
            tau, n, {k[len("nearby."):]: v for k, v in arrays.items() if k.startswith("nearby.")}
        )
        offsets = dict(zip(arrays["node_id"].tolist(), arrays["node_offset"].tolist()))
        return cls(tau, n, offsets, arrays["partner"].tolist(), arrays["lce"].tolist(), nearby)


def _ragged_arange(counts: np.ndarray) -> np.ndarray:
    """Concatenation of ``arange(c)`` for each c in counts."""
    total = int(counts.sum())
    if total == 0:
        return np.zeros(0, dtype=np.int64)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    return np.arange(total, dtype=np.int64) - starts


def _levels(n: int, tau: int):
    """Yield ``(ids, a, b)`` arrays for every level of built intervals."""
    floor = tau + 1  # shorter intervals only ever see pairs at distance <= tau
    ids = np.asarray([0], dtype=np.int64)
    a = np.asarray([0], dtype=np.int64)
    b = np.asarray([n], dtype=np.int64)
    keep = (b - a) >= floor
    ids, a, b = ids[keep], a[keep], b[keep]
    while ids.size:
        yield ids, a, b
        mid = (a + b - 1) // 2
        ids = np.concatenate([2 * ids + 1, 2 * ids + 2])
        a, b = np.concatenate([a, mid + 1]), np.concatenate([mid + 1, b])
        keep = (b - a) >= floor
        order = np.argsort(ids[keep], kind="stable")
        ids, a, b = ids[keep][order], a[keep][order], b[keep][order]


def _rank_interval(index, rank_s: np.ndarray, length: np.ndarray):
    """Rank range of all suffixes sharing ``length`` symbols with the suffix at rank_s."""
    n = index.n
    rmq = index.rmq
    lo = np.zeros_like(rank_s)
    hi = rank_s.copy()
    active = lo < hi
    while active.any():
        mid = (lo + hi) // 2
        idx = np.nonzero(active)[0]
        ok = rmq.query_many(mid[idx] + 1, rank_s[idx] + 1) >= length[idx]
        hi[idx[ok]] = mid[idx[ok]]
        lo[idx[~ok]] = mid[idx[~ok]] + 1
        active = lo < hi
    r_lo = lo
    lo = rank_s.copy()
    hi = np.full_like(rank_s, n - 1)
    active = lo < hi
    while active.any():
        mid = (lo + hi + 1) // 2
        idx = np.nonzero(active)[0]
        ok = rmq.query_many(rank_s[idx] + 1, mid[idx] + 1) >= length[idx]
        lo[idx[ok]] = mid[idx[ok]]
        hi[idx[~ok]] = mid[idx[~ok]] - 1
        active = lo < hi
    return r_lo, lo


def build_det(t: Text, tau: int, oracle: BaselineIndex | None = None) -> DetStructure:
    """Build the interval tree; partners come from suffix-array rank neighbours.

    Among left-half suffixes, the best LCE with a sampled suffix is attained
    by its rank predecessor or successor. All left-half suffixes sharing that
    many symbols form one rank interval, and the smallest position in it is
    the stored partner.
    """
    n = t.n
    if not 1 <= tau <= n:
        raise ValueError(f"tau={tau} outside [1, {n}]")
    if oracle is None:
        oracle = BaselineIndex(t)
    fwd = oracle.fwd
    rank = fwd.rank
    node_offset: dict[int, int] = {}
    partners: list[np.ndarray] = []
    values: list[np.ndarray] = []
    total = 0
    for ids, a, b in _levels(n, tau):
        mid = (a + b - 1) // 2
        count = (b - mid - 2) // tau + 1
        slot = np.arange(ids.size, dtype=np.int64)
        for v, off in zip(ids.tolist(), (total + np.cumsum(count) - count).tolist()):
            node_offset[v] = off
        total += int(count.sum())

        s_node = np.repeat(slot, count)
        s_pos = np.repeat(b - 1, count) - tau * _ragged_arange(count)
        left_len = mid - a + 1
        g_node = np.repeat(slot, left_len)
        g_pos = np.repeat(a, left_len) + _ragged_arange(left_len)
        g_key = g_node * n + rank[g_pos]
        order = np.argsort(g_key, kind="stable")
        g_key, g_pos = g_key[order], g_pos[order]

        s_rank = rank[s_pos]
        q = np.searchsorted(g_key, s_node * n + s_rank)
        seg_lo = np.searchsorted(g_key, slot * n)[s_node]
        seg_hi = np.searchsorted(g_key, (slot + 1) * n)[s_node]
        best = np.zeros(s_pos.size, dtype=np.int64)
        has_pred = q > seg_lo
        if has_pred.any():
            pred = g_pos[q[has_pred] - 1]
            best[has_pred] = fwd.lce_with_ranks(rank[pred], s_rank[has_pred])
        has_succ = q < seg_hi
        if has_succ.any():
            succ = g_pos[q[has_succ]]
            best[has_succ] = np.maximum(best[has_succ], fwd.lce_with_ranks(rank[succ], s_rank[has_succ]))

        r_lo, r_hi = _rank_interval(fwd, s_rank, best)
        zero = best == 0
        r_lo[zero] = 0
        r_hi[zero] = n - 1
        lo_idx = np.searchsorted(g_key, s_node * n + r_lo, side="left")
        hi_idx = np.searchsorted(g_key, s_node * n + r_hi, side="right")
        partner = SparseTable(g_pos).query_many(lo_idx, hi_idx)
        partners.append(partner)
        values.append(best)

    partner = np.concatenate(partners).tolist() if partners else []
    lce = np.concatenate(values).tolist() if values else []
    return DetStructure(tau, n, node_offset, partner, lce, build_nearby(t, tau))


def split_node(n: int, tau: int, i: int, j: int, start: tuple[int, int, int] | None = None
               ) -> tuple[int, int, int]:
    """Deepest built interval containing both i < j; returns ``(node, a, b)``.

    ``start`` is a node already known to contain both positions.
    """
    node, a, b = start or (0, 0, n)
    while True:
        mid = (a + b - 1) // 2
        if j <= mid:
            node, b = 2 * node + 1, mid + 1
        elif i > mid:
            node, a = 2 * node + 2, mid + 1
        else:
            return node, a, b


def det_query(
    ds: DetStructure,
    t: Text,
    i: int,
    j: int,
    stats: QueryStats | None = None,
    check: bool = False,
) -> int:
    """LCE(i, j) by repeated halving, finishing with a nearby query.

    The answer is tracked as ``acc + min(cap, LCE(i, j))`` for the current
    pair; a rewrite through a stored partner tightens ``cap``. With
    ``check`` set, each rewrite's premise is asserted against a direct scan.
    """
    t.check_index(i, j)
    n, tau = t.n, ds.tau
    acc, cap = 0, n
    rounds = comps = 0
    widest = 0
    where = (0, 0, n)
    while True:
        if i == j:
            answer = acc + min(cap, n - i)
            break
        if i > j:
            i, j = j, i
        if j - i <= tau:
            rounds += 1
            sub = QueryStats() if stats is not None else None
            answer = acc + min(cap, nearby_query(ds.nearby, t, i, j, sub))
            if sub is not None:
                comps += sub.char_comparisons
                widest = max(widest, sub.max_round_comparisons)
                stats.align_comparisons += sub.align_comparisons
            break
        node, a, b = split_node(n, tau, i, j, where)
        mid = (a + b - 1) // 2
        rounds += 1
        to_right = mid + 1 - i  # i + delta crosses into the right half
        to_sample = (b - 1 - j) % tau  # j + delta lands on a sampled position
        step = to_right if to_right < to_sample else to_sample
        m = t.match_length(i, j, step)
        if m < step:
            comps += m + 1
            widest = max(widest, m + 1)
            answer = acc + min(cap, m)
            break
        comps += step
        widest = max(widest, step)
        acc += step
        cap -= step
        i += step
        j += step
        if step == to_right:
            where = (2 * node + 2, mid + 1, b)  # both in the right half now
        else:
            where = (2 * node + 1, a, mid + 1)
            k = (b - 1 - j) // tau
            slot = ds.node_offset[node] + k
            bound = ds.lce[slot]
            if check:
                assert bound >= naive_lce(t, i, j), "partner LCE below the pair's LCE"
            if bound < cap:
                cap = bound
            j = ds.partner[slot]
        if cap <= 0:
            answer = acc + cap
            break
    if stats is not None:
        stats.char_comparisons += comps
        stats.reduction_rounds += rounds
        stats.max_round_comparisons = max(stats.max_round_comparisons, widest)
        stats.path = stats.path or "det"
    return answer
