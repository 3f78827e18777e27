"""Full-text suffix-array index: the O(n)-word, O(1)-query ground-truth oracle."""
from __future__ import annotations

from functools import cached_property

import numpy as np

from .rmq import SparseTable
from .text import Text

__all__ = [
    "suffix_array",
    "lcp_array",
    "SuffixIndex",
    "BaselineIndex",
    "build_baseline",
    "baseline_lce",
    "baseline_lce_r",
]


def suffix_array(symbols: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling (O(n log^2 n) with numpy sorts)."""
    n = symbols.size
    _, rank = np.unique(symbols, return_inverse=True)
    rank = rank.astype(np.int64)
    order = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r1, r2 = rank[order], second[order]
        fresh = np.empty(n, dtype=np.int64)
        fresh[order[0]] = 0
        if n > 1:
            bumps = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
            fresh[order[1:]] = np.cumsum(bumps)
        rank = fresh
        if n == 1 or rank[order[-1]] == n - 1 or k >= n:
            return order
        k *= 2


def lcp_array(seq, sa: np.ndarray) -> np.ndarray:
    """Kasai et al.: ``lcp[r]`` is the LCP of suffixes ``sa[r-1]`` and ``sa[r]``."""
    n = len(sa)
    sa_list = sa.tolist()
    rank = [0] * n
    for r, pos in enumerate(sa_list):
        rank[pos] = r
    lcp = [0] * n
    h = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            h = 0
            continue
        j = sa_list[r - 1]
        while i + h < n and j + h < n and seq[i + h] == seq[j + h]:
            h += 1
        lcp[r] = h
        if h:
            h -= 1
    return np.asarray(lcp, dtype=np.int64)


class SuffixIndex:
    """Suffix array, inverse, LCP and RMQ for one string."""

    def __init__(self, text: Text):
        self.n = text.n
        self.sa = suffix_array(text.array)
        self.rank = np.empty(self.n, dtype=np.int64)
        self.rank[self.sa] = np.arange(self.n, dtype=np.int64)
        self.lcp = lcp_array(text.seq, self.sa)
        self.rmq = SparseTable(self.lcp)
        self._rank_list = self.rank.tolist()

    def lce(self, i: int, j: int) -> int:
        if i == j:
            return self.n - i
        a, b = self._rank_list[i], self._rank_list[j]
        if a > b:
            a, b = b, a
        return self.rmq.query(a + 1, b + 1)

    def lce_many(self, i: np.ndarray, j: np.ndarray) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        out = np.empty(i.shape, dtype=np.int64)
        same = i == j
        out[same] = self.n - i[same]
        diff = ~same
        if diff.any():
            a = self.rank[i[diff]]
            b = self.rank[j[diff]]
            lo = np.minimum(a, b) + 1
            hi = np.maximum(a, b) + 1
            out[diff] = self.rmq.query_many(lo, hi)
        return out

    def lce_with_ranks(self, rank_a: np.ndarray, rank_b: np.ndarray) -> np.ndarray:
        """LCE between suffixes given by rank, ``rank_a != rank_b`` assumed."""
        lo = np.minimum(rank_a, rank_b) + 1
        hi = np.maximum(rank_a, rank_b) + 1
        return self.rmq.query_many(lo, hi)


class BaselineIndex:
    """Ground-truth LCE / LCE_R oracle over T and reversed T.

    The reversed index is built on first use; most callers only need the
    forward direction.
    """

    def __init__(self, text: Text):
        self.text = text
        self.n = text.n
        self.fwd = SuffixIndex(text)

    @cached_property
    def rev(self) -> SuffixIndex:
        return SuffixIndex(self.text.reversed())

    @property
    def sa(self) -> np.ndarray:
        return self.fwd.sa

    @property
    def rank(self) -> np.ndarray:
        return self.fwd.rank

    @property
    def lcp(self) -> np.ndarray:
        return self.fwd.lcp

    def lce(self, i: int, j: int) -> int:
        self.text.check_index(i, j)
        return self.fwd.lce(i, j)

    def lce_r(self, i: int, j: int) -> int:
        """Longest common suffix of ``T[:i+1]`` and ``T[:j+1]``."""
        self.text.check_index(i, j)
        return self.rev.lce(self.n - 1 - i, self.n - 1 - j)

    def lce_many(self, i, j) -> np.ndarray:
        return self.fwd.lce_many(i, j)

    def lce_r_many(self, i, j) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        return self.rev.lce_many(self.n - 1 - i, self.n - 1 - j)

    @property
    def words(self) -> int:
        words = 3 * self.n + self.fwd.rmq.words
        if "rev" in self.__dict__:
            words += 3 * self.n + self.rev.rmq.words
        return words


def build_baseline(t: Text) -> BaselineIndex:
    return BaselineIndex(t)


def baseline_lce(b: BaselineIndex, i: int, j: int) -> int:
    return b.lce(i, j)


def baseline_lce_r(b: BaselineIndex, i: int, j: int) -> int:
    return b.lce_r(i, j)
