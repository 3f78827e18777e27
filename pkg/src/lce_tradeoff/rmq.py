"""Range-minimum queries over integer arrays."""
from __future__ import annotations

import numpy as np

__all__ = ["SparseTable", "BlockRMQ"]


class SparseTable:
    """O(N log N) words, O(1) query. Queries are half-open ``[lo, hi)``.

    Scalar queries go through :meth:`query`; :meth:`query_many` answers a
    whole batch with fancy indexing.
    """

    def __init__(self, data):
        base = np.asarray(data, dtype=np.int64)
        length = base.size
        self.size = length
        levels = [base]
        span = 1
        while 2 * span <= length:
            prev = levels[-1]
            levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self.levels = levels

    def query(self, lo: int, hi: int) -> int:
        depth = (hi - lo).bit_length() - 1
        row = self.levels[depth]
        a = row[lo]
        b = row[hi - (1 << depth)]
        return int(a if a < b else b)

    def query_many(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        out = np.empty(lo.shape, dtype=np.int64)
        if lo.size == 0:
            return out
        width = hi - lo
        if (width <= 0).any():
            raise ValueError("empty range in query_many")
        depth = np.zeros(lo.shape, dtype=np.int64)
        for d in range(1, len(self.levels)):
            depth[width >= (1 << d)] = d
        for d in np.unique(depth):
            sel = depth == d
            row = self.levels[d]
            out[sel] = np.minimum(row[lo[sel]], row[hi[sel] - (1 << int(d))])
        return out

    @property
    def words(self) -> int:
        return int(sum(level.size for level in self.levels))


class BlockRMQ:
    """Linear-space RMQ with O(1) queries.

    Values are split into blocks of ``block`` entries. Inside a block every
    position keeps a bitmask of the positions on its min-stack, so an
    in-block minimum is one shift plus a lowest-set-bit. A sparse table over
    the block minima covers the middle of long ranges.
    """

    def __init__(self, data, block: int = 64):
        values = [int(v) for v in data]
        self.values = values
        self.block = block
        masks = [0] * len(values)
        block_min = []
        for start in range(0, len(values), block):
            stack: list[int] = []
            mask = 0
            stop = min(start + block, len(values))
            for r in range(start, stop):
                v = values[r]
                while stack and values[stack[-1]] > v:
                    mask ^= 1 << (stack.pop() - start)
                stack.append(r)
                mask |= 1 << (r - start)
                masks[r] = mask
            block_min.append(values[stack[0]])
        self.masks = masks
        self._blocks = SparseTable(block_min) if block_min else None
        self._block_min = block_min

    def _in_block(self, lo: int, r: int) -> int:
        # min over [lo, r] inclusive, same block
        start = lo - lo % self.block
        m = self.masks[r] >> (lo - start)
        return self.values[lo + ((m & -m).bit_length() - 1)]

    def query(self, lo: int, hi: int) -> int:
        """Minimum of ``values[lo:hi]``; the range must be non-empty."""
        r = hi - 1
        bl, br = lo // self.block, r // self.block
        if bl == br:
            return self._in_block(lo, r)
        best = self._in_block(lo, (bl + 1) * self.block - 1)
        right = self._in_block(br * self.block, r)
        if right < best:
            best = right
        if br - bl > 1:
            mid = self._blocks.query(bl + 1, br)
            if mid < best:
                best = mid
        return best

    @property
    def words(self) -> int:
        # values, masks, and the block-level sparse table
        extra = self._blocks.words if self._blocks is not None else 0
        return 2 * len(self.values) + extra
