"""Deterministic choice of a collision-free fingerprint tuple.

For a position set A and a length set L the comparison set holds every
``(a, i, l)`` with both ``T[a:a+l]`` and ``T[i:i+l]`` inside the text. B(f)
counts the triples whose two windows get equal f-values. Bases are chosen
one at a time so that the excess ``B - B(id)`` shrinks by a factor n**eps per
round; after ``ceil(4/eps)`` rounds it is zero.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .baseline import BaselineIndex
from .fingerprint import next_prime
from .mc import BitGeometry, McStructure, build_mc
from .text import Text

__all__ = [
    "PhiTuple",
    "RoundRecord",
    "CollisionCount",
    "comparison_size",
    "count_b_id",
    "count_b_phi",
    "derandomize",
    "query_sets",
    "build_derand_mc",
]


@dataclass(frozen=True)
class RoundRecord:
    x: int
    candidates: int  # bases tried before acceptance, inclusive
    before: int
    after: int


@dataclass(frozen=True)
class PhiTuple:
    p: int
    xs: tuple[int, ...]
    eps: float
    b_id: int | None = field(default=None, compare=False)
    rounds: tuple[RoundRecord, ...] = field(default=(), compare=False)

    @property
    def k(self) -> int:
        return math.ceil(4 / self.eps)

    @property
    def seed(self):
        return None


@dataclass(frozen=True)
class CollisionCount:
    b_phi: int
    b_id: int

    @property
    def collision_free(self) -> bool:
        return self.b_phi == self.b_id


def _check_sets(n: int, A, L) -> tuple[np.ndarray, list[int]]:
    A = np.unique(np.asarray(list(A), dtype=np.int64))
    L = sorted(set(int(l) for l in L))
    if A.size and (A[0] < 0 or A[-1] >= n):
        raise ValueError("positions in A must lie in [0, n)")
    if L and (L[0] < 1 or L[-1] > n):
        raise ValueError("lengths in L must lie in [1, n]")
    return A, L


def comparison_size(n: int, A, L) -> int:
    """|S|: sum over l of (#a with a+l <= n) * (n-l+1)."""
    A, L = _check_sets(n, A, L)
    return sum(int((A + l <= n).sum()) * (n - l + 1) for l in L)


def count_b_id(t: Text, A, L, oracle: BaselineIndex | None = None) -> int:
    """Triples whose windows are genuinely equal, counted through the LCE oracle."""
    n = t.n
    A, L = _check_sets(n, A, L)
    if oracle is None:
        oracle = BaselineIndex(t)
    everything = np.arange(n, dtype=np.int64)
    total = 0
    for a in A.tolist():
        lce = np.sort(oracle.lce_many(np.full(n, a, dtype=np.int64), everything))
        for l in L:
            if a + l <= n:
                total += n - int(np.searchsorted(lce, l, side="left"))
    return total


def _powers(x: int, p: int, n: int) -> np.ndarray:
    """x**q mod p for q in [0, n), by doubling."""
    out = np.ones(max(n, 1), dtype=object if p >= 1 << 31 else np.int64)
    size = 1
    step = x % p
    while size < n:
        take = min(size, n - size)
        out[size:size + take] = out[:take] * step % p
        size += take
        step = step * step % p
    return out[:n]


def _windows(t: Text, x: int, p: int, length: int) -> np.ndarray:
    """phi_x(T[i:i+length]) for every i, as a numpy array."""
    n = t.n
    sym = t.array.astype(np.int64) % p
    count = n - length + 1
    if x == 0:
        return sym[:count]
    wide = p >= 1 << 31
    dtype = object if wide else np.int64
    pw = _powers(x, p, n)
    terms = sym.astype(dtype) * pw % p
    pref = np.zeros(n + 1, dtype=dtype)
    if wide:
        acc = 0
        for q in range(n):
            acc = (acc + terms[q]) % p
            pref[q + 1] = acc
    else:
        pref[1:] = np.cumsum(terms) % p
    inv = _powers(pow(x, -1, p), p, count)
    return ((pref[length:length + count] - pref[:count]) % p) * inv % p


def _refine(ids: np.ndarray, fp: np.ndarray) -> np.ndarray:
    """Dense ids of the pairs (ids, fp)."""
    pairs = np.stack([ids, fp.astype(np.int64)], axis=1)
    _, inverse = np.unique(pairs, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


class _Counter:
    """B(prefix + [x]) for many candidate x, caching the ids of the prefix."""

    def __init__(self, t: Text, A: np.ndarray, L: list[int], p: int, space: int):
        self.t, self.A, self.L, self.p = t, A, L, p
        self.space = max(1, space)
        n = t.n
        self.ids = {l: np.zeros(n - l + 1, dtype=np.int64) for l in L}

    def count(self, ids_by_len: dict[int, np.ndarray]) -> int:
        total = 0
        for l, ids in ids_by_len.items():
            starts = self.A[self.A + l <= self.t.n]
            for lo in range(0, starts.size, self.space):
                chunk = ids[starts[lo:lo + self.space]]
                multiset = np.bincount(chunk, minlength=int(ids.max()) + 1)
                total += int(multiset[ids].sum())
        return total

    def extended(self, x: int) -> dict[int, np.ndarray]:
        return {l: _refine(ids, _windows(self.t, x, self.p, l)) for l, ids in self.ids.items()}


def count_b_phi(t: Text, A, L, xs, p: int | None = None, space: int | None = None) -> int:
    """Triples whose windows agree on every base in ``xs``.

    ``space`` bounds the number of positions of A held in the multiset at
    once; the total does not depend on it. An empty ``xs`` counts all of S.
    """
    n = t.n
    A, L = _check_sets(n, A, L)
    xs = tuple(getattr(xs, "xs", xs))
    if p is None:
        if xs:
            raise ValueError("modulus required with a non-empty tuple")
        p = 2
    counter = _Counter(t, A, L, p, space or max(1, A.size))
    ids = counter.ids
    for x in xs:
        ids = {l: _refine(v, _windows(t, x, p, l)) for l, v in ids.items()}
    return counter.count(ids)


def derandomize(
    t: Text,
    A,
    L,
    eps: float,
    space: int | None = None,
    oracle: BaselineIndex | None = None,
) -> PhiTuple:
    """Pick bases one by one; each accepted base is the first (in the order
    1, 2, ..., p-1, 0) that divides the excess collisions by at least n**eps.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    n = t.n
    A, L = _check_sets(n, A, L)
    scale = n ** eps
    p = next_prime(math.ceil(max(L, default=1) * scale))
    if not L or not A.size:
        # nothing is ever compared, so the empty tuple is collision-free
        return PhiTuple(p, (), eps, 0, ())
    if t.alphabet_max >= p:
        raise ValueError(f"alphabet exceeds p={p}; symbols would need splitting")
    k = math.ceil(4 / eps)
    b_id = count_b_id(t, A, L, oracle)
    counter = _Counter(t, A, L, p, space or max(1, A.size))
    current = counter.count(counter.ids)
    xs: list[int] = []
    rounds: list[RoundRecord] = []
    for _ in range(k):
        if current == b_id:
            break
        allowed = (current - b_id) / scale
        for tried, x in enumerate(itertools.chain(range(1, p), [0]), start=1):
            ids = counter.extended(x)
            b_new = counter.count(ids)
            assert b_new >= b_id, "fingerprint count below the identity count"
            if b_new - b_id <= allowed:
                break
        else:
            raise RuntimeError("no base meets the averaging bound; implementation bug")
        rounds.append(RoundRecord(x, tried, current, b_new))
        counter.ids = ids
        current = b_new
        xs.append(x)
    if current != b_id:
        raise RuntimeError(f"B={current} still above B(id)={b_id} after {k} rounds")
    return PhiTuple(p, tuple(xs), eps, b_id, tuple(rounds))


def query_sets(n: int, tau: int) -> tuple[list[int], list[int]]:
    """Block starts and the lengths ``2**l * tau`` the Monte Carlo query checks."""
    g = BitGeometry(n, tau)
    A = list(range(0, n, g.tau))
    L = [g.tau << l for l in range(g.lg_blocks) if g.tau << l <= n]
    return A, L


def build_derand_mc(t: Text, tau: int, eps: float, space: int | None = None,
                    oracle: BaselineIndex | None = None) -> McStructure:
    """Monte Carlo structure over a derandomized tuple; answers are always exact."""
    A, L = query_sets(t.n, tau)
    phi = derandomize(t, A, L, eps, space, oracle)
    ms = build_mc(t, tau, phi)
    ms.certificate = phi
    return ms
