"""Monte Carlo LCE structure: significance-driven sampling of prefix fingerprints.

Positions are viewed as ``lg(n_pad)``-bit numbers split into a head (the
block number) and a tail (the offset inside a block of length tau). Block k
with significance mu (trailing zeros of k) samples ``min(2**(mu//2), tau)``
evenly spaced positions. Queries run an exponential search with fingerprint
checks, then scan the final block directly.

Samples are grouped by significance. Blocks of significance mu < lg(n_pad/tau)
are exactly ``(2m+1) * 2**mu``, so block k maps to index ``k >> (mu+1)`` inside
its class and no per-block offset table is needed. Block 0 forms its own class.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .stats import QueryStats
from .text import Text

__all__ = [
    "BitGeometry",
    "InvariantError",
    "McStructure",
    "significance",
    "sample_positions",
    "block_profile",
    "build_mc",
    "check",
    "mc_query",
]


class InvariantError(AssertionError):
    """A query-algorithm invariant failed in debug mode."""


class BitGeometry:
    """Power-of-two view of a text of length n with block length tau."""

    __slots__ = ("n", "n_pad", "tau", "lg_tau", "lg_blocks", "requested_tau")

    def __init__(self, n: int, tau: int):
        if n < 1:
            raise ValueError("text must be non-empty")
        if tau < 1:
            raise ValueError("tau must be >= 1")
        self.n = n
        self.n_pad = 1 << (n - 1).bit_length()
        self.requested_tau = tau
        self.tau = min(1 << (tau - 1).bit_length(), self.n_pad)
        self.lg_tau = self.tau.bit_length() - 1
        self.lg_blocks = (self.n_pad // self.tau).bit_length() - 1

    @property
    def blocks(self) -> int:
        return self.n_pad >> self.lg_tau

    def head(self, q: int) -> int:
        return q >> self.lg_tau

    def tail(self, q: int) -> int:
        return q & (self.tau - 1)

    def head_bits(self, q: int) -> str:
        return format(self.head(q), f"0{self.lg_blocks}b") if self.lg_blocks else ""

    def tail_bits(self, q: int) -> str:
        return format(self.tail(q), f"0{self.lg_tau}b") if self.lg_tau else ""

    def block_significance(self, k: int) -> int:
        if k == 0:
            return self.lg_blocks
        return (k & -k).bit_length() - 1

    def significance(self, q: int) -> int:
        if not 0 <= q < self.n_pad:
            raise IndexError(f"position {q} outside [0, {self.n_pad})")
        return self.block_significance(q >> self.lg_tau)

    def lg_samples(self, mu: int) -> int:
        """log2 of b = min(2**(mu//2), tau)."""
        return min(mu // 2, self.lg_tau)

    def __repr__(self):
        return f"BitGeometry(n={self.n}, n_pad={self.n_pad}, tau={self.tau})"


def significance(q: int, g: BitGeometry) -> int:
    return g.significance(q)


def block_profile(g: BitGeometry) -> tuple[np.ndarray, np.ndarray]:
    """Per-block ``(mu_k, b_k)`` over the padded length."""
    k = np.arange(g.blocks, dtype=np.int64)
    low = k & -k
    mu = np.zeros(g.blocks, dtype=np.int64)
    nz = k > 0
    mu[nz] = np.log2(low[nz]).astype(np.int64)
    mu[0] = g.lg_blocks
    b = np.minimum(1 << (mu // 2), g.tau)
    return mu, b


def sample_positions(g: BitGeometry, padded: bool = False) -> np.ndarray:
    """Sorted sampled positions; those at or beyond n are dropped unless ``padded``."""
    _, b = block_profile(g)
    starts = np.arange(g.blocks, dtype=np.int64) << g.lg_tau
    spacing = g.tau // b
    total = int(b.sum())
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(b) - b, b)
    pos = np.repeat(starts, b) + offsets * np.repeat(spacing, b)
    if not padded:
        pos = pos[pos < g.n]
    return pos


@dataclass
class McStructure:
    """Sampled prefix fingerprints. Each fingerprint is a tuple with one residue
    per base, so a derandomized multi-base tuple uses the same code path."""

    geometry: BitGeometry
    p: int
    xs: tuple[int, ...]
    values: list[list[tuple[int, ...]]]  # per significance class
    powers: list[list[tuple[int, ...]]]
    end: tuple[tuple[int, ...], tuple[int, ...]]  # f(n)
    seed: int | None = None
    bidirectional: bool = True
    certificate: object | None = field(default=None, repr=False)  # derandomized tuple

    def __post_init__(self):
        g = self.geometry
        self._x_inv = tuple(pow(x, -1, self.p) if x else 0 for x in self.xs)
        self._zero_base = any(x == 0 for x in self.xs)
        self._lgb = [g.lg_samples(mu) for mu in range(g.lg_blocks + 1)]
        self._shift = [g.lg_tau - s for s in self._lgb]

    @property
    def tau(self) -> int:
        return self.geometry.tau

    @property
    def n(self) -> int:
        return self.geometry.n

    @property
    def components(self) -> int:
        return len(self.xs)

    @property
    def samples(self) -> int:
        return sum(len(v) for v in self.values)

    @property
    def words(self) -> int:
        # value and exponent per sample and per base, plus f(n), p and the bases
        k = len(self.xs)
        return 2 * k * (self.samples + 1) + 1 + k

    # fingerprint access -------------------------------------------------

    def _sample_at_or_before(self, q: int) -> tuple[int, int, int]:
        """``(mu, index, position)`` of the nearest stored sample <= q, q < n."""
        g = self.geometry
        k = q >> g.lg_tau
        mu = g.lg_blocks if k == 0 else (k & -k).bit_length() - 1
        shift = self._shift[mu]
        jj = (q & (g.tau - 1)) >> shift
        idx = ((k >> (mu + 1)) << self._lgb[mu]) + jj
        return mu, idx, (k << g.lg_tau) + (jj << shift)

    def stored(self, q: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        """Stored f(q) if q is a sample (or q == n), else None."""
        if q == self.n:
            return self.end
        mu, idx, base = self._sample_at_or_before(q)
        if base != q:
            return None
        return self.values[mu][idx], self.powers[mu][idx]

    def prefix(self, seq, q: int) -> tuple[tuple[int, ...], tuple[int, ...], int]:
        """f(q) for 0 <= q <= n as ``(values, powers, steps)``.

        Extends from the nearest stored sample before q, or, when
        ``bidirectional`` is set and it is closer, backwards from the next one.
        """
        n = self.n
        if q == n:
            v, w = self.end
            return v, w, 0
        mu, idx, base = self._sample_at_or_before(q)
        dist = q - base
        if dist == 0:
            return self.values[mu][idx], self.powers[mu][idx], 0
        p = self.p
        nxt = base + (1 << self._shift[mu])
        if self.bidirectional and not self._zero_base and nxt - q < dist and nxt <= n:
            v, w = self.end if nxt == n else self.stored(nxt)
            out_v, out_w = [], []
            for val, pw, xi in zip(v, w, self._x_inv):
                for r in range(nxt - 1, q - 1, -1):
                    pw = pw * xi % p
                    val = (val - seq[r] * pw) % p
                out_v.append(val)
                out_w.append(pw)
            return tuple(out_v), tuple(out_w), nxt - q
        v, w = self.values[mu][idx], self.powers[mu][idx]
        out_v, out_w = [], []
        for val, pw, x in zip(v, w, self.xs):
            for r in range(base, q):
                val = (val + seq[r] * pw) % p
                pw = pw * x % p
            out_v.append(val)
            out_w.append(pw)
        return tuple(out_v), tuple(out_w), dist

    def to_arrays(self) -> dict[str, np.ndarray]:
        k = len(self.xs)
        arrays = {}
        for mu, (vals, pows) in enumerate(zip(self.values, self.powers)):
            arrays[f"value.{mu}"] = np.asarray(vals, dtype=np.int64).reshape(len(vals), k)
            arrays[f"power.{mu}"] = np.asarray(pows, dtype=np.int64).reshape(len(pows), k)
        arrays["end"] = np.asarray(self.end, dtype=np.int64).reshape(2, k)
        arrays["xs"] = np.asarray(self.xs, dtype=np.int64)
        return arrays

    @classmethod
    def from_arrays(cls, n: int, tau: int, p: int, arrays: dict[str, np.ndarray],
                    seed: int | None = None, bidirectional: bool = True) -> "McStructure":
        g = BitGeometry(n, tau)
        xs = tuple(int(x) for x in arrays["xs"].tolist())
        values = [[tuple(r) for r in arrays[f"value.{mu}"].tolist()] for mu in range(g.lg_blocks + 1)]
        powers = [[tuple(r) for r in arrays[f"power.{mu}"].tolist()] for mu in range(g.lg_blocks + 1)]
        end = tuple(tuple(int(v) for v in row) for row in arrays["end"].tolist())
        return cls(g, p, xs, values, powers, end, seed, bidirectional)


def build_mc(t: Text, tau: int, phi, bidirectional: bool = True) -> McStructure:
    """One left-to-right pass over the text computing f(q) at every sample.

    ``phi`` is anything with ``p`` and ``xs`` (a single base or a tuple).
    """
    g = BitGeometry(t.n, tau)
    p, xs = phi.p, tuple(phi.xs)
    if any(not 0 <= x < p for x in xs):
        raise ValueError("bases must lie in [0, p)")
    if xs and t.alphabet_max >= p:
        raise ValueError(f"alphabet exceeds modulus p={p}; split symbols first")
    n, seq = t.n, t.seq
    classes = g.lg_blocks + 1
    values: list[list] = [[] for _ in range(classes)]
    powers: list[list] = [[] for _ in range(classes)]

    # (position, class) for every stored sample, in position order
    pos = sample_positions(g)
    blk = pos >> g.lg_tau
    low = blk & -blk
    mu = np.full(pos.size, g.lg_blocks, dtype=np.int64)
    nz = blk > 0
    mu[nz] = np.log2(low[nz]).astype(np.int64)

    k = len(xs)
    val = [0] * k
    pw = [1] * k
    cur = 0
    for q, m in zip(pos.tolist(), mu.tolist()):
        for c in range(k):
            v, w, x = val[c], pw[c], xs[c]
            for r in range(cur, q):
                v = (v + seq[r] * w) % p
                w = w * x % p
            val[c], pw[c] = v, w
        cur = q
        values[m].append(tuple(val))
        powers[m].append(tuple(pw))
    for c in range(k):
        v, w, x = val[c], pw[c], xs[c]
        for r in range(cur, n):
            v = (v + seq[r] * w) % p
            w = w * x % p
        val[c], pw[c] = v, w
    end = (tuple(val), tuple(pw))
    return McStructure(g, p, xs, values, powers, end, getattr(phi, "seed", None), bidirectional)


def _same(ms: McStructure, seq, i, j, fi, fic, fj, fjc) -> bool:
    """Compare phi(T[i:i+c]) with phi(T[j:j+c]) from four prefix fingerprints.

    Cross-multiplying by x**j and x**i avoids modular inverses. A zero base
    makes phi the first symbol, which is compared directly.
    """
    p = ms.p
    for c, x in enumerate(ms.xs):
        if x == 0:
            if seq[i] != seq[j]:
                return False
            continue
        left = (fic[0][c] - fi[0][c]) * fj[1][c] % p
        right = (fjc[0][c] - fj[0][c]) * fi[1][c] % p
        if left != right:
            return False
    return True


def check(ms: McStructure, t: Text, i: int, j: int, c: int, stats: QueryStats | None = None) -> bool:
    """Fingerprint equality of the length-c ranges at i and j; false past the text end."""
    if c < 1:
        raise ValueError("c must be >= 1")
    if max(i, j) + c > t.n:
        return False
    seq = t.seq
    fi_v, fi_w, s1 = ms.prefix(seq, i)
    fj_v, fj_w, s2 = ms.prefix(seq, j)
    gi_v, gi_w, s3 = ms.prefix(seq, i + c)
    gj_v, gj_w, s4 = ms.prefix(seq, j + c)
    if stats is not None:
        stats.checks += 1
        stats.fp_evaluations += 1 + s1 + s2 + s3 + s4
    return _same(ms, seq, i, j, (fi_v, fi_w), (gi_v, gi_w), (fj_v, fj_w), (gj_v, gj_w))


def mc_query(
    ms: McStructure,
    t: Text,
    i: int,
    j: int,
    stats: QueryStats | None = None,
    debug: bool = False,
) -> int:
    """LCE(i, j), exact whenever phi is collision-free on the compared ranges.

    The first index is aligned to a block boundary by direct comparison, then
    an exponential search over lengths ``2**mu * tau`` locates the block with
    the first mismatch, which is scanned directly. Prefix fingerprints carry
    over between checks, so each check computes at most two new ones.

    With ``debug`` set, the loop invariants (s(j) >= mu, the lower bound on
    the matched length, regular growth of mu, at most three checks per mu and
    the sample-distance bound) raise InvariantError when violated.
    """
    t.check_index(i, j)
    n = t.n
    if i == j:
        if stats is not None:
            stats.path = stats.path or "identity"
        return n - i
    g = ms.geometry
    tau, lg_tau, lg_blocks = g.tau, g.lg_tau, g.lg_blocks
    seq = t.seq

    align = -i % tau
    limit = min(align, n - max(i, j))
    m = t.match_length(i, j, limit)
    comps = m + (m < limit)
    if stats is not None:
        stats.align_comparisons += comps
        stats.path = stats.path or "mc"
    if m < align:
        if stats is not None:
            stats.char_comparisons += comps
        return m
    i += align
    j += align
    ell = align

    evals = checks = 0
    mu = 0
    per_mu = [0] * (lg_blocks + 2) if debug else None
    fi = fj = None
    if max(i, j) < n:
        vi, wi, si = ms.prefix(seq, i)
        vj, wj, sj = ms.prefix(seq, j)
        fi, fj = (vi, wi), (vj, wj)
        evals += si + sj

    def probe(c: int):
        """Fingerprints at i+c, j+c when in range and equal, else None."""
        nonlocal evals, checks
        if max(i, j) + c > n:
            return None
        vi, wi, si = ms.prefix(seq, i + c)
        vj, wj, sj = ms.prefix(seq, j + c)
        checks += 1
        evals += 1 + si + sj
        if debug:
            per_mu[c.bit_length() - 1 - lg_tau] += 1
            level = (c >> lg_tau).bit_length() - 1
            reach = tau >> min(level // 2, lg_tau)
            if sj > reach:
                raise InvariantError(f"extension of {sj} steps exceeds {reach} at mu={level}")
        fic, fjc = (vi, wi), (vj, wj)
        return (fic, fjc) if _same(ms, seq, i, j, fi, fic, fj, fjc) else None

    stall = 0
    while True:
        c = tau << mu
        hit = probe(c)
        if hit is None:
            break
        fi, fj = hit
        i += c
        j += c
        ell += c
        s_j = lg_blocks if (j >> lg_tau) == 0 else ((j >> lg_tau) & -(j >> lg_tau)).bit_length() - 1
        if s_j > mu and mu < lg_blocks:
            mu += 1
            stall = 0
        else:
            stall += 1
        if debug:
            if j < n and g.significance(j) < mu:
                raise InvariantError(f"s(j)={g.significance(j)} < mu={mu}")
            if ell - align < ((1 << mu) - 1) * tau:
                raise InvariantError(f"matched {ell - align} < (2^{mu}-1)*{tau}")
            if stall > 1:
                raise InvariantError("mu not incremented in two consecutive iterations")

    while mu > 0:
        c = tau << (mu - 1)
        hit = probe(c)
        if hit is not None:
            fi, fj = hit
            i += c
            j += c
            ell += c
        mu -= 1
        if debug and j < n and g.significance(j) < mu:
            raise InvariantError(f"s(j)={g.significance(j)} < mu={mu}")

    if debug and max(per_mu) > 3:
        raise InvariantError("check called more than three times for one mu")

    limit = min(tau, n - max(i, j))
    m = t.match_length(i, j, limit)
    scan = m + (m < limit)
    if stats is not None:
        stats.char_comparisons += comps + scan
        stats.fp_evaluations += evals
        stats.checks += checks
        stats.max_round_comparisons = max(stats.max_round_comparisons, scan, comps)
    return ell + m
