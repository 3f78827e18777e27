"""Input text, index conventions, reference oracles and test-text generators.

Positions are 0-indexed and ranges are half-open everywhere in this package.
LCE(i, j) is the length of the longest common prefix of the suffixes starting
at i and j.
"""
from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Text",
    "PeriodInfo",
    "naive_lce",
    "naive_lce_r",
    "brute_period",
    "border_period",
    "generate",
    "parse_generator",
]


class Text:
    """Immutable integer-alphabet string.

    Three views of the same symbols are kept: ``seq`` for fast scalar
    indexing, ``array`` for vectorized work, and a raw byte buffer used to
    compare whole ranges with a single memcmp.
    """

    __slots__ = ("array", "seq", "n", "_raw", "_width", "source")

    def __init__(self, symbols: Iterable[int] | bytes | str, source: str | None = None):
        if isinstance(symbols, str):
            symbols = symbols.encode("latin-1")
        if isinstance(symbols, (bytes, bytearray)):
            arr = np.frombuffer(bytes(symbols), dtype=np.uint8).copy()
        else:
            values = list(symbols)
            if values and min(values) < 0:
                raise ValueError("symbols must be non-negative integers")
            if not values or max(values) < 256:
                arr = np.asarray(values, dtype=np.uint8)
            else:
                arr = np.asarray(values, dtype=np.uint64)
        if arr.size == 0:
            raise ValueError("text must contain at least one symbol")
        arr.setflags(write=False)
        self.array = arr
        self.n = int(arr.size)
        self._raw = arr.tobytes()
        self._width = arr.itemsize
        # bytes index to int already; wide alphabets fall back to a list
        self.seq = self._raw if self._width == 1 else arr.tolist()
        self.source = source

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        return self.seq[i]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Text) and self._raw == other._raw and self._width == other._width

    def __hash__(self) -> int:
        return hash(self._raw)

    def __repr__(self) -> str:
        head = self.decode()[:24] if self._width == 1 else str(self.seq[:8])
        return f"Text(n={self.n}, {head!r}{'...' if self.n > 24 else ''})"

    def decode(self) -> str:
        if self._width != 1:
            raise ValueError("text alphabet is wider than one byte")
        return self._raw.decode("latin-1")

    @property
    def alphabet_max(self) -> int:
        return int(self.array.max())

    def digest(self) -> str:
        return hashlib.sha256(self._raw).hexdigest()

    def check_index(self, *positions: int) -> None:
        for q in positions:
            if not 0 <= q < self.n:
                raise IndexError(f"position {q} outside [0, {self.n})")

    def range_equal(self, i: int, j: int, length: int) -> bool:
        """``T[i:i+length] == T[j:j+length]``, both ranges assumed in bounds."""
        w = self._width
        raw = self._raw
        return raw[i * w:(i + length) * w] == raw[j * w:(j + length) * w]

    def match_length(self, i: int, j: int, limit: int) -> int:
        """Number of leading equal symbols of T[i:] and T[j:], at most ``limit``.

        The caller guarantees ``max(i, j) + limit <= n``. Galloping over
        memcmp keeps long runs cheap; the result equals a symbol-by-symbol
        scan.
        """
        if limit <= 0:
            return 0
        seq = self.seq
        if seq[i] != seq[j]:
            return 0
        if i == j:
            return limit
        # gallop: find a step that fails, then binary search inside it
        lo, step = 1, 1
        while lo < limit:
            hi = min(lo + step, limit)
            if not self.range_equal(i + lo, j + lo, hi - lo):
                break
            lo = hi
            step <<= 1
        else:
            return limit
        hi = min(lo + step, limit)
        # invariant: first lo symbols match, first hi do not
        while hi - lo > 1:
            mid = (lo + hi) >> 1
            if self.range_equal(i + lo, j + lo, mid - lo):
                lo = mid
            else:
                hi = mid
        return lo

    def reversed(self) -> "Text":
        return Text(self.array[::-1].tolist() if self._width != 1 else self._raw[::-1])


@dataclass(frozen=True)
class PeriodInfo:
    period: int
    length: int

    @property
    def periodic(self) -> bool:
        return 2 * self.period <= self.length


def naive_lce(t: Text, i: int, j: int) -> int:
    """Reference LCE by left-to-right symbol comparison."""
    t.check_index(i, j)
    seq, n = t.seq, t.n
    m = 0
    while i + m < n and j + m < n and seq[i + m] == seq[j + m]:
        m += 1
    return m


def naive_lce_r(t: Text, i: int, j: int) -> int:
    """Longest common suffix of the prefixes ending at i and j (inclusive)."""
    t.check_index(i, j)
    seq = t.seq
    m = 0
    while i - m >= 0 and j - m >= 0 and seq[i - m] == seq[j - m]:
        m += 1
    return m


def brute_period(s: Sequence[int] | str | bytes) -> PeriodInfo:
    """Smallest period by trying every candidate; quadratic, oracle use only."""
    if isinstance(s, str):
        s = s.encode("latin-1")
    m = len(s)
    if m == 0:
        raise ValueError("period of an empty string is undefined")
    for p in range(1, m + 1):
        if all(s[k] == s[k + p] for k in range(m - p)):
            return PeriodInfo(p, m)
    raise AssertionError("unreachable: |s| is always a period")


def border_period(s: Sequence[int]) -> int:
    """Smallest period via the failure function: ``len(s) - border(s)``."""
    m = len(s)
    if m == 0:
        raise ValueError("period of an empty string is undefined")
    fail = [0] * m
    k = 0
    for q in range(1, m):
        c = s[q]
        while k and s[k] != c:
            k = fail[k - 1]
        if s[k] == c:
            k += 1
        fail[q] = k
    return m - fail[m - 1]


# ----------------------------------------------------------------------------
# generators

def _letters(values: Iterable[int]) -> bytes:
    return bytes(97 + v for v in values)


def random_text(n: int, sigma: int, seed: int) -> Text:
    if sigma < 1:
        raise ValueError("sigma must be >= 1")
    rng = random.Random(seed)
    values = [rng.randrange(sigma) for _ in range(n)]
    source = f"random:n={n},sigma={sigma},seed={seed}"
    if sigma <= 26:
        return Text(_letters(values), source)
    return Text(values, source)


def periodic_text(motif: str, n: int) -> Text:
    if not motif:
        raise ValueError("motif must be non-empty")
    reps = -(-n // len(motif))
    return Text((motif * reps)[:n], f"periodic:motif={motif},n={n}")


def fibonacci_text(n: int) -> Text:
    prev, cur = "b", "a"
    while len(cur) < n:
        prev, cur = cur, cur + prev
    return Text(cur[:n], f"fibonacci:n={n}")


def thue_morse_text(n: int) -> Text:
    return Text(_letters(bin(k).count("1") & 1 for k in range(n)), f"thue_morse:n={n}")


def constant_text(n: int) -> Text:
    return Text(b"a" * n, f"constant:n={n}")


def generate(kind: str, n: int, *, sigma: int = 2, seed: int = 0, motif: str = "ab") -> Text:
    """Build a named test text; deterministic for fixed parameters."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if kind == "random":
        return random_text(n, sigma, seed)
    if kind == "periodic":
        return periodic_text(motif, n)
    if kind == "fibonacci":
        return fibonacci_text(n)
    if kind == "thue_morse":
        return thue_morse_text(n)
    if kind == "constant":
        return constant_text(n)
    raise ValueError(f"unknown generator kind {kind!r}")


def parse_generator(spec: str) -> Text:
    """Parse ``kind:key=value,...`` (e.g. ``random:n=1024,sigma=2,seed=7``)."""
    kind, _, rest = spec.partition(":")
    params: dict[str, str] = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"malformed generator parameter {item!r}")
        params[key.strip()] = value.strip()
    try:
        n = int(params.pop("n"))
    except KeyError:
        raise ValueError(f"generator {spec!r} needs n=") from None
    kwargs: dict = {}
    if "sigma" in params:
        kwargs["sigma"] = int(params.pop("sigma"))
    if "seed" in params:
        kwargs["seed"] = int(params.pop("seed"))
    if "motif" in params:
        kwargs["motif"] = params.pop("motif")
    if params:
        raise ValueError(f"unknown generator parameters {sorted(params)}")
    return generate(kind.strip(), n, **kwargs)
