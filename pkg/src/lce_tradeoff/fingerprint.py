"""Karp-Rabin fingerprints.

``phi(T[i..j]) = sum_{k=i..j} T[k] * x**(k-i) mod p``. A prefix fingerprint
f(i) covers the first i symbols, ``T[0:i]``, and carries ``x**i mod p`` so
that substring fingerprints compose in O(1) and neighbours are reached in
O(distance) steps.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterator

from .text import Text

__all__ = [
    "MAX_MODULUS",
    "is_prime",
    "next_prime",
    "prev_prime",
    "PhiParams",
    "PrefixFingerprint",
    "phi_range",
    "prefix_fingerprint",
    "fp_extend",
    "fp_substring",
    "sliding_window",
    "pick_random_phi",
]

MAX_MODULUS = (1 << 61) - 1  # Mersenne prime, the largest prime below 2**61

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(m: int) -> bool:
    """Deterministic Miller-Rabin; exact for all m < 3.3e24."""
    if m < 2:
        return False
    for q in _MR_BASES:
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, m)
        if y in (1, m - 1):
            continue
        for _ in range(s - 1):
            y = y * y % m
            if y == m - 1:
                break
        else:
            return False
    return True


def next_prime(m: int) -> int:
    """Smallest prime >= m."""
    m = max(m, 2)
    while not is_prime(m):
        m += 1
    return m


def prev_prime(m: int) -> int:
    """Largest prime <= m."""
    while m >= 2 and not is_prime(m):
        m -= 1
    if m < 2:
        raise ValueError("no prime <= m")
    return m


@dataclass(frozen=True)
class PhiParams:
    p: int
    x: int
    c: float = 0.0
    seed: int | None = None
    x_inv: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")
        if not 1 <= self.x <= self.p - 1:
            raise ValueError("base must lie in [1, p-1]")
        object.__setattr__(self, "x_inv", pow(self.x, -1, self.p))

    @property
    def xs(self) -> tuple[int, ...]:
        return (self.x,)


@dataclass(frozen=True)
class PrefixFingerprint:
    value: int
    exponent: int
    index: int


def phi_range(phi: PhiParams, t: Text, i: int, j: int) -> int:
    """Fingerprint of ``T[i..j]`` (inclusive) by Horner's rule."""
    if not 0 <= i <= j < t.n:
        raise IndexError(f"range [{i}, {j}] outside text of length {t.n}")
    p, x, seq = phi.p, phi.x, t.seq
    acc = 0
    for k in range(j, i - 1, -1):
        acc = (acc * x + seq[k]) % p
    return acc


def prefix_fingerprint(phi: PhiParams, t: Text, i: int) -> PrefixFingerprint:
    """f(i) computed directly from the text, O(i)."""
    if not 0 <= i <= t.n:
        raise IndexError(f"prefix length {i} outside [0, {t.n}]")
    value = phi_range(phi, t, 0, i - 1) if i else 0
    return PrefixFingerprint(value, pow(phi.x, i, phi.p), i)


def fp_extend(phi: PhiParams, f: PrefixFingerprint, t: Text, a: int) -> PrefixFingerprint:
    """f(index + a) from f(index) in |a| steps; a may be negative."""
    target = f.index + a
    if not 0 <= target <= t.n:
        raise IndexError(f"prefix length {target} outside [0, {t.n}]")
    p, seq = phi.p, t.seq
    value, power = f.value, f.exponent
    if a >= 0:
        x = phi.x
        for q in range(f.index, target):
            value = (value + seq[q] * power) % p
            power = power * x % p
    else:
        x_inv = phi.x_inv
        for q in range(f.index - 1, target - 1, -1):
            power = power * x_inv % p
            value = (value - seq[q] * power) % p
    return PrefixFingerprint(value, power, target)


def fp_substring(phi: PhiParams, f_i: PrefixFingerprint, f_j: PrefixFingerprint) -> int:
    """Fingerprint of ``T[f_i.index : f_j.index]``."""
    if f_i.index >= f_j.index:
        raise ValueError("prefix fingerprints must be strictly ordered")
    p = phi.p
    return (f_j.value - f_i.value) * pow(f_i.exponent, -1, p) % p


def sliding_window(phi: PhiParams, t: Text, length: int) -> Iterator[tuple[int, int]]:
    """Yield ``(i, phi(T[i:i+length]))`` for every window, O(1) per step."""
    n = t.n
    if not 1 <= length <= n:
        raise ValueError(f"window length {length} outside [1, {n}]")
    p, x_inv, seq = phi.p, phi.x_inv, t.seq
    top = pow(phi.x, length - 1, p)
    value = phi_range(phi, t, 0, length - 1)
    yield 0, value
    for i in range(n - length):
        value = ((value - seq[i]) * x_inv + seq[i + length] * top) % p
        yield i + 1, value


def pick_random_phi(n: int, c: float = 1.0, seed: int = 0, min_modulus: int = 257) -> PhiParams:
    """Random (p, x) with p prime in [n**(4+c), 2 n**(4+c)], capped at 2**61-1.

    ``min_modulus`` keeps p above the byte alphabet for tiny n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    target = max(math.ceil(n ** (4 + c)), min_modulus)
    if target >= MAX_MODULUS:
        p = MAX_MODULUS
    else:
        upper = min(2 * target, MAX_MODULUS)
        p = next_prime(rng.randint(target, upper))
        if p > upper:
            p = next_prime(target)
        p = min(p, MAX_MODULUS)
    assert is_prime(p)
    x = rng.randint(1, p - 1)
    return PhiParams(p, x, c, seed)
