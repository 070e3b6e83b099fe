"""Bit-level index arithmetic and bipartition combinatorics.

Amplitude indices of an n-qubit register are plain Python integers in
[0, 2**n); qubit i (1-based label) lives at bit position i-1, so the
subset {1, ..., m} corresponds to the mask (1 << m) - 1.  All
combinatorial quantities are exact integers; callers convert to float
only at the last division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

#: Hard cap on the register width: indices stay in one machine word and
#: amplitude vectors stay below 2**30 entries.
MAX_QUBITS = 30


def xor(a: int, b: int) -> int:
    """Bitwise exclusive-or of two index words."""
    return a ^ b


def popcount(x: int) -> int:
    """Number of set bits (Hamming weight)."""
    return int(x).bit_count()


def and_weight(a: int, b: int) -> int:
    """popcount(a AND b); zero exactly when the supports are disjoint."""
    return (a & b).bit_count()


def binom(n: int, k: int) -> int:
    """Binomial coefficient with C(n, k) = 0 for k < 0 or k > n.

    The out-of-range convention keeps downstream coupling formulas total.
    """
    if n < 0:
        raise ValueError(f"binom requires n >= 0, got n={n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def trinom(n: int, s: int, t: int) -> int:
    """Trinomial coefficient n! / (s! t! (n-s-t)!), zero out of range."""
    if n < 0:
        raise ValueError(f"trinom requires n >= 0, got n={n}")
    if s < 0 or t < 0 or s + t > n:
        return 0
    return math.comb(n, s) * math.comb(n - s, t)


def bit_gather(k: int, mask: int) -> int:
    """Compact the bits of ``k`` selected by ``mask`` into the low end.

    Selected bits keep their relative (ascending) order.  Together with
    the complement mask this maps a global amplitude index to a
    (row, column) pair of the reshaped coefficient matrix.
    """
    out = 0
    j = 0
    while mask:
        b = mask & -mask  # lowest set bit
        if k & b:
            out |= 1 << j
        j += 1
        mask ^= b
    return out


@dataclass(frozen=True)
class Bipartition:
    """A subset A of the n qubit positions together with its complement.

    ``mask_a`` marks the members of A.  Any proper nonempty subset is
    accepted so that complements are representable; the canonical
    convention (n_a <= n_abar) holds for everything produced by
    :func:`balanced_bipartitions`.
    """

    mask_a: int
    n: int

    def __post_init__(self) -> None:
        if not 2 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [2, {MAX_QUBITS}], got {self.n}")
        if not 0 < self.mask_a < (1 << self.n) - 1:
            raise ValueError(
                f"mask 0b{self.mask_a:b} is not a proper nonempty subset of {self.n} qubits"
            )

    @property
    def n_a(self) -> int:
        return self.mask_a.bit_count()

    @property
    def n_abar(self) -> int:
        return self.n - self.n_a

    @property
    def mask_abar(self) -> int:
        return ((1 << self.n) - 1) ^ self.mask_a

    @property
    def balanced(self) -> bool:
        return self.n_a == self.n // 2

    def complement(self) -> "Bipartition":
        return Bipartition(self.mask_abar, self.n)

    def __str__(self) -> str:
        return f"A=0b{self.mask_a:0{self.n}b} (n={self.n})"


def balanced_bipartitions(n: int) -> list[Bipartition]:
    """All C(n, floor(n/2)) subsets of size floor(n/2), ascending by mask.

    The deterministic order makes downstream averages reproducible
    byte-for-byte.
    """
    if not 2 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in [2, {MAX_QUBITS}], got {n}")
    size = n // 2
    masks = sorted(sum(1 << p for p in combo) for combo in combinations(range(n), size))
    return [Bipartition(m, n) for m in masks]


def submasks(mask: int):
    """Yield every submask of ``mask`` (including 0), ascending."""
    out = []
    s = 0
    while True:
        out.append(s)
        if s == mask:
            break
        s = (s - mask) & mask  # next submask in ascending order
    return out
