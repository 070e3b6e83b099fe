"""Bipartition purity and its balanced-bipartition average.

Two independent routes are provided for each quantity:

* a fast reduced-density-matrix path (``purity_rdm`` / ``purity_me``)
  that reshapes the amplitude vector into a matrix M and evaluates the
  quartic trace as the squared Frobenius norm of M M^H, and
* literal index-sum oracles (``purity_direct`` / ``purity_me_direct``)
  that evaluate the quadruple products over XOR-shifted indices term by
  term.  The oracles are deliberately kept free of the fast path's index
  tables and kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bitcomb
from ._kernels import BACKEND, purity_fixed_batch, purity_weighted_batch
from .bitcomb import Bipartition, binom, submasks
from .states import PureState

__all__ = [
    "BACKEND",
    "PuritySample",
    "coupling_g",
    "g_hat",
    "purity_batch",
    "purity_direct",
    "purity_me",
    "purity_me_batch",
    "purity_me_direct",
    "purity_rdm",
]

#: Brute-force cost guards: the direct sums cost O(4^n) per bipartition
#: and O(8^n) for the averaged form.
DIRECT_MAX_N = 8
DIRECT_ME_MAX_N = 5

FIXED = "piA"
AVERAGE_ME = "piME"

_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class PuritySample:
    """One purity value, tagged with what it measures.

    ``mask`` is the bipartition mask for fixed-bipartition samples and
    None for balanced-bipartition averages.
    """

    value: float
    n: int
    kind: str
    mask: int | None = None

    def __post_init__(self) -> None:
        if self.kind == FIXED:
            if self.mask is None:
                raise ValueError("fixed-bipartition samples need a mask")
            lower = 2.0 ** -int(self.mask).bit_count()
        elif self.kind == AVERAGE_ME:
            if self.mask is not None:
                raise ValueError("averaged samples take no mask")
            lower = 2.0 ** -(self.n // 2)
        else:
            raise ValueError(f"unknown purity kind {self.kind!r}")
        if not lower - _BOUND_SLACK <= self.value <= 1.0 + _BOUND_SLACK:
            raise ValueError(
                f"purity {self.value!r} outside [{lower}, 1] for kind {self.kind}"
            )


# ---------------------------------------------------------------------------
# index tables for the fast path


def _gather_positions(n: int, mask: int) -> np.ndarray:
    """Vectorized bit_gather over all 2^n indices."""
    ks = np.arange(1 << n, dtype=np.intp)
    out = np.zeros_like(ks)
    j = 0
    for b in range(n):
        if (mask >> b) & 1:
            out |= ((ks >> b) & 1) << j
            j += 1
    return out


@lru_cache(maxsize=None)
def _src_table(n: int, mask: int) -> tuple[np.ndarray, int]:
    """Row-major gather table: matrix position -> global amplitude index."""
    n_a = mask.bit_count()
    n_ab = n - n_a
    pos = (_gather_positions(n, mask) << n_ab) | _gather_positions(n, ((1 << n) - 1) ^ mask)
    src = np.empty(1 << n, dtype=np.intp)
    src[pos] = np.arange(1 << n, dtype=np.intp)
    src.setflags(write=False)
    return src, 1 << n_a


@lru_cache(maxsize=None)
def _balanced_tables(n: int, dedupe: bool) -> tuple[np.ndarray, np.ndarray, int]:
    """Gather tables and weights for all balanced bipartitions of n qubits.

    For even n each unordered split appears as two complementary masks
    with equal purity; ``dedupe`` keeps the mask containing qubit 1 with
    weight 2, reproducing the full average exactly.
    """
    bips = bitcomb.balanced_bipartitions(n)
    masks = [b.mask_a for b in bips]
    weights = [1.0] * len(masks)
    if dedupe and n % 2 == 0:
        masks = [m for m in masks if m & 1]
        weights = [2.0] * len(masks)
    srcs = np.stack([_src_table(n, m)[0] for m in masks])
    srcs.setflags(write=False)
    w = np.array(weights)
    w.setflags(write=False)
    return srcs, w, 1 << (n // 2)


# ---------------------------------------------------------------------------
# fast path


def purity_batch(amps: np.ndarray, n: int, bip: Bipartition) -> np.ndarray:
    """Purity of each row of ``amps`` for one fixed bipartition."""
    if bip.n != n:
        raise ValueError(f"bipartition is for n={bip.n}, states have n={n}")
    src, rows = _src_table(n, bip.mask_a)
    return purity_fixed_batch(np.ascontiguousarray(amps, dtype=np.complex128), src, rows)


def purity_me_batch(amps: np.ndarray, n: int, dedupe: bool = True) -> np.ndarray:
    """Balanced-bipartition average purity of each row of ``amps``."""
    srcs, weights, rows = _balanced_tables(n, dedupe)
    return purity_weighted_batch(
        np.ascontiguousarray(amps, dtype=np.complex128), srcs, weights, rows
    )


def purity_rdm(state: PureState, bip: Bipartition) -> PuritySample:
    """Tr(rho_A^2) via the reshaped coefficient matrix."""
    value = float(purity_batch(state.amplitudes[None, :], state.n, bip)[0])
    return PuritySample(value, state.n, FIXED, bip.mask_a)


def purity_me(state: PureState, dedupe: bool = True) -> PuritySample:
    """Average purity over all balanced bipartitions."""
    value = float(purity_me_batch(state.amplitudes[None, :], state.n, dedupe)[0])
    return PuritySample(value, state.n, AVERAGE_ME)


# ---------------------------------------------------------------------------
# coupling weights for the averaged sum


@lru_cache(maxsize=None)
def g_hat(s: int, t: int, n: int) -> float:
    """Weight-only part of the coupling function.

    Average over balanced bipartitions of the indicator that an
    (|l|=s, |m|=t) disjoint pair is split across the two sides:
    [C(n-s-t, floor(n/2)-s) + C(n-s-t, floor(n/2)-t)] / (2 C(n, floor(n/2))).
    """
    if s < 0 or t < 0 or s + t > n:
        return 0.0
    half = n // 2
    return 0.5 * (binom(n - s - t, half - s) + binom(n - s - t, half - t)) / binom(n, half)


def coupling_g(l: int, m: int, n: int) -> float:
    """Coupling weight of an index pair: zero unless supports are disjoint."""
    if l & m:
        return 0.0
    return g_hat(l.bit_count(), m.bit_count(), n)


# ---------------------------------------------------------------------------
# literal oracles


def purity_direct(state: PureState, bip: Bipartition) -> PuritySample:
    """Brute-force purity: the quadruple sum over k, l in A, m in Abar.

    Evaluates sum_k z_k z*_{k^l} z_{k^l^m} z*_{k^m} literally (the k sum
    is vectorized); serves as the oracle for :func:`purity_rdm`.
    """
    n = state.n
    if n > DIRECT_MAX_N:
        raise ValueError(f"purity_direct is O(4^n); capped at n <= {DIRECT_MAX_N}")
    if bip.n != n:
        raise ValueError(f"bipartition is for n={bip.n}, state has n={n}")
    z = state.amplitudes
    ks = np.arange(1 << n)
    total = 0.0 + 0.0j
    for l in submasks(bip.mask_a):
        zl = z[ks ^ l].conj()
        for m in submasks(bip.mask_abar):
            total += np.sum(z * zl * z[ks ^ l ^ m] * z[ks ^ m].conj())
    return PuritySample(float(total.real), n, FIXED, bip.mask_a)


def purity_me_direct(state: PureState) -> PuritySample:
    """Brute-force averaged purity: the coupling-weighted triple sum.

    Evaluates sum_{k,l,m} g(l,m) z_k z*_{k^l} z_{k^l^m} z*_{k^m}
    literally; oracle for :func:`purity_me`.
    """
    n = state.n
    if n > DIRECT_ME_MAX_N:
        raise ValueError(f"purity_me_direct is O(8^n); capped at n <= {DIRECT_ME_MAX_N}")
    z = state.amplitudes
    dim = 1 << n
    ks = np.arange(dim)
    total = 0.0 + 0.0j
    for l in range(dim):
        zl = z[ks ^ l].conj()
        for m in range(dim):
            w = coupling_g(l, m, n)
            if w == 0.0:
                continue
            total += w * np.sum(z * zl * z[ks ^ l ^ m] * z[ks ^ m].conj())
    return PuritySample(float(total.real), n, AVERAGE_ME)
