"""Pure-numpy purity kernels (fallback when the extension is absent).

Each state row is gathered into a 2^n_A x 2^n_Abar matrix M; the purity
is the squared Frobenius norm of G = M M^H.  Batched BLAS matmul does
the heavy lifting; the final reduction uses numpy's pairwise summation.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

# Rough cap on scratch buffer size (complex entries) per matmul batch.
_SCRATCH = 1 << 22


def _batch_step(rows: int, cols: int) -> int:
    per_state = max(rows * cols, rows * rows)
    return max(1, _SCRATCH // per_state)


def purity_fixed_batch(amps: np.ndarray, src: np.ndarray, rows: int) -> np.ndarray:
    """Purity of every state in ``amps`` for one bipartition.

    ``src`` maps row-major positions of the reshaped matrix to global
    amplitude indices.
    """
    amps = np.ascontiguousarray(amps)
    nstates, dim = amps.shape
    cols = dim // rows
    out = np.empty(nstates)
    step = _batch_step(rows, cols)
    for lo in range(0, nstates, step):
        m = amps[lo : lo + step, src].reshape(-1, rows, cols)
        g = m @ m.conj().swapaxes(1, 2)
        out[lo : lo + step] = np.sum(np.abs(g) ** 2, axis=(1, 2))
    return out


def purity_weighted_batch(
    amps: np.ndarray, srcs: np.ndarray, weights: np.ndarray, rows: int
) -> np.ndarray:
    """Weighted average of per-bipartition purities for every state."""
    amps = np.ascontiguousarray(amps)
    acc = np.zeros(amps.shape[0])
    for src, w in zip(srcs, weights):
        acc += w * purity_fixed_batch(amps, src, rows)
    return acc / float(np.sum(weights))
