"""Minimum-purity search over finite-phase (butson) configurations.

Greedy best-improvement descent over single-site phase changes, plus a
multistart wrapper and a plain best-of-sample baseline.  Moves are
deterministic: candidates are scanned site-major with ascending
replacement exponents and ties go to the first (lowest) candidate, so a
run is fully reproducible from its RNG address.

Neighbor evaluation recomputes the average purity from scratch by
default.  With ``incremental=True`` a rank-style update of the per-
bipartition Gram matrices is used instead (a single amplitude change
touches one entry of each reshaped matrix), which is validated against
the full recompute by the test suite; the returned optimum is always
re-scored with the full path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import purity, states
from .states import BUTSON, EnsembleSpec, PhaseWord, roots_of_unity


@dataclass(frozen=True)
class SearchResult:
    """Best configuration found, with its gap to the theoretical bound."""

    best_state: PhaseWord
    best_value: float
    bound: float
    gap: float
    evaluations: int
    seed: int
    stream: int
    restart: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.best_state.n,
                "q": self.best_state.q,
                "exponents": [int(v) for v in self.best_state.values],
                "best_value": self.best_value,
                "bound": self.bound,
                "gap": self.gap,
                "evaluations": self.evaluations,
                "seed": self.seed,
                "stream": self.stream,
                "restart": self.restart,
            },
            sort_keys=True,
        )


def _bound(n: int) -> float:
    return 2.0 ** -(n // 2)


def _result(word: PhaseWord, value: float, evals: int, seed: int, stream: int,
            restart: int = 0) -> SearchResult:
    bound = _bound(word.n)
    gap = value - bound
    if gap < -1e-12:
        raise AssertionError(f"purity {value} below the theoretical bound {bound}")
    return SearchResult(word, value, bound, gap, evals, seed, stream, restart)


def _word_value(word: PhaseWord) -> float:
    return float(purity.purity_me_batch(word.to_state().amplitudes[None, :], word.n)[0])


def best_of_sample(spec: EnsembleSpec, count: int) -> SearchResult:
    """Minimum average purity over ``count`` i.i.d. draws of the spec."""
    if spec.kind not in (BUTSON, states.HADAMARD):
        raise ValueError("best_of_sample tracks phase words; use a flat-modulus spec")
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")
    best_val = np.inf
    best_word = None
    done = 0
    block = 0
    while done < count:
        take = min(states.BLOCK, count - done)
        phases = states.phase_block(spec, block, take)
        if spec.kind == BUTSON:
            amps = roots_of_unity(spec.q)[phases] / np.sqrt(1 << spec.n)
        else:
            amps = np.exp(1j * phases) / np.sqrt(1 << spec.n)
        vals = purity.purity_me_batch(amps, spec.n)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            q = spec.q if spec.kind == BUTSON else None
            best_word = PhaseWord(spec.n, q, phases[i])
        done += take
        block += 1
    return _result(best_word, best_val, count, spec.seed, spec.stream)


# ---------------------------------------------------------------------------
# greedy descent


class _FullEngine:
    """Candidate scoring by full recomputation of the average purity."""

    def __init__(self, word: PhaseWord):
        self.n = word.n
        self.q = word.q
        self.dim = 1 << word.n
        self.roots = roots_of_unity(word.q)
        self.expts = np.array(word.values, dtype=np.int64)
        self.scale = 1.0 / np.sqrt(self.dim)
        self.value = self._score(self.expts)

    def _score(self, expts: np.ndarray) -> float:
        amps = self.roots[expts] * self.scale
        return float(purity.purity_me_batch(amps[None, :], self.n)[0])

    def candidates(self) -> tuple[np.ndarray, list[tuple[int, int]]]:
        """Values of all single-site changes, site-major, exponents ascending."""
        moves = [
            (site, r)
            for site in range(self.dim)
            for r in range(self.q)
            if r != self.expts[site]
        ]
        batch = np.repeat(self.expts[None, :], len(moves), axis=0)
        for row, (site, r) in enumerate(moves):
            batch[row, site] = r
        amps = self.roots[batch] * self.scale
        return purity.purity_me_batch(amps, self.n), moves

    def commit(self, site: int, r: int) -> None:
        self.expts[site] = r
        self.value = self._score(self.expts)


class _IncrementalEngine:
    """Candidate scoring by rank-style updates of the Gram matrices.

    Per balanced bipartition b the reshaped matrix M_b and its Gram
    G_b = M_b M_b^H are kept; changing amplitude k only touches entry
    (row_b(k), col_b(k)) of M_b and hence row/column row_b(k) of G_b.
    """

    def __init__(self, word: PhaseWord):
        self.n = word.n
        self.q = word.q
        self.dim = 1 << word.n
        self.roots = roots_of_unity(word.q)
        self.expts = np.array(word.values, dtype=np.int64)
        self.scale = 1.0 / np.sqrt(self.dim)

        srcs, weights, rows = purity._balanced_tables(word.n, dedupe=True)
        self.weights = weights
        self.wsum = float(np.sum(weights))
        self.rows = rows
        self.cols = self.dim // rows
        # position of global index k in the reshaped matrix of each bipartition
        order = np.argsort(srcs, axis=1)
        self.row_of = (order // self.cols).astype(np.intp)
        self.col_of = (order % self.cols).astype(np.intp)
        self.nb = srcs.shape[0]
        self._b = np.arange(self.nb)
        self.srcs = srcs
        self.rebuild()

    def rebuild(self) -> None:
        amps = self.roots[self.expts] * self.scale
        self.z = amps
        self.m = amps[self.srcs].reshape(self.nb, self.rows, self.cols)
        self.g = self.m @ self.m.conj().swapaxes(1, 2)
        self.purities = np.sum(np.abs(self.g) ** 2, axis=(1, 2))
        self.value = float(np.dot(self.weights, self.purities) / self.wsum)

    def _deltas(self, site: int, dzs: np.ndarray) -> np.ndarray:
        """Change of the average purity for each replacement amplitude."""
        r0 = self.row_of[:, site]
        c0 = self.col_of[:, site]
        u = self.m[self._b, :, c0]          # (nb, rows), column col_b(site) of M_b
        w = self.g[self._b, r0, :]          # (nb, rows), row row_b(site) of G_b
        tu = u.conj()
        tw = w.conj()
        z0 = self.z[site]
        diag = np.real(self.g[self._b, r0, r0])
        cross = tu * tw                      # conj(u_i) conj(w_i)
        cross_sum = np.sum(cross, axis=1) - cross[self._b, r0]
        u2_sum = np.sum(np.abs(u) ** 2, axis=1) - abs(z0) ** 2
        out = np.empty(len(dzs))
        for j, dz in enumerate(dzs):
            adz2 = abs(dz) ** 2
            # off-diagonal row entries, doubled for the mirrored column
            row_term = 2.0 * (2.0 * np.real(dz * cross_sum) + adz2 * u2_sum)
            ddiag = 2.0 * np.real(dz * np.conj(z0)) + adz2
            diag_term = (diag + ddiag) ** 2 - diag**2
            out[j] = float(np.dot(self.weights, row_term + diag_term) / self.wsum)
        return out

    def candidates(self) -> tuple[np.ndarray, list[tuple[int, int]]]:
        moves = []
        vals = []
        for site in range(self.dim):
            alts = [r for r in range(self.q) if r != self.expts[site]]
            dzs = (self.roots[alts] - self.roots[self.expts[site]]) * self.scale
            deltas = self._deltas(site, dzs)
            for r, d in zip(alts, deltas):
                moves.append((site, r))
                vals.append(self.value + d)
        return np.array(vals), moves

    def commit(self, site: int, r: int) -> None:
        # One accepted move per pass: a full refresh here is cheap next to
        # the candidate sweep and keeps the Gram matrices drift-free.
        self.expts[site] = r
        self.rebuild()


def greedy_flip_descent(start: PhaseWord, max_passes: int = 10_000,
                        incremental: bool = False) -> SearchResult:
    """Best-improvement local descent over single-site phase changes.

    Each pass scores every (site, exponent) change, takes the best
    strictly improving one, and stops at a local minimum or after
    ``max_passes`` moves.
    """
    if start.q is None:
        raise ValueError("descent needs a finite phase alphabet (butson word)")
    engine = _IncrementalEngine(start) if incremental else _FullEngine(start)
    evals = 1
    for _ in range(max_passes):
        vals, moves = engine.candidates()
        evals += len(moves)
        best = int(np.argmin(vals))
        if not vals[best] < engine.value:
            break
        engine.commit(*moves[best])
    word = PhaseWord(start.n, start.q, np.array(engine.expts, dtype=np.int64))
    return _result(word, _word_value(word), evals, 0, 0)


def _start_word(spec: EnsembleSpec, restart: int) -> PhaseWord:
    return PhaseWord(spec.n, spec.q, states.phase_block(spec, restart, 1)[0])


def descend_restart(spec: EnsembleSpec, restart: int, max_passes: int = 10_000,
                    incremental: bool = False) -> SearchResult:
    """One seeded descent; ``restart`` doubles as the RNG block index."""
    if spec.kind != BUTSON:
        raise ValueError("descent needs a butson spec")
    res = greedy_flip_descent(_start_word(spec, restart), max_passes, incremental)
    return SearchResult(res.best_state, res.best_value, res.bound, res.gap,
                        res.evaluations, spec.seed, spec.stream, restart)


def multistart_iter(spec: EnsembleSpec, restarts: int, max_passes: int = 10_000,
                    incremental: bool = False) -> Iterator[SearchResult]:
    for r in range(restarts):
        yield descend_restart(spec, r, max_passes, incremental)


def multistart(spec: EnsembleSpec, restarts: int, max_passes: int = 10_000,
               incremental: bool = False) -> SearchResult:
    """Best descent over independent seeded starts (ties: lowest restart)."""
    if restarts < 1:
        raise ValueError(f"need restarts >= 1, got {restarts}")
    best = None
    for res in multistart_iter(spec, restarts, max_passes, incremental):
        if best is None or res.best_value < best.best_value:
            best = res
    return best
