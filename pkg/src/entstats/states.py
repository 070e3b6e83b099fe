"""State ensembles: Haar-uniform vectors and flat-modulus phase ensembles.

Three families are supported:

* ``haar``      -- uniform on the unit sphere of C^(2^n),
* ``butson:q``  -- flat modulus 2^(-n/2), phases drawn from the q-th
                   roots of unity (q=2 is the hypergraph / sign ensemble),
* ``hadamard``  -- flat modulus, phases uniform on the whole circle
                   (the q -> infinity limit of the butson family).

Sampling is addressed by (seed, stream, block): block ``b`` of any spec
is an independent, reproducible substream of ``BLOCK`` states.  Distinct
(kind, q, n) automatically get independent substreams for the same seed.

Haar states are drawn as normalized vectors of i.i.d. standard complex
Gaussians, which has exactly the uniform-sphere distribution and costs
O(2^n) per state instead of the O(2^3n) of orthogonalizing a full random
matrix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .bitcomb import MAX_QUBITS

HAAR = "haar"
BUTSON = "butson"
HADAMARD = "hadamard"

#: Samples per RNG substream block.  Fixed so that results never depend
#: on how blocks are distributed over workers.
BLOCK = 1024

#: Feasibility guard for exhaustive enumeration: q^(2^n) states max.
ENUMERATION_LIMIT = 1 << 26

_KIND_TAGS = {HAAR: 0, BUTSON: 1, HADAMARD: 2}


@dataclass(frozen=True)
class EnsembleSpec:
    """Which distribution to sample, plus its RNG address."""

    kind: str
    n: int
    q: int | None = None
    seed: int = 0
    stream: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KIND_TAGS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if not 1 <= self.n <= MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        if self.kind == BUTSON:
            if self.q is None or self.q < 2:
                raise ValueError(f"butson ensembles need integer q >= 2, got {self.q}")
        elif self.q is not None:
            raise ValueError(f"q is only meaningful for butson ensembles, got q={self.q}")

    @staticmethod
    def haar(n: int, seed: int = 0, stream: int = 0) -> "EnsembleSpec":
        return EnsembleSpec(HAAR, n, None, seed, stream)

    @staticmethod
    def butson(n: int, q: int, seed: int = 0, stream: int = 0) -> "EnsembleSpec":
        return EnsembleSpec(BUTSON, n, q, seed, stream)

    @staticmethod
    def hadamard_typical(n: int, seed: int = 0, stream: int = 0) -> "EnsembleSpec":
        return EnsembleSpec(HADAMARD, n, None, seed, stream)

    def label(self) -> str:
        return f"butson:{self.q}" if self.kind == BUTSON else self.kind


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex amplitude vector over the computational basis."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape != (1 << self.n,):
            raise ValueError(
                f"expected {1 << self.n} amplitudes for n={self.n}, got shape {amps.shape}"
            )
        norm_err = abs(float(np.sum(np.abs(amps) ** 2)) - 1.0)
        if norm_err > 1e-12:
            raise ValueError(f"state is not normalized (|norm^2 - 1| = {norm_err:.3e})")


@dataclass(frozen=True)
class PhaseWord:
    """Phase data of a flat-modulus state.

    ``values`` holds integer root-of-unity exponents in [0, q) when q is
    finite, or angles in [0, 2*pi) when ``q`` is None (continuous phases).
    """

    n: int
    q: int | None
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.q is None:
            vals = np.asarray(self.values, dtype=np.float64)
        else:
            if self.q < 2:
                raise ValueError(f"need q >= 2, got {self.q}")
            vals = np.asarray(self.values, dtype=np.int64)
            if vals.size and (vals.min() < 0 or vals.max() >= self.q):
                raise ValueError("exponents must lie in [0, q)")
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} phases, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    def to_state(self) -> PureState:
        if self.q is None:
            s = np.exp(1j * self.values)
        else:
            s = roots_of_unity(self.q)[self.values]
        return PureState(self.n, s / math.sqrt(1 << self.n))


def roots_of_unity(q: int) -> np.ndarray:
    """The q-th roots of unity, with the quarter points patched exact.

    Exact +-1 (and +-i when q divides by 4) keep hypergraph amplitudes
    free of trigonometric noise.
    """
    w = np.exp(2j * np.pi * np.arange(q) / q)
    w[0] = 1.0
    if q % 2 == 0:
        w[q // 2] = -1.0
    if q % 4 == 0:
        w[q // 4] = 1j
        w[3 * q // 4] = -1j
    return w


def rng_block(spec: EnsembleSpec, block: int) -> np.random.Generator:
    """Deterministic generator for one substream block of a spec.

    The spawn key folds in (kind, q, n, stream, block), so different
    system sizes and ensembles are independent even under a shared seed.
    """
    key = (_KIND_TAGS[spec.kind], spec.q or 0, spec.n, spec.stream, block)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(spec.seed, spawn_key=key)))


def phase_block(spec: EnsembleSpec, block: int, count: int) -> np.ndarray:
    """Raw phase draws for one block: exponents (butson) or angles."""
    rng = rng_block(spec, block)
    size = (count, 1 << spec.n)
    if spec.kind == BUTSON:
        return rng.integers(0, spec.q, size=size, dtype=np.int64)
    if spec.kind == HADAMARD:
        return rng.uniform(0.0, 2.0 * np.pi, size=size)
    raise ValueError("phase words exist only for flat-modulus ensembles")


def sample_block(spec: EnsembleSpec, block: int, count: int) -> np.ndarray:
    """A (count, 2^n) matrix of amplitude vectors, one state per row."""
    dim = 1 << spec.n
    if spec.kind == HAAR:
        rng = rng_block(spec, block)
        z = rng.standard_normal((count, 2 * dim)).view(np.complex128)
        norms = np.sqrt(np.sum(np.abs(z) ** 2, axis=1))
        while np.any(norms == 0.0):  # probability-zero guard: redraw dead rows
            bad = norms == 0.0
            z[bad] = rng.standard_normal((int(bad.sum()), 2 * dim)).view(np.complex128)
            norms = np.sqrt(np.sum(np.abs(z) ** 2, axis=1))
        return z / norms[:, None]
    phases = phase_block(spec, block, count)
    if spec.kind == BUTSON:
        s = roots_of_unity(spec.q)[phases]
    else:
        s = np.exp(1j * phases)
    return s / math.sqrt(dim)


def _first_draw(spec: EnsembleSpec) -> PureState:
    return PureState(spec.n, sample_block(spec, 0, 1)[0])


def sample_haar(spec: EnsembleSpec) -> PureState:
    """One state uniform on the unit sphere of C^(2^n)."""
    if spec.kind != HAAR:
        raise ValueError(f"expected a haar spec, got {spec.label()}")
    return _first_draw(spec)


def sample_butson(spec: EnsembleSpec) -> PureState:
    """One flat-modulus state with q-th root-of-unity phases."""
    if spec.kind != BUTSON:
        raise ValueError(f"expected a butson spec, got {spec.label()}")
    return _first_draw(spec)


def sample_hadamard_typical(spec: EnsembleSpec) -> PureState:
    """One flat-modulus state with phases uniform on the circle."""
    if spec.kind != HADAMARD:
        raise ValueError(f"expected a hadamard spec, got {spec.label()}")
    return _first_draw(spec)


def sample(spec: EnsembleSpec) -> PureState:
    """Dispatch on spec.kind."""
    return _first_draw(spec)


def enumeration_size(n: int, q: int) -> int:
    return q ** (1 << n)


def check_enumerable(n: int, q: int) -> int:
    total = enumeration_size(n, q)
    if total > ENUMERATION_LIMIT:
        raise ValueError(
            f"exhaustive enumeration needs q^(2^n) <= {ENUMERATION_LIMIT}; "
            f"(n={n}, q={q}) has {total} states"
        )
    return total


def enumerate_butson(n: int, q: int) -> Iterator[PureState]:
    """Every q-phase assignment exactly once, in lexicographic order.

    Exponent words are ordered like base-q counting with the first basis
    index as the most significant digit.
    """
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    check_enumerable(n, q)
    dim = 1 << n
    roots = roots_of_unity(q)
    scale = 1.0 / math.sqrt(dim)
    for expts in product(range(q), repeat=dim):
        yield PureState(n, roots[np.array(expts, dtype=np.int64)] * scale)


def enumerate_exponent_blocks(n: int, q: int, block_size: int = 4096) -> Iterator[np.ndarray]:
    """Vectorized companion to :func:`enumerate_butson`.

    Yields (count, 2^n) int64 exponent matrices covering all q^(2^n)
    assignments in the same lexicographic order.
    """
    total = check_enumerable(n, q)
    dim = 1 << n
    place = q ** (dim - 1 - np.arange(dim, dtype=np.int64))
    for start in range(0, total, block_size):
        idx = np.arange(start, min(start + block_size, total), dtype=np.int64)
        yield (idx[:, None] // place[None, :]) % q


def fixed_state(amplitudes) -> PureState:
    """Wrap a user-supplied amplitude vector as a normalized PureState."""
    amps = np.asarray(amplitudes, dtype=np.complex128)
    if amps.ndim != 1 or amps.size < 2 or amps.size & (amps.size - 1):
        raise ValueError(f"amplitude count must be a power of two >= 2, got {amps.size}")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"amplitudes are not normalized (norm = {norm!r})")
    n = amps.size.bit_length() - 1
    return PureState(n, amps / norm)


def state_to_json(state: PureState) -> str:
    pairs = [[float(z.real), float(z.imag)] for z in state.amplitudes]
    return json.dumps({"n": state.n, "amplitudes": pairs})


def state_from_json(text: str) -> PureState:
    doc = json.loads(text)
    amps = np.array([complex(re, im) for re, im in doc["amplitudes"]])
    state = fixed_state(amps)
    if state.n != doc["n"]:
        raise ValueError(f"amplitude count does not match n={doc['n']}")
    return state


def phase_word_to_json(word: PhaseWord) -> str:
    if word.q is None:
        return json.dumps({"n": word.n, "q": None, "angles": [float(v) for v in word.values]})
    return json.dumps({"n": word.n, "q": word.q, "exponents": [int(v) for v in word.values]})


def phase_word_from_json(text: str) -> PhaseWord:
    doc = json.loads(text)
    if doc["q"] is None:
        return PhaseWord(doc["n"], None, np.array(doc["angles"], dtype=np.float64))
    return PhaseWord(doc["n"], doc["q"], np.array(doc["exponents"], dtype=np.int64))
