import math

import numpy as np
import pytest

from entstats import states
from entstats.states import (
    EnsembleSpec,
    PhaseWord,
    PureState,
    enumerate_butson,
    enumerate_exponent_blocks,
    fixed_state,
    phase_block,
    phase_word_from_json,
    phase_word_to_json,
    roots_of_unity,
    sample_block,
    sample_butson,
    sample_haar,
    sample_hadamard_typical,
    state_from_json,
    state_to_json,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("butson", 3, q=1)
    with pytest.raises(ValueError):
        EnsembleSpec("haar", 3, q=2)
    with pytest.raises(ValueError):
        EnsembleSpec("gaussian", 3)
    assert EnsembleSpec.butson(3, 2).label() == "butson:2"
    assert EnsembleSpec.haar(3).label() == "haar"
    assert EnsembleSpec.hadamard_typical(3).label() == "hadamard"


def test_sampling_determinism():
    spec = EnsembleSpec.haar(5, seed=42, stream=7)
    a = sample_block(spec, 3, 16)
    b = sample_block(spec, 3, 16)
    assert np.array_equal(a, b)
    c = sample_block(EnsembleSpec.haar(5, seed=42, stream=8), 3, 16)
    assert not np.array_equal(a, c)


def test_substream_independence_smoke():
    # exponent sequences from different streams look uncorrelated
    n = 4
    a = phase_block(EnsembleSpec.butson(n, 2, seed=0, stream=0), 0, 512).ravel()
    b = phase_block(EnsembleSpec.butson(n, 2, seed=0, stream=1), 0, 512).ravel()
    sa, sb = 2.0 * a - 1.0, 2.0 * b - 1.0
    r = float(np.mean(sa * sb))  # both are centered +-1 variables
    assert abs(r) < 4.0 / math.sqrt(sa.size)


def test_haar_normalization_and_marginal():
    st = sample_haar(EnsembleSpec.haar(1, seed=9))
    assert np.abs(np.sum(np.abs(st.amplitudes) ** 2) - 1) < 1e-12
    draws = 100_000
    amps = sample_block(EnsembleSpec.haar(3, seed=10), 0, draws)
    p0 = np.abs(amps[:, 0]) ** 2
    stderr = p0.std(ddof=1) / math.sqrt(draws)
    assert abs(p0.mean() - 1 / 8) < 3 * stderr


def test_butson_amplitude_values():
    st = sample_butson(EnsembleSpec.butson(2, 2, seed=1))
    assert np.all(np.isin(st.amplitudes, [0.5, -0.5]))
    st4 = sample_butson(EnsembleSpec.butson(1, 4, seed=1))
    allowed = np.array([1, 1j, -1, -1j]) / math.sqrt(2)
    assert all(np.min(np.abs(z - allowed)) < 1e-15 for z in st4.amplitudes)


def test_butson_exponent_frequencies():
    draws = phase_block(EnsembleSpec.butson(3, 3, seed=2), 0, 2000).ravel()
    freq = np.mean(draws == 0)
    stderr = math.sqrt(freq * (1 - freq) / draws.size)
    assert abs(freq - 1 / 3) < 3.5 * stderr


def test_flat_modulus_invariant():
    for spec in (EnsembleSpec.butson(4, 3, seed=5), EnsembleSpec.hadamard_typical(4, seed=5)):
        amps = sample_block(spec, 0, 100)
        assert np.max(np.abs(np.abs(amps) ** 2 - 1 / 16)) < 1e-12


def test_hadamard_phase_mean():
    amps = sample_block(EnsembleSpec.hadamard_typical(3, seed=6), 0, 20_000)
    s = amps.ravel() * math.sqrt(8)
    stderr = 1 / math.sqrt(s.size)  # unit phases: component variance 1/2 each
    assert abs(s.real.mean()) < 4 * stderr
    assert abs(s.imag.mean()) < 4 * stderr


def test_enumeration_counts_and_order():
    all3 = list(enumerate_butson(3, 2))
    assert len(all3) == 256
    # first word is all-exponent-zero: the product state with +1 phases
    assert np.allclose(all3[0].amplitudes, np.ones(8) / math.sqrt(8))
    # lexicographic: second word flips only the last exponent
    assert np.allclose(all3[1].amplitudes[:7], np.ones(7) / math.sqrt(8))
    assert np.allclose(all3[1].amplitudes[7], -1 / math.sqrt(8))
    assert sum(1 for _ in enumerate_butson(3, 3)) == 6561
    blocks = list(enumerate_exponent_blocks(4, 2))
    assert sum(len(b) for b in blocks) == 65536


def test_enumeration_block_order_matches_iterator():
    flat = np.concatenate(list(enumerate_exponent_blocks(2, 3)))
    it = list(enumerate_butson(2, 3))
    assert len(it) == len(flat) == 81
    roots = roots_of_unity(3)
    for word, st in zip(flat, it):
        assert np.allclose(roots[word] / 2, st.amplitudes)


def test_enumeration_feasibility_guard():
    with pytest.raises(ValueError, match="67108864"):
        list(enumerate_butson(5, 2))
    with pytest.raises(ValueError):
        list(enumerate_butson(2, 1))


def test_fixed_state():
    st = fixed_state([1, 0, 0, 0])
    assert st.n == 2
    bell = fixed_state(np.array([1, 0, 0, 1]) / math.sqrt(2))
    assert np.abs(np.sum(np.abs(bell.amplitudes) ** 2) - 1) < 1e-15
    with pytest.raises(ValueError):
        fixed_state([1, 0, 0])
    with pytest.raises(ValueError):
        fixed_state([0, 0, 0, 0])
    with pytest.raises(ValueError):
        fixed_state([1, 1, 0, 0])  # norm sqrt(2), outside the 1e-9 gate


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(2, np.array([1.0, 0.0, 0.0, 0.1]))
    with pytest.raises(ValueError):
        PureState(2, np.ones(3))


def test_phase_word_roundtrip():
    w = PhaseWord(2, 4, np.array([0, 1, 2, 3]))
    st = w.to_state()
    assert np.allclose(st.amplitudes, np.array([1, 1j, -1, -1j]) / 2)
    w2 = phase_word_from_json(phase_word_to_json(w))
    assert w2.q == 4 and np.array_equal(w2.values, w.values)
    cont = PhaseWord(1, None, np.array([0.0, np.pi]))
    assert np.allclose(cont.to_state().amplitudes, [1 / math.sqrt(2), -1 / math.sqrt(2)])
    cont2 = phase_word_from_json(phase_word_to_json(cont))
    assert cont2.q is None and np.allclose(cont2.values, cont.values)
    with pytest.raises(ValueError):
        PhaseWord(2, 2, np.array([0, 1, 2, 0]))


def test_state_json_roundtrip():
    st = sample_haar(EnsembleSpec.haar(3, seed=13))
    back = state_from_json(state_to_json(st))
    assert back.n == 3
    assert np.allclose(back.amplitudes, st.amplitudes, atol=1e-15)


def test_roots_of_unity_exact_quarters():
    for q in (2, 4, 8, 12):
        w = roots_of_unity(q)
        assert w[0] == 1.0 and w[q // 2] == -1.0
        if q % 4 == 0:
            assert w[q // 4] == 1j and w[3 * q // 4] == -1j
        assert np.max(np.abs(np.abs(w) - 1)) < 1e-15


def test_sampler_kind_guards():
    with pytest.raises(ValueError):
        sample_haar(EnsembleSpec.butson(2, 2))
    with pytest.raises(ValueError):
        sample_butson(EnsembleSpec.haar(2))
    with pytest.raises(ValueError):
        sample_hadamard_typical(EnsembleSpec.haar(2))
