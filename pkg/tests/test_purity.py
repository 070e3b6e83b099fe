import math

import numpy as np
import pytest

from entstats import purity, states
from entstats._kernels import fallback
from entstats.bitcomb import Bipartition, balanced_bipartitions
from entstats.purity import (
    PuritySample,
    coupling_g,
    g_hat,
    purity_direct,
    purity_me,
    purity_me_batch,
    purity_me_direct,
    purity_rdm,
)
from entstats.states import EnsembleSpec, PureState, fixed_state, sample_block

BELL = fixed_state(np.array([1, 0, 0, 1]) / math.sqrt(2))
GHZ3 = fixed_state(np.array([1, 0, 0, 0, 0, 0, 0, 1]) / math.sqrt(2))

ENSEMBLES = ("haar", "butson:2", "butson:3", "butson:4", "hadamard")


def spec_for(label, n, seed=0):
    from entstats.verify import spec_for as sf

    return sf(label, n, seed)


def random_states(label, n, count, seed=0):
    return sample_block(spec_for(label, n, seed), 0, count)


def test_known_states_rdm():
    assert purity_rdm(BELL, Bipartition(0b01, 2)).value == pytest.approx(0.5, abs=1e-14)
    product = fixed_state([1, 0, 0, 0, 0, 0, 0, 0])
    for mask in (0b001, 0b011, 0b101):
        assert purity_rdm(product, Bipartition(mask, 3)).value == pytest.approx(1.0, abs=1e-14)
    assert purity_rdm(GHZ3, Bipartition(0b001, 3)).value == pytest.approx(0.5, abs=1e-14)
    assert purity_direct(GHZ3, Bipartition(0b001, 3)).value == pytest.approx(0.5, abs=1e-14)


def test_known_states_me():
    assert purity_me(BELL).value == pytest.approx(0.5, abs=1e-14)
    assert purity_me_direct(BELL).value == pytest.approx(0.5, abs=1e-14)
    assert purity_me(GHZ3).value == pytest.approx(0.5, abs=1e-14)
    assert purity_me_direct(GHZ3).value == pytest.approx(0.5, abs=1e-14)
    # +1-phase flat word is the product state (|0>+|1>)^n / 2^(n/2)
    allones = fixed_state(np.ones(8) / math.sqrt(8))
    assert purity_me(allones).value == pytest.approx(1.0, abs=1e-12)
    assert purity_me_direct(allones).value == pytest.approx(1.0, abs=1e-12)


def test_hadamard_n2_mean_over_enumeration():
    # exhaustive q=2, n=2: mean piA equals (2 + 2 - 1) / 4
    vals = [
        purity_direct(st, Bipartition(0b01, 2)).value for st in states.enumerate_butson(2, 2)
    ]
    assert np.mean(vals) == pytest.approx(3 / 4, abs=1e-14)


@pytest.mark.parametrize("label", ENSEMBLES)
def test_oracle_equivalence_fixed(label):
    for n in (2, 3, 4, 5):
        amps = random_states(label, n, 10, seed=21)
        for mask in range(1, (1 << n) - 1):
            bip = Bipartition(mask, n)
            fast = purity.purity_batch(amps, n, bip)
            for row, got in zip(amps, fast):
                want = purity_direct(PureState(n, row), bip).value
                assert abs(got - want) < 1e-10


@pytest.mark.parametrize("label", ENSEMBLES)
def test_oracle_equivalence_me(label):
    for n in (2, 3, 4, 5):
        amps = random_states(label, n, 10, seed=22)
        fast = purity_me_batch(amps, n)
        for row, got in zip(amps, fast):
            want = purity_me_direct(PureState(n, row)).value
            assert abs(got - want) < 1e-10


def test_complement_symmetry_exhaustive():
    for n in (3, 4, 6, 8):
        amps = random_states("haar", n, 2, seed=23)
        for row in amps:
            st = PureState(n, row)
            for mask in range(1, (1 << n) - 1):
                bip = Bipartition(mask, n)
                a = purity_rdm(st, bip).value
                b = purity_rdm(st, bip.complement()).value
                assert abs(a - b) < 1e-10


def test_bounds_fixed_bipartition():
    for label in ENSEMBLES:
        for n in (4, 7, 10):
            bip = Bipartition((1 << (n // 2)) - 1, n)
            vals = purity.purity_batch(random_states(label, n, 2000, seed=24), n, bip)
            assert np.all(vals >= 2.0 ** -(n // 2) - 1e-12)
            assert np.all(vals <= 1.0 + 1e-12)


def test_bounds_average():
    for label in ENSEMBLES:
        for n in (4, 7, 10):
            vals = purity_me_batch(random_states(label, n, 200, seed=25), n)
            assert np.all(vals >= 2.0 ** -(n // 2) - 1e-12)
            assert np.all(vals <= 1.0 + 1e-12)


def test_global_phase_invariance():
    amps = random_states("haar", 5, 20, seed=26)
    phase = np.exp(0.739j)
    base = purity_me_batch(amps, 5)
    rotated = purity_me_batch(amps * phase, 5)
    assert np.max(np.abs(base - rotated)) < 1e-12
    bip = Bipartition(0b00101, 5)
    assert np.max(np.abs(purity.purity_batch(amps, 5, bip)
                         - purity.purity_batch(amps * phase, 5, bip))) < 1e-12


def _permute_qubits(amps, perm):
    """Relabel qubits: bit i of the new index reads bit perm[i] of the old."""
    n = len(perm)
    ks = np.arange(1 << n)
    new_index = np.zeros_like(ks)
    for i, p in enumerate(perm):
        new_index |= ((ks >> p) & 1) << i
    out = np.empty_like(amps)
    out[:, new_index] = amps
    return out


def _permute_mask(mask, perm):
    out = 0
    for i, p in enumerate(perm):
        if (mask >> p) & 1:
            out |= 1 << i
    return out


def test_permutation_covariance():
    rng = np.random.default_rng(27)
    for n in (4, 6, 8):
        amps = random_states("haar", n, 3, seed=28)
        for _ in range(4):
            perm = rng.permutation(n)
            pamps = _permute_qubits(amps, perm)
            for mask in (0b0011, 0b0101, (1 << (n // 2)) - 1):
                a = purity.purity_batch(amps, n, Bipartition(mask, n))
                b = purity.purity_batch(pamps, n, Bipartition(_permute_mask(mask, perm), n))
                assert np.max(np.abs(a - b)) < 1e-10
            assert np.max(np.abs(purity_me_batch(amps, n) - purity_me_batch(pamps, n))) < 1e-10


def test_coupling_g_values():
    for n in (2, 3, 4, 6):
        assert coupling_g(0, 0, n) == pytest.approx(1.0, abs=0)
    assert g_hat(1, 0, 2) == pytest.approx(0.5, abs=0)
    assert coupling_g(0b01, 0b01, 2) == 0.0
    assert coupling_g(0b011, 0b110, 3) == 0.0
    assert g_hat(2, 2, 3) == 0.0  # out-of-range occupation


def test_coupling_g_nonnegative_and_bounded():
    for n in (2, 3, 4, 5):
        vals = [coupling_g(l, m, n) for l in range(1 << n) for m in range(1 << n)]
        assert all(0.0 <= v <= 1.0 for v in vals)


def test_dedupe_flag_matches_full_average():
    for n in (4, 6):
        amps = random_states("butson:2", n, 50, seed=29)
        a = purity_me_batch(amps, n, dedupe=True)
        b = purity_me_batch(amps, n, dedupe=False)
        assert np.max(np.abs(a - b)) < 1e-13


def test_purity_me_averages_balanced_bipartitions():
    st = states.sample_haar(EnsembleSpec.haar(5, seed=30))
    vals = [purity_rdm(st, b).value for b in balanced_bipartitions(5)]
    assert purity_me(st).value == pytest.approx(np.mean(vals), abs=1e-13)


def test_backend_agreement():
    from entstats.purity import _balanced_tables, _src_table

    for n, batch in ((4, 64), (6, 16)):
        amps = random_states("haar", n, batch, seed=31)
        srcs, w, rows = _balanced_tables(n, True)
        assert np.max(np.abs(purity_me_batch(amps, n)
                             - fallback.purity_weighted_batch(amps, srcs, w, rows))) < 1e-12
        src, rows1 = _src_table(n, 0b0011)
        got = purity.purity_batch(amps, n, Bipartition(0b0011, n))
        assert np.max(np.abs(got - fallback.purity_fixed_batch(amps, src, rows1))) < 1e-12


def test_direct_guards():
    big = PureState(9, np.eye(1, 512, 0, dtype=complex)[0])
    with pytest.raises(ValueError):
        purity_direct(big, Bipartition(0b1, 9))
    mid = PureState(6, np.eye(1, 64, 0, dtype=complex)[0])
    with pytest.raises(ValueError):
        purity_me_direct(mid)
    with pytest.raises(ValueError):
        purity_rdm(BELL, Bipartition(0b001, 3))


def test_known_ame_hypergraph_state_n6():
    # graph state on six vertices whose balanced marginals are all maximally
    # mixed; flat +-1 amplitudes from the edge parity, so it lies in the
    # q=2 ensemble and its average purity sits exactly on the 1/8 floor
    edges = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 4), (1, 5), (2, 3), (2, 5), (3, 4)]
    ks = np.arange(64)
    bits = (ks[:, None] >> np.arange(6)) & 1
    parity = np.zeros(64, dtype=np.int64)
    for i, j in edges:
        parity += bits[:, i] * bits[:, j]
    st = fixed_state(((1 - 2 * (parity & 1)) / math.sqrt(64)).astype(complex))
    assert purity_me(st).value == pytest.approx(0.125, abs=1e-12)
    for b in balanced_bipartitions(6):
        assert purity_rdm(st, b).value == pytest.approx(0.125, abs=1e-12)


def test_haar_fixed_purity_mean_small_n():
    # n=2 single-qubit marginal: mean purity (2+2)/(4+1) = 0.8
    vals = purity.purity_batch(random_states("haar", 2, 100_000, seed=33), 2,
                               Bipartition(0b01, 2))
    stderr = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - 0.8) < 3 * stderr


def test_purity_sample_validation():
    with pytest.raises(ValueError):
        PuritySample(0.2, 2, "piA", 0b01)  # below the 0.5 floor for one qubit
    with pytest.raises(ValueError):
        PuritySample(1.1, 2, "piME")
    with pytest.raises(ValueError):
        PuritySample(0.7, 2, "piA")  # missing mask
    with pytest.raises(ValueError):
        PuritySample(0.7, 2, "piME", 0b01)  # stray mask
    s = PuritySample(0.5, 2, "piME")
    assert s.kind == "piME" and s.mask is None
