import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xycolor.mixers import (
    MixerFamily,
    MixerMode,
    MixerSpec,
    binary_partition_pairs,
    complete_mixer_unitary,
    complete_pairs,
    node_mixer_full_unitary,
    pairs_hamiltonian,
    parity_commutator_check,
    parity_partitions,
    partitioned_complete_unitary,
    partitioned_ring_unitary,
    pauli_xy_hamiltonian,
    restricted_hamiltonian,
    restricted_mixer_unitary,
    ring_eigenvalues,
    ring_mixer_unitary,
    ring_pairs,
)
from xycolor.statesim import check_unitary, expm_hermitian

betas = st.floats(-5, 5, allow_nan=False)


def test_mixer_spec_validation():
    MixerSpec(MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, 3)
    with pytest.raises(ValueError):
        MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.PARITY_PARTITIONED, 4)
    with pytest.raises(ValueError):
        MixerSpec(MixerFamily.XY_RING, MixerMode.BINARY_PARTITIONED, 4)
    with pytest.raises(ValueError):
        MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.BINARY_PARTITIONED, 6)
    with pytest.raises(ValueError):
        MixerSpec(MixerFamily.X, MixerMode.PARITY_PARTITIONED, 2)


def test_pair_sets():
    assert ring_pairs(2) == [(0, 1)]  # single pair, not a doubled edge
    assert ring_pairs(4) == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert complete_pairs(3) == [(0, 1), (0, 2), (1, 2)]


def test_restricted_hamiltonian_entries():
    H = restricted_hamiltonian(MixerFamily.XY_RING, 4)
    assert H[0, 1] == 2.0 and H[0, 3] == 2.0 and H[0, 2] == 0.0
    assert np.allclose(H, H.T)
    Hc = restricted_hamiltonian(MixerFamily.XY_COMPLETE, 4)
    assert np.allclose(Hc, 2 * (np.ones((4, 4)) - np.eye(4)))


@pytest.mark.parametrize("kappa", [2, 3, 4, 5, 6])
def test_ring_unitary_matches_expm(kappa):
    for beta in (0.1, 0.9, -1.7):
        U = ring_mixer_unitary(kappa, beta)
        ref = expm_hermitian(restricted_hamiltonian(MixerFamily.XY_RING, kappa), beta)
        assert np.abs(U - ref).max() < 1e-12
        check_unitary(U)


@pytest.mark.parametrize("kappa", [2, 3, 4, 5, 6])
def test_complete_unitary_matches_expm(kappa):
    for beta in (0.1, 0.9, -1.7):
        U = complete_mixer_unitary(kappa, beta)
        ref = expm_hermitian(restricted_hamiltonian(MixerFamily.XY_COMPLETE, kappa), beta)
        assert np.abs(U - ref).max() < 1e-12


def test_ring_eigenvalues():
    # momentum-space energies of the entry-2 hopping ring
    assert sorted(ring_eigenvalues(2).tolist()) == [-2.0, 2.0]
    ev = ring_eigenvalues(4)
    assert np.allclose(sorted(ev), [-4, 0, 0, 4])
    k = np.arange(5)
    assert np.allclose(np.sort(ring_eigenvalues(5)), np.sort(4 * np.cos(2 * np.pi * k / 5)))


def test_ring_equals_complete_for_small_kappa():
    for kappa in (2, 3):
        assert np.abs(
            ring_mixer_unitary(kappa, 0.8) - complete_mixer_unitary(kappa, 0.8)
        ).max() < 1e-12


def test_parity_partitions():
    odd, even = parity_partitions(4)
    assert odd == [(0, 1), (2, 3)]
    assert even == [(1, 2), (3, 0)]
    with pytest.raises(ValueError):
        parity_partitions(5)


def test_parity_commutes_only_for_small_even_kappa():
    assert parity_commutator_check(4) < 1e-12
    assert parity_commutator_check(6) > 1e-3
    assert parity_commutator_check(8) > 1e-3


@given(betas)
@settings(max_examples=25)
def test_partitioned_ring_kappa4_exact(beta):
    U = partitioned_ring_unitary(4, beta)
    assert np.abs(U - ring_mixer_unitary(4, beta)).max() < 1e-9


def test_partitioned_ring_kappa6_differs():
    U = partitioned_ring_unitary(6, 0.9)
    assert np.abs(U - ring_mixer_unitary(6, 0.9)).max() > 1e-3


def test_binary_partition_pairs():
    parts = binary_partition_pairs(4)
    assert len(parts) == 3
    for t, pairs in enumerate(parts, start=1):
        assert len(pairs) == 2
        for a, b in pairs:
            assert a ^ b == t
    with pytest.raises(ValueError):
        binary_partition_pairs(6)


@pytest.mark.parametrize("kappa", [2, 4, 8])
@given(beta=betas)
@settings(max_examples=20)
def test_partitioned_complete_equals_simultaneous(kappa, beta):
    U = partitioned_complete_unitary(kappa, beta)
    assert np.abs(U - complete_mixer_unitary(kappa, beta)).max() < 1e-9


def test_partitioned_complete_order_independent():
    rng = np.random.default_rng(0)
    base = partitioned_complete_unitary(8, 0.63)
    for _ in range(5):
        order = rng.permutation(7).tolist()
        assert np.abs(partitioned_complete_unitary(8, 0.63, order=order) - base).max() < 1e-9


def test_restricted_mixer_unitary_dispatch():
    for fam, mode, kappa in [
        (MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, 5),
        (MixerFamily.XY_COMPLETE, MixerMode.SIMULTANEOUS, 3),
        (MixerFamily.XY_RING, MixerMode.PARITY_PARTITIONED, 4),
        (MixerFamily.XY_COMPLETE, MixerMode.BINARY_PARTITIONED, 4),
    ]:
        U = restricted_mixer_unitary(MixerSpec(fam, mode, kappa), 0.3)
        check_unitary(U)
    with pytest.raises(ValueError):
        restricted_mixer_unitary(MixerSpec(MixerFamily.X, MixerMode.SIMULTANEOUS, 2), 0.3)


# ---------------------------------------------------------------------------
# Pauli-form oracles

@pytest.mark.parametrize("kappa", [2, 3, 4])
def test_pauli_restriction_equals_hopping_matrix(kappa):
    for fam, pairs in [
        (MixerFamily.XY_RING, ring_pairs(kappa)),
        (MixerFamily.XY_COMPLETE, complete_pairs(kappa)),
    ]:
        Hp = pauli_xy_hamiltonian(kappa, pairs)
        idx = [1 << c for c in range(kappa)]
        sub = Hp[np.ix_(idx, idx)].real
        assert np.abs(sub - restricted_hamiltonian(fam, kappa)).max() < 1e-12


@pytest.mark.parametrize("kappa", [2, 3, 4])
def test_node_mixers_preserve_hamming_weight(kappa):
    specs = [
        MixerSpec(MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, kappa),
        MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.SIMULTANEOUS, kappa),
    ]
    if kappa % 2 == 0:
        specs.append(MixerSpec(MixerFamily.XY_RING, MixerMode.PARITY_PARTITIONED, kappa))
    if kappa & (kappa - 1) == 0:
        specs.append(MixerSpec(MixerFamily.XY_COMPLETE, MixerMode.BINARY_PARTITIONED, kappa))
    weights = np.array([bin(b).count("1") for b in range(2 ** kappa)])
    for spec in specs:
        U = node_mixer_full_unitary(spec, 0.77)
        cross = U[weights[:, None] != weights[None, :]]
        assert np.abs(cross).max() < 1e-12


def test_node_mixer_restricts_to_kappa_unitary():
    for kappa in (2, 3, 4):
        spec = MixerSpec(MixerFamily.XY_RING, MixerMode.SIMULTANEOUS, kappa)
        U = node_mixer_full_unitary(spec, 0.31)
        idx = [1 << c for c in range(kappa)]
        assert np.abs(U[np.ix_(idx, idx)] - ring_mixer_unitary(kappa, 0.31)).max() < 1e-9
