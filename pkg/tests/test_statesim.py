import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from xycolor.encoding import (
    ColoringProblem,
    SpaceDescriptor,
    SpaceKind,
    build_cost_diagonal,
    feasible_bitstrings,
)
from xycolor.graphs import named_graph
from xycolor.statesim import (
    SimulationError,
    StateVector,
    apply_diagonal_phase,
    apply_gate,
    apply_node_unitary,
    check_unitary,
    expm_hermitian,
    init_basis_string,
    init_classical,
    init_plus_all,
    init_wstate,
    postselect_hamming_weight,
    probabilities,
    sample,
)

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
X = np.array([[0.0, 1.0], [1.0, 0.0]])


def full_space(nq):
    return SpaceDescriptor(SpaceKind.FULL_BINARY, nq, 1)


def random_state(rng, space):
    amp = rng.normal(size=space.dimension) + 1j * rng.normal(size=space.dimension)
    return StateVector(space, amp / np.linalg.norm(amp))


def random_unitary(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, _ = np.linalg.qr(a)
    return q


def test_check_unitary():
    check_unitary(H)
    with pytest.raises(SimulationError):
        check_unitary(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(SimulationError):
        check_unitary(np.ones((2, 3)))


# ---------------------------------------------------------------------------
# initial states

def test_init_wstate_both_spaces():
    prob = ColoringProblem(named_graph("triangle"), 2)
    feas = init_wstate(prob, prob.space(SpaceKind.FEASIBLE))
    assert np.allclose(feas.amplitudes, 1 / np.sqrt(8))
    full = init_wstate(prob, prob.space(SpaceKind.FULL_BINARY))
    assert abs(full.norm - 1) < 1e-12
    idx = feasible_bitstrings(3, 2)
    assert np.allclose(full.amplitudes[idx], 1 / np.sqrt(8))
    mask = np.ones(64, dtype=bool)
    mask[idx] = False
    assert np.all(full.amplitudes[mask] == 0)


def test_init_classical():
    prob = ColoringProblem(named_graph("triangle"), 2)
    st_ = init_classical(prob, prob.space(SpaceKind.FEASIBLE), (1, 0, 1))
    assert st_.amplitudes[5] == 1.0 and st_.norm == 1.0


def test_init_plus_all_and_basis():
    sp = full_space(3)
    plus = init_plus_all(sp)
    assert np.allclose(plus.amplitudes, 1 / np.sqrt(8))
    basis = init_basis_string(sp, 5)
    assert basis.amplitudes[5] == 1.0
    with pytest.raises(SimulationError):
        init_basis_string(sp, 8)
    prob = ColoringProblem(named_graph("triangle"), 2)
    with pytest.raises(SimulationError):
        init_plus_all(prob.space(SpaceKind.FEASIBLE))


# ---------------------------------------------------------------------------
# gates

def test_apply_gate_matches_kron_oracle():
    rng = np.random.default_rng(0)
    sp = full_space(3)
    st_ = random_state(rng, sp)
    U = random_unitary(rng, 2)
    # qubit 0 is the least significant bit
    expect = np.kron(np.eye(4), U) @ st_.amplitudes
    got = apply_gate(st_.copy(), U, [0]).amplitudes
    assert np.allclose(got, expect)
    expect = np.kron(U, np.eye(4)) @ st_.amplitudes
    got = apply_gate(st_.copy(), U, [2]).amplitudes
    assert np.allclose(got, expect)


def test_apply_gate_two_qubit_target_order():
    rng = np.random.default_rng(1)
    sp = full_space(2)
    st_ = random_state(rng, sp)
    U = random_unitary(rng, 4)
    # targets [1, 0]: U indexed as |q1 q0> = natural ordering
    got = apply_gate(st_.copy(), U, [1, 0]).amplitudes
    assert np.allclose(got, U @ st_.amplitudes)
    # swapping the target list permutes U's index convention
    P = np.zeros((4, 4))
    for b in range(4):
        P[((b & 1) << 1) | (b >> 1), b] = 1
    got = apply_gate(st_.copy(), U, [0, 1]).amplitudes
    assert np.allclose(got, P @ U @ P @ st_.amplitudes)


@given(st.integers(0, 10 ** 6), st.integers(0, 3))
@settings(max_examples=30)
def test_apply_gate_preserves_norm(seed, target):
    rng = np.random.default_rng(seed)
    sp = full_space(4)
    st_ = random_state(rng, sp)
    apply_gate(st_, random_unitary(rng, 2), [target])
    assert abs(st_.norm - 1) < 1e-10


def test_apply_gate_validation():
    sp = full_space(2)
    st_ = init_basis_string(sp, 0)
    with pytest.raises(SimulationError):
        apply_gate(st_, np.eye(4), [0, 0])
    with pytest.raises(SimulationError):
        apply_gate(st_, np.eye(4), [0, 2])
    with pytest.raises(SimulationError):
        apply_gate(st_, np.eye(4), [0])


def test_apply_node_unitary_matches_explicit_sum():
    rng = np.random.default_rng(2)
    prob = ColoringProblem(named_graph("triangle"), 3)
    sp = prob.space(SpaceKind.FEASIBLE)
    st_ = random_state(rng, sp)
    U = random_unitary(rng, 3)
    node = 1
    expect = np.zeros(27, dtype=complex)
    for i in range(27):
        digits = [(i // 27 * 0) for _ in range(3)]
        d = [(i // 9) % 3, (i // 3) % 3, i % 3]
        for c in range(3):
            src = d.copy()
            src[node] = c
            j = src[0] * 9 + src[1] * 3 + src[2]
            expect[i] += U[d[node], c] * st_.amplitudes[j]
    got = apply_node_unitary(st_.copy(), node, U).amplitudes
    assert np.allclose(got, expect)


def test_node_unitary_equivalent_to_full_binary_gate():
    # acting on the kappa-ary digit = acting on the node's qubit block
    prob = ColoringProblem(named_graph("triangle"), 2)
    rng = np.random.default_rng(3)
    U = random_unitary(rng, 2)
    # embed U on the single-excitation subspace of 2 qubits
    full = np.eye(4, dtype=complex)
    full[1:3, 1:3] = np.array([[U[0, 0], U[0, 1]], [U[1, 0], U[1, 1]]])
    feas = init_wstate(prob, prob.space(SpaceKind.FEASIBLE))
    binf = init_wstate(prob, prob.space(SpaceKind.FULL_BINARY))
    node = 2
    apply_node_unitary(feas, node, U)
    apply_gate(binf, full, [node * 2 + 1, node * 2])
    idx = feasible_bitstrings(3, 2)
    assert np.allclose(binf.amplitudes[idx], feas.amplitudes)


def test_apply_diagonal_phase():
    prob = ColoringProblem(named_graph("triangle"), 2)
    sp = prob.space(SpaceKind.FEASIBLE)
    diag = build_cost_diagonal(prob, sp)
    st_ = init_wstate(prob, sp)
    apply_diagonal_phase(st_, diag, 0.7)
    assert np.allclose(st_.amplitudes, np.exp(-1j * 0.7 * diag.values) / np.sqrt(8))


# ---------------------------------------------------------------------------
# expm, postselection, sampling

def test_expm_hermitian_matches_scipy():
    rng = np.random.default_rng(4)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    Hm = a + a.conj().T
    got = expm_hermitian(Hm, 0.37)
    expect = scipy.linalg.expm(-1j * 0.37 * Hm)
    assert np.abs(got - expect).max() < 1e-10


def test_expm_hermitian_rejects_non_hermitian():
    with pytest.raises(SimulationError):
        expm_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_postselect_hamming_weight():
    sp = full_space(2)
    st_ = init_plus_all(sp)
    prob, post = postselect_hamming_weight(st_, 1)
    assert abs(prob - 0.5) < 1e-12
    assert np.allclose(np.sort(probabilities(post))[::-1][:2], 0.5)
    with pytest.raises(SimulationError):
        postselect_hamming_weight(init_basis_string(sp, 0), 2)


def test_sample_deterministic_and_normalized():
    sp = full_space(2)
    st_ = init_plus_all(sp)
    counts = sample(st_, np.random.default_rng(5), 1000)
    assert sum(counts.values()) == 1000
    again = sample(st_, np.random.default_rng(5), 1000)
    assert counts == again


def test_state_csv():
    sp = full_space(1)
    st_ = init_basis_string(sp, 1)
    lines = st_.to_csv().strip().splitlines()
    assert lines[0] == "index,re,im"
    assert lines[2].startswith("1,1.0,")
