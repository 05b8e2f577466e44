"""XY mixer Hamiltonians and unitaries, in the single-excitation (kappa x kappa)
restriction and in full Pauli form.

Conventions: the restricted hopping matrix carries entry 2 per unordered pair in
the mixing set, matching XX+YY acting on the {|01>, |10>} block.  The ring for
kappa=2 is a single pair, not a doubled edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .statesim import check_unitary, expm_hermitian


class MixerFamily(Enum):
    X = "x"
    XY_RING = "xy_ring"
    XY_COMPLETE = "xy_complete"


class MixerMode(Enum):
    SIMULTANEOUS = "simultaneous"
    PARITY_PARTITIONED = "parity_partitioned"
    BINARY_PARTITIONED = "binary_partitioned"


@dataclass(frozen=True)
class MixerSpec:
    family: MixerFamily
    mode: MixerMode
    kappa: int

    def __post_init__(self):
        if self.mode is MixerMode.PARITY_PARTITIONED and self.family is not MixerFamily.XY_RING:
            raise ValueError("parity partitioning applies to the ring mixer only")
        if self.mode is MixerMode.BINARY_PARTITIONED:
            if self.family is not MixerFamily.XY_COMPLETE:
                raise ValueError("binary partitioning applies to the complete mixer only")
            if self.kappa & (self.kappa - 1):
                raise ValueError("binary partitioning requires kappa a power of two")
        if self.family is MixerFamily.X and self.mode is not MixerMode.SIMULTANEOUS:
            raise ValueError("the X mixer has no partitioned variants")


def ring_pairs(kappa: int):
    if kappa == 2:
        return [(0, 1)]
    return [(c, (c + 1) % kappa) for c in range(kappa)]


def complete_pairs(kappa: int):
    return [(c, cp) for c in range(kappa) for cp in range(c + 1, kappa)]


def restricted_hamiltonian(family: MixerFamily, kappa: int) -> np.ndarray:
    """Single-excitation-subspace hopping matrix: entry 2 per mixing pair."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    if family is MixerFamily.XY_RING:
        pairs = ring_pairs(kappa)
    elif family is MixerFamily.XY_COMPLETE:
        pairs = complete_pairs(kappa)
    else:
        raise ValueError("the X mixer has no single-excitation restriction")
    return pairs_hamiltonian(kappa, pairs)


def pairs_hamiltonian(kappa: int, pairs) -> np.ndarray:
    H = np.zeros((kappa, kappa))
    for c, cp in pairs:
        H[c, cp] += 2.0
        H[cp, c] += 2.0
    return H


def ring_mixer_unitary(kappa: int, beta: float) -> np.ndarray:
    """exp(-i beta H_ring) via DFT diagonalization (circulant structure)."""
    H = restricted_hamiltonian(MixerFamily.XY_RING, kappa)
    k = np.arange(kappa)
    # circulant eigenvalues from the first row
    lam = (H[0] @ np.exp(2j * np.pi * np.outer(np.arange(kappa), k) / kappa)).real
    F = np.exp(-2j * np.pi * np.outer(k, k) / kappa) / np.sqrt(kappa)
    return (F.conj().T * np.exp(-1j * beta * lam)) @ F


def ring_eigenvalues(kappa: int) -> np.ndarray:
    """Momentum-space energies of the restricted ring Hamiltonian, k = 0..kappa-1."""
    H = restricted_hamiltonian(MixerFamily.XY_RING, kappa)
    k = np.arange(kappa)
    return (H[0] @ np.exp(2j * np.pi * np.outer(np.arange(kappa), k) / kappa)).real


def complete_mixer_unitary(kappa: int, beta: float) -> np.ndarray:
    """Closed form: uniform vector gets phase e^{-i beta 2(kappa-1)}, the
    orthogonal complement e^{+i beta 2}."""
    if kappa < 2:
        raise ValueError("kappa must be >= 2")
    J = np.full((kappa, kappa), 1.0 / kappa, dtype=complex)
    return np.exp(-1j * beta * 2 * (kappa - 1)) * J + np.exp(2j * beta) * (np.eye(kappa) - J)


def parity_partitions(kappa: int):
    """(odd_pairs, even_pairs) in 0-based labels: odd = (0,1),(2,3),...;
    even = (1,2),(3,4),...,(kappa-1,0)."""
    if kappa % 2 or kappa < 2:
        raise ValueError(
            f"parity partitioning assumes even kappa (two exact matchings); got {kappa}"
        )
    odd = [(c, c + 1) for c in range(0, kappa, 2)]
    even = [(c, (c + 1) % kappa) for c in range(1, kappa, 2)]
    return odd, even


def partitioned_ring_unitary(kappa: int, beta: float) -> np.ndarray:
    """exp(-i beta H_even) exp(-i beta H_odd) in the restricted space."""
    odd, even = parity_partitions(kappa)
    if kappa == 2:
        return expm_hermitian(pairs_hamiltonian(kappa, odd), beta)
    U_odd = expm_hermitian(pairs_hamiltonian(kappa, odd), beta)
    U_even = expm_hermitian(pairs_hamiltonian(kappa, even), beta)
    return U_even @ U_odd


def binary_partition_pairs(kappa: int):
    """kappa-1 partitions pairing c <-> c^t for bit-masks t = 1..kappa-1."""
    if kappa < 2 or kappa & (kappa - 1):
        raise ValueError(f"kappa must be a power of two, got {kappa}")
    partitions = []
    for t in range(1, kappa):
        partitions.append([(c, c ^ t) for c in range(kappa) if c < c ^ t])
    return partitions


def partitioned_complete_unitary(kappa: int, beta: float, order=None) -> np.ndarray:
    """Ordered product of per-partition exponentials; equals the simultaneous
    complete mixer for any order (the restricted partition Hamiltonians commute)."""
    partitions = binary_partition_pairs(kappa)
    if order is not None:
        partitions = [partitions[i] for i in order]
    U = np.eye(kappa, dtype=complex)
    for pairs in partitions:
        U = expm_hermitian(pairs_hamiltonian(kappa, pairs), beta) @ U
    return U


def restricted_mixer_unitary(spec: MixerSpec, beta: float) -> np.ndarray:
    if spec.family is MixerFamily.X:
        raise ValueError("the X mixer does not act in the feasible space")
    if spec.mode is MixerMode.SIMULTANEOUS:
        if spec.family is MixerFamily.XY_RING:
            return ring_mixer_unitary(spec.kappa, beta)
        return complete_mixer_unitary(spec.kappa, beta)
    if spec.mode is MixerMode.PARITY_PARTITIONED:
        return partitioned_ring_unitary(spec.kappa, beta)
    return partitioned_complete_unitary(spec.kappa, beta)


def x_mixer_apply(state, beta: float):
    """Apply exp(-i beta sum_q X_q) = tensor product of single-qubit rotations."""
    from .statesim import SpaceKind, apply_gate

    if state.space.kind is not SpaceKind.FULL_BINARY:
        raise ValueError("the X mixer acts on the full binary space")
    c, s = np.cos(beta), np.sin(beta)
    rx = np.array([[c, -1j * s], [-1j * s, c]])
    for q in range(state.space.qubit_count):
        apply_gate(state, rx, [q])
    return state


def parity_commutator_check(kappa: int) -> float:
    """Spectral norm of [H_even, H_odd] in the single-excitation subspace."""
    if kappa < 4 or kappa % 2:
        raise ValueError("needs even kappa >= 4")
    odd, even = parity_partitions(kappa)
    A = pairs_hamiltonian(kappa, even)
    B = pairs_hamiltonian(kappa, odd)
    C = A @ B - B @ A
    return float(np.linalg.norm(C, ord=2))


# ---------------------------------------------------------------------------
# Dense Pauli construction (oracle for restriction and commutation checks)

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_term(nq: int, ops: dict) -> np.ndarray:
    """Tensor product over nq qubits; ops maps qubit index -> 'X'|'Y'|'Z'.
    Qubit 0 is the least significant bit."""
    out = np.array([[1.0 + 0j]])
    for q in range(nq - 1, -1, -1):
        out = np.kron(out, _PAULI[ops.get(q, "I")])
    return out


def pauli_xy_hamiltonian(nq: int, pairs) -> np.ndarray:
    """sum over pairs of XX + YY on nq qubits."""
    H = np.zeros((2 ** nq, 2 ** nq), dtype=complex)
    for a, b in pairs:
        H += pauli_term(nq, {a: "X", b: "X"}) + pauli_term(nq, {a: "Y", b: "Y"})
    return H


def node_mixer_full_unitary(spec: MixerSpec, beta: float) -> np.ndarray:
    """The 2^kappa-dimensional mixer unitary for one node, for full-binary runs."""
    kappa = spec.kappa
    if spec.family is MixerFamily.X:
        raise ValueError("X mixer is applied qubit-wise, not per node")
    if spec.mode is MixerMode.SIMULTANEOUS:
        pairs = (
            ring_pairs(kappa)
            if spec.family is MixerFamily.XY_RING
            else complete_pairs(kappa)
        )
        return expm_hermitian(pauli_xy_hamiltonian(kappa, pairs), beta)
    if spec.mode is MixerMode.PARITY_PARTITIONED:
        odd, even = parity_partitions(kappa)
        if kappa == 2:
            return expm_hermitian(pauli_xy_hamiltonian(kappa, odd), beta)
        return expm_hermitian(pauli_xy_hamiltonian(kappa, even), beta) @ expm_hermitian(
            pauli_xy_hamiltonian(kappa, odd), beta
        )
    U = np.eye(2 ** kappa, dtype=complex)
    for pairs in binary_partition_pairs(kappa):
        U = expm_hermitian(pauli_xy_hamiltonian(kappa, pairs), beta) @ U
    return U
