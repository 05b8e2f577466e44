"""Exact complex state-vector simulation over full-binary and feasible spaces.

Qubit q is bit q of the basis index (bit 0 least significant).  Feasible-space
states are indexed base-kappa with node 0 as the most significant digit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import (
    ColoringProblem,
    EncodingError,
    SpaceDescriptor,
    SpaceKind,
    DiagonalOperator,
    feasible_bitstrings,
    feasible_index,
    one_hot_bitstring,
)

UNITARY_TOL = 1e-9
NORM_TOL = 1e-8


class SimulationError(ValueError):
    pass


@dataclass
class StateVector:
    space: SpaceDescriptor
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if len(self.amplitudes) != self.space.dimension:
            raise SimulationError("amplitude length does not match space dimension")

    @property
    def norm(self) -> float:
        return float(np.sqrt((np.abs(self.amplitudes) ** 2).sum()))

    def copy(self) -> "StateVector":
        return StateVector(self.space, self.amplitudes.copy())

    def to_csv(self) -> str:
        lines = ["index,re,im"]
        for i, a in enumerate(self.amplitudes):
            lines.append(f"{i},{float(a.real)!r},{float(a.imag)!r}")
        return "\n".join(lines) + "\n"


def check_unitary(U: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    d = U.shape[0]
    if U.shape != (d, d):
        raise SimulationError("matrix is not square")
    err = np.abs(U.conj().T @ U - np.eye(d)).max()
    if err > tol:
        raise SimulationError(f"matrix not unitary: max deviation {err:.3e}")
    return U


# ---------------------------------------------------------------------------
# Initial states

def init_wstate(problem: ColoringProblem, space: SpaceDescriptor) -> StateVector:
    """Uniform positive superposition over all kappa^n feasible states."""
    amp = np.zeros(space.dimension, dtype=complex)
    fdim = problem.kappa ** problem.n
    if space.kind is SpaceKind.FEASIBLE:
        amp[:] = 1.0 / np.sqrt(fdim)
    else:
        amp[feasible_bitstrings(problem.n, problem.kappa)] = 1.0 / np.sqrt(fdim)
    return StateVector(space, amp)


def init_classical(problem: ColoringProblem, space: SpaceDescriptor, assignment) -> StateVector:
    amp = np.zeros(space.dimension, dtype=complex)
    if space.kind is SpaceKind.FEASIBLE:
        amp[feasible_index(assignment, problem.kappa)] = 1.0
    else:
        amp[one_hot_bitstring(assignment, problem.kappa)] = 1.0
    return StateVector(space, amp)


def init_plus_all(space: SpaceDescriptor) -> StateVector:
    if space.kind is not SpaceKind.FULL_BINARY:
        raise SimulationError("PlusAll state requires the full binary space")
    dim = space.dimension
    return StateVector(space, np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))


def init_basis_string(space: SpaceDescriptor, bits: int) -> StateVector:
    if space.kind is not SpaceKind.FULL_BINARY:
        raise SimulationError("BasisString state requires the full binary space")
    if not (0 <= bits < space.dimension):
        raise SimulationError("basis index out of range")
    amp = np.zeros(space.dimension, dtype=complex)
    amp[bits] = 1.0
    return StateVector(space, amp)


# ---------------------------------------------------------------------------
# Operations

def apply_diagonal_phase(state: StateVector, diag: DiagonalOperator, gamma: float) -> StateVector:
    if diag.space != state.space:
        raise SimulationError("diagonal operator space does not match state space")
    state.amplitudes *= np.exp(-1j * gamma * diag.values)
    return state


def apply_node_unitary(state: StateVector, node: int, U: np.ndarray) -> StateVector:
    """Strided kappa-dim transform on digit `node` of a feasible-space state."""
    if state.space.kind is not SpaceKind.FEASIBLE:
        raise SimulationError("node unitaries act on the feasible space")
    n, kappa = state.space.n, state.space.kappa
    if not (0 <= node < n):
        raise SimulationError(f"node {node} out of range")
    U = check_unitary(U)
    if U.shape != (kappa, kappa):
        raise SimulationError(f"expected {kappa}x{kappa} unitary")
    psi = state.amplitudes.reshape((kappa,) * n)
    psi = np.tensordot(U, psi, axes=([1], [node]))
    psi = np.moveaxis(psi, 0, node)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def apply_gate(state: StateVector, U: np.ndarray, targets) -> StateVector:
    """Apply a k-qubit unitary to the listed qubits of a full-binary state.

    targets[0] is the most significant qubit of U's index convention, i.e. U
    acts on basis |q_{t0} q_{t1} ... >.
    """
    if state.space.kind is not SpaceKind.FULL_BINARY:
        raise SimulationError("bit-indexed gates act on the full binary space")
    targets = list(targets)
    nq = state.space.qubit_count
    if len(set(targets)) != len(targets):
        raise SimulationError("duplicate gate targets")
    for t in targets:
        if not (0 <= t < nq):
            raise SimulationError(f"target qubit {t} out of range")
    k = len(targets)
    U = np.asarray(U, dtype=complex)
    if U.shape != (2 ** k, 2 ** k):
        raise SimulationError("gate dimension does not match target count")
    psi = state.amplitudes.reshape((2,) * nq)
    # qubit q lives on axis nq-1-q
    axes = [nq - 1 - t for t in targets]
    psi = np.moveaxis(psi, axes, range(k))
    shape = psi.shape
    psi = U @ psi.reshape(2 ** k, -1)
    psi = np.moveaxis(psi.reshape(shape), range(k), axes)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def expm_hermitian(H: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """U = exp(-i * scale * H) via eigendecomposition; H must be Hermitian."""
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    if d > 4096:
        raise SimulationError("expm_hermitian capped at dimension 4096")
    if np.abs(H - H.conj().T).max() > UNITARY_TOL:
        raise SimulationError("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(-1j * scale * vals)) @ vecs.conj().T


def postselect_hamming_weight(state: StateVector, w: int):
    """Project onto the Hamming-weight-w subspace.  Returns (probability, state)."""
    if state.space.kind is not SpaceKind.FULL_BINARY:
        raise SimulationError("Hamming-weight postselection needs the full binary space")
    nq = state.space.qubit_count
    if not (0 <= w <= nq):
        raise SimulationError(f"weight {w} out of range [0, {nq}]")
    idx = np.arange(state.space.dimension)
    weights = np.zeros_like(idx)
    for q in range(nq):
        weights += (idx >> q) & 1
    keep = weights == w
    prob = float((np.abs(state.amplitudes[keep]) ** 2).sum())
    if prob <= 0.0:
        raise SimulationError(f"zero probability of Hamming weight {w}")
    amp = np.where(keep, state.amplitudes, 0.0) / np.sqrt(prob)
    return prob, StateVector(state.space, amp)


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def sample(state: StateVector, rng: np.random.Generator, shots: int) -> dict:
    p = probabilities(state)
    p = p / p.sum()
    draws = rng.choice(len(p), size=shots, p=p)
    idx, counts = np.unique(draws, return_counts=True)
    return {int(i): int(c) for i, c in zip(idx, counts)}
