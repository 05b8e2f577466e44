"""One-hot encoding of coloring problems and diagonal Hamiltonians.

Conventions (used everywhere):
  - qubit (v, c) maps to flat index v*kappa + c, bit 0 least significant;
  - in the feasible (kappa-ary) basis, node 0 is the most significant digit,
    so the index of an assignment (a_0, ..., a_{n-1}) is
    sum_v a_v * kappa**(n-1-v).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .graphs import Graph, ResourceLimitError, max_colorable_subgraph

MAX_FULL_QUBITS = 26  # 2^26 complex amplitudes = 512 MB
MAX_FEASIBLE_DIM = 2 ** 24


class SpaceKind(Enum):
    FULL_BINARY = "full_binary"
    FEASIBLE = "feasible"


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: SpaceKind
    n: int
    kappa: int

    @property
    def qubit_count(self) -> int:
        return self.n * self.kappa

    @property
    def dimension(self) -> int:
        if self.kind is SpaceKind.FULL_BINARY:
            return 2 ** self.qubit_count
        return self.kappa ** self.n


@dataclass
class ColoringProblem:
    graph: Graph
    kappa: int
    _c_max: int = field(default=None, repr=False)

    def __post_init__(self):
        if self.kappa < 2:
            raise ValueError(f"kappa must be >= 2, got {self.kappa}")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def c_max(self) -> int:
        if self._c_max is None:
            self._c_max = max_colorable_subgraph(self.graph, self.kappa)
        return self._c_max

    def space(self, kind: SpaceKind) -> SpaceDescriptor:
        sd = SpaceDescriptor(kind, self.n, self.kappa)
        if kind is SpaceKind.FULL_BINARY and sd.qubit_count > MAX_FULL_QUBITS:
            raise ResourceLimitError(
                f"{sd.qubit_count} qubits exceeds full-binary cap of {MAX_FULL_QUBITS}"
            )
        if kind is SpaceKind.FEASIBLE and sd.dimension > MAX_FEASIBLE_DIM:
            raise ResourceLimitError(
                f"feasible dimension {sd.dimension} exceeds cap {MAX_FEASIBLE_DIM}"
            )
        return sd


@dataclass
class DiagonalOperator:
    space: SpaceDescriptor
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if len(self.values) != self.space.dimension:
            raise ValueError("diagonal length does not match space dimension")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("non-finite diagonal values")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,value\n")
        for i, v in enumerate(self.values):
            buf.write(f"{i},{float(v)!r}\n")
        return buf.getvalue()


# ---------------------------------------------------------------------------
# Assignment indexing

class EncodingError(ValueError):
    pass


def feasible_index(assignment, kappa: int) -> int:
    idx = 0
    for a in assignment:
        if not (0 <= a < kappa):
            raise EncodingError(f"color {a} out of range [0, {kappa})")
        idx = idx * kappa + a
    return idx


def decode_feasible_index(idx: int, n: int, kappa: int):
    out = [0] * n
    for v in range(n - 1, -1, -1):
        out[v] = idx % kappa
        idx //= kappa
    return tuple(out)


def one_hot_bitstring(assignment, kappa: int) -> int:
    bits = 0
    for v, a in enumerate(assignment):
        if not (0 <= a < kappa):
            raise EncodingError(f"color {a} out of range [0, {kappa})")
        bits |= 1 << (v * kappa + a)
    return bits


def decode_one_hot(bits: int, n: int, kappa: int):
    out = []
    for v in range(n):
        block = (bits >> (v * kappa)) & ((1 << kappa) - 1)
        if block == 0 or block & (block - 1):
            raise EncodingError(f"node {v} block {block:0{kappa}b} is not one-hot")
        out.append(block.bit_length() - 1)
    if bits >> (n * kappa):
        raise EncodingError("bits set beyond qubit register")
    return tuple(out)


def _digit_table(n: int, kappa: int) -> np.ndarray:
    """(dim, n) array: colors of every feasible index."""
    idx = np.arange(kappa ** n)
    cols = np.empty((len(idx), n), dtype=np.int64)
    for v in range(n - 1, -1, -1):
        cols[:, v] = idx % kappa
        idx = idx // kappa
    return cols


def _occupation_table(nq: int) -> np.ndarray:
    """(2^nq, nq) array of qubit occupations x_q per basis bit-string."""
    idx = np.arange(2 ** nq, dtype=np.int64)
    return ((idx[:, None] >> np.arange(nq)) & 1).astype(np.int64)


# ---------------------------------------------------------------------------
# Cost / penalty / phase-separator diagonals

def cost_value(problem: ColoringProblem, assignment) -> int:
    assignment = tuple(assignment)
    if len(assignment) != problem.n:
        raise EncodingError("assignment length does not match vertex count")
    for a in assignment:
        if not (0 <= a < problem.kappa):
            raise EncodingError(f"color {a} out of range [0, {problem.kappa})")
    mono = sum(1 for u, v in problem.graph.edges if assignment[u] == assignment[v])
    return problem.m - mono


def build_cost_diagonal(problem: ColoringProblem, space: SpaceDescriptor) -> DiagonalOperator:
    _check_space(problem, space)
    if space.kind is SpaceKind.FEASIBLE:
        cols = _digit_table(problem.n, problem.kappa)
        vals = np.full(space.dimension, float(problem.m))
        for u, v in problem.graph.edges:
            vals -= cols[:, u] == cols[:, v]
        return DiagonalOperator(space, vals)
    # full binary: eigenvalue of H_C per bit-string, x_{v,c} = occupation
    occ = _occupation_table(space.qubit_count)
    kappa = problem.kappa
    vals = np.full(space.dimension, float(problem.m))
    for u, v in problem.graph.edges:
        for c in range(kappa):
            vals -= occ[:, u * kappa + c] * occ[:, v * kappa + c]
    return DiagonalOperator(space, vals)


def build_penalty_diagonal(problem: ColoringProblem) -> DiagonalOperator:
    """f_pen = sum_v (1 - sum_c x_{v,c})^2; zero exactly on one-hot strings."""
    space = problem.space(SpaceKind.FULL_BINARY)
    occ = _occupation_table(space.qubit_count)
    kappa = problem.kappa
    vals = np.zeros(space.dimension)
    for v in range(problem.n):
        s = occ[:, v * kappa:(v + 1) * kappa].sum(axis=1)
        vals += (1 - s) ** 2
    return DiagonalOperator(space, vals.astype(float))


def build_phase_separator_diagonal(
    problem: ColoringProblem, alpha: float, space: SpaceDescriptor
) -> DiagonalOperator:
    """H'_C - alpha * penalty, where H'_C = 4*H_C - (4-kappa)*m."""
    if not np.isfinite(alpha) or alpha < 0:
        raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
    cost = build_cost_diagonal(problem, space).values
    vals = 4.0 * cost - (4 - problem.kappa) * problem.m
    if space.kind is SpaceKind.FULL_BINARY and alpha != 0.0:
        vals = vals - alpha * build_penalty_diagonal(problem).values
    return DiagonalOperator(space, vals)


def cost_from_phase_separator(values: np.ndarray, problem: ColoringProblem) -> np.ndarray:
    """Invert the 4x scaling/shift of H'_C back to properly-colored-edge units."""
    return (np.asarray(values) + (4 - problem.kappa) * problem.m) / 4.0


def feasible_fraction(kappa: int, n: int) -> float:
    if kappa < 1 or n < 1:
        raise ValueError("kappa and n must be >= 1")
    return (kappa / 2 ** kappa) ** n


def feasible_bitstrings(n: int, kappa: int) -> np.ndarray:
    """Full-binary basis indices of all feasible states, in feasible-index order."""
    cols = _digit_table(n, kappa)
    shifts = (np.arange(n) * kappa)[None, :]
    return (np.int64(1) << (cols + shifts)).sum(axis=1)


def _check_space(problem: ColoringProblem, space: SpaceDescriptor):
    if space.n != problem.n or space.kappa != problem.kappa:
        raise ValueError("space descriptor does not match problem")
