"""Gate-level IR, verified compilers (phase separator, mixers), and W-state
preparation circuits.

Gate matrices follow the convention of statesim.apply_gate: the first target
listed is the most significant index of the gate matrix; qubit 0 is the least
significant bit of a basis index.  Circuit gates are applied in list order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mixers
from .encoding import ColoringProblem, build_phase_separator_diagonal, SpaceKind
from .statesim import SimulationError, check_unitary


class CompileError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gates

def _ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta):
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


def _gh(u, v):
    # generalized Hadamard C^dag X C for real (u, v); Hermitian, det -1
    return np.array([[2 * u * v, u * u - v * v], [u * u - v * v, -2 * u * v]], dtype=complex)


_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)  # control = first (most significant) target
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def _xy(beta):
    """exp(-i beta (XX+YY)) on two qubits."""
    c, s = math.cos(2 * beta), math.sin(2 * beta)
    U = np.eye(4, dtype=complex)
    U[1, 1] = U[2, 2] = c
    U[1, 2] = U[2, 1] = -1j * s
    return U


def fused_xy_swap_matrix(beta):
    """XY followed by SWAP, fused: corners 1, middle block
    [[-i sin(beta), cos(beta)], [cos(beta), -i sin(beta)]].

    Equals exp(-i beta (XX+YY)/2) @ SWAP.  On the single-excitation block it
    also equals i * exp(-i (beta + pi/2) (XX+YY)/2); the weight-0/2 corners
    differ from that form by the phase i."""
    c, s = math.cos(beta), math.sin(beta)
    U = np.eye(4, dtype=complex)
    U[1, 1] = U[2, 2] = -1j * s
    U[1, 2] = U[2, 1] = c
    return U


@dataclass(frozen=True)
class Gate:
    kind: str
    targets: tuple
    params: tuple = ()
    inner: "Gate" = None  # for kind == "CTRL": targets = (control,) + inner.targets

    def matrix(self) -> np.ndarray:
        k = self.kind
        if k == "X":
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if k == "RY":
            return _ry(self.params[0])
        if k == "RZ":
            return _rz(self.params[0])
        if k == "PHASE":
            return np.diag([1.0, np.exp(1j * self.params[0])])
        if k == "GH":
            return _gh(*self.params)
        if k == "CNOT":
            return _CNOT
        if k == "SWAP":
            return _SWAP
        if k == "ZZPHASE":
            t = self.params[0]
            return np.diag(np.exp(-1j * t * np.array([1, -1, -1, 1])))
        if k == "XY":
            return _xy(self.params[0])
        if k == "XYFUSED":
            return fused_xy_swap_matrix(self.params[0])
        if k == "GPHASE":
            return np.array([[np.exp(1j * self.params[0])]])
        if k == "CTRL":
            inner = self.inner.matrix()
            d = inner.shape[0]
            out = np.eye(2 * d, dtype=complex)
            out[d:, d:] = inner
            return out
        raise CompileError(f"unknown gate kind {k!r}")

    def to_text(self) -> str:
        if self.kind == "CTRL":
            inner = self.inner
            head = f"C-{inner.kind}"
            params = inner.params
        else:
            head = self.kind
            params = self.params
        if params:
            head += "(" + ",".join(repr(float(p)) for p in params) + ")"
        return " ".join([head] + [str(q) for q in self.targets])


def gate(kind, *targets, params=()):
    return Gate(kind, tuple(targets), tuple(params))


def controlled(control, inner: Gate) -> Gate:
    return Gate("CTRL", (control,) + inner.targets, (), inner)


def parse_gate(line: str) -> Gate:
    parts = line.split()
    head, targets = parts[0], tuple(int(q) for q in parts[1:])
    params = ()
    if "(" in head:
        name, rest = head.split("(", 1)
        params = tuple(float(x) for x in rest.rstrip(")").split(","))
    else:
        name = head
    if name.startswith("C-"):
        inner = Gate(name[2:], targets[1:], params)
        return Gate("CTRL", targets, (), inner)
    return Gate(name, targets, params)


@dataclass
class Circuit:
    qubit_count: int
    gates: list = field(default_factory=list)
    final_permutation: list = None  # logical label now held by each position

    def append(self, g: Gate):
        for q in g.targets:
            if not (0 <= q < self.qubit_count):
                raise CompileError(f"target {q} out of range for {self.qubit_count} qubits")
        self.gates.append(g)

    @property
    def depth(self) -> int:
        last = [0] * self.qubit_count
        depth = 0
        for g in self.gates:
            if not g.targets:  # global phase
                continue
            layer = 1 + max(last[q] for q in g.targets)
            for q in g.targets:
                last[q] = layer
            depth = max(depth, layer)
        return depth

    def gate_counts(self) -> dict:
        counts = {}
        for g in self.gates:
            key = f"C-{g.inner.kind}" if g.kind == "CTRL" else g.kind
            counts[key] = counts.get(key, 0) + 1
        return counts

    def to_text(self) -> str:
        return "\n".join(g.to_text() for g in self.gates) + "\n"

    @staticmethod
    def from_text(text: str, qubit_count: int) -> "Circuit":
        c = Circuit(qubit_count)
        for line in text.splitlines():
            line = line.strip()
            if line and not line.startswith("#"):
                c.append(parse_gate(line))
        return c


# ---------------------------------------------------------------------------
# Dense verification oracle

def _apply_gate_to_array(arr: np.ndarray, U: np.ndarray, targets, nq: int) -> np.ndarray:
    """Apply U on the row index of arr (shape (2^nq, cols) or (2^nq,))."""
    cols = arr.shape[1] if arr.ndim == 2 else 1
    psi = arr.reshape((2,) * nq + (cols,))
    axes = [nq - 1 - t for t in targets]
    k = len(targets)
    psi = np.moveaxis(psi, axes, range(k))
    shape = psi.shape
    psi = U @ psi.reshape(2 ** k, -1)
    psi = np.moveaxis(psi.reshape(shape), range(k), axes)
    out = psi.reshape(2 ** nq, cols)
    return out if arr.ndim == 2 else out.reshape(-1)


def apply_circuit(circuit: Circuit, amplitudes: np.ndarray) -> np.ndarray:
    out = np.asarray(amplitudes, dtype=complex)
    for g in circuit.gates:
        if g.kind == "GPHASE":
            out = out * np.exp(1j * g.params[0])
        else:
            out = _apply_gate_to_array(out, g.matrix(), g.targets, circuit.qubit_count)
    return out


def circuit_to_unitary(circuit: Circuit) -> np.ndarray:
    if circuit.qubit_count > 12:
        raise SimulationError("circuit_to_unitary capped at 12 qubits")
    U = np.eye(2 ** circuit.qubit_count, dtype=complex)
    U = apply_circuit(circuit, U)
    return check_unitary(U)


# ---------------------------------------------------------------------------
# SWAP-network phase separator (line connectivity)

def phase_separator_coefficients(problem: ColoringProblem, alpha: float):
    """(h, J, const) with H_PS = sum_q h[q] Z_q + sum_{q<q'} J[q,q'] Z Z + const,
    for H_PS = H'_C - alpha * f_pen in Pauli form."""
    n, kappa = problem.n, problem.kappa
    nq = n * kappa
    deg = problem.graph.degrees
    h = np.zeros(nq)
    J = {}
    for v in range(n):
        for c in range(kappa):
            h[v * kappa + c] = deg[v] - alpha * (2 - kappa) / 2
        if alpha:
            for c in range(kappa):
                for cp in range(c + 1, kappa):
                    J[(v * kappa + c, v * kappa + cp)] = -alpha / 2
    for u, v in problem.graph.edges:
        for c in range(kappa):
            q, qp = sorted((u * kappa + c, v * kappa + c))
            J[(q, qp)] = J.get((q, qp), 0.0) - 1.0
    const = -alpha * problem.n * (kappa + (2 - kappa) ** 2) / 4.0
    return h, J, const


def swap_network_phase_separator(
    problem: ColoringProblem, gamma: float, alpha: float = 0.0
) -> Circuit:
    """Parallel bubble-sort SWAP network on a line of n*kappa qubits.

    Every ZZ coupling of H_PS is applied exactly once through the fused
    SWAP + ZZ gadget (CNOT, RZ, CNOT, CNOT); the final qubit order is the
    reversal.  circuit_to_unitary equals reversal_perm @ exp(-i gamma H_PS).
    """
    nq = problem.n * problem.kappa
    h, J, const = phase_separator_coefficients(problem, alpha)
    c = Circuit(nq)
    if const:
        c.append(gate("GPHASE", params=(-gamma * const,)))
    for q in range(nq):
        if h[q]:
            c.append(gate("RZ", q, params=(2 * gamma * h[q],)))
    cur = list(range(nq))  # logical label at each position
    for layer in range(nq):
        for i in range(layer % 2, nq - 1, 2):
            a, b = cur[i], cur[i + 1]
            theta = gamma * J.get((min(a, b), max(a, b)), 0.0)
            # SWAP * exp(-i theta ZZ) = CX(i,i+1) CX(i+1,i) exp(-i theta Z_{i+1}) CX(i,i+1)
            c.append(gate("CNOT", i, i + 1))
            if theta:
                c.append(gate("RZ", i + 1, params=(2 * theta,)))
            c.append(gate("CNOT", i + 1, i))
            c.append(gate("CNOT", i, i + 1))
            cur[i], cur[i + 1] = cur[i + 1], cur[i]
    if cur != list(range(nq))[::-1]:
        raise CompileError("bubble-sort network did not produce the reversal")
    c.final_permutation = cur
    return c


def reversal_permutation_matrix(nq: int) -> np.ndarray:
    """Basis permutation sending qubit q to qubit nq-1-q."""
    dim = 2 ** nq
    P = np.zeros((dim, dim))
    for b in range(dim):
        rb = 0
        for q in range(nq):
            if (b >> q) & 1:
                rb |= 1 << (nq - 1 - q)
        P[rb, b] = 1.0
    return P


def phase_separator_target(problem: ColoringProblem, gamma: float, alpha: float) -> np.ndarray:
    """Dense target for the swap network: reversal @ exp(-i gamma H_PS)."""
    space = problem.space(SpaceKind.FULL_BINARY)
    diag = build_phase_separator_diagonal(problem, alpha, space).values
    h, J, const = phase_separator_coefficients(problem, alpha)
    return reversal_permutation_matrix(space.qubit_count) @ np.diag(
        np.exp(-1j * gamma * diag)
    )


# ---------------------------------------------------------------------------
# Complete-mixer compilation

SUPPORTED_MIXER_LAYOUTS = "kappa a power of two with all_to_all; kappa=4 with ring"


def compile_complete_mixer(kappa: int, beta: float, connectivity: str = "all_to_all") -> Circuit:
    """Depth kappa-1 binary-flip schedule (all-to-all), or the 3-layer kappa=4
    ring schedule with one fused XY+SWAP."""
    if connectivity == "all_to_all":
        if kappa < 2 or kappa & (kappa - 1):
            raise CompileError(f"unsupported (kappa={kappa}, {connectivity}); supported: "
                               + SUPPORTED_MIXER_LAYOUTS)
        c = Circuit(kappa, final_permutation=list(range(kappa)))
        for pairs in mixers.binary_partition_pairs(kappa):
            for a, b in pairs:
                c.append(gate("XY", a, b, params=(beta,)))
        return c
    if connectivity == "ring" and kappa == 4:
        # partitions ordered {01,23}, {03, fused 12}, then {02,13} which the
        # mid-layer SWAP has made ring-adjacent
        c = Circuit(4)
        c.append(gate("XY", 0, 1, params=(beta,)))
        c.append(gate("XY", 2, 3, params=(beta,)))
        c.append(gate("XY", 3, 0, params=(beta,)))
        c.append(gate("XYFUSED", 1, 2, params=(2 * beta,)))  # XY(beta) * SWAP
        c.append(gate("XY", 0, 1, params=(beta,)))
        c.append(gate("XY", 2, 3, params=(beta,)))
        c.final_permutation = [0, 2, 1, 3]  # colors 1 and 2 end up exchanged
        return c
    raise CompileError(
        f"unsupported (kappa={kappa}, {connectivity}); supported: " + SUPPORTED_MIXER_LAYOUTS
    )


def restrict_to_single_excitation(U: np.ndarray, kappa: int) -> np.ndarray:
    """Project a 2^kappa unitary onto the weight-1 basis |e_c>, c = 0..kappa-1."""
    idx = [1 << c for c in range(kappa)]
    return U[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# W-state preparation

def wstate_amplitudes(n: int) -> np.ndarray:
    amp = np.zeros(2 ** n, dtype=complex)
    for q in range(n):
        amp[1 << q] = 1.0 / math.sqrt(n)
    return amp


def wstate_sequential_circuit(n: int) -> Circuit:
    """Ancilla-assisted sequential builder on n+1 qubits (ancilla = qubit 0).

    Entangler j rotates in the {|00>, |11>} block of (ancilla, qubit j) by
    theta_j with sin(theta_j) = 1/sqrt(n+1-j); simulating on |0...0> leaves
    |1> on the ancilla and W_n on the register.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    c = Circuit(n + 1)
    for j in range(1, n + 1):
        theta = math.asin(1.0 / math.sqrt(n + 1 - j))
        c.append(gate("CNOT", j, 0))
        c.append(gate("X", 0))
        c.append(controlled(0, gate("RY", j, params=(2 * theta,))))
        c.append(gate("X", 0))
        c.append(gate("CNOT", j, 0))
    return c


def _gh_params(k: int):
    # H |0> = (1/sqrt k)|0> + sqrt((k-1)/k)|1>
    c1 = 1.0 / math.sqrt(k)
    c0 = math.sqrt((k - 1) / k)
    t = 0.5 * math.atan2(c1, c0)
    return math.cos(t), math.sin(t)


def wstate_recursive_circuit(n: int) -> Circuit:
    """Ancilla-free builder: the inverse of the recursive reduction of W_n to
    |0...0> via generalized Hadamards and controlled blocks."""
    if n < 2:
        raise ValueError("n must be >= 2")
    c = Circuit(n)
    c.append(gate("GH", 0, params=_gh_params(n)))
    for j in range(1, n - 1):
        c.append(controlled(j - 1, gate("GH", j, params=_gh_params(n - j))))
    for j in range(n - 2, -1, -1):
        c.append(gate("CNOT", j, j + 1))
    c.append(gate("X", 0))
    return c


def wstate_reference_listing() -> Circuit:
    """The published 11-gate 3-qubit program, transcribed verbatim."""
    text = "\n".join(
        [
            f"RY({math.acos(-1/3)!r}) 2",
            f"PHASE({-math.pi/2!r}) 2",
            f"RY({math.pi/4!r}) 1",
            "CNOT 2 1",
            f"RY({-math.pi/4!r}) 1",
            f"RZ({math.pi/2!r}) 1",
            "CNOT 2 1",
            f"RZ({math.pi/2!r}) 1",
            "CNOT 1 0",
            "CNOT 2 1",
            "X 2",
        ]
    )
    return Circuit.from_text(text, 3)


def wstate_reference_report() -> dict:
    """Simulate the reference listing; report weight-1 probabilities, per-string
    phases, and global-phase-insensitive fidelity with the all-positive W_3."""
    circ = wstate_reference_listing()
    amp = np.zeros(8, dtype=complex)
    amp[0] = 1.0
    amp = apply_circuit(circ, amp)
    probs = {q: float(abs(amp[1 << q]) ** 2) for q in range(3)}
    phases = {q: float(np.angle(amp[1 << q])) for q in range(3)}
    fid = float(abs(np.vdot(wstate_amplitudes(3), amp)) ** 2)
    return {
        "weight1_probabilities": probs,
        "weight1_phases": phases,
        "weight1_total": float(sum(probs.values())),
        "fidelity_with_w3": fid,
    }


def biased_hadamard_wprep(n: int):
    """n biased rotations with cos(theta) = sqrt(1 - 1/n).  Postselecting
    Hamming weight 1 yields W_n; returns (circuit, success probability)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    prob = (1 - 1 / n) ** (n - 1)
    c = Circuit(n)
    theta = math.acos(math.sqrt(1 - 1 / n))
    for q in range(n):
        c.append(gate("RY", q, params=(2 * theta,)))
    return c, prob


# ---------------------------------------------------------------------------
# Lowering to {CNOT, RZ, RY, X} (plus global phase) for gate counting

def _lower_gate(g: Gate):
    k = g.kind
    if k in ("X", "RY", "RZ", "CNOT", "GPHASE"):
        return [g]
    if k == "PHASE":
        (t,) = g.params
        return [gate("RZ", g.targets[0], params=(t,)), gate("GPHASE", params=(t / 2,))]
    if k == "GH":
        # GH = i * RY(b) RZ(pi) with b = pi - 4t, (u, v) = (cos t, sin t)
        u, v = g.params
        b = math.pi - 4 * math.atan2(v, u)
        q = g.targets[0]
        return [
            gate("GPHASE", params=(math.pi / 2,)),
            gate("RZ", q, params=(math.pi,)),
            gate("RY", q, params=(b,)),
        ]
    if k == "SWAP":
        a, b = g.targets
        return [gate("CNOT", a, b), gate("CNOT", b, a), gate("CNOT", a, b)]
    if k == "ZZPHASE":
        a, b = g.targets
        (t,) = g.params
        return [gate("CNOT", a, b), gate("RZ", b, params=(2 * t,)), gate("CNOT", a, b)]
    if k == "XY":
        # exp(-i b XX) exp(-i b YY); commuting factors, each via CNOT conjugation
        a, b = g.targets
        (beta,) = g.params
        xx = [
            gate("CNOT", a, b),
            gate("RZ", a, params=(math.pi / 2,)),
            gate("RY", a, params=(2 * beta,)),
            gate("RZ", a, params=(-math.pi / 2,)),
            gate("CNOT", a, b),
        ]
        s_on = [gate("RZ", q, params=(math.pi / 2,)) for q in (a, b)]
        s_off = [gate("RZ", q, params=(-math.pi / 2,)) for q in (a, b)]
        return s_off + xx + s_on + xx
    if k == "XYFUSED":
        a, b = g.targets
        (t,) = g.params
        return _lower_gate(gate("SWAP", a, b)) + _lower_gate(gate("XY", a, b, params=(t / 2,)))
    if k == "CTRL":
        inner = g.inner
        ctrl = g.targets[0]
        if inner.kind == "RY":
            (t,) = inner.params
            q = inner.targets[0]
            return [
                gate("RY", q, params=(t / 2,)),
                gate("CNOT", ctrl, q),
                gate("RY", q, params=(-t / 2,)),
                gate("CNOT", ctrl, q),
            ]
        if inner.kind == "GH":
            # GH = i * V with V = RY(b) RZ(pi) in SU(2), b = pi - 4t;
            # ABC decomposition of the controlled-V
            u, v = inner.params
            b = math.pi - 4 * math.atan2(v, u)
            q = inner.targets[0]
            return [
                gate("RZ", q, params=(math.pi / 2,)),
                gate("CNOT", ctrl, q),
                gate("RZ", q, params=(-math.pi / 2,)),
                gate("RY", q, params=(-b / 2,)),
                gate("CNOT", ctrl, q),
                gate("RY", q, params=(b / 2,)),
                gate("RZ", ctrl, params=(math.pi / 2,)),
                gate("GPHASE", params=(math.pi / 4,)),
            ]
        raise CompileError(f"no lowering for controlled {inner.kind}")
    raise CompileError(f"no lowering for {k}")


def lower_circuit(circuit: Circuit) -> Circuit:
    out = Circuit(circuit.qubit_count, final_permutation=circuit.final_permutation)
    for g in circuit.gates:
        for lg in _lower_gate(g):
            out.append(lg)
    return out


def cnot_count(circuit: Circuit) -> int:
    return sum(1 for g in lower_circuit(circuit).gates if g.kind == "CNOT")


# ---------------------------------------------------------------------------
# Ring state transfer (XY evolution of a single excitation)

def ring_transfer_fidelity(m: int, site: int, t: float) -> float:
    """|<site| exp(-i t H_ring)|1>|^2 from the momentum-space closed form;
    site is 1-based."""
    if m < 2:
        raise ValueError("m must be >= 2")
    if not (1 <= site <= m):
        raise ValueError(f"site {site} out of range [1, {m}]")
    E = mixers.ring_eigenvalues(m)
    omega = 2 * math.pi / m
    k = np.arange(m)
    amp = np.exp(1j * (site - 1) * k * omega - 1j * t * E).sum() / m
    return float(abs(amp) ** 2)


def equal_population_time(m: int, t_max: float = 20.0, grid: int = 4000):
    """Search for a time when every site holds population 1/m.

    Returns (t_best, deviation) with deviation = max_c |F(c,t) - 1/m|;
    grid scan over [0, t_max] followed by golden-section refinement.
    """
    E = mixers.ring_eigenvalues(m)
    omega = 2 * math.pi / m
    k = np.arange(m)
    phases = np.exp(1j * omega * np.outer(np.arange(m), k))  # (site-1, k)

    def deviation(t):
        amps = (phases * np.exp(-1j * t * E)).sum(axis=1) / m
        return float(np.abs(np.abs(amps) ** 2 - 1.0 / m).max())

    ts = np.linspace(0.0, t_max, grid)
    devs = np.array([deviation(t) for t in ts])
    i = int(devs.argmin())
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, grid - 1)]
    phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    for _ in range(200):
        c1 = b - phi * (b - a)
        c2 = a + phi * (b - a)
        if deviation(c1) < deviation(c2):
            b = c2
        else:
            a = c1
    t_best = (a + b) / 2
    return t_best, deviation(t_best)
