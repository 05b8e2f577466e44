"""Level-p QAOA execution over either space, figures of merit, and the
tail-probability bound."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoding import (
    ColoringProblem,
    SpaceKind,
    build_cost_diagonal,
    build_phase_separator_diagonal,
    feasible_bitstrings,
)
from .mixers import (
    MixerFamily,
    MixerSpec,
    node_mixer_full_unitary,
    restricted_mixer_unitary,
    x_mixer_apply,
)
from .statesim import (
    StateVector,
    apply_diagonal_phase,
    apply_gate,
    apply_node_unitary,
    init_basis_string,
    init_classical,
    init_plus_all,
    init_wstate,
)

INFEASIBLE_KEY = "infeasible"


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple
    betas: tuple

    def __post_init__(self):
        if len(self.gammas) != len(self.betas):
            raise ValueError("gammas and betas must have equal length")
        if not all(np.isfinite(self.gammas)) or not all(np.isfinite(self.betas)):
            raise ValueError("angles must be finite")

    @property
    def p(self) -> int:
        return len(self.gammas)

    @staticmethod
    def from_flat(x) -> "QaoaParams":
        x = tuple(float(v) for v in x)
        p = len(x) // 2
        return QaoaParams(x[:p], x[p:])

    def flat(self):
        return tuple(self.gammas) + tuple(self.betas)


@dataclass(frozen=True)
class QaoaRunSpec:
    problem: ColoringProblem
    mixer: MixerSpec
    init: tuple  # ("wstate",) | ("classical", assignment) | ("plus_all",) | ("basis", bits)
    space_kind: SpaceKind
    alpha: float = 0.0

    def __post_init__(self):
        if self.mixer.kappa != self.problem.kappa:
            raise ValueError("mixer kappa does not match problem")
        if self.mixer.family is MixerFamily.X and self.space_kind is not SpaceKind.FULL_BINARY:
            raise ValueError("the X mixer requires the full binary space")
        if self.init[0] in ("plus_all", "basis") and self.space_kind is not SpaceKind.FULL_BINARY:
            raise ValueError(f"{self.init[0]} initial state requires the full binary space")
        if self.space_kind is SpaceKind.FEASIBLE and self.alpha != 0.0:
            raise ValueError("penalty weight only applies in the full binary space")


@dataclass
class RunResult:
    approximation_ratio: float
    prob_optimal: float
    cost_distribution: dict
    final_state: StateVector = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "approximation_ratio": self.approximation_ratio,
            "prob_optimal": self.prob_optimal,
            "cost_distribution": {str(k): v for k, v in self.cost_distribution.items()},
        }


def initial_state(spec: QaoaRunSpec) -> StateVector:
    space = spec.problem.space(spec.space_kind)
    kind = spec.init[0]
    if kind == "wstate":
        return init_wstate(spec.problem, space)
    if kind == "classical":
        return init_classical(spec.problem, space, spec.init[1])
    if kind == "plus_all":
        return init_plus_all(space)
    if kind == "basis":
        return init_basis_string(space, spec.init[1])
    raise ValueError(f"unknown initial state kind {kind!r}")


def apply_mixer(state: StateVector, mixer: MixerSpec, beta: float) -> StateVector:
    if mixer.family is MixerFamily.X:
        return x_mixer_apply(state, beta)
    kappa = mixer.kappa
    if state.space.kind is SpaceKind.FEASIBLE:
        U = restricted_mixer_unitary(mixer, beta)
        for v in range(state.space.n):
            apply_node_unitary(state, v, U)
        return state
    U = node_mixer_full_unitary(mixer, beta)
    for v in range(state.space.n):
        targets = list(range(v * kappa + kappa - 1, v * kappa - 1, -1))
        apply_gate(state, U, targets)
    return state


def run_qaoa(spec: QaoaRunSpec, params: QaoaParams, keep_state: bool = True) -> RunResult:
    space = spec.problem.space(spec.space_kind)
    diag = build_phase_separator_diagonal(spec.problem, spec.alpha, space)
    state = initial_state(spec)
    for gamma, beta in zip(params.gammas, params.betas):
        apply_diagonal_phase(state, diag, gamma)
        apply_mixer(state, spec.mixer, beta)
    r = approximation_ratio(state, spec.problem)
    p_opt = prob_optimal(state, spec.problem)
    dist = cost_distribution(state, spec.problem)
    return RunResult(r, p_opt, dist, state if keep_state else None)


# ---------------------------------------------------------------------------
# Figures of merit

def _feasible_probs_and_costs(state: StateVector, problem: ColoringProblem):
    space = state.space
    cost_feas = build_cost_diagonal(problem, problem.space(SpaceKind.FEASIBLE)).values
    if space.kind is SpaceKind.FEASIBLE:
        probs = np.abs(state.amplitudes) ** 2
    else:
        idx = feasible_bitstrings(problem.n, problem.kappa)
        probs = np.abs(state.amplitudes[idx]) ** 2
    return probs, cost_feas


def approximation_ratio(state: StateVector, problem: ColoringProblem) -> float:
    """Feasibility-projected expected cost over C_max (infeasible mass counts 0)."""
    if problem.c_max == 0:
        raise ValueError("approximation ratio undefined for C_max = 0")
    probs, costs = _feasible_probs_and_costs(state, problem)
    return float((probs * costs).sum() / problem.c_max)


def prob_optimal(state: StateVector, problem: ColoringProblem) -> float:
    probs, costs = _feasible_probs_and_costs(state, problem)
    return float(probs[costs == problem.c_max].sum())


def cost_distribution(state: StateVector, problem: ColoringProblem) -> dict:
    probs, costs = _feasible_probs_and_costs(state, problem)
    dist = {}
    for c in range(problem.m + 1):
        dist[c] = float(probs[costs == c].sum())
    if state.space.kind is SpaceKind.FULL_BINARY:
        dist[INFEASIBLE_KEY] = float(1.0 - probs.sum())
    return dist


# ---------------------------------------------------------------------------
# Landscape scan (p = 1)

def landscape_scan(spec: QaoaRunSpec, gamma_grid, beta_grid) -> np.ndarray:
    """Approximation ratio on the Cartesian grid; result[i, j] is at
    (gamma_grid[i], beta_grid[j])."""
    out = np.empty((len(gamma_grid), len(beta_grid)))
    for i, g in enumerate(gamma_grid):
        for j, b in enumerate(beta_grid):
            res = run_qaoa(spec, QaoaParams((float(g),), (float(b),)), keep_state=False)
            out[i, j] = res.approximation_ratio
    return out


def count_interior_local_maxima(grid: np.ndarray) -> int:
    """Strict local maxima under 4-neighbor comparison, interior cells only."""
    count = 0
    for i in range(1, grid.shape[0] - 1):
        for j in range(1, grid.shape[1] - 1):
            v = grid[i, j]
            if (
                v > grid[i - 1, j]
                and v > grid[i + 1, j]
                and v > grid[i, j - 1]
                and v > grid[i, j + 1]
            ):
                count += 1
    return count


# ---------------------------------------------------------------------------
# Tail bound (mean-to-tail guarantee for bounded discrete values)

def tail_bound(mu: float, l: float, value_set) -> float:
    """Pr(X > l) >= (mu - l) / (a_K - l), clamped to [0, 1]."""
    values = sorted(value_set)
    if l not in values:
        raise ValueError("l must be a member of the value set")
    if mu < l:
        raise ValueError(f"mean {mu} below threshold {l}")
    a_max = values[-1]
    if a_max == l:
        return 0.0
    return min(1.0, max(0.0, (mu - l) / (a_max - l)))


def tail_probability(dist: dict, l: float) -> float:
    """Exact Pr(cost > l) from a cost distribution (infeasible mass counts 0)."""
    return float(sum(p for k, p in dist.items() if k != INFEASIBLE_KEY and k > l))


def distribution_mean(dist: dict) -> float:
    return float(sum(k * p for k, p in dist.items() if k != INFEASIBLE_KEY))
