"""Request/response models for the HTTP service (and the CLI thin client)."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field


class StrictModel(BaseModel):
    model_config = {"extra": "forbid"}


class GraphSource(StrictModel):
    kind: Literal["named", "graph6"]
    name: Optional[str] = None
    graph6: Optional[str] = None


class MixerModel(StrictModel):
    family: Literal["x", "xy_ring", "xy_complete"] = "xy_ring"
    mode: Literal["simultaneous", "parity_partitioned", "binary_partitioned"] = "simultaneous"


class InitModel(StrictModel):
    kind: Literal["wstate", "classical", "plus_all"] = "wstate"
    assignment: Optional[List[int]] = None


class OptimizerModel(StrictModel):
    seed: int = 0
    hops: int = 10
    step_scale: float = 0.5
    max_iters: int = 200
    gradient_step: float = 1e-5
    tol: float = 1e-8
    restarts: int = 1


class SolveRequest(StrictModel):
    graph: GraphSource
    kappa: int = Field(ge=2)
    mixer: MixerModel = MixerModel()
    init: InitModel = InitModel()
    space: Literal["feasible", "full_binary"] = "feasible"
    alpha: float = 0.0
    p_max: int = Field(default=1, ge=0, le=10)
    optimizer: OptimizerModel = OptimizerModel()


class LevelRow(StrictModel):
    p: int
    r: float
    prob_optimal: float


class BestLevel(StrictModel):
    p: int
    gammas: List[float]
    betas: List[float]
    r: float
    prob_optimal: float
    cost_distribution: dict


class SolveResponse(StrictModel):
    n: int
    m: int
    c_max: int
    level_curve: List[LevelRow]
    best: BestLevel


class BenchRequest(StrictModel):
    n: int = Field(ge=2, le=7)
    chi: int = Field(ge=2)
    kappa: int = Field(ge=2)
    p: int = Field(default=1, ge=1, le=10)
    mixers: List[Literal["xy_ring", "xy_complete"]] = ["xy_ring", "xy_complete"]
    limit: Optional[int] = Field(default=None, ge=1)
    subsample_seed: int = 0
    optimizer: OptimizerModel = OptimizerModel()


class BenchRow(StrictModel):
    graph6: str
    mixer: str
    r: float
    prob_optimal: float


class BenchAggregate(StrictModel):
    mixer: str
    mean_r: float
    median_r: float
    stddev_r: float
    mean_prob_optimal: float


class BenchResponse(StrictModel):
    count: int
    p: int
    instances: List[BenchRow]
    aggregates: List[BenchAggregate]


class GridAxis(StrictModel):
    start: float = 0.0
    stop: float = 3.141592653589793
    steps: int = Field(default=24, ge=2)


class LandscapeRequest(StrictModel):
    graph: GraphSource
    kappa: int = Field(ge=2)
    mixer: MixerModel = MixerModel()
    init: InitModel = InitModel()
    space: Literal["feasible", "full_binary"] = "feasible"
    alpha: float = 0.0
    gamma: GridAxis = GridAxis()
    beta: GridAxis = GridAxis()


class LandscapeResponse(StrictModel):
    rows: List[Tuple[float, float, float]]  # (gamma, beta, r)


class WstateRequest(StrictModel):
    n: int = Field(ge=2)
    method: Literal["sequential", "recursive", "biased-postselect"]


class WstateResponse(StrictModel):
    circuit_text: str
    gate_counts: dict
    cnot_count: int
    fidelity: Optional[float] = None  # None when too large to simulate
    success_probability: Optional[float] = None  # biased-postselect only


class EnumerateRequest(StrictModel):
    n: int = Field(ge=1, le=7)
    chi: Optional[int] = None
    allow_large: bool = False


class EnumerateResponse(StrictModel):
    count: int
    graph6: List[str]


class ErrorBody(StrictModel):
    kind: Literal["config", "resource"]
    detail: str
