"""HTTP service exposing solve / bench / landscape / wstate / enumerate."""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import circuits, graphs, schemas
from .encoding import ColoringProblem, SpaceKind
from .mixers import MixerFamily, MixerMode, MixerSpec
from .optimize import OptimizerConfig, basin_hopping
from .qaoa import QaoaRunSpec, landscape_scan, run_qaoa
from .optimize import level_curve as _level_curve

app = FastAPI(title="xycolor", version="0.1.0")


@app.exception_handler(graphs.ResourceLimitError)
async def _resource_handler(request: Request, exc: graphs.ResourceLimitError):
    return JSONResponse(status_code=507, content={"kind": "resource", "detail": str(exc)})


@app.exception_handler(ValueError)
async def _config_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"kind": "config", "detail": str(exc)})


def _graph(src: schemas.GraphSource) -> graphs.Graph:
    if src.kind == "named":
        if not src.name:
            raise ValueError("graph source kind 'named' requires a name")
        try:
            return graphs.named_graph(src.name)
        except KeyError as exc:
            raise ValueError(str(exc)) from exc
    if not src.graph6:
        raise ValueError("graph source kind 'graph6' requires a graph6 string")
    return graphs.parse_graph6(src.graph6)


def _mixer(m: schemas.MixerModel, kappa: int) -> MixerSpec:
    return MixerSpec(MixerFamily(m.family), MixerMode(m.mode), kappa)


def _init(i: schemas.InitModel):
    if i.kind == "classical":
        if i.assignment is None:
            raise ValueError("classical init requires an assignment")
        return ("classical", tuple(i.assignment))
    return (i.kind,)


def _optcfg(o: schemas.OptimizerModel) -> OptimizerConfig:
    return OptimizerConfig(
        seed=o.seed,
        hops=o.hops,
        step_scale=o.step_scale,
        max_iters=o.max_iters,
        gradient_step=o.gradient_step,
        tol=o.tol,
        restarts=o.restarts,
    )


@app.post("/solve", response_model=schemas.SolveResponse)
def solve(req: schemas.SolveRequest) -> schemas.SolveResponse:
    problem = ColoringProblem(_graph(req.graph), req.kappa)
    spec = QaoaRunSpec(
        problem, _mixer(req.mixer, req.kappa), _init(req.init), SpaceKind(req.space), req.alpha
    )
    rows = _level_curve(spec, req.p_max, _optcfg(req.optimizer))
    level_rows = [schemas.LevelRow(p=p, r=r, prob_optimal=po) for p, r, po, _ in rows]
    best_p, best_r, _, best_params = max(rows, key=lambda row: row[1])
    from .qaoa import QaoaParams

    params = best_params if best_params is not None else QaoaParams((), ())
    final = run_qaoa(spec, params, keep_state=False)
    best = schemas.BestLevel(
        p=best_p,
        gammas=list(params.gammas),
        betas=list(params.betas),
        r=best_r,
        prob_optimal=final.prob_optimal,
        cost_distribution={str(k): v for k, v in final.cost_distribution.items()},
    )
    return schemas.SolveResponse(
        n=problem.n, m=problem.m, c_max=problem.c_max, level_curve=level_rows, best=best
    )


@app.post("/bench", response_model=schemas.BenchResponse)
def bench(req: schemas.BenchRequest) -> schemas.BenchResponse:
    gset = graphs.filter_by_chromatic(graphs.enumerate_connected_graphs(req.n), req.chi)
    members = gset.members
    if req.limit is not None and req.limit < len(members):
        rng = np.random.default_rng(req.subsample_seed)
        pick = sorted(rng.choice(len(members), size=req.limit, replace=False))
        members = [members[i] for i in pick]
    instances = []
    per_mixer = {m: [] for m in req.mixers}
    for g in members:
        problem = ColoringProblem(g, req.kappa)
        for mixer_name in req.mixers:
            mspec = MixerSpec(MixerFamily(mixer_name), MixerMode.SIMULTANEOUS, req.kappa)
            spec = QaoaRunSpec(problem, mspec, ("wstate",), SpaceKind.FEASIBLE)
            res = basin_hopping(spec, req.p, _optcfg(req.optimizer))
            final = run_qaoa(spec, res.best_params, keep_state=False)
            instances.append(
                schemas.BenchRow(
                    graph6=graphs.to_graph6(g),
                    mixer=mixer_name,
                    r=res.best_r,
                    prob_optimal=final.prob_optimal,
                )
            )
            per_mixer[mixer_name].append((res.best_r, final.prob_optimal))
    aggregates = []
    for mixer_name, vals in per_mixer.items():
        rs = np.array([v[0] for v in vals])
        pos = np.array([v[1] for v in vals])
        aggregates.append(
            schemas.BenchAggregate(
                mixer=mixer_name,
                mean_r=float(rs.mean()),
                median_r=float(np.median(rs)),
                stddev_r=float(rs.std()),
                mean_prob_optimal=float(pos.mean()),
            )
        )
    return schemas.BenchResponse(
        count=len(members), p=req.p, instances=instances, aggregates=aggregates
    )


@app.post("/landscape", response_model=schemas.LandscapeResponse)
def landscape(req: schemas.LandscapeRequest) -> schemas.LandscapeResponse:
    problem = ColoringProblem(_graph(req.graph), req.kappa)
    spec = QaoaRunSpec(
        problem, _mixer(req.mixer, req.kappa), _init(req.init), SpaceKind(req.space), req.alpha
    )
    gammas = np.linspace(req.gamma.start, req.gamma.stop, req.gamma.steps)
    betas = np.linspace(req.beta.start, req.beta.stop, req.beta.steps)
    grid = landscape_scan(spec, gammas, betas)
    rows = [
        (float(g), float(b), float(grid[i, j]))
        for i, g in enumerate(gammas)
        for j, b in enumerate(betas)
    ]
    return schemas.LandscapeResponse(rows=rows)


MAX_WSTATE_SIM_QUBITS = 20


@app.post("/wstate", response_model=schemas.WstateResponse)
def wstate(req: schemas.WstateRequest) -> schemas.WstateResponse:
    n = req.n
    success = None
    if req.method == "sequential":
        circ = circuits.wstate_sequential_circuit(n)
        target = np.zeros(2 ** (n + 1), dtype=complex)
        for q in range(1, n + 1):
            target[1 | (1 << q)] = 1.0 / math.sqrt(n)
    elif req.method == "recursive":
        circ = circuits.wstate_recursive_circuit(n)
        target = circuits.wstate_amplitudes(n)
    else:
        circ, success = circuits.biased_hadamard_wprep(n)
        target = None
    fidelity = None
    if circ.qubit_count <= MAX_WSTATE_SIM_QUBITS:
        amp = np.zeros(2 ** circ.qubit_count, dtype=complex)
        amp[0] = 1.0
        amp = circuits.apply_circuit(circ, amp)
        if target is not None:
            fidelity = float(abs(np.vdot(target, amp)) ** 2)
        else:
            # postselected fidelity with W_n
            w = circuits.wstate_amplitudes(n)
            keep = np.abs(w) > 0
            sub = amp[keep]
            fidelity = float(abs(np.vdot(w[keep], sub / np.linalg.norm(sub))) ** 2)
    return schemas.WstateResponse(
        circuit_text=circ.to_text(),
        gate_counts=circ.gate_counts(),
        cnot_count=circuits.cnot_count(circ),
        fidelity=fidelity,
        success_probability=success,
    )


@app.post("/enumerate", response_model=schemas.EnumerateResponse)
def enumerate_graphs(req: schemas.EnumerateRequest) -> schemas.EnumerateResponse:
    if req.n >= 7 and not req.allow_large:
        raise graphs.ResourceLimitError(
            "n=7 enumeration takes minutes; pass allow_large to proceed"
        )
    gset = graphs.enumerate_connected_graphs(req.n)
    if req.chi is not None:
        gset = graphs.filter_by_chromatic(gset, req.chi)
    lines = [graphs.to_graph6(g) for g in gset.members]
    return schemas.EnumerateResponse(count=len(lines), graph6=lines)
