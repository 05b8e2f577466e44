"""Outer-loop parameter search: monotone basin hopping around a BFGS local
refinement, penalty sweeps, and level curves."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .encoding import ColoringProblem, SpaceKind
from .mixers import MixerFamily, MixerMode, MixerSpec
from .qaoa import QaoaParams, QaoaRunSpec, run_qaoa


class OptimizationError(RuntimeError):
    pass


@dataclass(frozen=True)
class OptimizerConfig:
    seed: int = 0
    hops: int = 20
    step_scale: float = 0.5
    max_iters: int = 200
    gradient_step: float = 1e-5
    tol: float = 1e-8
    restarts: int = 1

    def __post_init__(self):
        if self.seed < 0 or self.hops < 0 or self.restarts < 1:
            raise ValueError("seed/hops must be >= 0 and restarts >= 1")
        if self.step_scale <= 0 or self.gradient_step <= 0 or self.tol <= 0:
            raise ValueError("step_scale, gradient_step and tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass
class OptResult:
    best_params: QaoaParams
    best_r: float
    trace: list  # (hop index, r) after each local search
    evaluations: int

    def trace_csv(self) -> str:
        lines = ["hop,r,params"]
        for hop, r, params in self.trace:
            flat = " ".join(repr(v) for v in params.flat())
            lines.append(f"{hop},{r!r},{flat}")
        return "\n".join(lines) + "\n"


def local_search(objective, start: QaoaParams, cfg: OptimizerConfig):
    """Quasi-Newton ascent of the objective from `start`.

    Returns (params, r) with r the best value actually evaluated, so the
    result never falls below objective(start).
    """
    counter = {"n": 0}
    best = {"x": np.asarray(start.flat(), dtype=float), "f": None}

    def f(x):
        val = objective(QaoaParams.from_flat(x))
        if not np.isfinite(val):
            raise OptimizationError(
                f"non-finite objective {val} at parameters {list(x)}"
            )
        counter["n"] += 1
        if best["f"] is None or val > best["f"]:
            best["f"] = val
            best["x"] = np.array(x, dtype=float)
        return -val

    def jac(x):
        h = cfg.gradient_step
        g = np.empty(len(x))
        for i in range(len(x)):
            xp, xm = np.array(x), np.array(x)
            xp[i] += h
            xm[i] -= h
            g[i] = (f(xp) - f(xm)) / (2 * h)
        return g

    x0 = np.asarray(start.flat(), dtype=float)
    f(x0)  # seed the best-seen tracker with the start point
    minimize(
        f,
        x0,
        jac=jac,
        method="BFGS",
        options={"maxiter": cfg.max_iters, "gtol": cfg.tol},
    )
    return QaoaParams.from_flat(best["x"]), float(best["f"]), counter["n"]


def _spec_objective(spec: QaoaRunSpec):
    def objective(params: QaoaParams) -> float:
        return run_qaoa(spec, params, keep_state=False).approximation_ratio

    return objective


def basin_hopping_objective(objective, p: int, cfg: OptimizerConfig) -> OptResult:
    """Monotone basin hopping: Gaussian perturbations of the incumbent, each
    refined by local_search; only strict improvements are accepted."""
    rng = np.random.default_rng(cfg.seed)
    trace = []
    evals = 0
    best_params, best_r = None, -np.inf
    hop_index = 0
    for restart in range(cfg.restarts):
        if restart == 0:
            x0 = np.full(2 * p, 0.1)
        else:
            x0 = rng.uniform(0.0, np.pi, size=2 * p)
        params, r, ne = local_search(objective, QaoaParams.from_flat(x0), cfg)
        evals += ne
        trace.append((hop_index, r, params))
        hop_index += 1
        if r > best_r:
            best_params, best_r = params, r
        incumbent = np.asarray(params.flat(), dtype=float)
        incumbent_r = r
        for _ in range(cfg.hops):
            x = incumbent + rng.normal(scale=cfg.step_scale, size=2 * p)
            params, r, ne = local_search(objective, QaoaParams.from_flat(x), cfg)
            evals += ne
            trace.append((hop_index, r, params))
            hop_index += 1
            if r > incumbent_r:
                incumbent = np.asarray(params.flat(), dtype=float)
                incumbent_r = r
            if r > best_r:
                best_params, best_r = params, r
    return OptResult(best_params, float(best_r), trace, evals)


def basin_hopping(spec: QaoaRunSpec, p: int, cfg: OptimizerConfig) -> OptResult:
    return basin_hopping_objective(_spec_objective(spec), p, cfg)


def penalty_sweep(
    problem: ColoringProblem, alpha_values, p: int, cfg: OptimizerConfig, init=("plus_all",)
):
    """Per-alpha basin-hopping optimum of r for the X mixer in the full binary
    space.  alpha = 0 is always included as the reference point."""
    alphas = sorted(set(float(a) for a in alpha_values) | {0.0})
    mixer = MixerSpec(MixerFamily.X, MixerMode.SIMULTANEOUS, problem.kappa)
    out = []
    for alpha in alphas:
        spec = QaoaRunSpec(problem, mixer, init, SpaceKind.FULL_BINARY, alpha)
        res = basin_hopping(spec, p, cfg)
        out.append((alpha, res.best_r))
    return out


def level_curve(spec: QaoaRunSpec, p_max: int, cfg: OptimizerConfig):
    """Independent basin hopping per level p = 0..p_max (seeds cfg.seed + p).
    Returns rows (p, best_r, prob_optimal, best_params)."""
    if p_max > 10:
        raise ValueError("p_max capped at 10")
    rows = []
    baseline = run_qaoa(spec, QaoaParams((), ()), keep_state=False)
    rows.append((0, baseline.approximation_ratio, baseline.prob_optimal, None))
    for p in range(1, p_max + 1):
        cfg_p = OptimizerConfig(
            seed=cfg.seed + p,
            hops=cfg.hops,
            step_scale=cfg.step_scale,
            max_iters=cfg.max_iters,
            gradient_step=cfg.gradient_step,
            tol=cfg.tol,
            restarts=cfg.restarts,
        )
        res = basin_hopping(spec, p, cfg_p)
        final = run_qaoa(spec, res.best_params, keep_state=False)
        rows.append((p, res.best_r, final.prob_optimal, res.best_params))
    return rows
