"""Command-line client for the xycolor service.

By default commands run against an in-process service instance (no server
needed); pass --server URL to talk to a running one.  Exit codes: 0 ok,
2 config error, 3 resource limit.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click
import httpx

from . import __version__

EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .app import app

    return TestClient(app, raise_server_exceptions=False)


def _post(server, path, payload):
    with _client(server) as client:
        resp = client.post(path, json=payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {"detail": resp.text}
    detail = body.get("detail", body)
    if resp.status_code == 507 or body.get("kind") == "resource":
        click.echo(f"resource error: {detail}", err=True)
        sys.exit(EXIT_RESOURCE)
    click.echo(f"config error: {detail}", err=True)
    sys.exit(EXIT_CONFIG)


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)


def _provenance(payload) -> str:
    blob = json.dumps(payload, sort_keys=True).encode()
    h = hashlib.sha256(blob).hexdigest()[:16]
    seed = payload.get("optimizer", {}).get("seed", payload.get("subsample_seed", 0))
    return f"# xycolor {__version__} config_sha256={h} seed={seed}"


def _write_csv(path, payload, header, rows):
    lines = [_provenance(payload), header]
    lines += [",".join(str(x) for x in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def _apply_overrides(cfg, **overrides):
    for key, value in overrides.items():
        if value is not None:
            cfg[key] = value
    return cfg


@click.group()
@click.option("--server", default=None, help="URL of a running service; default in-process.")
@click.pass_context
def main(ctx, server):
    ctx.obj = server


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--graph", default=None, help="named graph override")
@click.option("--kappa", type=int, default=None)
@click.option("--p-max", type=int, default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), default="out")
@click.pass_obj
def solve(server, config_path, graph, kappa, p_max, alpha, seed, out):
    """Optimize QAOA levels 0..p_max for one problem instance."""
    cfg = _load_config(config_path)
    if graph is not None:
        cfg["graph"] = {"kind": "named", "name": graph}
    _apply_overrides(cfg, kappa=kappa, p_max=p_max, alpha=alpha)
    if seed is not None:
        cfg.setdefault("optimizer", {})["seed"] = seed
    result = _post(server, "/solve", cfg)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "run_result.json").write_text(json.dumps(result, indent=2) + "\n")
    _write_csv(
        outdir / "level_curve.csv",
        cfg,
        "p,r,prob_optimal",
        [(row["p"], repr(row["r"]), repr(row["prob_optimal"])) for row in result["level_curve"]],
    )
    dist = result["best"]["cost_distribution"]
    _write_csv(
        outdir / "cost_distribution.csv",
        cfg,
        "cost,probability",
        [(k, repr(v)) for k, v in dist.items()],
    )
    click.echo(f"best r {result['best']['r']:.6f} at p={result['best']['p']} -> {outdir}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--n", type=int, default=None)
@click.option("--chi", type=int, default=None)
@click.option("--kappa", type=int, default=None)
@click.option("--p", type=int, default=None)
@click.option("--limit", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--allow-large", is_flag=True, help="permit n=7 sets (slow first run)")
@click.option("--out", type=click.Path(), default="out")
@click.pass_obj
def bench(server, config_path, n, chi, kappa, p, limit, seed, allow_large, out):
    """Benchmark a chromatic-number-filtered graph set with one or two mixers."""
    cfg = _load_config(config_path)
    _apply_overrides(cfg, n=n, chi=chi, kappa=kappa, p=p, limit=limit)
    if seed is not None:
        cfg.setdefault("optimizer", {})["seed"] = seed
    if cfg.get("n", 0) >= 7 and not allow_large:
        click.echo("resource error: n=7 benchmarks need --allow-large", err=True)
        sys.exit(EXIT_RESOURCE)
    result = _post(server, "/bench", cfg)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "instances.csv",
        cfg,
        "graph6,mixer,r,prob_optimal",
        [
            (row["graph6"], row["mixer"], repr(row["r"]), repr(row["prob_optimal"]))
            for row in result["instances"]
        ],
    )
    _write_csv(
        outdir / "aggregate.csv",
        cfg,
        "mixer,mean_r,median_r,stddev_r,mean_prob_optimal",
        [
            (a["mixer"], repr(a["mean_r"]), repr(a["median_r"]), repr(a["stddev_r"]),
             repr(a["mean_prob_optimal"]))
            for a in result["aggregates"]
        ],
    )
    by_mixer = {}
    for row in result["instances"]:
        by_mixer.setdefault(row["mixer"], {})[row["graph6"]] = row["r"]
    if "xy_ring" in by_mixer and "xy_complete" in by_mixer:
        _write_csv(
            outdir / "paired.csv",
            cfg,
            "graph6,r_ring,r_complete",
            [
                (g6, repr(by_mixer["xy_ring"][g6]), repr(by_mixer["xy_complete"][g6]))
                for g6 in by_mixer["xy_ring"]
            ],
        )
    click.echo(f"{result['count']} instances at p={result['p']} -> {outdir}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--graph", default=None)
@click.option("--kappa", type=int, default=None)
@click.option("--out", type=click.Path(), default="out")
@click.pass_obj
def landscape(server, config_path, graph, kappa, out):
    """Scan the p=1 (gamma, beta) approximation-ratio surface."""
    cfg = _load_config(config_path)
    if graph is not None:
        cfg["graph"] = {"kind": "named", "name": graph}
    _apply_overrides(cfg, kappa=kappa)
    result = _post(server, "/landscape", cfg)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        outdir / "landscape.csv",
        cfg,
        "gamma,beta,r",
        [(repr(g), repr(b), repr(r)) for g, b, r in result["rows"]],
    )
    click.echo(f"{len(result['rows'])} grid cells -> {outdir}")


@main.command()
@click.argument("n", type=int)
@click.option(
    "--method",
    type=click.Choice(["sequential", "recursive", "biased-postselect"]),
    default="recursive",
)
@click.option("--out", type=click.Path(), default="out")
@click.pass_obj
def wstate(server, n, method, out):
    """Emit a W-state preparation circuit plus a verification report."""
    result = _post(server, "/wstate", {"n": n, "method": method})
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "circuit.txt").write_text(result["circuit_text"])
    report = {k: v for k, v in result.items() if k != "circuit_text"}
    (outdir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    fid = result["fidelity"]
    msg = f"fidelity {fid:.9f}" if fid is not None else "fidelity: not simulated"
    if result["success_probability"] is not None:
        msg += f", success probability {result['success_probability']:.6f}"
    click.echo(f"{msg}, cnots {result['cnot_count']} -> {outdir}")


@main.command()
@click.argument("n", type=int)
@click.option("--chi", type=int, default=None)
@click.option("--allow-large", is_flag=True, help="permit n=7 (slow first run)")
@click.option("--out", type=click.Path(), default=None, help="graph6 output file")
@click.pass_obj
def enumerate(server, n, chi, allow_large, out):
    """Enumerate connected graphs (optionally chromatic-number filtered)."""
    result = _post(
        server, "/enumerate", {"n": n, "chi": chi, "allow_large": allow_large}
    )
    text = "\n".join(result["graph6"]) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    click.echo(f"count: {result['count']}", err=True)


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .app import app

    uvicorn.run(app, host=host, port=port)
