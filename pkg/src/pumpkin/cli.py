"""Command-line front end.

Exit codes: 0 success (or feasible / certificate valid), 1 infeasible or
failed verification, 2 malformed input, 3 search budget exhausted.
"""

from __future__ import annotations

import dataclasses
import sys
import time

import click

from . import instances
from .approx import ApproxCertificate, approx_cover_pack, verify_certificate
from .config import Config, config_from_env
from .detect import AnchoredQuery, Budget, has_pumpkin, max_pumpkin
from .errors import BudgetExceeded, PumpkinError
from .exact import branch_cover, brute_min_hitting, ic_cover
from .graph import MultiGraph
from .reduce import c_reduce
from .report import bench_corpus, dumps


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path: str) -> tuple[instances.InstanceFile, MultiGraph]:
    try:
        inst = instances.load(path)
        return inst, inst.graph()
    except OSError as exc:
        _fail(2, f"cannot read {path}: {exc}")
    except (ValueError, PumpkinError) as exc:
        _fail(2, f"bad instance {path}: {exc}")
    raise AssertionError("unreachable")


@click.group()
@click.option("--budget", type=int, default=None, help="Detection node budget.")
@click.option("--f-scale", type=float, default=None, help="Certificate constant override.")
@click.pass_context
def main(ctx: click.Context, budget: int | None, f_scale: float | None) -> None:
    """Covering and packing pumpkin minors in multigraphs."""
    cfg = config_from_env()
    overrides = {}
    if budget is not None:
        overrides["detect_budget"] = budget
    if f_scale is not None:
        overrides["f_scale"] = f_scale
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    ctx.obj = cfg


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("-c", "--cross", "c", type=int, required=True, help="Pumpkin multiplicity c.")
@click.option("--maximum", is_flag=True, help="Also report the largest attainable c.")
@click.pass_obj
def detect(cfg: Config, input_path: str, c: int, maximum: bool) -> None:
    """Decide whether the instance has a c-pumpkin minor."""
    _, g = _load(input_path)
    if c < 1:
        _fail(2, "c must be at least 1")
    try:
        t0 = time.perf_counter()
        wit = has_pumpkin(g, c, cfg, Budget(cfg.detect_budget))
        payload: dict = {
            "c": c,
            "n": g.n,
            "has_pumpkin": wit is not None,
            "wall_time": time.perf_counter() - t0,
        }
        if wit is not None:
            payload["witness"] = wit.to_json()
        if maximum:
            value, best = max_pumpkin(AnchoredQuery(graph=g), cfg=cfg)
            payload["max_c"] = value
            if best is not None:
                payload["max_witness"] = best.to_json()
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    click.echo(dumps(payload), nl=False)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("-c", "--cross", "c", type=int, required=True)
@click.pass_obj
def reduce(cfg: Config, input_path: str, c: int) -> None:
    """Apply the degree-one and outgrowth replacement rules to a fixpoint."""
    _, g = _load(input_path)
    if c < 1:
        _fail(2, "c must be at least 1")
    try:
        t0 = time.perf_counter()
        trace = c_reduce(g, c, cfg)
        payload = trace.to_json()
        payload["original_n"] = g.n
        payload["result_n"] = trace.result.n
        payload["wall_time"] = time.perf_counter() - t0
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    click.echo(dumps(payload), nl=False)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("-c", "--cross", "c", type=int, required=True)
@click.pass_obj
def approx(cfg: Config, input_path: str, c: int) -> None:
    """Emit a hitting set and disjoint packing with the certified gap."""
    _, g = _load(input_path)
    if c < 1:
        _fail(2, "c must be at least 1")
    try:
        t0 = time.perf_counter()
        cert = approx_cover_pack(g, c, cfg)
        payload = cert.to_json()
        payload["wall_time"] = time.perf_counter() - t0
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    click.echo(dumps(payload), nl=False)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("-c", "--cross", "c", type=int, required=True)
@click.option("-k", "--budget-k", "k", type=int, required=True, help="Cover size bound.")
@click.option(
    "--method",
    type=click.Choice(["branch", "ic", "brute"]),
    default="branch",
    show_default=True,
)
@click.pass_obj
def exact(cfg: Config, input_path: str, c: int, k: int, method: str) -> None:
    """Decide whether some size-k vertex set hits every c-pumpkin minor."""
    _, g = _load(input_path)
    if c < 1 or k < 0:
        _fail(2, "need c >= 1 and k >= 0")
    try:
        if method == "branch":
            res = branch_cover(g, c, k, cfg)
        elif method == "ic":
            res = ic_cover(g, c, k, cfg)
        else:
            res = brute_min_hitting(g, c, k_max=k, cfg=cfg)
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    except PumpkinError as exc:
        _fail(2, str(exc))
    click.echo(dumps(res.to_json()), nl=False)
    sys.exit(0 if res.feasible else 1)


@main.command()
@click.argument("input_path", type=click.Path())
@click.option("--payload", type=click.Path(), required=True, help="Certificate JSON file.")
@click.pass_obj
def verify(cfg: Config, input_path: str, payload: str) -> None:
    """Check a previously emitted certificate against the instance."""
    import json as _json

    _, g = _load(input_path)
    try:
        with open(payload, "r", encoding="utf-8") as fh:
            cert = ApproxCertificate.from_json(_json.load(fh))
    except OSError as exc:
        _fail(2, f"cannot read {payload}: {exc}")
    except (KeyError, TypeError, ValueError) as exc:
        _fail(2, f"bad certificate payload: {exc}")
    try:
        clause = verify_certificate(g, cert, cfg)
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    click.echo(dumps({"valid": clause is None, "reason": clause}), nl=False)
    sys.exit(0 if clause is None else 1)


@main.command()
@click.argument("family", type=click.Choice(sorted(instances.GENERATORS)))
@click.option("-o", "--output", type=click.Path(), required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-n", "--vertices", type=int, default=24, show_default=True)
@click.option("--edge-prob", type=float, default=0.3, show_default=True)
@click.option("--max-mult", type=int, default=3, show_default=True)
@click.option("--count", type=int, default=4, show_default=True, help="Planted gadgets.")
@click.option("-c", "--cross", "c", type=int, default=2, show_default=True)
@click.option("--glue", type=click.Choice(["path", "tree", "disjoint"]), default="path")
@click.option("--cycles", type=int, default=6, show_default=True)
@click.option("--max-cycle", type=int, default=6, show_default=True)
@click.option("--path-len", type=int, default=32, show_default=True)
@click.option("--quills", type=int, default=10, show_default=True)
@click.option("--spread", type=int, default=4, show_default=True)
@click.option("--degree", type=int, default=3, show_default=True)
def gen(
    family: str, output: str, seed: int, vertices: int, edge_prob: float,
    max_mult: int, count: int, c: int, glue: str, cycles: int, max_cycle: int,
    path_len: int, quills: int, spread: int, degree: int,
) -> None:
    """Write a seeded instance from one of the generator families."""
    try:
        if family == "random":
            inst = instances.random_multigraph(vertices, edge_prob, max_mult, seed)
        elif family == "planted":
            inst = instances.planted_pumpkins(count, c, glue, seed)
        elif family == "cactus":
            inst = instances.cactus(cycles, max_cycle, seed)
        elif family == "hedgehog":
            inst = instances.hedgehog_instance(path_len, quills, spread, max_mult, seed)
        else:
            inst = instances.regular_graph(vertices, degree, seed)
        instances.save(inst, output)
    except (ValueError, OSError) as exc:
        _fail(2, str(exc))
    click.echo(f"wrote {output}")


@main.command()
@click.argument("corpus_dir", type=click.Path())
@click.option("-c", "--cross", "cs", default="1,2", show_default=True,
              help="Comma-separated multiplicities.")
@click.option("-o", "--output-dir", type=click.Path(), required=True)
@click.pass_obj
def bench(cfg: Config, corpus_dir: str, cs: str, output_dir: str) -> None:
    """Run the pipeline over a corpus; write CSV plus rendered figures."""
    try:
        c_list = [int(tok) for tok in cs.split(",") if tok.strip()]
        if not c_list or any(c < 1 for c in c_list):
            raise ValueError(f"bad c list {cs!r}")
    except ValueError as exc:
        _fail(2, str(exc))
    try:
        csv_path = bench_corpus(corpus_dir, c_list, output_dir, cfg)
    except (ValueError, OSError) as exc:
        _fail(2, str(exc))
    except BudgetExceeded as exc:
        _fail(3, str(exc))
    click.echo(f"wrote {csv_path}")


if __name__ == "__main__":
    main()
