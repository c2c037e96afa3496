"""Benchmark reporting: delimited results plus rendered figures.

``bench_corpus`` runs the approximation pipeline over every instance file
in a directory, adds exact oracle numbers where the instance is small
enough, and writes one CSV next to three PNG figures.  All row ordering
is deterministic; wall-clock columns are the only nondeterministic
fields.
"""

from __future__ import annotations

import csv
import json
import math
import time
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .approx import approx_cover_pack
from .config import Config, resolve
from .errors import BudgetExceeded, SizeLimitExceeded
from .instances import load
from .oracle import oracle_nu, oracle_tau

CSV_COLUMNS = [
    "instance",
    "family",
    "c",
    "n",
    "edge_lines",
    "cover_size",
    "packing_size",
    "bound",
    "within_bound",
    "tau",
    "nu",
    "ratio",
    "skips",
    "wall_time",
]


def dumps(payload: object) -> str:
    """Canonical JSON used by the CLI: sorted keys, two-space indent."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def strip_timing(payload: object) -> object:
    """Drop wall-clock fields so two runs of the same input compare equal."""
    if isinstance(payload, dict):
        return {
            k: strip_timing(v) for k, v in payload.items() if k != "wall_time"
        }
    if isinstance(payload, list):
        return [strip_timing(v) for v in payload]
    return payload


def bench_corpus(
    corpus_dir: str,
    cs: Sequence[int],
    out_dir: str,
    cfg: Optional[Config] = None,
    pattern: str = "*.pum",
) -> Path:
    """Run approx (and small-instance oracles) over a corpus; render report.

    Returns the path of the CSV.  Figures land beside it: cover size per
    packed model against the guarantee curve, the cover-to-optimum ratio
    histogram, and runtime against instance size.
    """
    cfg = resolve(cfg)
    corpus = Path(corpus_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = sorted(corpus.glob(pattern))
    if not files:
        raise ValueError(f"no instance files matching {pattern!r} in {corpus}")
    rows: list[dict] = []
    for path in files:
        inst = load(str(path))
        g = inst.graph()
        family = inst.meta_dict().get("family", "")
        for c in cs:
            t0 = time.perf_counter()
            try:
                cert = approx_cover_pack(g, c, cfg)
            except BudgetExceeded:
                rows.append({
                    "instance": path.name, "family": family, "c": c,
                    "n": g.n, "edge_lines": len(inst.edges),
                    "cover_size": "", "packing_size": "", "bound": "",
                    "within_bound": "", "tau": "", "nu": "", "ratio": "",
                    "skips": "budget", "wall_time": f"{time.perf_counter() - t0:.6f}",
                })
                continue
            elapsed = time.perf_counter() - t0
            tau = nu = None
            if g.n <= cfg.oracle_vertex_limit:
                try:
                    tau = oracle_tau(g, c, cfg)
                    nu = oracle_nu(g, c, cfg)
                except SizeLimitExceeded:
                    pass
            ratio = ""
            if tau:
                ratio = f"{len(cert.cover) / tau:.4f}"
            rows.append({
                "instance": path.name,
                "family": family,
                "c": c,
                "n": g.n,
                "edge_lines": len(inst.edges),
                "cover_size": len(cert.cover),
                "packing_size": len(cert.packing),
                "bound": f"{cert.bound:.4f}",
                "within_bound": cert.within_bound,
                "tau": "" if tau is None else tau,
                "nu": "" if nu is None else nu,
                "ratio": ratio,
                "skips": len(cert.skips),
                "wall_time": f"{elapsed:.6f}",
            })
    rows.sort(key=lambda r: (r["instance"], r["c"]))
    csv_path = out / "bench.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    _render_figures(rows, out, cfg)
    return csv_path


def _numeric_rows(rows: list[dict]) -> list[dict]:
    return [r for r in rows if r["cover_size"] != ""]


def _render_figures(rows: list[dict], out: Path, cfg: Config) -> None:
    good = _numeric_rows(rows)
    cs = sorted({r["c"] for r in good})

    fig, ax = plt.subplots(figsize=(7, 5))
    for c in cs:
        sub = [r for r in good if r["c"] == c and r["packing_size"]]
        if not sub:
            continue
        xs = [r["n"] for r in sub]
        ys = [r["cover_size"] / r["packing_size"] for r in sub]
        ax.scatter(xs, ys, s=18, label=f"c={c} measured", alpha=0.7)
    if good:
        n_max = max(r["n"] for r in good)
        grid = list(range(2, max(n_max + 1, 3)))
        for c in cs:
            ax.plot(
                grid,
                [cfg.f_eff(c) * max(math.log2(n), 1.0) for n in grid],
                linestyle="--",
                linewidth=1,
                label=f"c={c} guarantee",
            )
    ax.set_xlabel("vertices")
    ax.set_ylabel("cover size per packed model")
    ax.set_title("Cover cost against the logarithmic guarantee")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "cover_vs_bound.png", dpi=120)
    plt.close(fig)

    ratios = [float(r["ratio"]) for r in good if r["ratio"]]
    fig, ax = plt.subplots(figsize=(6, 4))
    if ratios:
        ax.hist(ratios, bins=min(20, max(5, len(ratios) // 3)), edgecolor="black")
    ax.set_xlabel("cover size / optimum")
    ax.set_ylabel("instances")
    ax.set_title("Approximation ratio where the oracle fits")
    fig.tight_layout()
    fig.savefig(out / "ratio_hist.png", dpi=120)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    for c in cs:
        sub = [r for r in good if r["c"] == c]
        ax.scatter(
            [r["n"] for r in sub],
            [float(r["wall_time"]) for r in sub],
            s=18,
            label=f"c={c}",
            alpha=0.7,
        )
    ax.set_yscale("log")
    ax.set_xlabel("vertices")
    ax.set_ylabel("seconds")
    ax.set_title("Approximation runtime")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out / "runtime.png", dpi=120)
    plt.close(fig)


__all__ = ["bench_corpus", "dumps", "strip_timing", "CSV_COLUMNS"]
