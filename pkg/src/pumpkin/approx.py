"""Simultaneous approximate hitting set and packing with a certificate.

One loop drives everything: reduce to a fixpoint, extract a small model,
delete its vertices, repeat.  Unwinding the recorded frames turns the
deleted models into a vertex-disjoint packing M and their vertex union
into a hitting set X of the original graph, giving the two-sided bound

    |M| <= nu_c(G) <= tau_c(G) <= |X| <= f_eff(c) * log2(n) * |M|.

The certificate records both families plus the bound arithmetic, and the
construction re-verifies the cover and the packing on the input graph
before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .config import Config, resolve
from .detect import Budget, has_pumpkin
from .graph import MultiGraph, PumpkinModel, verify_model
from .reduce import Z1, ReductionTrace, TraceStep, apply_z2, c_reduce, lift_cover, lift_packing
from .small_model import MODEL, Z1_SUGGESTION, find_small_model


@dataclass(frozen=True)
class ApproxCertificate:
    cover: frozenset[int]
    packing: tuple[PumpkinModel, ...]
    c: int
    n_original: int
    f_eff: float
    log_term: float
    bound: float
    within_bound: bool
    levels: int
    skips: tuple[dict, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "cover": sorted(self.cover),
            "packing": [m.to_json() for m in self.packing],
            "c": self.c,
            "n_original": self.n_original,
            "f_eff": self.f_eff,
            "log_term": self.log_term,
            "bound": self.bound,
            "within_bound": self.within_bound,
            "levels": self.levels,
            "cover_size": len(self.cover),
            "packing_size": len(self.packing),
            "skips": list(self.skips),
        }

    @staticmethod
    def from_json(payload: dict) -> "ApproxCertificate":
        return ApproxCertificate(
            cover=frozenset(payload["cover"]),
            packing=tuple(PumpkinModel.from_json(m) for m in payload["packing"]),
            c=payload["c"],
            n_original=payload["n_original"],
            f_eff=payload["f_eff"],
            log_term=payload["log_term"],
            bound=payload["bound"],
            within_bound=payload["within_bound"],
            levels=payload["levels"],
            skips=tuple(payload.get("skips", ())),
        )


def certificate_bound(n: int, c: int, cfg: Optional[Config] = None) -> tuple[float, float]:
    """(f_eff, log term) used in the cover-versus-packing guarantee."""
    cfg = resolve(cfg)
    log_term = max(math.log2(max(n, 2)), 1.0)
    return cfg.f_eff(c), log_term


def verify_certificate(
    g: MultiGraph, cert: ApproxCertificate, cfg: Optional[Config] = None
) -> Optional[str]:
    """None if the certificate checks out against g, else a clause string."""
    cfg = resolve(cfg)
    if not cert.cover <= g.vertex_set:
        return "cover_not_in_graph"
    if has_pumpkin(g.delete_vertices(cert.cover), cert.c, cfg, Budget(cfg.detect_budget)) is not None:
        return "cover_misses_a_model"
    used: set[int] = set()
    for m in cert.packing:
        err = verify_model(g, m, cert.c)
        if err is not None:
            return f"packing_model_{err}"
        vs = set(m.vertices)
        if vs & used:
            return "packing_not_disjoint"
        used |= vs
    f_eff, log_term = certificate_bound(g.n, cert.c, cfg)
    bound = f_eff * log_term * len(cert.packing)
    if cert.within_bound and len(cert.cover) > bound:
        return "bound_arithmetic_wrong"
    return None


def approx_cover_pack(
    g: MultiGraph, c: int, cfg: Optional[Config] = None
) -> ApproxCertificate:
    """Build a hitting set and a disjoint packing of c-pumpkin models.

    Frames are recorded going down (reduction traces and packed models)
    and replayed in reverse: a packed model's vertices join the cover and
    the model joins the packing, while a trace lifts both through its
    steps.  Rule suggestions emitted by the extraction pipeline are applied
    as single-step traces so the same lifting handles them.
    """
    cfg = resolve(cfg)
    if c < 1:
        raise ValueError("c must be at least 1")
    frames: list[tuple[str, object]] = []
    skips: list[dict] = []
    cur = g
    while True:
        tr = c_reduce(cur, c, cfg)
        if tr.steps:
            frames.append(("lift", tr))
        skips.extend(tr.skips)
        cur = tr.result
        if cur.n < 2:
            break
        if has_pumpkin(cur, c, cfg, Budget(cfg.detect_budget)) is None:
            break
        out = find_small_model(cur, c, cfg)
        if out.kind == MODEL:
            frames.append(("pack", out.model))
            cur = cur.delete_vertices(out.model.vertices)
            continue
        if out.kind == Z1_SUGGESTION:
            after = cur.delete_vertices((out.z1_vertex,))
            step = TraceStep(kind=Z1, before=cur, after=after, removed_vertex=out.z1_vertex)
        else:
            step = apply_z2(cur, out.z2_outgrowth, c, cfg, skip_z1_check=True)
        frames.append(("lift", ReductionTrace(original=cur, steps=(step,), result=step.after, c=c)))
        cur = step.after

    cover: frozenset[int] = frozenset()
    packing: tuple[PumpkinModel, ...] = ()
    for kind, payload in reversed(frames):
        if kind == "pack":
            model = payload
            cover = cover | model.vertices
            packing = packing + (model,)
        else:
            trace = payload
            cover = lift_cover(trace, cover, cfg)
            packing = lift_packing(trace, packing, cfg)

    err = None
    if has_pumpkin(g.delete_vertices(cover), c, cfg, Budget(cfg.detect_budget)) is not None:
        err = "cover_misses_a_model"
    used: set[int] = set()
    for m in packing:
        verr = verify_model(g, m, c)
        if verr is not None:
            err = err or f"packing_model_{verr}"
        if set(m.vertices) & used:
            err = err or "packing_not_disjoint"
        used |= set(m.vertices)
    if err is not None:
        raise AssertionError(f"constructed certificate failed verification: {err}")

    f_eff, log_term = certificate_bound(g.n, c, cfg)
    bound = f_eff * log_term * len(packing)
    return ApproxCertificate(
        cover=cover,
        packing=packing,
        c=c,
        n_original=g.n,
        f_eff=f_eff,
        log_term=log_term,
        bound=bound,
        within_bound=len(cover) <= bound,
        levels=sum(1 for kind, _ in frames if kind == "pack"),
        skips=tuple(skips),
    )


__all__ = [
    "ApproxCertificate",
    "approx_cover_pack",
    "certificate_bound",
    "verify_certificate",
]
