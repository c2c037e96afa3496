"""Locating a small c-pumpkin minor model in a reduced graph.

The pipeline peels a graph into high-degree vertices, long induced paths
and the small-diameter components that remain, then walks a case cascade:
multiplicity pair, model inside a leftover component, heavy contracted
pair, hedgehog analysis along a path whose surroundings are all dead ends,
and finally a dense contracted graph.  The returned model is minimized and
its size is checked against an effective logarithmic budget; a violation
raises ModelSizeExceeded with a diagnostics payload instead of returning
an oversized model silently.

When the cascade proves that a reduction rule still applies instead of
finding a model, it reports that as a suggestion for the caller to apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .config import Config, resolve
from .detect import Budget, has_pumpkin
from .errors import BudgetExceeded, ModelSizeExceeded
from .graph import (
    ContractionMap,
    MultiGraph,
    Outgrowth,
    PumpkinModel,
    lift_model,
    make_model,
    minimize_model,
    side_graph,
    verify_model,
)
from .hedgehog import (
    BAD_CUTSET,
    ROOTED_MODEL,
    Hedgehog,
    contract_hedgehog,
    rooted_or_cutset,
)

MODEL = "model"
Z1_SUGGESTION = "z1_suggestion"
Z2_SUGGESTION = "z2_suggestion"


@dataclass(frozen=True)
class SkeletonParams:
    k: int
    r: int
    b: int


@dataclass(frozen=True)
class SkeletonDecomposition:
    high_degree: frozenset[int]
    paths: tuple[tuple[int, ...], ...]
    components: tuple[frozenset[int], ...]
    params: SkeletonParams

    def to_json(self) -> dict:
        return {
            "high_degree": sorted(self.high_degree),
            "paths": [list(p) for p in self.paths],
            "components": [sorted(comp) for comp in self.components],
            "params": {"k": self.params.k, "r": self.params.r, "b": self.params.b},
        }


@dataclass(frozen=True)
class SmallModelOutcome:
    kind: str  # MODEL | Z1_SUGGESTION | Z2_SUGGESTION
    model: Optional[PumpkinModel] = None
    z1_vertex: Optional[int] = None
    z2_outgrowth: Optional[Outgrowth] = None
    diagnostics: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "diagnostics": self.diagnostics}
        if self.model is not None:
            out["model"] = self.model.to_json()
        if self.z1_vertex is not None:
            out["z1_vertex"] = self.z1_vertex
        if self.z2_outgrowth is not None:
            out["z2_outgrowth"] = self.z2_outgrowth.to_json()
        return out


def build_skeleton(
    g: MultiGraph, c: int, cfg: Optional[Config] = None
) -> SkeletonDecomposition:
    """Split g into high-degree vertices, induced r-vertex paths, leftovers.

    Paths are shortest paths between vertices at distance exactly r-1, so
    they are induced; they are peeled until every remaining component has
    diameter below r-1.
    """
    cfg = resolve(cfg)
    k = cfg.k_degree(c)
    r = cfg.r_path(c)
    high = frozenset(v for v in g.vertices if g.degree(v) >= k)
    work = g.delete_vertices(high)
    paths: list[tuple[int, ...]] = []
    while True:
        found: Optional[tuple[int, ...]] = None
        for comp in work.components():
            if len(comp) < r:
                continue
            sub = work.induced(comp)
            for src in sorted(comp):
                layers = sub.bfs_layers(src)
                targets = sorted(w for w, d in layers.items() if d == r - 1)
                if targets:
                    found = tuple(sub.shortest_path(src, targets[0]))
                    break
            if found is not None:
                break
        if found is None:
            break
        paths.append(found)
        work = work.delete_vertices(found)
    return SkeletonDecomposition(
        high_degree=high,
        paths=tuple(paths),
        components=work.components(),
        params=SkeletonParams(k=k, r=r, b=cfg.b_component(c)),
    )


def dense_small_minor(
    g: MultiGraph, c: int, size_budget: int, cfg: Optional[Config] = None
) -> PumpkinModel:
    """A c-pumpkin model of at most size_budget vertices in a dense graph.

    Greedy first: grow two connected sets from a max-degree seed, each step
    absorbing the outside vertex that adds the most cross edges.  If that
    stalls, search a small BFS ball around the seed exhaustively.  Raises
    ModelSizeExceeded when neither route fits the budget.
    """
    cfg = resolve(cfg)
    if g.n < 2:
        raise ValueError("graph too small")
    seed = max(g.vertices, key=lambda v: (g.degree(v), -v))
    nbrs = g.neighbors(seed)
    if not nbrs:
        raise ValueError("seed vertex is isolated")
    partner = max(nbrs, key=lambda v: (g.degree(v), -v))
    side_a, side_b = {seed}, {partner}

    def cross_gain(x: int, other: set[int]) -> int:
        return sum(g.multiplicity(x, y) for y in other)

    def total_cross() -> int:
        return g.cross_edges(side_a, side_b)

    while total_cross() < c and len(side_a) + len(side_b) < size_budget:
        best: Optional[tuple[int, int, int, int]] = None  # (-gain, tag, x, gain)
        for tag, (side, other) in enumerate(((side_a, side_b), (side_b, side_a))):
            seen_c: set[int] = set()
            for u in side:
                for x in g.neighbors(u):
                    if x in side_a or x in side_b or x in seen_c:
                        continue
                    seen_c.add(x)
                    gain = cross_gain(x, other)
                    cand = (-gain, tag, x, gain)
                    if best is None or cand < best:
                        best = cand
        if best is None:
            break
        _, tag, x, _ = best
        (side_a if tag == 0 else side_b).add(x)
    if total_cross() >= c:
        model = minimize_model(g, make_model(g, side_a, side_b), c)
        if model.size <= size_budget:
            return model
    # greedy stalled or overshot: exhaust a ball around the seed
    cap = max(cfg.oracle_vertex_limit, 4)
    ball = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for u in sorted(frontier):
            for x in g.neighbors(u):
                if x not in ball:
                    ball.add(x)
                    nxt.append(x)
        if len(ball) >= cap:
            break
        frontier = nxt
    ball_list = sorted(ball)[:cap]
    wit = has_pumpkin(g.induced(ball_list), c, cfg, Budget(cfg.detect_budget))
    if wit is not None:
        model = minimize_model(g, make_model(g, wit.side_a, wit.side_b), c)
        if model.size <= size_budget:
            return model
        raise ModelSizeExceeded(
            "ball search found only an oversized model",
            {"size": model.size, "budget": size_budget, "n": g.n, "c": c},
        )
    raise ModelSizeExceeded(
        "dense graph yielded no small model",
        {"budget": size_budget, "n": g.n, "c": c, "ball": len(ball_list)},
    )


def _unit_partition(
    g: MultiGraph, skel: SkeletonDecomposition
) -> tuple[list[tuple[int, frozenset[int], str]], dict[int, int]]:
    """Units of the contracted view: high-degree singletons, paths, leftovers."""
    units: list[tuple[int, frozenset[int], str]] = []
    for w in sorted(skel.high_degree):
        units.append((w, frozenset([w]), "w"))
    for p in skel.paths:
        units.append((min(p), frozenset(p), "path"))
    for comp in skel.components:
        units.append((min(comp), comp, "comp"))
    units.sort(key=lambda t: t[0])
    unit_of: dict[int, int] = {}
    for idx, (_, members, _) in enumerate(units):
        for v in members:
            unit_of[v] = idx
    return units, unit_of


def _unit_cross(
    g: MultiGraph, units: list, unit_of: dict[int, int]
) -> dict[tuple[int, int], int]:
    cross: dict[tuple[int, int], int] = {}
    for u, v, m in g.edges():
        iu, iv = unit_of[u], unit_of[v]
        if iu == iv:
            continue
        key = (min(iu, iv), max(iu, iv))
        cross[key] = cross.get(key, 0) + m
    return cross


def find_small_model(
    g: MultiGraph, c: int, cfg: Optional[Config] = None
) -> SmallModelOutcome:
    """A small minimized c-pumpkin model of a reduced graph, or a rule hint.

    Expects a graph the reduction rules no longer shrink (budget skips are
    tolerated) with at least 2 vertices.  Either returns a model whose size
    fits the effective logarithmic budget, or points at a Z1 vertex or Z2
    outgrowth that the caller should apply before retrying.
    """
    cfg = resolve(cfg)
    if c < 1:
        raise ValueError("c must be >= 1")
    if g.n < 2:
        raise ValueError("graph needs at least 2 vertices")
    diag: dict = {"cases": []}

    def finish(model: PumpkinModel, case: str) -> SmallModelOutcome:
        m = minimize_model(g, model, c)
        err = verify_model(g, m, c)
        if err is not None:
            raise AssertionError(f"case {case} produced an invalid model: {err}")
        limit = cfg.f_eff(c) * max(math.log2(max(g.n, 2)), 1.0) + 2
        if m.size > limit:
            raise ModelSizeExceeded(
                f"model of size {m.size} exceeds budget {limit:.1f}",
                {
                    "case": case,
                    "size": m.size,
                    "limit": limit,
                    "n": g.n,
                    "c": c,
                    "model": m.to_json(),
                },
            )
        diag["case"] = case
        return SmallModelOutcome(kind=MODEL, model=m, diagnostics=diag)

    # (a) a single heavy edge
    diag["cases"].append("multiplicity")
    mu_pair: Optional[tuple[int, int, int]] = None
    for u, v, m in g.edges():
        if m >= c and (mu_pair is None or m > mu_pair[2]):
            mu_pair = (u, v, m)
    if mu_pair is not None:
        u, v, _ = mu_pair
        return finish(make_model(g, {u}, {v}), "multiplicity")

    skel = build_skeleton(g, c, cfg)
    diag["skeleton"] = {
        "high_degree": len(skel.high_degree),
        "paths": len(skel.paths),
        "components": len(skel.components),
    }

    # (b) model inside a leftover component
    diag["cases"].append("component_search")
    for comp in skel.components:
        if len(comp) < 2:
            continue
        wit = has_pumpkin(g.induced(comp), c, cfg, Budget(cfg.detect_budget))
        if wit is not None:
            return finish(wit, "component_search")

    # (c) components seeing at most one outside vertex are Z1 material
    diag["cases"].append("lonely_component")
    comp_vertex_nbrs: dict[frozenset[int], tuple[int, ...]] = {}
    for comp in skel.components:
        outside: set[int] = set()
        for v in comp:
            for w in g.neighbors(v):
                if w not in comp:
                    outside.add(w)
        comp_vertex_nbrs[comp] = tuple(sorted(outside))
        if len(outside) == 0:
            return SmallModelOutcome(
                kind=Z1_SUGGESTION, z1_vertex=min(comp), diagnostics=diag
            )
        if len(outside) == 1:
            w = next(iter(outside))
            wit = has_pumpkin(
                g.induced(set(comp) | {w}), c, cfg, Budget(cfg.detect_budget)
            )
            if wit is not None:
                return finish(wit, "lonely_component")
            return SmallModelOutcome(
                kind=Z1_SUGGESTION, z1_vertex=min(comp), diagnostics=diag
            )

    # (d) a heavy pair in the fully contracted view
    diag["cases"].append("contracted_pair")
    units, unit_of = _unit_partition(g, skel)
    cross = _unit_cross(g, units, unit_of)
    heavy = [(m, key) for key, m in cross.items() if m >= c]
    if heavy:
        heavy.sort(key=lambda t: (-t[0], t[1]))
        _, (iu, iv) = heavy[0]
        return finish(
            make_model(g, set(units[iu][1]), set(units[iv][1])), "contracted_pair"
        )

    # classify leftover components by how many units they attach to
    unit_nbrs: dict[int, set[int]] = {idx: set() for idx in range(len(units))}
    for (iu, iv), _m in cross.items():
        unit_nbrs[iu].add(iv)
        unit_nbrs[iv].add(iu)
    bad_comps: dict[int, list[frozenset[int]]] = {}  # path unit idx -> comps
    good_comps: list[tuple[frozenset[int], int]] = []  # (comp, chosen unit idx)
    for idx, (rep, members, kind) in enumerate(units):
        if kind != "comp":
            continue
        attached = sorted(unit_nbrs[idx])
        if len(attached) == 1 and units[attached[0]][2] == "path":
            bad_comps.setdefault(attached[0], []).append(members)
        elif attached:
            good_comps.append((members, attached[0]))
        # unattached comps were returned at case (c)

    # (e) hedgehog analysis along a path bordered only by dead ends
    diag["cases"].append("hedgehog")
    theta = cfg.hedgehog_threshold(c)
    for pidx, (rep, members, kind) in enumerate(units):
        if kind != "path":
            continue
        p = next(pp for pp in skel.paths if min(pp) == rep)
        attached = bad_comps.get(pidx, [])
        quill_sets = [comp for comp in attached if len(comp_vertex_nbrs[comp]) >= 2]
        quill_vertices = {v for comp in quill_sets for v in comp}
        black: list[bool] = []
        for v in p:
            ok = True
            for w in g.neighbors(v):
                if w in members:
                    continue
                if w not in quill_vertices:
                    ok = False
                    break
            black.append(ok)
        runs: list[tuple[int, int]] = []
        start: Optional[int] = None
        for i, flag in enumerate(black + [False]):
            if flag and start is None:
                start = i
            elif not flag and start is not None:
                if i - start >= theta:
                    runs.append((start, i - 1))
                start = None
        if not runs:
            continue
        # build the full hedgehog on p, then contract to each long run
        h_edges = [(p[i], p[i + 1], g.multiplicity(p[i], p[i + 1])) for i in range(len(p) - 1)]
        reps: list[int] = []
        bags: dict[int, frozenset[int]] = {}
        pset = set(p)
        for comp in quill_sets:
            tally: dict[int, int] = {}
            for v in comp:
                for w in g.neighbors(v):
                    if w in pset:
                        tally[w] = tally.get(w, 0) + g.multiplicity(v, w)
            if len(tally) < 2:
                continue
            crep = min(comp)
            reps.append(crep)
            bags[crep] = comp
            for w, m in sorted(tally.items()):
                h_edges.append((crep, w, m))
        h_full = Hedgehog(MultiGraph.from_edges(list(p) + reps, h_edges), tuple(p))
        for run_start, run_end in runs:
            q = tuple(p[run_start : run_end + 1])
            h_q = contract_hedgehog(h_full, q) if q != h_full.path else h_full
            outcome = rooted_or_cutset(h_q, c, threshold=theta, cfg=cfg)
            diag.setdefault("hedgehog_outcomes", []).append(
                {"path_rep": rep, "run": [run_start, run_end], "kind": outcome.kind}
            )
            if outcome.kind == ROOTED_MODEL:
                cm_bags: dict[int, frozenset[int]] = {}
                cm_bags[q[0]] = frozenset(p[: run_start + 1])
                cm_bags[q[-1]] = frozenset(p[run_end:])
                for crep in reps:
                    if crep in h_q.graph:
                        cm_bags[crep] = bags[crep]
                cm = ContractionMap(bags=cm_bags, diameter_bound=3 * skel.params.r)
                lifted = lift_model(g, cm, outcome.model, k=3 * skel.params.r, c=c)
                return finish(lifted, "hedgehog_rooted")
            if outcome.kind == BAD_CUTSET:
                cut_u, cut_v = outcome.cutset
                grown: set[int] = set()
                for t in outcome.witness_component:
                    grown |= set(bags.get(t, frozenset([t])))
                og = Outgrowth(frozenset(grown), cut_u, cut_v)
                og.validate(g)
                wit = has_pumpkin(
                    side_graph(g, og), c, cfg, Budget(cfg.detect_budget)
                )
                if wit is not None:
                    return finish(wit, "hedgehog_outgrowth_model")
                return SmallModelOutcome(
                    kind=Z2_SUGGESTION, z2_outgrowth=og, diagnostics=diag
                )
            # NONE: try the next run

    # (f) contract everything onto the skeleton and go dense
    diag["cases"].append("dense")
    lbags: dict[int, set[int]] = {}
    lrep_of: dict[int, int] = {}
    for idx, (rep, members, kind) in enumerate(units):
        if kind == "comp":
            continue
        lbags[rep] = set(members)
        for v in members:
            lrep_of[v] = rep
    for members, host in good_comps:
        hrep = units[host][0]
        lbags[hrep] |= members
        for v in members:
            lrep_of[v] = hrep
    ledges: dict[tuple[int, int], int] = {}
    for u, v, m in g.edges():
        ru, rv = lrep_of.get(u), lrep_of.get(v)
        if ru is None or rv is None or ru == rv:
            continue
        key = (min(ru, rv), max(ru, rv))
        ledges[key] = ledges.get(key, 0) + m
    lverts = sorted(lbags)
    lgraph = MultiGraph.from_edges(lverts, [(a, b, m) for (a, b), m in sorted(ledges.items())])
    diag["dense_n"] = lgraph.n
    cm = ContractionMap(
        bags={rep: frozenset(bag) for rep, bag in lbags.items()},
        diameter_bound=3 * skel.params.r,
    )

    def dense_route() -> Optional[PumpkinModel]:
        if lgraph.n < 2:
            return None
        if lgraph.max_multiplicity() >= c:
            pairs = [(m, (a, b)) for (a, b), m in sorted(ledges.items()) if m >= c]
            pairs.sort(key=lambda t: (-t[0], t[1]))
            _, (a, b) = pairs[0]
            return make_model(lgraph, {a}, {b})
        simple_edges = [(a, b, 1) for (a, b), _m in sorted(ledges.items())]
        lsimple = MultiGraph.from_edges(lverts, simple_edges)
        if lsimple.n and lsimple.min_degree() < cfg.dense_min_degree(c):
            return None
        size_budget = math.ceil(
            cfg.h_eff(c) * max(math.log2(max(lsimple.n, 2)), 1.0)
        )
        found = dense_small_minor(lsimple, c, size_budget, cfg)
        return make_model(lgraph, found.side_a, found.side_b)

    try:
        lmodel = dense_route()
    except (ModelSizeExceeded, BudgetExceeded) as exc:
        diag["dense_failure"] = str(exc)
        lmodel = None
    if lmodel is not None:
        lifted = lift_model(g, cm, lmodel, k=3 * skel.params.r, c=c)
        return finish(lifted, "dense")

    # robustness fallback: search the whole graph under budget
    diag["cases"].append("whole_graph")
    wit = has_pumpkin(g, c, cfg, Budget(cfg.detect_budget))
    if wit is None:
        raise ValueError(
            "graph has no c-pumpkin minor; it should have reduced to nothing"
        )
    return finish(wit, "whole_graph")


__all__ = [
    "SkeletonParams",
    "SkeletonDecomposition",
    "SmallModelOutcome",
    "build_skeleton",
    "dense_small_minor",
    "find_small_model",
    "MODEL",
    "Z1_SUGGESTION",
    "Z2_SUGGESTION",
]
