"""Exact minimum hitting sets and maximum packings.

Three cover strategies, trading speed for simplicity guarantees:

* brute_min_hitting enumerates vertex subsets by ascending size.
* branch_cover interleaves the reduction rules with branching over the
  vertices of one small model.
* ic_cover grows the graph one vertex at a time, compressing a (k+1)-size
  cover through guesses of its kept part plus a disjoint-cover subroutine
  built on component rules and short-path branching.

brute_max_packing enumerates all minimal models and picks a maximum
disjoint family.  Everything returns verified answers; the solvers refuse
nothing silently.
"""

from __future__ import annotations

import dataclasses
import itertools
import time
from dataclasses import dataclass
from typing import Optional

from .config import Config, resolve
from .detect import Budget, has_pumpkin
from .errors import SizeLimitExceeded
from .graph import MultiGraph, PumpkinModel, minimize_model
from .oracle import oracle_packing
from .reduce import Z1, ReductionTrace, TraceStep, apply_z2, c_reduce, lift_cover
from .small_model import MODEL, Z1_SUGGESTION, find_small_model


@dataclass(frozen=True)
class SolveResult:
    feasible: bool
    hitting_set: Optional[frozenset[int]]
    k: Optional[int]
    nodes: int
    wall_time: float
    method: str

    def to_json(self) -> dict:
        return {
            "feasible": self.feasible,
            "hitting_set": sorted(self.hitting_set) if self.hitting_set is not None else None,
            "k": self.k,
            "nodes": self.nodes,
            "wall_time": self.wall_time,
            "method": self.method,
        }


@dataclass(frozen=True)
class CompressionState:
    """A disjoint-compression instance: cover s of graph may not be reused."""

    graph: MultiGraph
    s: frozenset[int]
    k: int

    def validate(self, c: int, cfg: Optional[Config] = None) -> None:
        cfg = resolve(cfg)
        if not self.s <= self.graph.vertex_set:
            raise ValueError("s is not a vertex subset")
        if self.k < 0:
            raise ValueError("negative budget")
        rest = self.graph.delete_vertices(self.s)
        if has_pumpkin(rest, c, cfg) is not None:
            raise ValueError("s is not a c-hitting set of the graph")


def _verify_cover(g: MultiGraph, x: frozenset[int], c: int, cfg: Config) -> None:
    if has_pumpkin(g.delete_vertices(x), c, cfg) is not None:
        raise AssertionError("reported hitting set does not hit every model")


def brute_min_hitting(
    g: MultiGraph,
    c: int,
    k_max: Optional[int] = None,
    cfg: Optional[Config] = None,
) -> SolveResult:
    """Smallest c-hitting set by subset enumeration in ascending size."""
    cfg = resolve(cfg)
    if g.n > cfg.brute_vertex_limit:
        raise SizeLimitExceeded(
            f"brute force limited to {cfg.brute_vertex_limit} vertices, got {g.n}"
        )
    start = time.perf_counter()
    nodes = 0
    top = g.n if k_max is None else min(k_max, g.n)
    verts = g.vertices
    for size in range(0, top + 1):
        for comb in itertools.combinations(verts, size):
            nodes += 1
            if has_pumpkin(g.delete_vertices(comb), c, cfg) is None:
                x = frozenset(comb)
                return SolveResult(
                    feasible=True,
                    hitting_set=x,
                    k=k_max,
                    nodes=nodes,
                    wall_time=time.perf_counter() - start,
                    method="brute",
                )
    return SolveResult(
        feasible=False,
        hitting_set=None,
        k=k_max,
        nodes=nodes,
        wall_time=time.perf_counter() - start,
        method="brute",
    )


def brute_max_packing(
    g: MultiGraph, c: int, cfg: Optional[Config] = None
) -> tuple[tuple[PumpkinModel, ...], dict]:
    """A maximum vertex-disjoint family of c-pumpkin models, with stats."""
    cfg = resolve(cfg)
    if g.n > cfg.brute_vertex_limit:
        raise SizeLimitExceeded(
            f"brute force limited to {cfg.brute_vertex_limit} vertices, got {g.n}"
        )
    start = time.perf_counter()
    widened = dataclasses.replace(cfg, oracle_vertex_limit=cfg.brute_vertex_limit)
    count, family = oracle_packing(g, c, widened)
    stats = {"nu": count, "wall_time": time.perf_counter() - start, "method": "brute"}
    return tuple(family), stats


def _reduce_and_find(
    g: MultiGraph, c: int, cfg: Config
) -> tuple[list[ReductionTrace], MultiGraph, Optional[PumpkinModel]]:
    """Reduce to a fixpoint, chasing rule suggestions, then find one model."""
    traces: list[ReductionTrace] = []
    cur = g
    while True:
        tr = c_reduce(cur, c, cfg)
        if tr.steps:
            traces.append(tr)
        cur = tr.result
        if cur.n < 2:
            return traces, cur, None
        if has_pumpkin(cur, c, cfg, Budget(cfg.detect_budget)) is None:
            return traces, cur, None
        out = find_small_model(cur, c, cfg)
        if out.kind == MODEL:
            return traces, cur, out.model
        if out.kind == Z1_SUGGESTION:
            after = cur.delete_vertices((out.z1_vertex,))
            step = TraceStep(kind=Z1, before=cur, after=after, removed_vertex=out.z1_vertex)
        else:
            step = apply_z2(cur, out.z2_outgrowth, c, cfg, skip_z1_check=True)
        traces.append(ReductionTrace(original=cur, steps=(step,), result=step.after, c=c))
        cur = step.after


def branch_cover(
    g: MultiGraph, c: int, k: int, cfg: Optional[Config] = None
) -> SolveResult:
    """Is there a c-hitting set of size at most k?  Returns one if so.

    Each node reduces, finds one small model, and branches on its vertices;
    every hitting set must meet every model, so the branching is complete.
    """
    cfg = resolve(cfg)
    if c < 1 or k < 0:
        raise ValueError("need c >= 1 and k >= 0")
    start = time.perf_counter()
    nodes = 0

    def solve(cur: MultiGraph, budget_k: int) -> Optional[frozenset[int]]:
        nonlocal nodes
        nodes += 1
        traces, red, model = _reduce_and_find(cur, c, cfg)
        if model is None:
            x: Optional[frozenset[int]] = frozenset()
        else:
            x = None
            if budget_k > 0:
                for v in sorted(model.vertices):
                    sub = solve(red.delete_vertices((v,)), budget_k - 1)
                    if sub is not None:
                        x = sub | {v}
                        break
        if x is None:
            return None
        for tr in reversed(traces):
            x = lift_cover(tr, x, cfg)
        return x

    x = solve(g, k)
    if x is not None:
        if len(x) > k:
            raise AssertionError("branch solution exceeds budget")
        _verify_cover(g, x, c, cfg)
    return SolveResult(
        feasible=x is not None,
        hitting_set=x,
        k=k,
        nodes=nodes,
        wall_time=time.perf_counter() - start,
        method="branch",
    )


def _s_neighbors(g: MultiGraph, comp: frozenset[int], s: frozenset[int]) -> tuple[int, ...]:
    out: set[int] = set()
    for v in comp:
        for w in g.neighbors(v):
            if w in s:
                out.add(w)
    return tuple(sorted(out))


def _find_bridge_path(
    g: MultiGraph, s: frozenset[int], max_len: int
) -> Optional[tuple[int, ...]]:
    """Shortest path in g - s whose endpoints touch different s-components."""
    sg = g.induced(s)
    scomps = sg.components()
    if len(scomps) < 2:
        return None
    comp_of: dict[int, int] = {}
    for idx, comp in enumerate(scomps):
        for v in comp:
            comp_of[v] = idx
    outside = [v for v in g.vertices if v not in s]
    touches: dict[int, set[int]] = {}
    for v in outside:
        t = {comp_of[w] for w in g.neighbors(v) if w in s}
        if t:
            touches[v] = t
    # length-1 bridge
    for v in sorted(touches):
        if len(touches[v]) >= 2:
            return (v,)
    rest = g.delete_vertices(s)
    best: Optional[tuple[int, ...]] = None
    for src in sorted(touches):
        src_comp = min(touches[src])
        seen = {src: None}
        frontier = [src]
        dist = 0
        while frontier and (best is None or dist + 1 < len(best)):
            dist += 1
            nxt = []
            for u in frontier:
                for w in rest.neighbors(u):
                    if w in seen:
                        continue
                    seen[w] = u
                    if touches.get(w, set()) - {src_comp}:
                        path = [w]
                        while seen[path[-1]] is not None:
                            path.append(seen[path[-1]])
                        path.reverse()
                        if best is None or len(path) < len(best):
                            best = tuple(path)
                        break
                    nxt.append(w)
                else:
                    continue
                break
            frontier = nxt
    if best is not None and len(best) <= max_len:
        return best
    return None


def disjoint_cover(
    state: CompressionState, c: int, cfg: Optional[Config] = None
) -> tuple[Optional[frozenset[int]], int]:
    """A c-hitting set of size <= k avoiding the protected cover s, or None.

    Reduction rules prune components of g - s that cannot matter (no s
    contact, single dead anchor, dead after removing one vertex, or a hub
    whose spokes all die into a single s-component); then branch over a
    short path bridging two s-components, or over one model's free vertices.
    """
    cfg = resolve(cfg)
    nodes = [0]

    def rec(g: MultiGraph, s: frozenset[int], k: int) -> Optional[frozenset[int]]:
        nodes[0] += 1
        wit = has_pumpkin(g, c, cfg, Budget(cfg.detect_budget))
        if wit is None:
            return frozenset()
        if k <= 0:
            return None
        rest = g.delete_vertices(s)
        comps = rest.components()
        # R1: a component with no s contact is a full component of g
        for comp in comps:
            if not _s_neighbors(g, comp, s):
                return rec(g.delete_vertices(comp), s, k)
        # R3: single anchor and jointly pumpkin-free
        for comp in comps:
            nb = _s_neighbors(g, comp, s)
            if len(nb) == 1 and has_pumpkin(
                g.induced(set(comp) | {nb[0]}), c, cfg
            ) is None:
                return rec(g.delete_vertices(comp), s, k)
        # R2: dead after deleting one more vertex
        outside = [v for v in g.vertices if v not in s]
        for v in outside:
            sub = rest.delete_vertices((v,))
            for comp2 in sub.components():
                if not _s_neighbors(g, comp2, s):
                    return rec(g.delete_vertices(comp2), s, k)
        # R4: hub whose spokes die into one s-component
        sg = g.induced(s)
        scomp_of: dict[int, int] = {}
        for idx, scomp in enumerate(sg.components()):
            for w in scomp:
                scomp_of[w] = idx
        for v in outside:
            home = next((comp for comp in comps if v in comp), None)
            if home is None or len(home) < 2:
                continue
            pieces = g.induced(set(home) - {v}).components()
            if len(pieces) < c:
                continue
            anchors: list[int] = []
            ok = True
            for piece in pieces:
                nb = _s_neighbors(g, piece, s)
                if len(nb) != 1 or has_pumpkin(
                    g.induced(set(piece) | {nb[0]}), c, cfg
                ) is not None:
                    ok = False
                    break
                anchors.append(nb[0])
            if not ok or not anchors:
                continue
            if len({scomp_of[u] for u in anchors}) != 1:
                continue
            sub = rec(g.delete_vertices((v,)), s, k - 1)
            return None if sub is None else frozenset({v}) | sub
        # branch over a short bridge between two s-components
        path = _find_bridge_path(g, s, cfg.rule_b_max_len)
        if path is not None:
            for take in range(1 << len(path)):
                chosen = [path[i] for i in range(len(path)) if (take >> i) & 1]
                if len(chosen) > k:
                    continue
                g2 = g.delete_vertices(chosen)
                s2 = s | (set(path) - set(chosen))
                sub = rec(g2, s2, k - len(chosen))
                if sub is not None:
                    return frozenset(chosen) | sub
            return None
        # branch over the free vertices of one model
        model = minimize_model(g, wit, c)
        free = sorted(set(model.vertices) - s)
        if not free:
            return None
        for v in free:
            sub = rec(g.delete_vertices((v,)), s, k - 1)
            if sub is not None:
                return frozenset({v}) | sub
        return None

    result = rec(state.graph, state.s, state.k)
    return result, nodes[0]


def ic_cover(
    g: MultiGraph, c: int, k: int, cfg: Optional[Config] = None
) -> SolveResult:
    """Iterative compression: maintain a <= k cover while inserting vertices."""
    cfg = resolve(cfg)
    if c < 1 or k < 0:
        raise ValueError("need c >= 1 and k >= 0")
    start = time.perf_counter()
    nodes = 0
    verts = g.vertices
    cover: frozenset[int] = frozenset()
    placed: list[int] = []
    for v in verts:
        placed.append(v)
        candidate = cover | {v}
        gi = g.induced(placed)
        if has_pumpkin(gi.delete_vertices(candidate), c, cfg) is not None:
            raise AssertionError("invariant broken: old cover plus new vertex fails")
        if len(candidate) <= k:
            cover = candidate
            continue
        cand_sorted = sorted(candidate)
        compressed: Optional[frozenset[int]] = None
        for keep_size in range(0, k + 1):
            for keep in itertools.combinations(cand_sorted, keep_size):
                kept = frozenset(keep)
                dropped = candidate - kept
                sub_g = gi.delete_vertices(kept)
                state = CompressionState(graph=sub_g, s=dropped, k=k - len(kept))
                found, used = disjoint_cover(state, c, cfg)
                nodes += used
                if found is not None:
                    compressed = kept | found
                    break
            if compressed is not None:
                break
        if compressed is None:
            return SolveResult(
                feasible=False,
                hitting_set=None,
                k=k,
                nodes=nodes,
                wall_time=time.perf_counter() - start,
                method="ic",
            )
        cover = compressed
    _verify_cover(g, cover, c, cfg)
    return SolveResult(
        feasible=True,
        hitting_set=cover,
        k=k,
        nodes=nodes,
        wall_time=time.perf_counter() - start,
        method="ic",
    )


__all__ = [
    "SolveResult",
    "CompressionState",
    "brute_min_hitting",
    "brute_max_packing",
    "branch_cover",
    "disjoint_cover",
    "ic_cover",
]
