"""Safe reduction rules and solution lifting.

Two rules shrink a graph without changing the minimum hitting-set size or
the maximum packing size for c-pumpkin minors:

* Z1 deletes a vertex none of whose blocks contains a c-pumpkin minor.
* Z2 replaces an outgrowth (a connected chunk C hanging off two attachment
  vertices u, v whose side graph has no c-pumpkin minor) by at most one new
  vertex and a few parallel edges, sized by two anchored optima:
  gamma = best value of a minor in the side graph with u and v on opposite
  sides, lambda = best value with u and v on the same side.

Every application is recorded as a TraceStep carrying enough witness data
to translate hitting sets and packings of the reduced graph back to the
original one.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional, Sequence

from .config import Config, resolve
from .detect import Budget, gamma, has_pumpkin, lam
from .errors import BudgetExceeded
from .graph import (
    MultiGraph,
    Outgrowth,
    PumpkinModel,
    blocks,
    make_model,
    minimize_model,
    side_graph,
    verify_model,
)

Z1 = "Z1"
Z2_MERGE = "Z2-merge"
Z2_NEW_VERTEX = "Z2-new-vertex"


@dataclass(frozen=True)
class TraceStep:
    kind: str
    before: MultiGraph
    after: MultiGraph
    removed_vertex: Optional[int] = None
    outgrowth: Optional[Outgrowth] = None
    gamma_value: Optional[int] = None
    lambda_value: Optional[int] = None
    gamma_witness: Optional[PumpkinModel] = None
    lambda_witness: Optional[PumpkinModel] = None
    new_vertex: Optional[int] = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind == Z1:
            out["removed_vertex"] = self.removed_vertex
            return out
        og = self.outgrowth
        assert og is not None
        out["u"] = og.u
        out["v"] = og.v
        out["component"] = sorted(og.component)
        out["gamma"] = self.gamma_value
        out["lambda"] = self.lambda_value
        if self.gamma_witness is not None:
            out["gamma_witness"] = self.gamma_witness.to_json()
        if self.lambda_witness is not None:
            out["lambda_witness"] = self.lambda_witness.to_json()
        if self.new_vertex is not None:
            out["new_vertex"] = self.new_vertex
        return out


@dataclass(frozen=True)
class ReductionTrace:
    original: MultiGraph
    steps: tuple[TraceStep, ...]
    result: MultiGraph
    c: int
    skips: tuple[dict, ...] = ()

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "steps": [s.to_json() for s in self.steps],
            "skips": list(self.skips),
            "result": {
                "vertices": list(self.result.vertices),
                "edges": [list(e) for e in self.result.edges()],
            },
        }


def find_z1(
    g: MultiGraph,
    c: int,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
) -> Optional[int]:
    """Lowest vertex all of whose blocks are c-pumpkin-minor-free."""
    cfg = resolve(cfg)
    blocked: dict[frozenset[int], bool] = {}
    owner: dict[int, list[frozenset[int]]] = {v: [] for v in g.vertices}
    for blk in blocks(g):
        blocked[blk] = has_pumpkin(g.induced(blk), c, cfg, budget) is not None
        for v in blk:
            owner[v].append(blk)
    for v in g.vertices:
        if not any(blocked[blk] for blk in owner[v]):
            return v
    return None


def enumerate_outgrowths(g: MultiGraph) -> list[Outgrowth]:
    """All outgrowths, ordered by (component size, component, u, v).

    Scans every anchor pair with one flood fill over the shared adjacency
    instead of materializing the deleted subgraph per pair.
    """
    found = []
    verts = g.vertices
    adj = {x: g.neighbors(x) for x in verts}
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            seen = {u, v}
            for s in verts:
                if s in seen:
                    continue
                comp = [s]
                stack = [s]
                seen.add(s)
                touch_u = touch_v = False
                while stack:
                    x = stack.pop()
                    for y in adj[x]:
                        if y == u:
                            touch_u = True
                        elif y == v:
                            touch_v = True
                        elif y not in seen:
                            seen.add(y)
                            comp.append(y)
                            stack.append(y)
                if len(comp) >= 2 and touch_u and touch_v:
                    found.append(Outgrowth(frozenset(comp), u, v))
    found.sort(key=lambda og: (len(og.component), sorted(og.component), og.u, og.v))
    return found


def apply_z2(
    g: MultiGraph,
    og: Outgrowth,
    c: int,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
    *,
    skip_z1_check: bool = False,
) -> TraceStep:
    """Replace an outgrowth whose side graph is c-pumpkin-minor-free.

    With lambda <= gamma the component is traded for gamma parallel u-v
    edges; otherwise for a fresh vertex carrying gamma edges to u and
    lambda - gamma edges to v.  Requires Z1 to be exhausted, which pins
    lambda < 2c and hence keeps the replacement small.
    """
    cfg = resolve(cfg)
    og.validate(g)
    if c < 1:
        raise ValueError("c must be >= 1")
    gam_graph = side_graph(g, og)
    if has_pumpkin(gam_graph, c, cfg, budget) is not None:
        raise ValueError("outgrowth side graph has a c-pumpkin minor")
    if not skip_z1_check and find_z1(g, c, cfg, budget) is not None:
        raise ValueError("Z1 still applies; exhaust it before Z2")
    gamma_value, gamma_wit = gamma(g, og, cap=c, cfg=cfg, budget=budget)
    lambda_value, lambda_wit = lam(g, og, cap=2 * c, cfg=cfg, budget=budget)
    if gamma_value >= c:
        raise AssertionError("gamma >= c contradicts a pumpkin-free side graph")
    if lambda_value > 2 * gamma_value:
        raise AssertionError("lambda > 2*gamma contradicts Z1 exhaustion")
    base = g.delete_vertices(og.component)
    u, v = og.u, og.v
    if lambda_value <= gamma_value:
        after = base.add_edges([(u, v, gamma_value)], cfg.multiplicity_cap)
        return TraceStep(
            kind=Z2_MERGE,
            before=g,
            after=after,
            outgrowth=og,
            gamma_value=gamma_value,
            lambda_value=lambda_value,
            gamma_witness=gamma_wit,
            lambda_witness=lambda_wit,
        )
    base, fresh = base.with_fresh_vertex()
    new_edges = [(u, fresh, gamma_value), (v, fresh, lambda_value - gamma_value)]
    after = base.add_edges(new_edges, cfg.multiplicity_cap)
    return TraceStep(
        kind=Z2_NEW_VERTEX,
        before=g,
        after=after,
        outgrowth=og,
        gamma_value=gamma_value,
        lambda_value=lambda_value,
        gamma_witness=gamma_wit,
        lambda_witness=lambda_wit,
        new_vertex=fresh,
    )


def c_reduce(
    g: MultiGraph,
    c: int,
    cfg: Optional[Config] = None,
) -> ReductionTrace:
    """Apply Z1 then Z2 exhaustively, recording every step.

    Z2 candidates whose component exceeds the configured cap, or whose
    anchored searches run out of budget, are skipped and reported in the
    trace instead of aborting the whole reduction.
    """
    cfg = resolve(cfg)
    steps: list[TraceStep] = []
    skips: tuple[dict, ...] = ()
    cur = g
    while True:
        v = find_z1(cur, c, cfg, Budget(cfg.detect_budget))
        if v is not None:
            after = cur.delete_vertices((v,))
            steps.append(TraceStep(kind=Z1, before=cur, after=after, removed_vertex=v))
            cur = after
            continue
        applied = False
        round_skips: list[dict] = []
        for og in enumerate_outgrowths(cur):
            if len(og.component) > cfg.z2_component_cap:
                round_skips.append(
                    {
                        "u": og.u,
                        "v": og.v,
                        "component_size": len(og.component),
                        "reason": "component_cap",
                    }
                )
                continue
            budget = Budget(cfg.detect_budget)
            try:
                if has_pumpkin(side_graph(cur, og), c, cfg, budget) is not None:
                    continue
                step = apply_z2(cur, og, c, cfg, budget, skip_z1_check=True)
            except BudgetExceeded:
                round_skips.append(
                    {
                        "u": og.u,
                        "v": og.v,
                        "component_size": len(og.component),
                        "reason": "budget",
                    }
                )
                continue
            steps.append(step)
            cur = step.after
            applied = True
            break
        if not applied:
            skips = tuple(round_skips)
            break
    return ReductionTrace(original=g, steps=tuple(steps), result=cur, c=c, skips=skips)


def lift_cover(
    trace: ReductionTrace,
    cover: frozenset[int],
    cfg: Optional[Config] = None,
) -> frozenset[int]:
    """Translate a hitting set of the reduced graph back to the original.

    Z1 and merge-style Z2 steps keep the set as is; a new-vertex step swaps
    the fresh vertex, when chosen, for the lower attachment.  The size never
    grows.
    """
    cfg = resolve(cfg)
    x = frozenset(cover)
    c = trace.c
    extra = x - trace.result.vertex_set
    if extra:
        raise ValueError(f"cover uses vertices outside the reduced graph: {sorted(extra)}")
    if has_pumpkin(trace.result.delete_vertices(x), c, cfg) is not None:
        raise ValueError("input is not a c-hitting set of the reduced graph")
    for step in reversed(trace.steps):
        if step.kind == Z2_NEW_VERTEX and step.new_vertex in x:
            og = step.outgrowth
            assert og is not None
            x = (x - {step.new_vertex}) | {min(og.u, og.v)}
    return x


def _witness_sides(
    witness: PumpkinModel, u: int
) -> tuple[frozenset[int], frozenset[int]]:
    """Orient a stored witness so the side containing u comes first."""
    if u in witness.side_a:
        return witness.side_a, witness.side_b
    if u in witness.side_b:
        return witness.side_b, witness.side_a
    raise AssertionError(f"witness does not contain anchor {u}")


def _rebuild_special(
    before: MultiGraph, step: TraceStep, model: PumpkinModel, c: int
) -> PumpkinModel:
    """Re-anchor the one packed model that touches a Z2 replacement."""
    og = step.outgrowth
    assert og is not None
    u, v = og.u, og.v
    comp = og.component
    vc = step.new_vertex
    if u in model.side_a:
        x, y = set(model.side_a), set(model.side_b)
    else:
        x, y = set(model.side_b), set(model.side_a)
    same_side = v in x
    if step.kind == Z2_MERGE:
        if same_side:
            new_x, new_y = x | comp, y
        else:
            ga, gb = _witness_sides(step.gamma_witness, u)
            new_x, new_y = x | ga, y | gb
    else:
        assert vc is not None
        if same_side:
            if vc in y:
                if y != {vc}:
                    raise AssertionError(
                        "minimized model keeps extra vertices beside the fresh one"
                    )
                la, lb = _witness_sides(step.lambda_witness, u)
                new_x, new_y = x | la, set(lb)
            else:
                new_x, new_y = (x - {vc}) | comp, y
        else:
            if vc in x or vc in y:
                ga, gb = _witness_sides(step.gamma_witness, u)
                new_x, new_y = (x - {vc}) | ga, (y - {vc}) | gb
            else:
                new_x, new_y = x, y
    rebuilt = make_model(before, new_x, new_y)
    err = verify_model(before, rebuilt, c)
    if err is not None:
        raise AssertionError(f"lifted model invalid: {err}")
    return rebuilt


def lift_packing(
    trace: ReductionTrace,
    models: Sequence[PumpkinModel],
    cfg: Optional[Config] = None,
) -> tuple[PumpkinModel, ...]:
    """Translate a disjoint packing of the reduced graph to the original.

    Models are minimized first, so at most one of them meets a replaced
    outgrowth's attachments, and the stored gamma/lambda witnesses supply
    the material to re-grow that one inside the deleted component.  The
    family size is preserved.
    """
    cfg = resolve(cfg)
    c = trace.c
    current = list(models)
    seen: set[int] = set()
    for m in current:
        err = verify_model(trace.result, m, c)
        if err is not None:
            raise ValueError(f"input model invalid in reduced graph: {err}")
        for w in m.vertices:
            if w in seen:
                raise ValueError("input models are not vertex-disjoint")
            seen.add(w)
    for step in reversed(trace.steps):
        current = [minimize_model(step.after, m, c) for m in current]
        if step.kind == Z1:
            continue
        og = step.outgrowth
        assert og is not None
        nxt = []
        for m in current:
            verts = m.vertices
            has_u = og.u in verts
            has_v = og.v in verts
            has_vc = step.new_vertex is not None and step.new_vertex in verts
            if has_vc and not (has_u and has_v):
                raise AssertionError(
                    "fresh vertex survived minimization without both attachments"
                )
            if has_u and has_v:
                nxt.append(_rebuild_special(step.before, step, m, c))
            else:
                nxt.append(m)
        current = nxt
    final = []
    seen = set()
    for m in current:
        err = verify_model(trace.original, m, c)
        if err is not None:
            raise AssertionError(f"lifted packing model invalid: {err}")
        if seen & set(m.vertices):
            raise AssertionError("lifted packing is not vertex-disjoint")
        seen |= set(m.vertices)
        final.append(m)
    return tuple(final)


def replay(trace: ReductionTrace) -> bool:
    """Check that the recorded steps chain correctly and land on result."""
    cur = trace.original
    for step in trace.steps:
        if step.before != cur:
            return False
        cur = step.after
    return cur == trace.result


__all__ = [
    "TraceStep",
    "ReductionTrace",
    "find_z1",
    "enumerate_outgrowths",
    "apply_z2",
    "c_reduce",
    "lift_cover",
    "lift_packing",
    "replay",
    "Z1",
    "Z2_MERGE",
    "Z2_NEW_VERTEX",
]
