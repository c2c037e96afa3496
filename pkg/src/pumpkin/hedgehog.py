"""Hedgehog graphs: an induced multipath plus a stable set of quill vertices.

A long hedgehog either contains a c-pumpkin minor model pinned to the two
path endpoints (a rooted model) or it has a pair of internal path vertices
whose removal strands a chunk away from both endpoints (a bad cutset, which
callers turn into an outgrowth).  `rooted_or_cutset` decides which, by a
cascade of structural cases; every outcome is verified before it is
returned, and anything that fails verification drops to an exhaustive
fallback that is only expected to trigger below the usual size thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .config import Config, resolve
from .detect import AnchoredQuery, Budget, max_pumpkin
from .errors import BudgetExceeded
from .graph import MultiGraph, PumpkinModel, make_model, verify_model

ROOTED_MODEL = "rooted_model"
BAD_CUTSET = "bad_cutset"
NONE = "none"


@dataclass(frozen=True)
class Hedgehog:
    graph: MultiGraph
    path: tuple[int, ...]

    def validate(self) -> None:
        g = self.graph
        p = self.path
        if len(p) < 2:
            raise ValueError("hedgehog path needs at least 2 vertices")
        if len(set(p)) != len(p):
            raise ValueError("hedgehog path repeats a vertex")
        pset = set(p)
        for v in p:
            if v not in g:
                raise ValueError(f"path vertex {v} not in graph")
        pos = {v: i for i, v in enumerate(p)}
        for v in p:
            for w in g.neighbors(v):
                if w in pset and abs(pos[v] - pos[w]) != 1:
                    raise ValueError("path is not induced: chord {}-{}".format(v, w))
        for i in range(len(p) - 1):
            if not g.multiplicity(p[i], p[i + 1]):
                raise ValueError("path is not a path: missing {}-{}".format(p[i], p[i + 1]))
        for s in g.vertices:
            if s in pset:
                continue
            nbrs = g.neighbors(s)
            for w in nbrs:
                if w not in pset:
                    raise ValueError(f"quill vertices {s},{w} are adjacent")
            if len(nbrs) < 2:
                raise ValueError(f"quill vertex {s} has fewer than 2 path neighbors")

    @property
    def quills(self) -> tuple[int, ...]:
        pset = set(self.path)
        return tuple(v for v in self.graph.vertices if v not in pset)


@dataclass(frozen=True)
class HedgehogOutcome:
    kind: str  # ROOTED_MODEL | BAD_CUTSET | NONE
    model: Optional[PumpkinModel] = None
    cutset: Optional[tuple[int, int]] = None
    witness_component: Optional[frozenset[int]] = None
    used_fallback: bool = False

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "used_fallback": self.used_fallback}
        if self.model is not None:
            out["model"] = self.model.to_json()
        if self.cutset is not None:
            out["cutset"] = list(self.cutset)
        if self.witness_component is not None:
            out["witness_component"] = sorted(self.witness_component)
        return out


def contract_hedgehog(h: Hedgehog, q: tuple[int, ...]) -> Hedgehog:
    """Shrink a hedgehog onto a contiguous subpath q.

    Three moves, in this order: drop quills with no neighbor in q (judged on
    the original adjacency), contract the path prefix into q's first vertex
    and the suffix into its last, then drop quills left with fewer than two
    distinct neighbors.  Multiplicities of merged edges add up.
    """
    p = h.path
    pos = {v: i for i, v in enumerate(p)}
    if len(q) < 2:
        raise ValueError("subpath must have at least 2 vertices")
    try:
        i = pos[q[0]]
        j = pos[q[-1]]
    except KeyError as exc:
        raise ValueError(f"subpath vertex {exc} not on the path") from None
    if tuple(p[i : j + 1]) != tuple(q):
        raise ValueError("q is not a contiguous subpath")
    g = h.graph
    qset = set(q)
    q0, qlast = q[0], q[-1]

    def retarget(w: int) -> int:
        if w in qset:
            return w
        return q0 if pos[w] < i else qlast

    edges: list[tuple[int, int, int]] = []
    for t in range(len(q) - 1):
        edges.append((q[t], q[t + 1], g.multiplicity(q[t], q[t + 1])))
    kept: list[int] = []
    for s in h.quills:
        nbrs = g.neighbors(s)
        if not any(w in qset for w in nbrs):
            continue
        tally: dict[int, int] = {}
        for w in nbrs:
            t = retarget(w)
            tally[t] = tally.get(t, 0) + g.multiplicity(s, w)
        if len(tally) < 2:
            continue
        kept.append(s)
        for t, m in sorted(tally.items()):
            edges.append((s, t, m))
    sub = MultiGraph.from_edges(list(q) + kept, edges)
    return Hedgehog(sub, tuple(q))


def _first_bad_component(
    g: MultiGraph, cut: tuple[int, int], endpoints: tuple[int, int]
) -> Optional[frozenset[int]]:
    """A component of g - cut with >= 2 vertices avoiding both endpoints."""
    rest = g.delete_vertices(cut)
    for comp in rest.components():
        if len(comp) >= 2 and endpoints[0] not in comp and endpoints[1] not in comp:
            return comp
    return None


def _rooted(h: Hedgehog, model: PumpkinModel, c: int, fallback: bool) -> HedgehogOutcome:
    err = verify_model(h.graph, model, c)
    if err is not None:
        raise AssertionError(f"rooted model failed verification: {err}")
    a, b = h.path[0], h.path[-1]
    if not ((a in model.side_a and b in model.side_b) or (a in model.side_b and b in model.side_a)):
        raise AssertionError("model is not rooted at the path endpoints")
    return HedgehogOutcome(kind=ROOTED_MODEL, model=model, used_fallback=fallback)


def _cutset(
    h: Hedgehog, cut: tuple[int, int], fallback: bool
) -> Optional[HedgehogOutcome]:
    a, b = h.path[0], h.path[-1]
    comp = _first_bad_component(h.graph, cut, (a, b))
    if comp is None:
        return None
    return HedgehogOutcome(
        kind=BAD_CUTSET, cutset=cut, witness_component=comp, used_fallback=fallback
    )


def _interval_components(
    spans: dict[int, tuple[int, int]]
) -> list[tuple[int, int, list[int]]]:
    """Components of the open-interval overlap graph, sorted left to right.

    Distinct components have disjoint open spans, so sorting by the left end
    orders them completely.
    """
    order = sorted(spans)
    seen: set[int] = set()
    comps: list[tuple[int, int, list[int]]] = []
    for s in order:
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        members = []
        while stack:
            cur = stack.pop()
            members.append(cur)
            lc, rc = spans[cur]
            for t in order:
                if t in seen:
                    continue
                lt, rt = spans[t]
                if max(lc, lt) < min(rc, rt):
                    seen.add(t)
                    stack.append(t)
        members.sort()
        comps.append(
            (min(spans[m][0] for m in members), max(spans[m][1] for m in members), members)
        )
    comps.sort(key=lambda t: (t[0], t[1], t[2][0]))
    return comps


def rooted_or_cutset(
    h: Hedgehog,
    c: int,
    threshold: Optional[int] = None,
    cfg: Optional[Config] = None,
) -> HedgehogOutcome:
    """Rooted c-pumpkin model or bad cutset for a long enough hedgehog.

    The cascade: split the path (c=1); hang a model off a quill with many
    distinct neighbors; recurse at c-1 inside a long quill-free gap; cut
    around two consecutive unquilled positions; with many interval
    components cut between the second and fourth; otherwise two-color a
    shortest chain of overlapping quills inside the widest component.  Any
    case that fails its verification falls through, ultimately to an
    exhaustive anchored search plus cutset scan (reported via used_fallback).
    """
    cfg = resolve(cfg)
    if c < 1:
        raise ValueError("c must be >= 1")
    if threshold is None:
        threshold = cfg.hedgehog_threshold(c)
    p = h.path
    k = len(p)
    if k < threshold:
        raise ValueError(f"path length {k} below threshold {threshold}")
    g = h.graph
    a, b = p[0], p[-1]
    pos = {v: t for t, v in enumerate(p)}

    if c == 1:
        model = make_model(g, {a}, set(p[1:]))
        return _rooted(h, model, c, False)

    quills = h.quills
    nbr_pos = {s: sorted(pos[w] for w in g.neighbors(s)) for s in quills}

    for s in quills:
        if len(nbr_pos[s]) >= c:
            w_idx = nbr_pos[s][0]
            side_a = set(p[: w_idx + 1]) | {s}
            side_b = set(p[w_idx + 1 :])
            model = make_model(g, side_a, side_b)
            return _rooted(h, model, c, False)

    t_sub = max(2, min(cfg.hedgehog_threshold(c - 1), threshold))
    for s in quills:
        positions = nbr_pos[s]
        for x_idx, y_idx in zip(positions, positions[1:]):
            if y_idx - x_idx - 1 < t_sub:
                continue
            q = tuple(p[x_idx + 1 : y_idx])
            h2 = contract_hedgehog(h, q)
            sub = rooted_or_cutset(h2, c - 1, t_sub, cfg)
            if sub.kind == BAD_CUTSET:
                out = _cutset(h, sub.cutset, sub.used_fallback)
                if out is None:
                    raise AssertionError("inner bad cutset does not survive expansion")
                return out
            if sub.kind == ROOTED_MODEL:
                m = sub.model
                if q[0] in m.side_a:
                    near, far = set(m.side_a), set(m.side_b)
                else:
                    near, far = set(m.side_b), set(m.side_a)
                side_a = near | set(p[: x_idx + 1]) | {s}
                side_b = far | set(p[y_idx:])
                model = make_model(g, side_a, side_b)
                return _rooted(h, model, c, sub.used_fallback)
            # NONE: try the next gap

    quilled = set()
    for s in quills:
        for t in nbr_pos[s]:
            quilled.add(t)
    for i0 in range(1, k - 4):
        if i0 + 3 > k - 2:
            break
        if (i0 + 1) not in quilled and (i0 + 2) not in quilled:
            out = _cutset(h, (p[i0], p[i0 + 3]), False)
            if out is not None:
                return out

    spans = {s: (nbr_pos[s][0], nbr_pos[s][-1]) for s in quills}
    comps = _interval_components(spans)
    if len(comps) >= 5:
        cut_l = comps[1][0]
        cut_r = comps[3][1]
        if 1 <= cut_l and cut_r <= k - 2 and cut_l != cut_r:
            out = _cutset(h, (p[cut_l], p[cut_r]), False)
            if out is not None:
                return out
    elif comps:
        outcome = _widest_component_model(h, c, comps, spans, pos, cfg)
        if outcome is not None:
            return outcome

    return _fallback(h, c, cfg)


def _widest_component_model(
    h: Hedgehog,
    c: int,
    comps: list[tuple[int, int, list[int]]],
    spans: dict[int, tuple[int, int]],
    pos: dict[int, int],
    cfg: Config,
) -> Optional[HedgehogOutcome]:
    """Two-color a shortest overlap chain across the widest quill component."""
    g = h.graph
    p = h.path
    x_idx, y_idx, members = max(comps, key=lambda t: (t[1] - t[0], -t[0], -t[2][0]))
    if y_idx - x_idx < 1:
        return None
    q = tuple(p[x_idx : y_idx + 1])
    h2 = contract_hedgehog(h, q)
    g2 = h2.graph
    starts = sorted(
        (s for s in members if spans[s][0] == x_idx),
        key=lambda s: (-spans[s][1], s),
    )
    ends = sorted(
        (s for s in members if spans[s][1] == y_idx),
        key=lambda s: (spans[s][0], s),
    )
    if not starts or not ends:
        return None
    v, w = starts[0], ends[0]
    if v == w:
        return None
    # shortest chain v .. w in the open-overlap graph restricted to members
    member_set = set(members)
    prev: dict[int, Optional[int]] = {v: None}
    frontier = [v]
    while frontier and w not in prev:
        nxt = []
        for cur in frontier:
            lc, rc = spans[cur]
            for t in sorted(member_set):
                if t in prev:
                    continue
                lt, rt = spans[t]
                if max(lc, lt) < min(rc, rt):
                    prev[t] = cur
                    nxt.append(t)
        frontier = nxt
    if w not in prev:
        return None
    chain = [w]
    while prev[chain[-1]] is not None:
        chain.append(prev[chain[-1]])
    chain.reverse()
    m = len(chain)
    d = m // 2
    if d < 1:
        return None
    colored = chain[: 2 * d]  # 1-indexed j: odd black, even white
    breakpoint_parity: dict[int, int] = {}
    for j, z in enumerate(colored, start=1):
        for t in spans[z]:
            other = breakpoint_parity.get(t)
            if other is not None and other != j % 2:
                return None  # mixed parity: structure too small, give up
            breakpoint_parity[t] = j % 2
    side_a: set[int] = set()
    side_b: set[int] = set()
    for j, z in enumerate(colored, start=1):
        (side_a if j % 2 == 1 else side_b).add(z)
    current: Optional[int] = None
    for t in range(x_idx, y_idx + 1):
        if t in breakpoint_parity:
            current = breakpoint_parity[t]
        if current is None:
            return None
        (side_a if current == 1 else side_b).add(p[t])
    if p[x_idx] not in side_a or p[y_idx] not in side_b:
        return None
    model2 = make_model(g2, side_a, side_b)
    if verify_model(g2, model2, c) is not None:
        return None
    full_a = set(model2.side_a) | set(p[:x_idx])
    full_b = set(model2.side_b) | set(p[y_idx + 1 :])
    model = make_model(g, full_a, full_b)
    if verify_model(g, model, c) is not None:
        return None
    return _rooted(h, model, c, False)


def _fallback(h: Hedgehog, c: int, cfg: Config) -> HedgehogOutcome:
    """Exhaustive anchored search, then a scan over internal cut pairs."""
    g = h.graph
    p = h.path
    a, b = p[0], p[-1]
    try:
        value, wit = max_pumpkin(
            AnchoredQuery(g, anchor_a=a, anchor_b=b, cap=c),
            cfg,
            Budget(cfg.detect_budget),
        )
    except BudgetExceeded:
        value, wit = 0, None
    if value >= c and wit is not None:
        return _rooted(h, wit, c, True)
    internal = p[1:-1]
    for ti in range(len(internal)):
        for tj in range(ti + 1, len(internal)):
            out = _cutset(h, (internal[ti], internal[tj]), True)
            if out is not None:
                return out
    return HedgehogOutcome(kind=NONE, used_fallback=True)


__all__ = [
    "Hedgehog",
    "HedgehogOutcome",
    "contract_hedgehog",
    "rooted_or_cutset",
    "ROOTED_MODEL",
    "BAD_CUTSET",
    "NONE",
]
