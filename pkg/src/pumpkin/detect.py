"""Exact pumpkin-minor detection.

The engine decides "is there a k-pumpkin-model (optionally anchored)?" by a
branch-and-bound over three-way vertex labels (side A, side B, out), visiting
vertices in ascending id order.  The admissible upper bound is the current
cross count plus the total multiplicity of edges that could still become
cross edges; sides are additionally pruned when their assigned vertices can
no longer end up in one connected piece.  Values are computed by binary
descent over k.  Every search is deterministic and budget-guarded: running
out of budget raises, it never returns a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .config import Config, resolve
from .errors import BudgetExceeded
from .graph import (
    MultiGraph,
    Outgrowth,
    PumpkinModel,
    blocks,
    linked_graph,
    make_model,
    side_graph,
)

_UND, _A, _B, _OUT = 0, 1, 2, 3


class Budget:
    """Shared node-expansion counter."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(
                f"detection budget of {self.limit} node expansions exhausted",
                self.used,
            )


@dataclass(frozen=True)
class AnchoredQuery:
    """Largest-k query, optionally pinning one vertex per side."""

    graph: MultiGraph
    anchor_a: Optional[int] = None
    anchor_b: Optional[int] = None
    cap: Optional[int] = None


class _Search:
    def __init__(self, g: MultiGraph):
        self.g = g
        self.verts: List[int] = list(g.vertices)
        self.index: Dict[int, int] = {v: i for i, v in enumerate(self.verts)}
        self.n = len(self.verts)
        self.adj: List[List[Tuple[int, int]]] = []
        self.nmask: List[int] = []
        for v in self.verts:
            row = [(self.index[w], g.multiplicity(v, w)) for w in g.neighbors(v)]
            self.adj.append(row)
            mask = 0
            for j, _ in row:
                mask |= 1 << j
            self.nmask.append(mask)
        self.total = g.total_multiplicity()
        self.all_mask = (1 << self.n) - 1 if self.n else 0

    def _closure(self, start: int, allowed: int) -> int:
        seen = start & allowed
        frontier = seen
        while frontier:
            nxt = 0
            x = frontier
            while x:
                low = x & -x
                i = low.bit_length() - 1
                x ^= low
                nxt |= self.nmask[i]
            nxt &= allowed & ~seen
            seen |= nxt
            frontier = nxt
        return seen

    def _side_connectable(self, side_mask: int, undecided: int) -> bool:
        if side_mask == 0:
            return True
        low = side_mask & -side_mask
        reach = self._closure(low, side_mask | undecided)
        return (side_mask & ~reach) == 0

    def _side_connected(self, side_mask: int) -> bool:
        if side_mask == 0:
            return False
        low = side_mask & -side_mask
        return self._closure(low, side_mask) == side_mask

    def decide(
        self,
        k: int,
        budget: Budget,
        anchor_a: Optional[int] = None,
        anchor_b: Optional[int] = None,
    ) -> Optional[Tuple[int, int]]:
        """Find sides (as bitmasks) with cross count >= k, or None."""
        n = self.n
        if n < 2 or k < 1 or self.total < k:
            return None
        ia = self.index[anchor_a] if anchor_a is not None else None
        ib = self.index[anchor_b] if anchor_b is not None else None
        symmetry_free = ia is None and ib is None
        lab = [_UND] * n
        state = {"a": 0, "b": 0, "out": 0, "cross": 0, "pot": self.total}

        def assign(i: int, side: int) -> None:
            lab[i] = side
            bit = 1 << i
            if side == _A:
                state["a"] |= bit
            elif side == _B:
                state["b"] |= bit
            else:
                state["out"] |= bit
            for j, m in self.adj[i]:
                lj = lab[j]
                if side == _OUT:
                    if lj != _OUT:
                        state["pot"] -= m
                else:
                    if lj == _A or lj == _B:
                        state["pot"] -= m
                        if lj != side:
                            state["cross"] += m

        def unassign(i: int, side: int) -> None:
            bit = 1 << i
            if side == _A:
                state["a"] ^= bit
            elif side == _B:
                state["b"] ^= bit
            else:
                state["out"] ^= bit
            for j, m in self.adj[i]:
                lj = lab[j]
                if side == _OUT:
                    if lj != _OUT:
                        state["pot"] += m
                else:
                    if lj == _A or lj == _B:
                        state["pot"] += m
                        if lj != side:
                            state["cross"] -= m
            lab[i] = _UND

        def anchors_placed(pos: int) -> bool:
            if ia is not None and pos <= ia:
                return False
            if ib is not None and pos <= ib:
                return False
            return True

        def rec(pos: int) -> Optional[Tuple[int, int]]:
            budget.tick()
            if state["cross"] + state["pot"] < k:
                return None
            undecided = self.all_mask & ~(state["a"] | state["b"] | state["out"])
            if not self._side_connectable(state["a"], undecided):
                return None
            if not self._side_connectable(state["b"], undecided):
                return None
            if (
                state["cross"] >= k
                and state["a"]
                and state["b"]
                and anchors_placed(pos)
                and self._side_connected(state["a"])
                and self._side_connected(state["b"])
            ):
                return (state["a"], state["b"])
            if pos == n:
                return None
            if pos == ia:
                options = (_A,)
            elif pos == ib:
                options = (_B,)
            elif symmetry_free and state["a"] == 0:
                # unordered sides: the lowest model vertex goes to side A
                options = (_A, _OUT)
            else:
                options = (_A, _B, _OUT)
            for side in options:
                assign(pos, side)
                got = rec(pos + 1)
                if got is not None:
                    return got
                unassign(pos, side)
            return None

        return rec(0)

    def masks_to_sets(self, masks: Tuple[int, int]) -> Tuple[frozenset, frozenset]:
        a, b = masks
        sa = frozenset(self.verts[i] for i in range(self.n) if a >> i & 1)
        sb = frozenset(self.verts[i] for i in range(self.n) if b >> i & 1)
        return sa, sb


# -- public operations -------------------------------------------------------


def edge_bound_forces_pumpkin(g: MultiGraph, c: int) -> bool:
    """For c >= 2: more than (c-1)(2c-1)|V| edges make a c-pumpkin unavoidable."""
    if c < 2:
        return g.total_multiplicity() >= 1
    return g.total_multiplicity() > (c - 1) * (2 * c - 1) * g.n


def max_pumpkin(
    q: AnchoredQuery,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
) -> Tuple[int, Optional[PumpkinModel]]:
    """Largest k <= cap admitting a k-pumpkin-model respecting the anchors,
    with a witness (0, None when even k=1 is out of reach)."""
    cfg = resolve(cfg)
    g = q.graph
    for anchor in (q.anchor_a, q.anchor_b):
        if anchor is not None and anchor not in g:
            raise ValueError(f"anchor {anchor} is not a vertex")
    if q.anchor_a is not None and q.anchor_a == q.anchor_b:
        raise ValueError("anchors must differ")
    budget = budget or Budget(cfg.detect_budget)
    hi = g.total_multiplicity()
    if q.cap is not None:
        if q.cap < 1:
            raise ValueError("cap must be at least 1")
        hi = min(hi, q.cap)
    if hi == 0 or g.n < 2:
        return 0, None
    search = _Search(g)
    lo = 0
    best: Optional[Tuple[int, int]] = None
    if q.anchor_a is None and q.anchor_b is None:
        mu_edge = None
        for u, v, m in g.edges():
            if mu_edge is None or m > mu_edge[2]:
                mu_edge = (u, v, m)
        if mu_edge is not None:
            u, v, m = mu_edge
            lo = min(m, hi)
            best = (1 << search.index[u], 1 << search.index[v])
    while lo < hi:
        mid = (lo + hi + 1) // 2
        got = search.decide(mid, budget, q.anchor_a, q.anchor_b)
        if got is not None:
            lo = mid
            best = got
        else:
            hi = mid - 1
    if lo == 0 or best is None:
        return 0, None
    sa, sb = search.masks_to_sets(best)
    return lo, make_model(g, sa, sb)


_cache: Dict[tuple, Optional[PumpkinModel]] = {}
_CACHE_MAX = 200_000


def clear_cache() -> None:
    _cache.clear()


def has_pumpkin(
    g: MultiGraph,
    c: int,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
) -> Optional[PumpkinModel]:
    """A verified c-pumpkin-model of g, or None when g is c-pumpkin-free.

    Fast paths: multiplicity >= c gives an immediate 2-vertex witness; blocks
    are searched separately since a minimal model never crosses a cut vertex.
    """
    if c < 1:
        raise ValueError("c must be at least 1")
    cfg = resolve(cfg)
    key = (g.signature(), c)
    if key in _cache:
        return _cache[key]
    budget = budget or Budget(cfg.detect_budget)
    result: Optional[PumpkinModel] = None
    if g.n >= 2:
        for u, v, m in g.edges():
            if m >= c or c == 1:
                result = make_model(g, frozenset([u]), frozenset([v]))
                break
        if result is None and c >= 2:
            for block in blocks(g):
                if len(block) < 3:
                    continue  # 2-vertex blocks are covered by the multiplicity path
                sub = g.induced(block)
                if sub.total_multiplicity() < c:
                    continue
                bkey = (sub.signature(), c)
                if bkey in _cache:
                    found = _cache[bkey]
                else:
                    search = _Search(sub)
                    masks = search.decide(c, budget)
                    found = None
                    if masks is not None:
                        sa, sb = search.masks_to_sets(masks)
                        found = make_model(sub, sa, sb)
                    _maybe_cache(bkey, found)
                if found is not None:
                    result = make_model(g, found.side_a, found.side_b)
                    break
    _maybe_cache(key, result)
    return result


def _maybe_cache(key: tuple, value: Optional[PumpkinModel]) -> None:
    if len(_cache) >= _CACHE_MAX:
        _cache.clear()
    _cache[key] = value


def gamma(
    g: MultiGraph,
    og: Outgrowth,
    cap: Optional[int] = None,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
) -> Tuple[int, PumpkinModel]:
    """Largest k with a k-pumpkin-model of the side graph keeping u and v on
    opposite sides, plus a witness.  Always at least 1 for a valid outgrowth.
    The witness sides are in canonical order; locate u by membership."""
    og.validate(g)
    gam = side_graph(g, og)
    value, witness = max_pumpkin(
        AnchoredQuery(gam, anchor_a=og.u, anchor_b=og.v, cap=cap), cfg, budget
    )
    if value < 1 or witness is None:
        raise ValueError("outgrowth admits no anchored model; invalid outgrowth")
    return value, witness


def lam(
    g: MultiGraph,
    og: Outgrowth,
    cap: Optional[int] = None,
    cfg: Optional[Config] = None,
    budget: Optional[Budget] = None,
) -> Tuple[int, PumpkinModel]:
    """Largest k with a k-pumpkin-model of the linked graph keeping u and v
    on a common side, computed on the u-v merge.  The witness lives in the
    linked graph; its sides are in canonical order, so locate the side
    holding both attachments by membership."""
    og.validate(g)
    merged = side_graph(g, og).merge_vertices(og.u, og.v)
    w = min(og.u, og.v)
    value, witness = max_pumpkin(
        AnchoredQuery(merged, anchor_a=w, cap=cap), cfg, budget
    )
    if value < 1 or witness is None:
        raise ValueError("outgrowth admits no linked model; invalid outgrowth")
    lam_graph = linked_graph(g, og)
    # model orientation is canonical, so locate the merged vertex first
    if w in witness.side_a:
        merged_side, other_side = witness.side_a, witness.side_b
    else:
        merged_side, other_side = witness.side_b, witness.side_a
    side_a = (set(merged_side) - {w}) | {og.u, og.v}
    model = make_model(lam_graph, frozenset(side_a), other_side)
    return value, model
