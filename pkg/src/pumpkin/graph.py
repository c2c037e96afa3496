"""Loopless undirected multigraphs and the pumpkin-model primitives.

Vertex ids are opaque integers that are never reused within a session:
every derived graph carries the id counter forward, so traces can refer to
deleted or contracted vertices unambiguously.  Graphs are immutable
snapshots; all operations return new graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from .errors import MultiplicityOverflow

DEFAULT_MULTIPLICITY_CAP = 1 << 16


class MultiGraph:
    __slots__ = ("_adj", "_next_id", "_sig")

    def __init__(self, adj: Mapping[int, Mapping[int, int]], next_id: Optional[int] = None):
        store: Dict[int, Dict[int, int]] = {v: dict(nbrs) for v, nbrs in adj.items()}
        for v, nbrs in store.items():
            for w, m in nbrs.items():
                if v == w:
                    raise ValueError(f"loop at vertex {v}")
                if m < 1:
                    raise ValueError(f"multiplicity {m} on edge {{{v},{w}}}")
                if w not in store or store[w].get(v) != m:
                    raise ValueError(f"asymmetric adjacency at edge {{{v},{w}}}")
        self._adj = store
        top = max(store, default=-1) + 1
        self._next_id = top if next_id is None else max(next_id, top)
        self._sig: Optional[tuple] = None

    # -- constructors --------------------------------------------------

    @classmethod
    def empty(cls) -> "MultiGraph":
        return cls({})

    @classmethod
    def from_edges(
        cls,
        vertices: Iterable[int] = (),
        edges: Iterable[Tuple[int, int, int]] = (),
        multiplicity_cap: int = DEFAULT_MULTIPLICITY_CAP,
    ) -> "MultiGraph":
        adj: Dict[int, Dict[int, int]] = {int(v): {} for v in vertices}
        for u, v, m in edges:
            u, v, m = int(u), int(v), int(m)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if m < 1:
                raise ValueError(f"multiplicity {m} on edge {{{u},{v}}}")
            adj.setdefault(u, {})
            adj.setdefault(v, {})
            total = adj[u].get(v, 0) + m
            if total > multiplicity_cap:
                raise MultiplicityOverflow(
                    f"multiplicity {total} on edge {{{u},{v}}} exceeds cap {multiplicity_cap}"
                )
            adj[u][v] = total
            adj[v][u] = total
        return cls(adj)

    # -- basic queries ---------------------------------------------------

    @property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted(self._adj))

    @property
    def vertex_set(self) -> FrozenSet[int]:
        return frozenset(self._adj)

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def next_id(self) -> int:
        return self._next_id

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted(self._adj[v]))

    def multiplicity(self, u: int, v: int) -> int:
        if u not in self._adj or v not in self._adj:
            raise ValueError(f"no such vertex in edge query {{{u},{v}}}")
        return self._adj[u].get(v, 0)

    def degree(self, v: int) -> int:
        """Degree counting edge multiplicities."""
        return sum(self._adj[v].values())

    def simple_degree(self, v: int) -> int:
        """Number of distinct neighbors."""
        return len(self._adj[v])

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """Sorted (u, v, mult) triples with u < v."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v, self._adj[u][v])

    def total_multiplicity(self) -> int:
        return sum(m for _, _, m in self.edges())

    def simple_edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def max_multiplicity(self) -> int:
        best = 0
        for _, _, m in self.edges():
            if m > best:
                best = m
        return best

    def min_degree(self) -> int:
        return min((self.degree(v) for v in self._adj), default=0)

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self._adj), default=0)

    def signature(self) -> tuple:
        """Hashable content fingerprint (vertices plus sorted edge triples)."""
        if self._sig is None:
            self._sig = (frozenset(self._adj), tuple(self.edges()))
        return self._sig

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        return f"MultiGraph(n={self.n}, m={self.total_multiplicity()})"

    # -- connectivity ----------------------------------------------------

    def components(self) -> Tuple[FrozenSet[int], ...]:
        seen: set = set()
        out = []
        for root in sorted(self._adj):
            if root in seen:
                continue
            comp = {root}
            stack = [root]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return tuple(out)

    def cc(self) -> int:
        return len(self.components())

    def is_connected_set(self, s: Iterable[int]) -> bool:
        """Does ``s`` induce a connected non-empty subgraph?"""
        want = set(s)
        if not want:
            return False
        for v in want:
            if v not in self._adj:
                return False
        start = next(iter(want))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self._adj[x]:
                if y in want and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == want

    def cross_edges(self, a: Iterable[int], b: Iterable[int]) -> int:
        """Total multiplicity of edges with one endpoint in each set."""
        sa, sb = set(a), set(b)
        total = 0
        for u in sa:
            nbrs = self._adj.get(u, {})
            for v, m in nbrs.items():
                if v in sb:
                    total += m
        return total

    def distance(self, u: int, v: int) -> Optional[int]:
        if u not in self._adj or v not in self._adj:
            raise ValueError("distance endpoints must be vertices")
        if u == v:
            return 0
        dist = {u: 0}
        queue = [u]
        while queue:
            nxt = []
            for x in queue:
                for y in sorted(self._adj[x]):
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        if y == v:
                            return dist[y]
                        nxt.append(y)
            queue = nxt
        return None

    def bfs_layers(self, source: int) -> Dict[int, int]:
        dist = {source: 0}
        queue = [source]
        while queue:
            nxt = []
            for x in queue:
                for y in sorted(self._adj[x]):
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            queue = nxt
        return dist

    def shortest_path(self, u: int, v: int) -> Optional[Tuple[int, ...]]:
        """Deterministic shortest path (parents scanned in ascending id order)."""
        if u == v:
            return (u,)
        parent = {u: u}
        queue = [u]
        while queue:
            nxt = []
            for x in queue:
                for y in sorted(self._adj[x]):
                    if y not in parent:
                        parent[y] = x
                        if y == v:
                            path = [y]
                            while path[-1] != u:
                                path.append(parent[path[-1]])
                            return tuple(reversed(path))
                        nxt.append(y)
            queue = nxt
        return None

    def induced_diameter(self, s: Iterable[int]) -> int:
        """Diameter of the induced subgraph (must be connected)."""
        sub = self.induced(s)
        if not sub.is_connected_set(sub.vertex_set):
            raise ValueError("diameter of a disconnected set")
        best = 0
        for v in sub.vertices:
            best = max(best, max(sub.bfs_layers(v).values()))
        return best

    # -- derivation operations (all pure) --------------------------------

    def induced(self, s: Iterable[int]) -> "MultiGraph":
        keep = set(s)
        missing = keep - set(self._adj)
        if missing:
            raise ValueError(f"induced set contains unknown vertices {sorted(missing)}")
        adj = {
            v: {w: m for w, m in self._adj[v].items() if w in keep}
            for v in keep
        }
        return MultiGraph(adj, self._next_id)

    def delete_vertices(self, s: Iterable[int]) -> "MultiGraph":
        drop = set(s)
        missing = drop - set(self._adj)
        if missing:
            raise ValueError(f"deleting unknown vertices {sorted(missing)}")
        return self.induced(set(self._adj) - drop)

    def add_vertices(self, vs: Iterable[int]) -> "MultiGraph":
        adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        for v in vs:
            adj.setdefault(int(v), {})
        return MultiGraph(adj, self._next_id)

    def with_fresh_vertex(self) -> Tuple["MultiGraph", int]:
        """Add an isolated vertex under a never-used id."""
        v = self._next_id
        adj = {x: dict(nbrs) for x, nbrs in self._adj.items()}
        adj[v] = {}
        return MultiGraph(adj, v + 1), v

    def add_edges(
        self,
        edges: Iterable[Tuple[int, int, int]],
        multiplicity_cap: int = DEFAULT_MULTIPLICITY_CAP,
    ) -> "MultiGraph":
        adj = {v: dict(nbrs) for v, nbrs in self._adj.items()}
        for u, v, m in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if m < 1:
                raise ValueError(f"multiplicity {m} on edge {{{u},{v}}}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge {{{u},{v}}} touches unknown vertex")
            total = adj[u].get(v, 0) + m
            if total > multiplicity_cap:
                raise MultiplicityOverflow(
                    f"multiplicity {total} on edge {{{u},{v}}} exceeds cap {multiplicity_cap}"
                )
            adj[u][v] = total
            adj[v][u] = total
        return MultiGraph(adj, self._next_id)

    def merge_vertices(self, u: int, v: int) -> "MultiGraph":
        """Identify u and v into min(u, v); parallel edges add up, loops vanish."""
        if u not in self._adj or v not in self._adj:
            raise ValueError("merge endpoints must be vertices")
        if u == v:
            raise ValueError("cannot merge a vertex with itself")
        keep, gone = (u, v) if u < v else (v, u)
        adj = {x: dict(nbrs) for x, nbrs in self._adj.items()}
        for w, m in adj[gone].items():
            if w == keep:
                continue  # the u-v edges become loops: dropped
            adj[keep][w] = adj[keep].get(w, 0) + m
            adj[w][keep] = adj[keep][w]
            del adj[w][gone]
        adj[keep].pop(gone, None)
        del adj[gone]
        return MultiGraph(adj, self._next_id)

    def contract_edge(self, u: int, v: int) -> "MultiGraph":
        """Contract one u-v edge: parallel copies are kept as loops would
        arise and are therefore deleted; all other multiplicities are kept."""
        if self.multiplicity(u, v) < 1:
            raise ValueError(f"no edge {{{u},{v}}} to contract")
        return self.merge_vertices(u, v)

    def contract_set(self, s: Iterable[int]) -> "MultiGraph":
        """Contract a connected vertex set into its minimum id."""
        todo = sorted(set(s))
        if not todo:
            raise ValueError("contracting an empty set")
        if not self.is_connected_set(todo):
            raise ValueError("contracting a disconnected set")
        g = self
        rep = todo[0]
        for v in todo[1:]:
            g = g.merge_vertices(rep, v)
            rep = min(rep, v)
        return g


# -- block decomposition ---------------------------------------------------


def blocks(g: MultiGraph) -> Tuple[FrozenSet[int], ...]:
    """Biconnected components of the underlying graph, as vertex sets.

    Bridges give 2-vertex blocks and isolated vertices give singletons.
    Parallel edges never split a block since they repeat an existing pair.
    """
    disc: Dict[int, int] = {}
    low: Dict[int, int] = {}
    out = []
    counter = itertools.count()
    for root in sorted(g.vertex_set):
        if root in disc:
            continue
        if g.simple_degree(root) == 0:
            disc[root] = next(counter)
            out.append(frozenset([root]))
            continue
        disc[root] = low[root] = next(counter)
        estack: list = []
        stack = [(root, None, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    # skip one tree-edge occurrence; the underlying graph is
                    # simple so this is the only one
                    parent = None
                    stack[-1] = (v, None, it)
                    continue
                if w not in disc:
                    disc[w] = low[w] = next(counter)
                    estack.append((v, w))
                    stack.append((w, v, iter(g.neighbors(w))))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
                        stack[-1] = (v, parent, it)
            if advanced:
                continue
            stack.pop()
            if stack:
                pv = stack[-1][0]
                if low[v] < low[pv]:
                    low[pv] = low[v]
                    p, pp, pit = stack[-1]
                    stack[-1] = (p, pp, pit)
                if low[v] >= disc[pv]:
                    block = set()
                    while estack:
                        a, b = estack.pop()
                        block.add(a)
                        block.add(b)
                        if (a, b) == (pv, v):
                            break
                    out.append(frozenset(block))
    return tuple(sorted(out, key=lambda b: (min(b), len(b), tuple(sorted(b)))))


# -- pumpkin models ---------------------------------------------------------


@dataclass(frozen=True)
class PumpkinModel:
    """Unordered pair of disjoint connected vertex sets with their cross count.

    ``cross_edges`` must equal the true total multiplicity between the sides
    in the host graph; ``verify_model`` checks that.
    """

    side_a: FrozenSet[int]
    side_b: FrozenSet[int]
    cross_edges: int

    def __post_init__(self):
        a = frozenset(self.side_a)
        b = frozenset(self.side_b)
        # canonical orientation: the side holding the smaller vertex first
        if a and b and min(b) < min(a):
            a, b = b, a
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @property
    def vertices(self) -> FrozenSet[int]:
        return self.side_a | self.side_b

    @property
    def size(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def to_json(self) -> dict:
        return {
            "side_a": sorted(self.side_a),
            "side_b": sorted(self.side_b),
            "cross_edges": self.cross_edges,
        }

    @classmethod
    def from_json(cls, payload: Mapping) -> "PumpkinModel":
        return cls(
            frozenset(int(v) for v in payload["side_a"]),
            frozenset(int(v) for v in payload["side_b"]),
            int(payload["cross_edges"]),
        )


def make_model(g: MultiGraph, a: Iterable[int], b: Iterable[int]) -> PumpkinModel:
    """Build a model with the true cross count filled in."""
    sa, sb = frozenset(a), frozenset(b)
    return PumpkinModel(sa, sb, g.cross_edges(sa, sb))


def verify_model(g: MultiGraph, m: PumpkinModel, c: int) -> Optional[str]:
    """None when the model is a valid c-pumpkin witness in g, else the
    first failed clause."""
    if c < 1:
        return "c_below_one"
    if not m.side_a or not m.side_b:
        return "empty_side"
    if m.side_a & m.side_b:
        return "overlapping_sides"
    for v in m.side_a | m.side_b:
        if v not in g:
            return "vertex_not_in_graph"
    if not g.is_connected_set(m.side_a):
        return "side_a_disconnected"
    if not g.is_connected_set(m.side_b):
        return "side_b_disconnected"
    true_cross = g.cross_edges(m.side_a, m.side_b)
    if true_cross != m.cross_edges:
        return "cross_count_mismatch"
    if true_cross < c:
        return "cross_below_c"
    return None


def assert_valid_model(g: MultiGraph, m: PumpkinModel, c: int) -> None:
    reason = verify_model(g, m, c)
    if reason is not None:
        raise ValueError(f"invalid {c}-pumpkin model: {reason}")


def minimize_model(g: MultiGraph, m: PumpkinModel, c: int) -> PumpkinModel:
    """Shrink to a minimal model: no single vertex can leave either side.

    Greedy removal in ascending id order until fixpoint; for this predicate
    (connected sides, cross count at least c) the single-removal fixpoint is
    also subset-minimal, because from any valid subset pair some removable
    vertex always exists on the way down.
    """
    assert_valid_model(g, m, c)
    a, b = set(m.side_a), set(m.side_b)
    changed = True
    while changed:
        changed = False
        for v in sorted(a | b):
            side = a if v in a else b
            if len(side) == 1:
                continue
            side.discard(v)
            if g.is_connected_set(side) and g.cross_edges(a, b) >= c:
                changed = True
                break
            side.add(v)
    return make_model(g, a, b)


# -- outgrowths -------------------------------------------------------------


@dataclass(frozen=True)
class Outgrowth:
    """A component C of g minus {u, v} with at least two vertices, where both
    u and v have neighbors inside C."""

    component: FrozenSet[int]
    u: int
    v: int

    def validate(self, g: MultiGraph) -> None:
        if self.u == self.v:
            raise ValueError("outgrowth attachments must differ")
        if self.u not in g or self.v not in g:
            raise ValueError("outgrowth attachments must be vertices")
        if len(self.component) < 2:
            raise ValueError("outgrowth component needs at least 2 vertices")
        rest = g.delete_vertices([self.u, self.v])
        if self.component not in rest.components():
            raise ValueError("outgrowth component is not a component of g - {u,v}")
        for anchor in (self.u, self.v):
            if not any(w in self.component for w in g.neighbors(anchor)):
                raise ValueError(f"attachment {anchor} has no neighbor in the component")

    def to_json(self) -> dict:
        return {"component": sorted(self.component), "u": self.u, "v": self.v}


def side_graph(g: MultiGraph, og: Outgrowth) -> MultiGraph:
    """Induced subgraph on C + {u, v} with every u-v edge removed."""
    sub = g.induced(set(og.component) | {og.u, og.v})
    m = sub.multiplicity(og.u, og.v)
    if m == 0:
        return sub
    adj = {x: {y: k for y, k in ((w, sub.multiplicity(x, w)) for w in sub.neighbors(x)) if k}
           for x in sub.vertex_set}
    adj[og.u].pop(og.v, None)
    adj[og.v].pop(og.u, None)
    return MultiGraph(adj, sub.next_id)


def linked_graph(g: MultiGraph, og: Outgrowth) -> MultiGraph:
    """The side graph plus a single u-v edge."""
    return side_graph(g, og).add_edges([(og.u, og.v, 1)])


# -- contraction maps and model lifting -------------------------------------


@dataclass(frozen=True)
class ContractionMap:
    """Maps contracted-graph vertices to disjoint connected bags of the
    original graph.  ``diameter_bound`` bounds every bag's induced diameter."""

    bags: Mapping[int, FrozenSet[int]]
    diameter_bound: int

    def validate(self, g: MultiGraph) -> None:
        seen: set = set()
        for rep, bag in self.bags.items():
            if not bag:
                raise ValueError(f"empty bag for {rep}")
            if seen & set(bag):
                raise ValueError("bags overlap")
            seen |= set(bag)
            if not g.is_connected_set(bag):
                raise ValueError(f"bag of {rep} is not connected")
            if g.induced_diameter(bag) > max(self.diameter_bound, 1):
                raise ValueError(f"bag of {rep} exceeds the diameter bound")

    def bag(self, rep: int) -> FrozenSet[int]:
        got = self.bags.get(rep)
        if got is None:
            raise ValueError(f"no bag for contracted vertex {rep}")
        return got


def apply_contraction(g: MultiGraph, cm: ContractionMap) -> MultiGraph:
    """Contract every bag; vertices not covered by any bag stay as singleton
    bags of themselves."""
    cm.validate(g)
    covered = set()
    for bag in cm.bags.values():
        covered |= set(bag)
    h = g
    for rep in sorted(cm.bags):
        bag = cm.bags[rep]
        h = h.contract_set(bag)
        low = min(bag)
        if low != rep:
            raise ValueError(f"bag representative {rep} must be its minimum {low}")
    return h


def _steiner_connect(g: MultiGraph, universe: FrozenSet[int], terminals: Iterable[int]) -> set:
    """Grow a connected superset of the terminals inside ``universe`` by
    attaching each terminal along a shortest path, ascending order."""
    terms = sorted(set(terminals))
    if not terms:
        return {min(universe)}
    sub = g.induced(universe)
    tree = {terms[0]}
    for t in terms[1:]:
        if t in tree:
            continue
        # BFS from t until the tree is hit
        parent = {t: t}
        queue = [t]
        hit = None
        while queue and hit is None:
            nxt = []
            for x in queue:
                for y in sorted(sub.neighbors(x)):
                    if y not in parent:
                        parent[y] = x
                        if y in tree:
                            hit = y
                            break
                        nxt.append(y)
                if hit is not None:
                    break
            queue = nxt
        if hit is None:
            raise ValueError("terminals lie in different components of the bag union")
        walk = hit
        while walk != t:
            tree.add(walk)
            walk = parent[walk]
        tree.add(t)
    return tree


def lift_model(
    g: MultiGraph,
    cm: ContractionMap,
    m: PumpkinModel,
    k: int,
    c: Optional[int] = None,
) -> PumpkinModel:
    """Lift a model of the contracted graph back to g.

    ``k`` is the bag diameter bound (k = 0 is treated as 1).  The result is
    checked against the size guarantee k * c * s where s is the input model
    size and c defaults to the input cross count.  When the plain bag-union
    expansion already fits the bound it is returned as-is, so an identity
    map returns the model unchanged.
    """
    cm.validate(g)
    k_eff = max(k, 1)
    target = m.cross_edges if c is None else c
    if target < 1:
        raise ValueError("lift target must be at least 1")
    s = m.size
    bound = k_eff * max(target, 1) * s

    def expand(side: FrozenSet[int]) -> FrozenSet[int]:
        out: set = set()
        for rep in side:
            if rep in cm.bags:
                out |= set(cm.bag(rep))
            elif rep in g:
                out.add(rep)
            else:
                raise ValueError(f"model vertex {rep} has no bag and is not in g")
        return frozenset(out)

    ua, ub = expand(m.side_a), expand(m.side_b)
    if ua & ub:
        raise ValueError("expanded sides overlap")
    full = make_model(g, ua, ub)
    if full.cross_edges < target:
        raise ValueError("expansion lost cross edges; contraction map inconsistent")
    if not g.is_connected_set(ua) or not g.is_connected_set(ub):
        raise ValueError("expanded side is disconnected; contraction map inconsistent")
    if full.size <= bound:
        return full

    # Prune: secure `target` cross edges, connect their endpoints inside each
    # side, then shrink to a minimal model.
    chosen: list = []
    got = 0
    for u, v, mult in g.edges():
        if got >= target:
            break
        if (u in ua and v in ub) or (u in ub and v in ua):
            chosen.append((u, v, mult))
            got += mult
    terms_a = {u if u in ua else v for u, v, _ in chosen}
    terms_b = {u if u in ub else v for u, v, _ in chosen}
    a = _steiner_connect(g, ua, terms_a)
    b = _steiner_connect(g, ub, terms_b)
    pruned = minimize_model(g, make_model(g, a, b), target)
    if pruned.size > bound:
        raise ValueError(
            f"lifted model size {pruned.size} exceeds bound {bound} (k={k_eff}, c={target}, s={s})"
        )
    return pruned
