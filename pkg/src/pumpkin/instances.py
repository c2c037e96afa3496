"""Instance files and seeded generator families.

The on-disk format is line based and 1-indexed:

    c meta <key> <value...>
    p pumpkin <n> <m>
    e <u> <v> <mult>

Comment lines carry metadata as key/value pairs (later keys win), the
``p`` line fixes the vertex count n and the number of ``e`` lines m, and
each ``e`` line is one undirected edge with a positive multiplicity.
Serialization is canonical: metadata sorted by key, edges sorted by
endpoints, exactly one space between tokens, trailing newline.  Parsing
the output of serialize and serializing again is byte-identical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import MultiGraph


@dataclass(frozen=True)
class InstanceFile:
    n: int
    edges: tuple[tuple[int, int, int], ...]
    meta: tuple[tuple[str, str], ...] = field(default=())

    def graph(self) -> MultiGraph:
        return MultiGraph.from_edges(range(1, self.n + 1), self.edges)

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)


def _canonical_edges(edges: Iterable[tuple[int, int, int]]) -> tuple[tuple[int, int, int], ...]:
    merged: dict[tuple[int, int], int] = {}
    for u, v, mult in edges:
        a, b = (u, v) if u < v else (v, u)
        merged[(a, b)] = merged.get((a, b), 0) + mult
    return tuple((a, b, m) for (a, b), m in sorted(merged.items()))


def make_instance(
    n: int,
    edges: Iterable[tuple[int, int, int]],
    meta: Optional[dict[str, str]] = None,
) -> InstanceFile:
    canon = _canonical_edges(edges)
    for u, v, mult in canon:
        if not (1 <= u < v <= n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        if mult < 1:
            raise ValueError(f"edge ({u},{v}) has multiplicity {mult}")
    meta_items = tuple(sorted((meta or {}).items()))
    return InstanceFile(n=n, edges=canon, meta=meta_items)


def from_graph(g: MultiGraph, meta: Optional[dict[str, str]] = None) -> InstanceFile:
    """Renumber an arbitrary graph to 1..n in sorted vertex order."""
    ids = {v: i for i, v in enumerate(g.vertices, start=1)}
    edges = [(ids[u], ids[v], m) for u, v, m in g.edges()]
    return make_instance(len(ids), edges, meta)


def serialize(inst: InstanceFile) -> str:
    lines = [f"c meta {k} {v}" for k, v in sorted(inst.meta)]
    lines.append(f"p pumpkin {inst.n} {len(inst.edges)}")
    lines.extend(f"e {u} {v} {m}" for u, v, m in inst.edges)
    return "\n".join(lines) + "\n"


def parse(text: str, strict: bool = False) -> InstanceFile:
    """Parse the line format; error messages carry 1-based line numbers.

    Duplicate edges merge their multiplicities unless strict, loops and
    out-of-range endpoints are always rejected, and the declared edge
    count must match the number of ``e`` lines seen.
    """
    n: Optional[int] = None
    declared_m: Optional[int] = None
    meta: dict[str, str] = {}
    seen: dict[tuple[int, int], int] = {}
    e_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        tag = tokens[0]
        if tag == "c":
            if len(tokens) >= 4 and tokens[1] == "meta":
                meta[tokens[2]] = " ".join(tokens[3:])
            continue
        if tag == "p":
            if n is not None:
                raise ValueError(f"line {lineno}: second p line")
            if len(tokens) != 4 or tokens[1] != "pumpkin":
                raise ValueError(f"line {lineno}: expected 'p pumpkin <n> <m>'")
            try:
                n, declared_m = int(tokens[2]), int(tokens[3])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-integer p fields") from exc
            if n < 0 or declared_m < 0:
                raise ValueError(f"line {lineno}: negative counts")
            continue
        if tag == "e":
            if n is None:
                raise ValueError(f"line {lineno}: e line before p line")
            if len(tokens) != 4:
                raise ValueError(f"line {lineno}: expected 'e <u> <v> <mult>'")
            try:
                u, v, mult = int(tokens[1]), int(tokens[2]), int(tokens[3])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: non-integer e fields") from exc
            if u == v:
                raise ValueError(f"line {lineno}: loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"line {lineno}: endpoint out of range 1..{n}")
            if mult < 1:
                raise ValueError(f"line {lineno}: multiplicity must be positive")
            key = (min(u, v), max(u, v))
            if key in seen and strict:
                raise ValueError(f"line {lineno}: duplicate edge {key}")
            seen[key] = seen.get(key, 0) + mult
            e_lines += 1
            continue
        raise ValueError(f"line {lineno}: unknown line tag {tag!r}")
    if n is None:
        raise ValueError("missing p line")
    if e_lines != declared_m:
        raise ValueError(f"p line declares {declared_m} edges, found {e_lines}")
    return make_instance(n, [(u, v, m) for (u, v), m in seen.items()], meta)


def load(path: str, strict: bool = False) -> InstanceFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read(), strict=strict)


def save(inst: InstanceFile, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(inst))


# Generator families ----------------------------------------------------

def _meta(family: str, seed: int, **params) -> dict[str, str]:
    out = {"family": family, "seed": str(seed)}
    for k, v in params.items():
        out[k] = str(v)
    return out


def random_multigraph(
    n: int, edge_prob: float, max_mult: int = 3, seed: int = 0
) -> InstanceFile:
    rng = random.Random(seed)
    edges = []
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < edge_prob:
                edges.append((u, v, rng.randint(1, max_mult)))
    return make_instance(
        n, edges, _meta("random", seed, n=n, edge_prob=edge_prob, max_mult=max_mult)
    )


def _theta_gadget(start: int, c: int) -> tuple[list[tuple[int, int, int]], int, int, int]:
    """c internally disjoint 2-paths between two poles; max pumpkin is c."""
    a = start
    b = start + 1
    edges = []
    nxt = start + 2
    for _ in range(c):
        edges.append((a, nxt, 1))
        edges.append((nxt, b, 1))
        nxt += 1
    return edges, a, b, nxt


def planted_pumpkins(
    count: int, c: int, glue: str = "path", seed: int = 0
) -> InstanceFile:
    """Disjoint theta gadgets, optionally strung together by bridges.

    Each gadget contributes one c-pumpkin minor and the gadgets are
    vertex disjoint, so nu_c is at least count (recorded as nu_lb).
    Bridges are single edges and never raise any gadget's maximum.
    """
    if count < 1 or c < 1:
        raise ValueError("count and c must be positive")
    if glue not in ("path", "tree", "disjoint"):
        raise ValueError(f"unknown glue {glue!r}")
    rng = random.Random(seed)
    edges: list[tuple[int, int, int]] = []
    poles: list[tuple[int, int]] = []
    nxt = 1
    for _ in range(count):
        gadget, a, b, nxt = _theta_gadget(nxt, c)
        edges.extend(gadget)
        poles.append((a, b))
    if glue == "path":
        for i in range(count - 1):
            edges.append((poles[i][1], poles[i + 1][0], 1))
    elif glue == "tree":
        for i in range(1, count):
            j = rng.randrange(i)
            edges.append((poles[j][1], poles[i][0], 1))
    n = nxt - 1
    return make_instance(
        n,
        edges,
        _meta("planted", seed, count=count, c=c, glue=glue, nu_lb=count),
    )


def cactus(n_cycles: int, max_cycle: int = 6, seed: int = 0) -> InstanceFile:
    """Cycles glued at single shared vertices; every block is a cycle."""
    if n_cycles < 1 or max_cycle < 3:
        raise ValueError("need at least one cycle of length >= 3")
    rng = random.Random(seed)
    edges: list[tuple[int, int, int]] = []
    vertices = [1]
    nxt = 2
    for _ in range(n_cycles):
        hub = rng.choice(vertices)
        length = rng.randint(3, max_cycle)
        ring = [hub]
        for _ in range(length - 1):
            ring.append(nxt)
            vertices.append(nxt)
            nxt += 1
        for i in range(length):
            a, b = ring[i], ring[(i + 1) % length]
            edges.append((min(a, b), max(a, b), 1))
    return make_instance(
        nxt - 1, edges, _meta("cactus", seed, n_cycles=n_cycles, max_cycle=max_cycle)
    )


def hedgehog_instance(
    path_len: int,
    quill_count: int,
    attach_spread: int = 4,
    max_mult: int = 1,
    seed: int = 0,
) -> InstanceFile:
    """An induced path plus independent quills, each with >= 2 path contacts."""
    if path_len < 2 or quill_count < 0:
        raise ValueError("need a path of length >= 2")
    rng = random.Random(seed)
    edges = [(i, i + 1, 1) for i in range(1, path_len)]
    nxt = path_len + 1
    for _ in range(quill_count):
        q = nxt
        nxt += 1
        left = rng.randint(1, path_len - 1)
        right = min(path_len, left + rng.randint(1, max(1, attach_spread)))
        pool = list(range(left, right + 1))
        targets = rng.sample(pool, rng.randint(2, min(len(pool), 4)))
        for t in sorted(targets):
            edges.append((t, q, rng.randint(1, max(1, max_mult))))
    inst_meta = _meta(
        "hedgehog", seed, path_len=path_len, quill_count=quill_count,
        attach_spread=attach_spread, max_mult=max_mult,
    )
    inst_meta["path"] = " ".join(str(i) for i in range(1, path_len + 1))
    return make_instance(nxt - 1, edges, inst_meta)


def regular_graph(n: int, degree: int, seed: int = 0, tries: int = 2000) -> InstanceFile:
    """Simple d-regular graph by the configuration model with rejection."""
    if n * degree % 2 != 0 or degree >= n:
        raise ValueError("need n*degree even and degree < n")
    rng = random.Random(seed)
    for _ in range(tries):
        stubs = [v for v in range(1, n + 1) for _ in range(degree)]
        rng.shuffle(stubs)
        pairs = set()
        ok = True
        for i in range(0, len(stubs), 2):
            a, b = stubs[i], stubs[i + 1]
            if a == b or (min(a, b), max(a, b)) in pairs:
                ok = False
                break
            pairs.add((min(a, b), max(a, b)))
        if ok:
            edges = [(a, b, 1) for a, b in sorted(pairs)]
            return make_instance(n, edges, _meta("regular", seed, n=n, degree=degree))
    raise ValueError(f"no simple {degree}-regular graph found in {tries} tries")


GENERATORS = {
    "random": random_multigraph,
    "planted": planted_pumpkins,
    "cactus": cactus,
    "hedgehog": hedgehog_instance,
    "regular": regular_graph,
}


__all__ = [
    "InstanceFile",
    "make_instance",
    "from_graph",
    "serialize",
    "parse",
    "load",
    "save",
    "random_multigraph",
    "planted_pumpkins",
    "cactus",
    "hedgehog_instance",
    "regular_graph",
    "GENERATORS",
]
