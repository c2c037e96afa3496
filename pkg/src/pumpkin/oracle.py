"""Exhaustive reference oracles.

Everything here answers by brute enumeration over vertex subsets and is
deliberately independent of the branch-and-bound machinery in `detect` and
of the reduction rules: these functions import graph primitives only, so the
fast paths have something honest to be measured against.  They are meant for
small graphs; all entry points refuse inputs above a hard vertex limit.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional

from .config import Config, resolve
from .errors import SizeLimitExceeded
from .graph import MultiGraph, PumpkinModel, make_model


class _Ctx:
    """Bitmask view of one connected component."""

    __slots__ = ("verts", "index", "rows", "nmask", "full")

    def __init__(self, g: MultiGraph, comp: frozenset[int]) -> None:
        self.verts = sorted(comp)
        self.index = {v: i for i, v in enumerate(self.verts)}
        self.rows = []
        self.nmask = []
        for v in self.verts:
            row = []
            mask = 0
            for w in g.neighbors(v):
                if w in self.index:
                    j = self.index[w]
                    row.append((j, g.multiplicity(v, w)))
                    mask |= 1 << j
            self.rows.append(tuple(row))
            self.nmask.append(mask)
        self.full = (1 << len(self.verts)) - 1

    def connected(self, mask: int) -> bool:
        if mask == 0:
            return False
        seen = mask & (-mask)
        frontier = seen
        while frontier:
            nxt = 0
            m = frontier
            while m:
                low = m & (-m)
                m ^= low
                nxt |= self.nmask[low.bit_length() - 1]
            frontier = (nxt & mask) & ~seen
            seen |= frontier
        return seen == mask

    def components_of(self, mask: int) -> Iterator[int]:
        rest = mask
        while rest:
            seed = rest & (-rest)
            seen = seed
            frontier = seed
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    low = m & (-m)
                    m ^= low
                    nxt |= self.nmask[low.bit_length() - 1]
                frontier = (nxt & mask) & ~seen
                seen |= frontier
            yield seen
            rest &= ~seen

    def cross(self, a: int, b: int) -> int:
        total = 0
        m = a
        while m:
            low = m & (-m)
            m ^= low
            for j, mult in self.rows[low.bit_length() - 1]:
                if (b >> j) & 1:
                    total += mult
        return total

    def connected_masks(self) -> list[int]:
        # plain scan over all subsets, n <= 14 keeps this cheap
        return [s for s in range(1, self.full + 1) if self.connected(s)]

    def to_sets(self, mask: int) -> frozenset[int]:
        out = []
        m = mask
        while m:
            low = m & (-m)
            m ^= low
            out.append(self.verts[low.bit_length() - 1])
        return frozenset(out)


def _check_size(comp_size: int, cfg: Config) -> None:
    # every model lives inside one component, so the limit is per component
    if comp_size > cfg.oracle_vertex_limit:
        raise SizeLimitExceeded(
            f"oracle limited to components of {cfg.oracle_vertex_limit} "
            f"vertices, got {comp_size}"
        )


def oracle_max_pumpkin(g: MultiGraph, cfg: Optional[Config] = None) -> int:
    """Largest c such that g has a c-pumpkin minor, by full enumeration.

    For a fixed connected candidate side A, cross edges only grow as the
    other side grows, so the best partner is always an entire component of
    the rest of A's component.  That keeps the scan quadratic in the number
    of connected subsets instead of over pairs.
    """
    cfg = resolve(cfg)
    best = 0
    for comp in g.components():
        if len(comp) < 2:
            continue
        _check_size(len(comp), cfg)
        ctx = _Ctx(g, comp)
        for a in ctx.connected_masks():
            rest = ctx.full & ~a
            for b in ctx.components_of(rest):
                cr = ctx.cross(a, b)
                if cr > best:
                    best = cr
    return best


def oracle_has(g: MultiGraph, c: int, cfg: Optional[Config] = None) -> bool:
    """Decision variant of oracle_max_pumpkin with early exit."""
    if c < 1:
        raise ValueError("c must be >= 1")
    cfg = resolve(cfg)
    for comp in g.components():
        if len(comp) < 2:
            continue
        _check_size(len(comp), cfg)
        ctx = _Ctx(g, comp)
        masks = ctx.connected_masks()
        masks.sort(key=lambda s: (bin(s).count("1"), s))
        for a in masks:
            rest = ctx.full & ~a
            for b in ctx.components_of(rest):
                if ctx.cross(a, b) >= c:
                    return True
    return False


def oracle_tau(g: MultiGraph, c: int, cfg: Optional[Config] = None) -> int:
    """Minimum size of a vertex set meeting every c-pumpkin minor."""
    if c < 1:
        raise ValueError("c must be >= 1")
    cfg = resolve(cfg)
    total = 0
    for comp in g.components():
        if len(comp) < 2:
            continue
        sub = g.induced(comp)
        if not oracle_has(sub, c, cfg):
            continue
        total += _tau_connected(sub, c, cfg)
    return total


def _tau_connected(sub: MultiGraph, c: int, cfg: Config) -> int:
    verts = sub.vertices
    for size in range(1, sub.n + 1):
        for comb in itertools.combinations(verts, size):
            if not oracle_has(sub.delete_vertices(comb), c, cfg):
                return size
    raise AssertionError("unreachable: deleting a side kills the minor")


def _is_minimal_pair(ctx: _Ctx, a: int, b: int, c: int) -> bool:
    for side, other in ((a, b), (b, a)):
        if bin(side).count("1") == 1:
            continue
        m = side
        while m:
            low = m & (-m)
            m ^= low
            smaller = side ^ low
            if ctx.connected(smaller) and ctx.cross(smaller, other) >= c:
                return False
    return True


def _minimal_model_masks(ctx: _Ctx, c: int) -> list[tuple[int, int]]:
    masks = ctx.connected_masks()
    out = []
    for a in masks:
        for b in masks:
            if a & b:
                continue
            joint = a | b
            low = joint & (-joint)
            if not (a & low):
                continue  # unordered pair: keep the orientation with the low bit in a
            if ctx.cross(a, b) < c:
                continue
            if _is_minimal_pair(ctx, a, b, c):
                out.append((a, b))
    out.sort()
    return out


def _max_disjoint(models: list[tuple[int, int]]) -> tuple[int, list[tuple[int, int]]]:
    n = len(models)
    footprints = [a | b for a, b in models]
    best = 0
    best_pick: list[int] = []

    def rec(i: int, used: int, picked: list[int]) -> None:
        nonlocal best, best_pick
        if len(picked) > best:
            best = len(picked)
            best_pick = list(picked)
        if i == n or len(picked) + (n - i) <= best:
            return
        fp = footprints[i]
        if not (fp & used):
            picked.append(i)
            rec(i + 1, used | fp, picked)
            picked.pop()
        rec(i + 1, used, picked)

    rec(0, 0, [])
    return best, [models[i] for i in best_pick]


def oracle_nu(g: MultiGraph, c: int, cfg: Optional[Config] = None) -> int:
    """Maximum number of vertex-disjoint c-pumpkin minor models.

    Only minimal models need to be considered: any model contains one, and
    shrinking members of a disjoint family keeps it disjoint.
    """
    count, _ = oracle_packing(g, c, cfg)
    return count


def oracle_packing(
    g: MultiGraph, c: int, cfg: Optional[Config] = None
) -> tuple[int, list[PumpkinModel]]:
    """oracle_nu plus one witness family realizing it."""
    if c < 1:
        raise ValueError("c must be >= 1")
    cfg = resolve(cfg)
    total = 0
    family: list[PumpkinModel] = []
    for comp in g.components():
        if len(comp) < 2:
            continue
        _check_size(len(comp), cfg)
        ctx = _Ctx(g, comp)
        models = _minimal_model_masks(ctx, c)
        if not models:
            continue
        count, picked = _max_disjoint(models)
        total += count
        for a, b in picked:
            family.append(make_model(g, ctx.to_sets(a), ctx.to_sets(b)))
    return total, family
