import random

import pytest

from pumpkin.config import Config
from pumpkin.detect import has_pumpkin
from pumpkin.graph import MultiGraph, verify_model
from pumpkin.hedgehog import (
    BAD_CUTSET,
    NONE,
    ROOTED_MODEL,
    Hedgehog,
    contract_hedgehog,
    rooted_or_cutset,
)


def build_hedgehog(rng, path_len, quill_count, spread=4, mult=1):
    """Random hedgehog: induced path 0..path_len-1 plus valid quills."""
    edges = [(i, i + 1, 1) for i in range(path_len - 1)]
    nxt = path_len
    for _ in range(quill_count):
        left = rng.randrange(path_len - 1)
        right = min(path_len - 1, left + rng.randint(1, spread))
        pool = list(range(left, right + 1))
        if len(pool) < 2:
            continue
        targets = rng.sample(pool, rng.randint(2, min(len(pool), 4)))
        for t in targets:
            edges.append((t, nxt, rng.randint(1, mult)))
        nxt += 1
    g = MultiGraph.from_edges(range(nxt), edges)
    return Hedgehog(graph=g, path=tuple(range(path_len)))


def check_outcome(h, c, out):
    g = h.graph
    if out.kind == ROOTED_MODEL:
        assert out.model is not None
        assert verify_model(g, out.model, c) is None
        ends = {h.path[0], h.path[-1]}
        sides = (set(out.model.side_a), set(out.model.side_b))
        assert any(h.path[0] in s for s in sides) and any(h.path[-1] in s for s in sides)
        assert not any(ends <= s for s in sides)
    elif out.kind == BAD_CUTSET:
        x, y = out.cutset
        assert x in g and y in g and x != y
        comp = out.witness_component
        assert comp is not None and len(comp) >= 2
        assert comp in g.delete_vertices((x, y)).components()
        assert h.path[0] not in comp and h.path[-1] not in comp
    else:
        assert out.kind == NONE


def test_validate_rejects_chords():
    g = MultiGraph.from_edges(range(4), [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 2, 1)])
    with pytest.raises(ValueError):
        Hedgehog(graph=g, path=(0, 1, 2, 3)).validate()


def test_validate_rejects_adjacent_quills():
    g = MultiGraph.from_edges(
        range(5), [(0, 1, 1), (1, 2, 1), (3, 0, 1), (3, 2, 1), (4, 0, 1), (4, 2, 1), (3, 4, 1)]
    )
    with pytest.raises(ValueError):
        Hedgehog(graph=g, path=(0, 1, 2)).validate()


def test_contract_keeps_hedgehog_valid():
    rng = random.Random(5)
    for _ in range(30):
        h = build_hedgehog(rng, 20, 8)
        h.validate()
        i = rng.randrange(5)
        j = rng.randrange(15, 20)
        q = h.path[i:j]
        h2 = contract_hedgehog(h, q)
        h2.validate()
        assert h2.path == q
        # surviving quills keep at least two distinct contacts
        for s in h2.quills:
            assert len(h2.graph.neighbors(s)) >= 2


def test_contract_tallies_multiplicity():
    # quill touching two prefix vertices: contraction piles both edges on q[0]
    edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (5, 0, 1), (5, 1, 1), (5, 3, 1)]
    g = MultiGraph.from_edges(range(6), edges)
    h = Hedgehog(graph=g, path=(0, 1, 2, 3, 4))
    h2 = contract_hedgehog(h, (2, 3, 4))
    assert h2.graph.multiplicity(5, 2) == 2
    assert h2.graph.multiplicity(5, 3) == 1


def test_single_split_for_c1():
    rng = random.Random(11)
    h = build_hedgehog(rng, 12, 4)
    out = rooted_or_cutset(h, 1, threshold=8)
    assert out.kind == ROOTED_MODEL and not out.used_fallback
    check_outcome(h, 1, out)


@pytest.mark.parametrize("seed", range(40))
def test_outcomes_verify_random(seed):
    rng = random.Random(4000 + seed)
    h = build_hedgehog(rng, rng.randint(10, 40), rng.randint(0, 12), mult=2)
    h.validate()
    for c in (1, 2, 3):
        out = rooted_or_cutset(h, c, threshold=8)
        check_outcome(h, c, out)


def test_busy_quill_case():
    # one quill with c distinct contacts makes an immediate rooted model
    path_len = 12
    edges = [(i, i + 1, 1) for i in range(path_len - 1)]
    edges += [(2, 12, 1), (4, 12, 1), (6, 12, 1)]
    g = MultiGraph.from_edges(range(13), edges)
    h = Hedgehog(graph=g, path=tuple(range(path_len)))
    out = rooted_or_cutset(h, 3, threshold=6)
    assert out.kind == ROOTED_MODEL and not out.used_fallback
    check_outcome(h, 3, out)


def test_bare_path_splits_or_cuts():
    g = MultiGraph.from_edges(range(9), [(i, i + 1, 1) for i in range(8)])
    h = Hedgehog(graph=g, path=tuple(range(9)))
    out1 = rooted_or_cutset(h, 1, threshold=6)
    assert out1.kind == ROOTED_MODEL
    out2 = rooted_or_cutset(h, 2, threshold=6)
    # a bare path has no 2-pumpkin anywhere: no rooted model can exist
    assert out2.kind in (BAD_CUTSET, NONE)
    check_outcome(h, 2, out2)


def test_dense_quilled_path_yields_rooted_chain_model():
    # overlapping quills tile the whole spine; the chain coloring case
    # must fire at c = 2 without fallback
    rng = random.Random(99)
    path_len = 30
    edges = [(i, i + 1, 1) for i in range(path_len - 1)]
    nxt = path_len
    for start in range(0, path_len - 2):
        edges.append((start, nxt, 1))
        edges.append((start + 2, nxt, 1))
        nxt += 1
    g = MultiGraph.from_edges(range(nxt), edges)
    h = Hedgehog(graph=g, path=tuple(range(path_len)))
    h.validate()
    out = rooted_or_cutset(h, 2, threshold=8)
    check_outcome(h, 2, out)
    assert out.kind == ROOTED_MODEL
    assert not out.used_fallback


def test_gap_recursion_case():
    # quills crowd the prefix and suffix, leaving a long bare gap in the
    # middle; the recursion glues a c-1 outcome across the gap
    path_len = 40
    edges = [(i, i + 1, 1) for i in range(path_len - 1)]
    nxt = path_len
    for start in (0, 2, 4, 33, 35, 37):
        edges.append((start, nxt, 2))
        edges.append((start + 2, nxt, 2))
        nxt += 1
    g = MultiGraph.from_edges(range(nxt), edges)
    h = Hedgehog(graph=g, path=tuple(range(path_len)))
    h.validate()
    out = rooted_or_cutset(h, 2, threshold=10)
    check_outcome(h, 2, out)
    assert out.kind in (ROOTED_MODEL, BAD_CUTSET)
