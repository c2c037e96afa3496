import pytest

from pumpkin.config import Config
from pumpkin.detect import has_pumpkin
from pumpkin.hedgehog import Hedgehog
from pumpkin.instances import (
    cactus,
    from_graph,
    hedgehog_instance,
    make_instance,
    parse,
    planted_pumpkins,
    random_multigraph,
    regular_graph,
    serialize,
)
from pumpkin.oracle import oracle_max_pumpkin, oracle_nu


def test_serialize_parse_roundtrip_bytes():
    inst = random_multigraph(n=10, edge_prob=0.5, max_mult=3, seed=5)
    text = serialize(inst)
    again = serialize(parse(text))
    assert text == again
    assert text.endswith("\n")


def test_parse_diagnostics_carry_line_numbers():
    with pytest.raises(ValueError, match="line 2"):
        parse("p pumpkin 3 1\ne 1 1 1\n")
    with pytest.raises(ValueError, match="line 2"):
        parse("p pumpkin 3 1\ne 1 9 1\n")
    with pytest.raises(ValueError, match="line 1"):
        parse("e 1 2 1\n")
    with pytest.raises(ValueError, match="declares"):
        parse("p pumpkin 3 2\ne 1 2 1\n")
    with pytest.raises(ValueError, match="missing p"):
        parse("c meta family x\n")


def test_parse_merges_duplicates_unless_strict():
    text = "p pumpkin 2 2\ne 1 2 1\ne 2 1 2\n"
    inst = parse(text)
    assert inst.edges == ((1, 2, 3),)
    with pytest.raises(ValueError, match="duplicate"):
        parse(text, strict=True)


def test_meta_survives_roundtrip():
    inst = make_instance(3, [(1, 2, 1)], {"family": "x", "note": "two words"})
    back = parse(serialize(inst))
    assert back.meta_dict() == {"family": "x", "note": "two words"}


def test_from_graph_renumbers():
    import random

    from conftest import rand_graph

    g = rand_graph(random.Random(3), 8, 0.5)
    shifted = g.delete_vertices([0, 1])
    inst = from_graph(shifted)
    assert inst.n == shifted.n
    h = inst.graph()
    assert sorted(h.vertices) == list(range(1, shifted.n + 1))
    assert sum(m for _, _, m in h.edges()) == sum(m for _, _, m in shifted.edges())


def test_generators_deterministic():
    a = serialize(random_multigraph(12, 0.4, 3, seed=9))
    b = serialize(random_multigraph(12, 0.4, 3, seed=9))
    assert a == b
    assert a != serialize(random_multigraph(12, 0.4, 3, seed=10))


def test_planted_maximum_and_packing_bound(cfg):
    # bridged pair: the bridge must not raise the maximum
    for c in (2, 3):
        inst = planted_pumpkins(count=2, c=c, glue="path", seed=1)
        g = inst.graph()
        assert oracle_max_pumpkin(g, cfg) == c
        assert oracle_nu(g, c, cfg) >= 2
    # disjoint copies: the oracle works per component, so a graph larger
    # than its limit is fine as long as each component stays under it
    inst = planted_pumpkins(count=3, c=3, glue="disjoint", seed=1)
    g = inst.graph()
    assert g.n == 15
    assert oracle_max_pumpkin(g, cfg) == 3
    assert oracle_nu(g, 3, cfg) == 3
    assert int(inst.meta_dict()["nu_lb"]) == 3


def test_planted_glue_variants(cfg):
    for glue in ("path", "tree", "disjoint"):
        inst = planted_pumpkins(count=4, c=2, glue=glue, seed=2)
        g = inst.graph()
        comps = g.components()
        if glue == "disjoint":
            assert len(comps) == 4
        else:
            assert len(comps) == 1


def test_cactus_is_three_pumpkin_free(cfg):
    for seed in range(4):
        inst = cactus(n_cycles=5, max_cycle=6, seed=seed)
        g = inst.graph()
        assert has_pumpkin(g, 2, cfg) is not None
        assert has_pumpkin(g, 3, cfg) is None


def test_hedgehog_instance_is_valid_hedgehog():
    inst = hedgehog_instance(path_len=24, quill_count=8, seed=3)
    g = inst.graph()
    path = tuple(int(t) for t in inst.meta_dict()["path"].split())
    Hedgehog(graph=g, path=path).validate()


def test_regular_graph_degrees():
    inst = regular_graph(n=12, degree=3, seed=0)
    g = inst.graph()
    assert all(g.degree(v) == 3 for v in g.vertices)
    with pytest.raises(ValueError):
        regular_graph(n=7, degree=3, seed=0)


def test_make_instance_validates():
    with pytest.raises(ValueError):
        make_instance(2, [(1, 3, 1)])
    with pytest.raises(ValueError):
        make_instance(2, [(1, 2, 0)])
