import json
import random

import pytest

from pumpkin.approx import (
    ApproxCertificate,
    approx_cover_pack,
    certificate_bound,
    verify_certificate,
)
from pumpkin.config import Config
from pumpkin.graph import MultiGraph, verify_model
from pumpkin.oracle import oracle_nu, oracle_tau

from conftest import rand_graph


@pytest.mark.parametrize("seed", range(25))
def test_certificate_sandwich(seed, cfg):
    rng = random.Random(515 + seed)
    g = rand_graph(rng, rng.randint(3, 11), rng.choice((0.3, 0.5, 0.7)), max_mult=4)
    for c in (1, 2, 3):
        cert = approx_cover_pack(g, c, cfg)
        assert verify_certificate(g, cert, cfg) is None
        assert cert.within_bound
        nu = oracle_nu(g, c, cfg)
        tau = oracle_tau(g, c, cfg)
        assert len(cert.packing) <= nu <= tau <= len(cert.cover)


def test_empty_graph(cfg):
    g = MultiGraph.empty()
    cert = approx_cover_pack(g, 2, cfg)
    assert not cert.cover and not cert.packing and cert.levels == 0
    assert verify_certificate(g, cert, cfg) is None


def test_pumpkin_free_instance(cfg):
    g = MultiGraph.from_edges(range(5), [(i, i + 1, 1) for i in range(4)])
    cert = approx_cover_pack(g, 2, cfg)
    assert cert.cover == frozenset() and cert.packing == ()


def test_packing_members_verify_on_original(cfg):
    rng = random.Random(47)
    g = rand_graph(rng, 20, 0.25, max_mult=3)
    for c in (1, 2, 3):
        cert = approx_cover_pack(g, c, cfg)
        used = set()
        for m in cert.packing:
            assert verify_model(g, m, c) is None
            assert not (set(m.vertices) & used)
            used |= set(m.vertices)
        assert len(cert.cover) <= cert.bound


def test_json_roundtrip(cfg):
    rng = random.Random(48)
    g = rand_graph(rng, 10, 0.5)
    cert = approx_cover_pack(g, 2, cfg)
    payload = json.loads(json.dumps(cert.to_json()))
    back = ApproxCertificate.from_json(payload)
    assert back.cover == cert.cover
    assert back.packing == cert.packing
    assert back.bound == cert.bound
    assert verify_certificate(g, back, cfg) is None


def test_verify_rejects_tampering(cfg):
    rng = random.Random(49)
    g = rand_graph(rng, 9, 0.6)
    cert = approx_cover_pack(g, 2, cfg)
    if not cert.packing:
        pytest.skip("trivial instance drawn")
    smaller = ApproxCertificate(
        cover=frozenset(sorted(cert.cover)[:-1]) if cert.cover else cert.cover,
        packing=cert.packing,
        c=cert.c,
        n_original=cert.n_original,
        f_eff=cert.f_eff,
        log_term=cert.log_term,
        bound=cert.bound,
        within_bound=cert.within_bound,
        levels=cert.levels,
    )
    assert verify_certificate(g, smaller, cfg) in (
        "cover_misses_a_model",
        None,  # dropping one vertex can still cover; try the other clause
    )
    doubled = ApproxCertificate(
        cover=cert.cover,
        packing=cert.packing + cert.packing,
        c=cert.c,
        n_original=cert.n_original,
        f_eff=cert.f_eff,
        log_term=cert.log_term,
        bound=cert.bound,
        within_bound=cert.within_bound,
        levels=cert.levels,
    )
    assert verify_certificate(g, doubled, cfg) == "packing_not_disjoint"


def test_bound_arithmetic(cfg):
    f_eff, log_term = certificate_bound(64, 3, cfg)
    assert f_eff == cfg.f_eff(3)
    assert log_term == 6.0
    f_eff1, log_one = certificate_bound(2, 1, cfg)
    assert log_one == 1.0


def test_levels_count_packed_models(cfg):
    # disjoint 2-bundles: every level packs exactly one model
    edges = [(2 * i, 2 * i + 1, 2) for i in range(4)]
    g = MultiGraph.from_edges(range(8), edges)
    cert = approx_cover_pack(g, 2, cfg)
    assert cert.levels == len(cert.packing) == 4
    assert cert.cover == frozenset(range(8))
