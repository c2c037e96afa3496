import random

import pytest

from pumpkin.config import Config
from pumpkin.graph import MultiGraph


def rand_graph(rng: random.Random, n: int, p: float, max_mult: int = 3) -> MultiGraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.append((u, v, rng.randint(1, max_mult)))
    return MultiGraph.from_edges(range(n), edges)


@pytest.fixture
def cfg() -> Config:
    return Config()
