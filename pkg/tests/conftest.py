import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graphstage import Graph, WeightKind, build_graph


def random_test_graph(
    rng: random.Random,
    directed: bool,
    weight_kind: WeightKind = WeightKind.NONE,
    n_max: int = 8,
    n_min: int = 2,
    p: float | None = None,
) -> Graph:
    """Small random graph for oracle comparisons; isolated nodes allowed."""
    n = rng.randint(n_min, n_max)
    p = rng.uniform(0.2, 0.7) if p is None else p
    edges = []
    pairs = (
        [(u, v) for u in range(n) for v in range(n) if u != v]
        if directed
        else [(u, v) for u in range(n) for v in range(u + 1, n)]
    )
    for u, v in pairs:
        if rng.random() < p:
            if weight_kind is WeightKind.NONE:
                edges.append((u, v))
            else:
                edges.append((u, v, rng.randint(1, 10)))
    return build_graph(directed, n, edges, weight_kind)


@pytest.fixture
def rng():
    return random.Random(12345)
