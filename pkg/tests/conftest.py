import random

import pytest

from kcanon.graph import Graph


def path(n, w=1.0):
    return Graph(n, [(k, k + 1, w) for k in range(1, n)])


def cycle(n, w=1.0):
    return Graph(n, [(k, k + 1, w) for k in range(1, n)] + [(n, 1, w)])


def complete(n, w=1.0):
    return Graph(n, [(i, j, w) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def star(leaves):
    """K_{1,leaves}: node 1 is the center."""
    return Graph(leaves + 1, [(1, k, 1.0) for k in range(2, leaves + 2)])


def random_permutation(n, rng):
    ids = list(range(1, n + 1))
    rng.shuffle(ids)
    return {old: new for old, new in zip(range(1, n + 1), ids)}


@pytest.fixture
def rng():
    return random.Random(20260823)
