import numpy as np
import pytest

from maxcut_q2.graph import Graph


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def square():
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def single_edge():
    return Graph.from_edges(2, [(0, 1, 1.0)])


def random_spins(rng, n):
    return np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)
