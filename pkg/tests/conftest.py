import numpy as np
import pytest
from numpy.random import Generator, PCG64, SeedSequence

from mori.model import multigraph_from_edges


@pytest.fixture
def triangle_graph():
    """Simple labelled triangle (edges oriented high to low)."""
    return multigraph_from_edges([(2, 1), (3, 1), (3, 2)], 3)


@pytest.fixture
def m_triangle_factory():
    """Three vertices with every pair joined by m parallel edges."""

    def make(m):
        edges = [(2, 1), (3, 1), (3, 2)] * m
        return multigraph_from_edges(edges, 3)

    return make


def random_multigraph(rng: Generator, n_max: int = 50):
    """Arbitrary small multigraph with loops and parallel edges."""
    n = int(rng.integers(1, n_max + 1))
    ne = int(rng.integers(0, 4 * n + 1))
    tails = rng.integers(1, n + 1, size=ne)
    heads = rng.integers(1, n + 1, size=ne)
    return multigraph_from_edges(list(zip(tails.tolist(), heads.tolist())), n)


def rng_of(seed) -> Generator:
    return Generator(PCG64(SeedSequence(seed)))
