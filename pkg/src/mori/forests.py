"""Labelled directed forests that can occur as subgraphs of the growing tree.

A forest here is a set of directed edges (i, j) with i > j >= 1, at most one
outgoing edge per vertex and no isolated vertices (vertices are exactly the
edge endpoints).  Vertex 1 can never have an outgoing edge because every edge
points at a strictly smaller index.  These are precisely the edge sets the
tree process can realise, so exact and closed-form subgraph probabilities are
defined for them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import ForestError


@dataclass(frozen=True)
class PossibleForest:
    """An admissible labelled forest, stored as a sorted tuple of (tail, head) edges."""

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple(sorted((int(i), int(j)) for i, j in self.edges))
        if not edges:
            raise ForestError("a possible forest needs at least one edge")
        tails = set()
        for i, j in edges:
            if j < 1:
                raise ForestError(f"edge ({i},{j}): vertex indices are 1-based")
            if i <= j:
                raise ForestError(
                    f"edge ({i},{j}): edges must go from a higher to a lower index"
                )
            if i in tails:
                raise ForestError(f"vertex {i} has more than one outgoing edge")
            tails.add(i)
        object.__setattr__(self, "edges", edges)

    # -- structure ---------------------------------------------------------

    @property
    def vertices(self) -> tuple[int, ...]:
        """Sorted endpoints s_1 < ... < s_k."""
        vs = set()
        for i, j in self.edges:
            vs.add(i)
            vs.add(j)
        return tuple(sorted(vs))

    @property
    def max_vertex(self) -> int:
        return max(i for i, _ in self.edges)

    @property
    def v_minus(self) -> frozenset[int]:
        """Vertices with at least one incoming edge."""
        return frozenset(j for _, j in self.edges)

    @property
    def v_plus(self) -> frozenset[int]:
        """Vertices with the (unique) outgoing edge."""
        return frozenset(i for i, _ in self.edges)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, j in self.edges if j == v)

    def r_value(self, t: int, i: int) -> int:
        """Number of forest edges into v_i whose tail arrives after time t."""
        return sum(1 for a, b in self.edges if b == i and a > t)

    def c_value(self, i: int) -> int:
        """Number of forest edges from indices >= i to indices < i."""
        return sum(1 for a, b in self.edges if a >= i > b)

    def c_values(self) -> list[int]:
        """c_value(i) for i = 0..max_vertex, computed by a single sweep.

        Independent of :meth:`c_value`; the two are cross-checked in tests.
        """
        top = self.max_vertex
        delta = [0] * (top + 2)
        for a, b in self.edges:
            # the edge (a, b) crosses every i with b < i <= a
            delta[b + 1] += 1
            delta[a + 1] -= 1
        c = [0] * (top + 1)
        run = 0
        for i in range(top + 1):
            run += delta[i]
            c[i] = run
        return c

    # -- text form ---------------------------------------------------------

    @classmethod
    def parse(cls, spec: str) -> "PossibleForest":
        """Parse a compact edge-list string such as ``"3>1,2>1"``."""
        edges = []
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            bits = part.split(">")
            if len(bits) != 2:
                raise ForestError(f"bad edge {part!r}: expected 'tail>head'")
            try:
                i, j = int(bits[0]), int(bits[1])
            except ValueError as exc:
                raise ForestError(f"bad edge {part!r}: {exc}") from None
            edges.append((i, j))
        return cls(tuple(edges))

    def to_spec(self) -> str:
        return ",".join(f"{i}>{j}" for i, j in self.edges)


def all_possible_forests(max_vertex: int) -> Iterator[PossibleForest]:
    """Every possible forest whose vertices lie in {1..max_vertex}.

    A forest is an assignment of at most one out-target j < i to each vertex
    i in 2..max_vertex, so there are prod_{i=2..K} i - 1 nonempty ones
    (719 for K = 6).
    """
    choices = [[None] + list(range(1, i)) for i in range(2, max_vertex + 1)]
    for assignment in itertools.product(*choices):
        edges = tuple(
            (i, j) for i, j in zip(range(2, max_vertex + 1), assignment) if j is not None
        )
        if edges:
            yield PossibleForest(edges)
