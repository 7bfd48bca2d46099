"""Clustering statistics of a merged multigraph.

The clustering coefficient is 3N/D where N counts triangles over unordered
triples of distinct vertices with multiplicity (the product of the three
pairwise edge multiplicities) and D counts pairs of half-edges sharing an
endpoint, i.e. sum_v C(d(v), 2) with loops contributing 2 to the degree.  On
multigraphs C can exceed 1; it is bounded by the maximum edge multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .errors import UndefinedClusteringError
from .model import MergedMultigraph

CSV_HEADER = "n,m,beta,seed,triangles,adjacent_pairs,degenerate_pairs,clustering,max_degree"


@dataclass(frozen=True)
class GraphStats:
    """One instance's summary; clustering is None when D = 0."""

    n: int
    m: int | None
    beta: float | None
    seed: int | None
    triangles: int
    adjacent_pairs: int
    degenerate_pairs: int
    clustering: float | None
    max_degree: int

    @property
    def clustering_defined(self) -> bool:
        return self.clustering is not None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "beta": self.beta,
            "seed": self.seed,
            "triangles": self.triangles,
            "adjacent_pairs": self.adjacent_pairs,
            "degenerate_pairs": self.degenerate_pairs,
            "clustering": self.clustering,
            "max_degree": self.max_degree,
        }

    def to_csv_row(self) -> str:
        vals = self.to_dict()
        cells = []
        for key in CSV_HEADER.split(","):
            v = vals[key]
            cells.append("" if v is None else (repr(v) if isinstance(v, float) else str(v)))
        return ",".join(cells)


def _counters(g: MergedMultigraph):
    return _kernels.multigraph_counters(g.tails, g.heads, g.n)


def triangle_count(g: MergedMultigraph) -> int:
    """Triangles with multiplicity over distinct-vertex triples; loops never count."""
    return int(_counters(g)[0])


def adjacent_pair_count(g: MergedMultigraph) -> int:
    """sum_v C(d(v), 2), each loop contributing 2 to its vertex degree."""
    return int(_counters(g)[1])


def degenerate_pair_count(g: MergedMultigraph) -> int:
    """Adjacent pairs whose two edges do not reach two distinct other vertices."""
    return int(_counters(g)[2])


def max_degree(g: MergedMultigraph) -> int:
    return int(_counters(g)[3])


def clustering_coefficient(g: MergedMultigraph) -> float:
    """Exactly 3N/D; raises when D = 0 (e.g. a single vertex without edges)."""
    tri, pairs, _, _ = _counters(g)
    if pairs == 0:
        raise UndefinedClusteringError("no adjacent half-edge pairs: clustering undefined")
    return 3.0 * tri / pairs


def compute_stats(g: MergedMultigraph) -> GraphStats:
    """All counters in one pass; an undefined clustering becomes a None field."""
    tri, pairs, degen, dmax = _counters(g)
    clustering = 3.0 * tri / pairs if pairs > 0 else None
    return GraphStats(
        n=g.n,
        m=g.m,
        beta=g.beta,
        seed=g.seed,
        triangles=int(tri),
        adjacent_pairs=int(pairs),
        degenerate_pairs=int(degen),
        clustering=clustering,
        max_degree=int(dmax),
    )
