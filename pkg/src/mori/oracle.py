"""Brute-force ground truth by exhaustive enumeration of small histories.

Every step has its own outcome space (uniform vertex choices plus head/tail
half-edge copies), so a horizon-t run has prod_{u=2..t} (3u - 5) possible
histories.  Enumerating them all with exact per-step probabilities yields
exact subgraph probabilities and exact expectations of any statistic of the
merged graph.  With a rational beta everything is computed in
``fractions.Fraction``; the enumeration stays deliberately dumb - no pruning,
no closed forms - so it can arbitrate the analytic formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

from .errors import CapacityError, HorizonError, ParameterError
from .forests import PossibleForest
from .model import COPY_HEAD, COPY_TAIL, UNIFORM, ModelParams, Outcome

DEFAULT_CAP = 8


def is_rational(beta) -> bool:
    return isinstance(beta, (int, Fraction)) and not isinstance(beta, bool)


def _check_beta(beta):
    if not beta > 0:
        raise ParameterError(f"beta must be > 0, got {beta!r}")
    return Fraction(beta) if is_rational(beta) else float(beta)


def history_count(t: int) -> int:
    """Number of histories at horizon t: prod_{u=2..t} (3u - 5)."""
    out = 1
    for u in range(2, t + 1):
        out *= 3 * u - 5
    return out


def _check_cap(t: int, cap: int):
    if t < 1:
        raise ParameterError(f"horizon must be >= 1, got {t}")
    if t > cap:
        raise CapacityError(
            f"horizon {t} exceeds the enumeration cap {cap} "
            f"({history_count(cap)} histories at the cap)"
        )


@dataclass
class HistoryDistribution:
    """The complete law of the first t steps as (outcome sequence, probability) pairs."""

    horizon: int
    entries: list[tuple[tuple[Outcome, ...], Fraction | float]]

    def total(self):
        return sum(p for _, p in self.entries)


def iter_histories(t: int, beta, cap: int = DEFAULT_CAP) -> Iterator[
    tuple[tuple[Outcome, ...], Fraction | float]
]:
    """Stream every history with its exact probability (depth-first)."""
    _check_cap(t, cap)
    beta = _check_beta(beta)
    one = Fraction(1) if isinstance(beta, Fraction) else 1.0
    heads = [0] * (t + 1)
    outcomes: list[Outcome] = []

    def rec(u: int, prob):
        if u > t:
            yield tuple(outcomes), prob
            return
        tp = u - 1
        denom = (2 + beta) * tp - 2
        p_uni = beta / denom
        p_copy = one / denom
        for i in range(1, tp + 1):
            heads[u] = i
            outcomes.append(Outcome(UNIFORM, i, u))
            yield from rec(u + 1, prob * p_uni)
            outcomes.pop()
        for i in range(2, tp + 1):
            heads[u] = heads[i]
            outcomes.append(Outcome(COPY_HEAD, i, u))
            yield from rec(u + 1, prob * p_copy)
            outcomes.pop()
            heads[u] = i
            outcomes.append(Outcome(COPY_TAIL, i, u))
            yield from rec(u + 1, prob * p_copy)
            outcomes.pop()

    yield from rec(2, one)


def enumerate_histories(t: int, beta, cap: int = DEFAULT_CAP) -> HistoryDistribution:
    """Materialise the full history distribution (prefer :func:`iter_histories`
    or the folded :func:`tree_distribution` near the cap)."""
    return HistoryDistribution(t, list(iter_histories(t, beta, cap)))


def tree_distribution(t: int, beta, cap: int = DEFAULT_CAP) -> dict:
    """Exact law of the tree shape: head tuple (heads of e_2..e_t) -> probability.

    A streaming fold of the history enumeration; many histories share a tree
    because copying the tail of e_i and choosing v_i uniformly coincide.
    Cached; callers must not mutate the returned dict.
    """
    _check_cap(t, cap)
    beta = _check_beta(beta)
    # equal rationals and floats hash alike, so the mode is part of the key
    return _tree_distribution_cached(t, beta, isinstance(beta, Fraction))


@lru_cache(maxsize=None)
def _tree_distribution_cached(t: int, beta, rational: bool) -> dict:
    one = Fraction(1) if rational else 1.0
    heads = [0] * (t + 1)
    acc: dict = {}

    def rec(u: int, prob):
        if u > t:
            key = tuple(heads[2:])
            acc[key] = acc.get(key, 0) + prob
            return
        tp = u - 1
        denom = (2 + beta) * tp - 2
        p_uni = beta / denom
        p_copy = one / denom
        for i in range(1, tp + 1):
            heads[u] = i
            rec(u + 1, prob * p_uni)
        for i in range(2, tp + 1):
            heads[u] = heads[i]
            rec(u + 1, prob * p_copy)
            heads[u] = i
            rec(u + 1, prob * p_copy)

    rec(2, one)
    return acc


def exact_subgraph_probability(forest: PossibleForest, t: int, beta,
                               cap: int = DEFAULT_CAP):
    """Probability that the labelled forest is a subgraph of the horizon-t tree.

    Containment is labelled: forest edge (i, j) must be exactly the tree edge
    of vertex i.  Computed by summing history probabilities, not by formula.
    """
    if t < forest.max_vertex:
        raise HorizonError(
            f"horizon {t} is below the forest's largest vertex {forest.max_vertex}"
        )
    dist = tree_distribution(t, beta, cap)
    total = 0
    edges = forest.edges
    for key, prob in dist.items():
        ok = True
        for i, j in edges:
            if key[i - 2] != j:
                ok = False
                break
        if ok:
            total += prob
    return total


def merged_edges_of_tree(key: tuple, m: int) -> list[tuple[int, int]]:
    """Map a tree head-tuple to the merged edge list (vertex v -> group ceil(v/m))."""
    return [
        ((i + m - 1) // m, (h + m - 1) // m)
        for i, h in enumerate(key, start=2)
    ]


# -- dumb counting oracles (independent of the optimised kernels) -----------

def brute_triangle_count(n: int, edges) -> int:
    """Triple loop over a < b < c with multiplicity products."""
    mult = [[0] * (n + 1) for _ in range(n + 1)]
    for u, w in edges:
        if u != w:
            mult[u][w] += 1
            mult[w][u] += 1
    total = 0
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            if mult[a][b] == 0:
                continue
            for c in range(b + 1, n + 1):
                total += mult[a][b] * mult[b][c] * mult[a][c]
    return total


def _half_edges(edges) -> list[tuple[int, int, int]]:
    """(endpoint, edge id, other endpoint) for each half-edge."""
    halves = []
    for eid, (u, w) in enumerate(edges):
        halves.append((u, eid, w))
        halves.append((w, eid, u))
    return halves


def brute_adjacent_pair_count(n: int, edges) -> int:
    """Literal enumeration of unordered half-edge pairs sharing an endpoint."""
    halves = _half_edges(edges)
    total = 0
    for x in range(len(halves)):
        for y in range(x + 1, len(halves)):
            if halves[x][0] == halves[y][0]:
                total += 1
    return total


def brute_degenerate_pair_count(n: int, edges) -> int:
    """Adjacent pairs from a loop or from two parallel edges."""
    halves = _half_edges(edges)
    total = 0
    for x in range(len(halves)):
        vx, ex, ox = halves[x]
        for y in range(x + 1, len(halves)):
            vy, ey, oy = halves[y]
            if vx != vy:
                continue
            # non-degenerate iff the two other endpoints and the shared vertex
            # are three distinct vertices
            if not (ox != oy and ox != vx and oy != vx):
                total += 1
    return total


def brute_max_degree(n: int, edges) -> int:
    deg = [0] * (n + 1)
    for u, w in edges:
        deg[u] += 1
        deg[w] += 1
    return max(deg[1:], default=0)


# -- exact expectations ------------------------------------------------------

@dataclass(frozen=True)
class ClusteringExpectation:
    """E[C | D > 0] together with the probability mass where C is undefined."""

    conditional_mean: Fraction | float | None
    prob_undefined: Fraction | float


def exact_expectation(params: ModelParams, statistic, cap: int = DEFAULT_CAP):
    """Exact expectation of a statistic of the merged graph at n*m <= cap.

    ``statistic`` is one of "triangles", "adjacent_pairs", "clustering" or a
    callable (n, edge list) -> value.  Clustering conditions on D > 0 and is
    returned as a :class:`ClusteringExpectation`.
    """
    nm = params.nm
    _check_cap(nm, cap)
    dist = tree_distribution(nm, params.beta, cap)
    m, n = params.m, params.n

    if statistic == "triangles":
        fn: Callable = brute_triangle_count
    elif statistic == "adjacent_pairs":
        fn = brute_adjacent_pair_count
    elif statistic == "clustering":
        acc = 0
        p_undef = 0
        for key, prob in dist.items():
            edges = merged_edges_of_tree(key, m)
            pairs = brute_adjacent_pair_count(n, edges)
            if pairs == 0:
                p_undef += prob
            else:
                tri = brute_triangle_count(n, edges)
                value = (
                    Fraction(3 * tri, pairs)
                    if isinstance(prob, Fraction)
                    else 3.0 * tri / pairs
                )
                acc += prob * value
        p_def = 1 - p_undef
        mean = acc / p_def if p_def > 0 else None
        return ClusteringExpectation(mean, p_undef)
    elif callable(statistic):
        fn = statistic
    else:
        raise ParameterError(f"unknown statistic {statistic!r}")

    total = 0
    for key, prob in dist.items():
        total += prob * fn(n, merged_edges_of_tree(key, m))
    return total


# -- step-law verification helpers -------------------------------------------

def outcome_target_distribution(head_tuple: tuple, beta) -> dict:
    """Law of the next target given the tree, folded from the outcome space."""
    beta = _check_beta(beta)
    one = Fraction(1) if isinstance(beta, Fraction) else 1.0
    t = len(head_tuple) + 1
    denom = (2 + beta) * t - 2
    law: dict = {}
    for i in range(1, t + 1):
        law[i] = law.get(i, 0) + beta / denom
    for i in range(2, t + 1):
        head = head_tuple[i - 2]
        law[head] = law.get(head, 0) + one / denom
        law[i] = law.get(i, 0) + one / denom
    return law


def eq1_target_distribution(head_tuple: tuple, beta) -> dict:
    """Reference law (d_t(v_i) + beta) / ((2+beta) t - 2) from the degrees."""
    beta = _check_beta(beta)
    t = len(head_tuple) + 1
    deg = [0] * (t + 1)
    for i, h in enumerate(head_tuple, start=2):
        deg[i] += 1
        deg[h] += 1
    denom = (2 + beta) * t - 2
    return {i: (deg[i] + beta) / denom for i in range(1, t + 1)}
