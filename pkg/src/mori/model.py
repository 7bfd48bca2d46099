"""The growing-tree process, its m-merged multigraph, and block instrumentation.

The tree starts as a single vertex.  Each step adds vertex t+1 with one
directed edge whose head (the "target") is v_i with probability proportional
to its degree plus beta.  The sampler realises this by drawing either a
uniform vertex (total weight beta * t) or a uniform half-edge (weight 1
each), which is O(1) per step.  The width-m multigraph arises by collapsing
consecutive groups of m tree vertices.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.random import Generator, PCG64, SeedSequence

from . import _kernels
from .errors import (
    InstrumentationError,
    InvalidOutcomeError,
    MergeArityError,
    ParameterError,
)

UNIFORM = "v"
COPY_HEAD = "h"
COPY_TAIL = "t"

_KIND_BY_CODE = {
    _kernels.KIND_UNIFORM: UNIFORM,
    _kernels.KIND_HEAD: COPY_HEAD,
    _kernels.KIND_TAIL: COPY_TAIL,
}


@dataclass(frozen=True)
class ModelParams:
    """Merged-graph parameters: n merged vertices, out-degree m, attractiveness beta."""

    n: int
    m: int
    beta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n!r}")
        if int(self.m) != self.m or self.m < 1:
            raise ParameterError(f"m must be a positive integer, got {self.m!r}")
        if not self.beta > 0:
            raise ParameterError(f"beta must be > 0 (strictly), got {self.beta!r}")

    @property
    def nm(self) -> int:
        """Underlying tree size in vertices (time measured in tree steps)."""
        return self.n * self.m


class Outcome(NamedTuple):
    """One draw of the step randomness.

    kind is "v" (uniform vertex i), "h" (copy the head half-edge of e_i) or
    "t" (copy the tail half-edge of e_i); step is the index of the vertex
    whose arrival drew it.
    """

    kind: str
    index: int
    step: int


@dataclass
class TreeState:
    """The tree after some number of steps.

    heads[i] is the head of edge e_i (whose tail is v_i) for 2 <= i <= n;
    slots 0 and 1 are unused.  degrees[v] is the total degree of v_v.
    """

    heads: np.ndarray
    degrees: np.ndarray

    @classmethod
    def initial(cls) -> "TreeState":
        return cls(np.zeros(2, np.int64), np.zeros(2, np.int64))

    @property
    def vertex_count(self) -> int:
        return len(self.heads) - 1

    @property
    def edges(self) -> list[tuple[int, int]]:
        """(tail, head) pairs in insertion order; edge e_i has tail i."""
        return [(i, int(self.heads[i])) for i in range(2, self.vertex_count + 1)]

    def half_edges(self) -> np.ndarray:
        """Flat registry of the 2(n-1) half-edge endpoints.

        Half-edge 2*(i-2) is the tail half of e_i (endpoint i) and
        2*(i-2)+1 its head half (endpoint heads[i]).
        """
        n = self.vertex_count
        out = np.empty(2 * (n - 1) if n > 1 else 0, np.int64)
        if n > 1:
            out[0::2] = np.arange(2, n + 1)
            out[1::2] = self.heads[2:]
        return out


class OutcomeLog(Sequence):
    """Array-backed outcome log; entries materialise lazily as Outcome tuples.

    Behaves like the list of outcomes for steps 2..nm and replays a run
    exactly through :func:`step_tree`.
    """

    __slots__ = ("_kinds", "_idxs")

    def __init__(self, kinds: np.ndarray, idxs: np.ndarray):
        self._kinds = kinds
        self._idxs = idxs

    def __len__(self) -> int:
        return max(len(self._kinds) - 2, 0)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        v = k + 2
        return Outcome(_KIND_BY_CODE[int(self._kinds[v])], int(self._idxs[v]), v)

    def __eq__(self, other):
        if isinstance(other, OutcomeLog):
            return np.array_equal(self._kinds[2:], other._kinds[2:]) and np.array_equal(
                self._idxs[2:], other._idxs[2:]
            )
        if isinstance(other, (list, tuple)):
            return len(other) == len(self) and all(a == b for a, b in zip(self, other))
        return NotImplemented

    def __repr__(self) -> str:
        return f"OutcomeLog({len(self)} outcomes)"


def _as_generator(seed) -> Generator:
    if isinstance(seed, Generator):
        return seed
    return Generator(PCG64(SeedSequence(seed)))


def sample_outcome(state: TreeState, beta: float, rng: Generator) -> Outcome:
    """Draw one outcome for the next step.

    Uses the same expressions as the compiled kernel, so a step-by-step loop
    reproduces :func:`generate_tree` bit for bit when fed the same stream.
    """
    if not beta > 0:
        raise ParameterError(f"beta must be > 0, got {beta!r}")
    t = state.vertex_count
    denom = (2.0 + beta) * t - 2.0
    u1 = rng.random()
    u2 = rng.random()
    if t == 1 or u1 * denom < beta * t:
        i = int(u2 * t) + 1
        if i > t:
            i = t
        return Outcome(UNIFORM, i, t + 1)
    j = int(u2 * (2 * t - 2))
    if j > 2 * t - 3:
        j = 2 * t - 3
    i = j // 2 + 2
    if j & 1:
        return Outcome(COPY_HEAD, i, t + 1)
    return Outcome(COPY_TAIL, i, t + 1)


def resolve_target(state: TreeState, outcome: Outcome) -> int:
    """Map an outcome to the target vertex it designates."""
    t = state.vertex_count
    if outcome.kind == UNIFORM:
        if not 1 <= outcome.index <= t:
            raise InvalidOutcomeError(
                f"uniform outcome index {outcome.index} out of range 1..{t}"
            )
        return outcome.index
    if outcome.kind in (COPY_HEAD, COPY_TAIL):
        if not 2 <= outcome.index <= t:
            raise InvalidOutcomeError(
                f"copy outcome index {outcome.index} out of range 2..{t}"
            )
        if outcome.kind == COPY_HEAD:
            return int(state.heads[outcome.index])
        return outcome.index
    raise InvalidOutcomeError(f"unknown outcome kind {outcome.kind!r}")


def step_tree(state: TreeState, outcome: Outcome) -> TreeState:
    """Apply one outcome, returning the grown tree (the input is not mutated)."""
    target = resolve_target(state, outcome)
    heads = np.append(state.heads, np.int64(target))
    degrees = np.append(state.degrees, np.int64(1))
    degrees[target] += 1
    return TreeState(heads, degrees)


def generate_tree(nm: int, beta: float, seed) -> tuple[TreeState, OutcomeLog]:
    """Grow a tree to ``nm`` vertices; deterministic given the seed.

    Returns the final state and the outcome log (nm - 1 entries) that replays
    the run exactly through :func:`step_tree`.
    """
    if int(nm) != nm or nm < 1:
        raise ParameterError(f"tree size must be a positive integer, got {nm!r}")
    if not beta > 0:
        raise ParameterError(f"beta must be > 0 (strictly), got {beta!r}")
    nm = int(nm)
    rng = _as_generator(seed)
    heads = np.zeros(nm + 1, np.int64)
    degrees = np.zeros(nm + 1, np.int64)
    kinds = np.zeros(nm + 1, np.int8)
    idxs = np.zeros(nm + 1, np.int64)
    if nm > 1:
        u = rng.random(2 * (nm - 1))
        _kernels.grow_tree(2, nm, float(beta), u, heads, degrees, kinds, idxs)
    return TreeState(heads, degrees), OutcomeLog(kinds, idxs)


@dataclass
class MergedMultigraph:
    """The width-m multigraph: directed multi-edges with loops allowed.

    Merged vertex j absorbs tree vertices (j-1)m+1 .. jm, so every edge has
    tail >= head and all parallel edges between two distinct vertices share
    the later tail.  A loop contributes 2 to its vertex degree.
    """

    n: int
    m: int | None
    tails: np.ndarray
    heads: np.ndarray
    degrees: np.ndarray
    beta: float | None = None
    seed: int | None = None

    @property
    def edge_count(self) -> int:
        return len(self.tails)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(self.tails, self.heads)]

    def multiplicity(self, u: int, w: int) -> int:
        """Total number of edges between u and w (either orientation)."""
        return int(
            np.count_nonzero((self.tails == u) & (self.heads == w))
            + (np.count_nonzero((self.tails == w) & (self.heads == u)) if u != w else 0)
        )


def multigraph_from_edges(edges, n: int, m=None, beta=None, seed=None) -> MergedMultigraph:
    """Build a MergedMultigraph from an explicit 1-based edge list."""
    tails = np.asarray([e[0] for e in edges], np.int64)
    heads = np.asarray([e[1] for e in edges], np.int64)
    if len(tails) and (tails.min() < 1 or heads.min() < 1):
        raise ParameterError("vertex indices are 1-based")
    if len(tails) and max(tails.max(), heads.max()) > n:
        raise ParameterError("edge endpoint exceeds the declared vertex count")
    degrees = (
        np.bincount(tails, minlength=n + 1) + np.bincount(heads, minlength=n + 1)
    ).astype(np.int64)
    return MergedMultigraph(int(n), m, tails, heads, degrees, beta=beta, seed=seed)


def merge(tree: TreeState, m: int) -> MergedMultigraph:
    """Collapse consecutive groups of m tree vertices into single vertices."""
    if int(m) != m or m < 1:
        raise ParameterError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    nm = tree.vertex_count
    if nm % m != 0:
        raise MergeArityError(f"merge width {m} does not divide vertex count {nm}")
    n = nm // m
    tails = (np.arange(2, nm + 1, dtype=np.int64) + m - 1) // m
    heads = (tree.heads[2:] + m - 1) // m
    degrees = (
        np.bincount(tails, minlength=n + 1) + np.bincount(heads, minlength=n + 1)
    ).astype(np.int64)
    return MergedMultigraph(n, m, tails, heads, degrees)


def generate(params: ModelParams, seed) -> MergedMultigraph:
    """Generate one instance of the merged multigraph; deterministic given seed."""
    tree, _ = generate_tree(params.nm, params.beta, seed)
    g = merge(tree, params.m)
    g.beta = params.beta
    g.seed = seed if isinstance(seed, int) else None
    return g


@dataclass
class BlockPartition:
    """Partition of an owner's half-edges, anchored at a fixed time.

    blocks[0] is the base block (half-edges acquired by uniform choices after
    the anchor; possibly empty).  Each other block starts as one anchor
    half-edge and grows by preferential copies.  The block count stays
    d_anchor(owner) + 1 forever.
    """

    owner_vertex: int
    anchor_time: int
    horizon_time: int
    blocks: list[list[int]]

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]


def _tracked_run(params: ModelParams, seed, owners, anchor: int, horizon: int):
    """Grow to ``horizon`` tree vertices, tracking the owners' blocks from ``anchor``.

    Returns (heads, degrees, block_owner, block_id, block_counts) where the
    block arrays are indexed by half-edge id and block_counts[s] is the
    number of non-base blocks of owner slot s.
    """
    m = params.m
    nm = params.nm
    owners = np.asarray(owners, np.int64)
    if len(set(owners.tolist())) != len(owners):
        raise InstrumentationError("tracked owners must be distinct")
    for ow in owners:
        if not 1 <= ow <= params.n:
            raise InstrumentationError(f"owner {ow} out of range 1..{params.n}")
        if ow * m > anchor:
            raise InstrumentationError(
                f"owner {ow} is not fully merged by anchor {anchor} (needs {ow * m})"
            )
    if not anchor <= horizon <= nm:
        raise InstrumentationError(
            f"times must satisfy anchor <= horizon <= n*m, got {anchor}, {horizon}, {nm}"
        )

    rng = _as_generator(seed)
    heads = np.zeros(horizon + 1, np.int64)
    degrees = np.zeros(horizon + 1, np.int64)
    kinds = np.zeros(horizon + 1, np.int8)
    idxs = np.zeros(horizon + 1, np.int64)
    u = rng.random(2 * (horizon - 1)) if horizon > 1 else np.empty(0)
    if anchor > 1:
        _kernels.grow_tree(2, anchor, float(params.beta), u, heads, degrees, kinds, idxs)

    n_half = 2 * (horizon - 1) if horizon > 1 else 0
    block_owner = np.full(n_half, -1, np.int8)
    block_id = np.full(n_half, -1, np.int32)
    block_counts = np.zeros(len(owners), np.int64)

    if anchor > 1:
        hid = np.arange(2 * (anchor - 1))
        ei = hid // 2 + 2
        endpoint = np.where(hid & 1, heads[ei], ei)
        group = (endpoint + m - 1) // m
        for s, ow in enumerate(owners):
            ids = hid[group == ow]
            block_counts[s] = len(ids)
            block_owner[ids] = s
            block_id[ids] = np.arange(1, len(ids) + 1)

    if horizon > anchor:
        _kernels.grow_tree_tracked(
            anchor + 1, horizon, float(params.beta), u, heads, degrees, kinds, idxs,
            m, owners, block_owner, block_id,
        )
    return heads, degrees, block_owner, block_id, block_counts


def tracked_block_sizes(params: ModelParams, seed, owners, anchor: int, horizon: int):
    """Block size vectors at the horizon, one array per owner (index 0 = base block)."""
    _, _, block_owner, block_id, block_counts = _tracked_run(
        params, seed, owners, anchor, horizon
    )
    out = []
    for s in range(len(block_counts)):
        ids = block_id[block_owner == s]
        out.append(np.bincount(ids, minlength=int(block_counts[s]) + 1))
    return out


def track_blocks(params: ModelParams, seed, owner: int, anchor: int,
                 horizon: int) -> BlockPartition:
    """Run one instance and return the owner's block partition at the horizon.

    Block 1 is the block containing the owner's oldest half-edge at the
    anchor; block 0 is the base block.
    """
    _, _, block_owner, block_id, block_counts = _tracked_run(
        params, seed, [owner], anchor, horizon
    )
    ids = np.nonzero(block_owner == 0)[0]
    blocks = [[] for _ in range(int(block_counts[0]) + 1)]
    for hid in ids:
        blocks[int(block_id[hid])].append(int(hid))
    return BlockPartition(owner, anchor, horizon, blocks)
