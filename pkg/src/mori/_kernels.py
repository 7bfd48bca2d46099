"""Hot loops: tree growth, merged-multigraph counters, block tracking.

Each kernel is a plain Python function over preallocated numpy arrays.  At
import time the functions are compiled with numba's ``@njit`` unless the
environment variable ``MORI_DISABLE_NUMBA`` is set to a non-empty value other
than ``0`` (or numba is not importable), in which case the interpreter runs
the very same code objects.  Both paths therefore produce bit-identical
results; only the speed differs.  ``benchmarks/bench_backends.py`` compares
them.

The uncompiled originals stay available in :data:`PURE_PYTHON`.
"""

import os

import numpy as np

# outcome kind codes shared with the rest of the package
KIND_UNIFORM = 0  # (i, v): target chosen uniformly among vertices
KIND_HEAD = 1     # (i, h): target copied from the head half-edge of e_i
KIND_TAIL = 2     # (i, t): target copied from the tail half-edge of e_i


def numba_disabled_by_env() -> bool:
    return os.environ.get("MORI_DISABLE_NUMBA", "").strip() not in ("", "0")


def grow_tree(start, nm, beta, u, heads, degrees, kinds, idxs):
    """Grow the tree from ``start - 1`` to ``nm`` vertices.

    ``u`` holds two uniforms per step at absolute positions 2*(v-2) and
    2*(v-2)+1 for the step creating vertex v.  ``heads``/``degrees`` must
    already describe the first ``start - 1`` vertices.  With t existing
    vertices the branch uniform picks "uniform vertex" with probability
    beta*t / ((2+beta)*t - 2) and otherwise one of the 2(t-1) half-edges,
    which realises the degree-plus-beta attachment law in O(1) per step.
    At t = 1 there are no half-edges and the uniform branch is forced
    (the rounded denominator must not leak probability into a copy).
    """
    for v in range(start, nm + 1):
        t = v - 1
        denom = (2.0 + beta) * t - 2.0
        u1 = u[2 * (v - 2)]
        u2 = u[2 * (v - 2) + 1]
        if t == 1 or u1 * denom < beta * t:
            kind = KIND_UNIFORM
            i = int(u2 * t) + 1
            if i > t:
                i = t
            target = i
        else:
            j = int(u2 * (2 * t - 2))
            if j > 2 * t - 3:
                j = 2 * t - 3
            i = j // 2 + 2
            if j & 1:
                kind = KIND_HEAD
                target = heads[i]
            else:
                kind = KIND_TAIL
                target = i
        heads[v] = target
        degrees[v] = 1
        degrees[target] += 1
        kinds[v] = kind
        idxs[v] = i


def grow_tree_tracked(start, nm, beta, u, heads, degrees, kinds, idxs,
                      m, owners, block_owner, block_id):
    """Like :func:`grow_tree`, also maintaining the owners' half-edge blocks.

    ``block_owner``/``block_id`` are indexed by half-edge id (edge e_v owns
    ids 2*(v-2) and 2*(v-2)+1 for its tail and head halves).  Existing
    half-edges of each owner must already carry block labels.  A new
    half-edge landing on an owner joins the block of the copied half-edge on
    a preferential step and the base block (id 0) on a uniform step.
    """
    for v in range(start, nm + 1):
        t = v - 1
        denom = (2.0 + beta) * t - 2.0
        u1 = u[2 * (v - 2)]
        u2 = u[2 * (v - 2) + 1]
        if t == 1 or u1 * denom < beta * t:
            kind = KIND_UNIFORM
            i = int(u2 * t) + 1
            if i > t:
                i = t
            target = i
        else:
            j = int(u2 * (2 * t - 2))
            if j > 2 * t - 3:
                j = 2 * t - 3
            i = j // 2 + 2
            if j & 1:
                kind = KIND_HEAD
                target = heads[i]
            else:
                kind = KIND_TAIL
                target = i
        heads[v] = target
        degrees[v] = 1
        degrees[target] += 1
        kinds[v] = kind
        idxs[v] = i

        group = (target + m - 1) // m
        for s in range(owners.shape[0]):
            if owners[s] == group:
                new_hid = 2 * (v - 2) + 1
                block_owner[new_hid] = s
                if kind == KIND_UNIFORM:
                    block_id[new_hid] = 0
                elif kind == KIND_HEAD:
                    block_id[new_hid] = block_id[2 * (i - 2) + 1]
                else:
                    block_id[new_hid] = block_id[2 * (i - 2)]


def multigraph_counters(tails, heads, n):
    """Triangle, adjacent-pair, degenerate-pair and max-degree counters.

    Works on any 1-based multigraph edge list; loops allowed.  Triangles are
    counted over unordered triples of distinct vertices with multiplicity
    equal to the product of the three pairwise edge multiplicities, so each
    parallel class is collapsed first via one sort of the canonicalised edge
    keys.  Loops contribute 2 to their vertex degree and never close a
    triangle.
    """
    ne = tails.shape[0]
    deg = np.zeros(n + 1, np.int64)
    loops = np.zeros(n + 1, np.int64)
    sumsq = np.zeros(n + 1, np.int64)

    keys = np.empty(ne, np.int64)
    nk = 0
    for k in range(ne):
        a = tails[k]
        b = heads[k]
        deg[a] += 1
        deg[b] += 1
        if a == b:
            loops[a] += 1
        else:
            hi = a if a > b else b
            lo = b if a > b else a
            keys[nk] = hi * (n + 1) + lo
            nk += 1
    skeys = np.sort(keys[:nk])

    # run-length encode parallel classes: (hi, lo, multiplicity)
    rhi = np.empty(nk, np.int64)
    rlo = np.empty(nk, np.int64)
    rmu = np.empty(nk, np.int64)
    nr = 0
    k = 0
    while k < nk:
        key = skeys[k]
        j = k
        while j < nk and skeys[j] == key:
            j += 1
        mu = j - k
        hi = key // (n + 1)
        lo = key % (n + 1)
        rhi[nr] = hi
        rlo[nr] = lo
        rmu[nr] = mu
        sumsq[hi] += mu * mu
        sumsq[lo] += mu * mu
        nr += 1
        k = j

    # index of each vertex's run span (runs are sorted by hi, then lo)
    span = np.zeros(n + 2, np.int64)
    for r in range(nr):
        span[rhi[r] + 1] += 1
    for v in range(1, n + 2):
        span[v] += span[v - 1]

    # triangles: every triangle {a < b < c} has both of its upper edges at c,
    # so pairs of distinct lower neighbours of each vertex plus one closing
    # lookup enumerate each triangle exactly once
    tri = np.int64(0)
    r0 = 0
    while r0 < nr:
        hi = rhi[r0]
        r1 = r0
        while r1 < nr and rhi[r1] == hi:
            r1 += 1
        for p in range(r0, r1):
            for q in range(p + 1, r1):
                if rlo[q] > rlo[p]:
                    big, small = rlo[q], rlo[p]
                else:
                    big, small = rlo[p], rlo[q]
                for pos in range(span[big], span[big + 1]):
                    if rlo[pos] == small:
                        tri += rmu[p] * rmu[q] * rmu[pos]
                        break
        r0 = r1

    pair_sum = np.int64(0)
    degen = np.int64(0)
    dmax = np.int64(0)
    for v in range(1, n + 1):
        d = deg[v]
        if d > dmax:
            dmax = d
        pairs = d * (d - 1) // 2
        pair_sum += pairs
        tv = d - 2 * loops[v]
        nondeg = (tv * tv - sumsq[v]) // 2
        degen += pairs - nondeg
    return tri, pair_sum, degen, dmax


def ensemble_counters(nm, m, beta, u_all, out_tri, out_pairs, out_degen, out_dmax):
    """Batched grow-and-count for small trees: one row of uniforms per replicate.

    Row r consumes exactly the stream :func:`grow_tree` would, so results are
    bit-identical to per-replicate calls; only the Python-level overhead goes.
    """
    reps = u_all.shape[0]
    n = nm // m
    for r in range(reps):
        heads = np.zeros(nm + 1, np.int64)
        degrees = np.zeros(nm + 1, np.int64)
        kinds = np.zeros(nm + 1, np.int8)
        idxs = np.zeros(nm + 1, np.int64)
        grow_tree(2, nm, beta, u_all[r], heads, degrees, kinds, idxs)
        tails = (np.arange(2, nm + 1) + m - 1) // m
        mheads = (heads[2:] + m - 1) // m
        tri, pairs, degen, dmax = multigraph_counters(tails, mheads, n)
        out_tri[r] = tri
        out_pairs[r] = pairs
        out_degen[r] = degen
        out_dmax[r] = dmax


def grow_batch(nm, beta, u_all, heads_all, kinds_all, idxs_all):
    """Batched tree growth keeping per-replicate heads and outcome logs."""
    reps = u_all.shape[0]
    for r in range(reps):
        degrees = np.zeros(nm + 1, np.int64)
        grow_tree(2, nm, beta, u_all[r], heads_all[r], degrees, kinds_all[r], idxs_all[r])


PURE_PYTHON = {
    "grow_tree": grow_tree,
    "grow_tree_tracked": grow_tree_tracked,
    "multigraph_counters": multigraph_counters,
    "ensemble_counters": ensemble_counters,
    "grow_batch": grow_batch,
}

if numba_disabled_by_env():
    BACKEND = "numpy"
else:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dependency
        BACKEND = "numpy"
    else:
        BACKEND = "numba"
        _jit = njit(cache=True, nogil=True)
        grow_tree = _jit(PURE_PYTHON["grow_tree"])
        grow_tree_tracked = _jit(PURE_PYTHON["grow_tree_tracked"])
        multigraph_counters = _jit(PURE_PYTHON["multigraph_counters"])
        ensemble_counters = _jit(PURE_PYTHON["ensemble_counters"])
        grow_batch = _jit(PURE_PYTHON["grow_batch"])
