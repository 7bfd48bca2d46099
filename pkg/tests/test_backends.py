"""The compiled kernels and the pure-Python fallback must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from mori import _kernels

from conftest import rng_of

needs_numba = pytest.mark.skipif(
    _kernels.BACKEND != "numba", reason="numba backend not active"
)


def _grow_inputs(nm, beta, seed):
    u = rng_of(seed).random(2 * (nm - 1))
    heads = np.zeros(nm + 1, np.int64)
    degrees = np.zeros(nm + 1, np.int64)
    kinds = np.zeros(nm + 1, np.int8)
    idxs = np.zeros(nm + 1, np.int64)
    return u, heads, degrees, kinds, idxs


@needs_numba
@pytest.mark.parametrize("nm,beta,seed", [(50, 1.0, 0), (400, 0.5, 3), (1000, 3.0, 9)])
def test_grow_tree_backends_agree(nm, beta, seed):
    u, *jit_arrays = _grow_inputs(nm, beta, seed)
    _kernels.grow_tree(2, nm, beta, u, *jit_arrays)
    u2, *py_arrays = _grow_inputs(nm, beta, seed)
    _kernels.PURE_PYTHON["grow_tree"](2, nm, beta, u2, *py_arrays)
    for a, b in zip(jit_arrays, py_arrays):
        assert np.array_equal(a, b)


@needs_numba
def test_counters_backends_agree():
    rng = rng_of(123)
    for _ in range(25):
        n = int(rng.integers(1, 40))
        ne = int(rng.integers(0, 120))
        tails = rng.integers(1, n + 1, ne)
        heads = rng.integers(1, n + 1, ne)
        got = _kernels.multigraph_counters(tails, heads, n)
        want = _kernels.PURE_PYTHON["multigraph_counters"](tails, heads, n)
        assert tuple(got) == tuple(want)


@needs_numba
def test_tracked_growth_backends_agree():
    nm, beta, seed, m = 300, 1.0, 5, 2
    owners = np.array([1, 2], np.int64)
    for impl_name in ("jit", "py"):
        u, heads, degrees, kinds, idxs = _grow_inputs(nm, beta, seed)
        anchor = 40
        fn = _kernels.grow_tree if impl_name == "jit" else _kernels.PURE_PYTHON["grow_tree"]
        tracked = (
            _kernels.grow_tree_tracked
            if impl_name == "jit"
            else _kernels.PURE_PYTHON["grow_tree_tracked"]
        )
        fn(2, anchor, beta, u, heads, degrees, kinds, idxs)
        block_owner = np.full(2 * (nm - 1), -1, np.int8)
        block_id = np.full(2 * (nm - 1), -1, np.int32)
        hid = np.arange(2 * (anchor - 1))
        ei = hid // 2 + 2
        endpoint = np.where(hid & 1, heads[ei], ei)
        group = (endpoint + m - 1) // m
        for s, ow in enumerate(owners):
            ids = hid[group == ow]
            block_owner[ids] = s
            block_id[ids] = np.arange(1, len(ids) + 1)
        tracked(anchor + 1, nm, beta, u, heads, degrees, kinds, idxs,
                m, owners, block_owner, block_id)
        if impl_name == "jit":
            ref = (heads.copy(), block_owner.copy(), block_id.copy())
        else:
            assert np.array_equal(ref[0], heads)
            assert np.array_equal(ref[1], block_owner)
            assert np.array_equal(ref[2], block_id)


def test_disabled_backend_subprocess_matches():
    """A run with MORI_DISABLE_NUMBA=1 produces identical CLI stats output."""
    argv = [sys.executable, "-m", "mori.cli", "stats", "--n", "40", "--m", "2",
            "--beta", "1", "--seed", "11"]
    env = dict(os.environ)
    env.pop("MORI_DISABLE_NUMBA", None)
    with_numba = subprocess.run(argv, capture_output=True, text=True, env=env)
    env["MORI_DISABLE_NUMBA"] = "1"
    without = subprocess.run(argv, capture_output=True, text=True, env=env)
    assert with_numba.returncode == without.returncode == 0
    assert with_numba.stdout == without.stdout
