import os
import subprocess
import sys

import numpy as np
import pytest

from pcsteiner import _kernels
from pcsteiner.generators import KINDS, generate
from pcsteiner.oracles import brute_force_pcsf, scale_to_integers

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def arrays(g):
    ws, _ = scale_to_integers([w for _, _, w in g.edges])
    us = np.asarray([u for u, _, _ in g.edges])
    vs = np.asarray([v for _, v, _ in g.edges])
    return us, vs, np.asarray(ws, dtype=np.int64)


def same(a, b):
    return all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(a, b))


@needs_numba
@pytest.mark.parametrize("seed", range(8))
def test_floyd_warshall_backends_agree(seed):
    g = generate(KINDS[seed % 4], seed, size=9).graph
    us, vs, ws = arrays(g)
    assert same(_kernels.floyd_warshall(g.n, us, vs, ws, force="numba"),
                _kernels.floyd_warshall(g.n, us, vs, ws, force="numpy"))


def test_floyd_warshall_small_example():
    # triangle with a long direct edge: the two-hop route wins
    us, vs, ws = np.array([0, 1, 0]), np.array([1, 2, 2]), np.array([1, 1, 5], dtype=np.int64)
    for b in ("numba", "numpy"):
        dist, hop = _kernels.floyd_warshall(3, us, vs, ws, force=b)
        assert dist[0, 2] == 2 and hop[0, 2] == 0 and dist[2, 2] == 0


@needs_numba
@pytest.mark.parametrize("seed", range(6))
def test_dreyfus_wagner_backends_agree(seed):
    g = generate(KINDS[seed % 4], seed, size=8).graph
    us, vs, ws = arrays(g)
    dist, _ = _kernels.floyd_warshall(g.n, us, vs, ws)
    terms = list(range(0, g.n, max(1, g.n // 5)))[:5]
    assert same(_kernels.dreyfus_wagner_tables(dist, terms, force="numba"),
                _kernels.dreyfus_wagner_tables(dist, terms, force="numpy"))


@needs_numba
@pytest.mark.parametrize("seed", range(6))
def test_edge_subset_backends_agree(seed):
    inst = generate(KINDS[seed % 4], seed, size=6 if seed % 4 else 3, mode="forest", pairs=3)
    g = inst.graph
    ws, _ = scale_to_integers([w for _, _, w in g.edges] + [p for _, _, p in inst.pairs])
    ew, pw = np.asarray(ws[:g.m], dtype=np.int64), np.asarray(ws[g.m:], dtype=np.int64)
    us, vs, _ = arrays(g)
    ps = np.asarray([s for s, _, _ in inst.pairs])
    pt = np.asarray([t for _, t, _ in inst.pairs])
    a = _kernels.edge_subset_search(g.n, us, vs, ew, ps, pt, pw, force="numba")
    b = _kernels.edge_subset_search(g.n, us, vs, ew, ps, pt, pw, force="numpy", chunk=64)
    assert a == b


def test_object_arrays_take_numpy_path():
    us, vs = np.array([0, 1]), np.array([1, 2])
    ws = np.array([1 << 70, 1 << 70], dtype=object)
    dist, _ = _kernels.floyd_warshall(3, us, vs, ws, force="numba")
    assert dist[0, 2] == 1 << 71


def test_env_flag_selects_numpy():
    code = ("from pcsteiner import _kernels; from pcsteiner.generators import generate;"
            "from pcsteiner.oracles import brute_force_pcsf;"
            "print(_kernels.backend(), brute_force_pcsf(generate('grid', 2, size=3, mode='forest', pairs=2))[1])")
    out = {}
    for flag in ("1", ""):
        env = dict(os.environ, PCST_DISABLE_NUMBA=flag)
        out[flag] = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                   check=True).stdout.split()
    assert out["1"][0] == "numpy"
    assert out[""][0] == ("numba" if _kernels.HAVE_NUMBA else "numpy")
    assert out["1"][1] == out[""][1] == str(brute_force_pcsf(generate("grid", 2, size=3, mode="forest", pairs=2))[1])
