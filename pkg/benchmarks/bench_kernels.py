"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--out bench.json]

Each kernel runs once per backend to warm up (numba compiles on first
call), then ``--repeat`` more times; the best time is reported.  Outputs of
the two backends are compared and any mismatch is reported as an error.
"""

import argparse
import json
import random
import sys
import time

import numpy as np

from pcsteiner import _kernels
from pcsteiner.generators import generate
from pcsteiner.oracles import scale_to_integers


def _graph_arrays(size, seed):
    g = generate("grid", seed, size=size).graph
    ws, _ = scale_to_integers([w for _, _, w in g.edges])
    us = [u for u, _, _ in g.edges]
    vs = [v for _, v, _ in g.edges]
    return g, np.asarray(us), np.asarray(vs), np.asarray(ws, dtype=np.int64)


def _time(fn, repeat):
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases():
    for size in (6, 10, 14):
        g, us, vs, ws = _graph_arrays(size, size)
        yield f"floyd_warshall n={g.n}", lambda b, g=g, us=us, vs=vs, ws=ws: _kernels.floyd_warshall(g.n, us, vs, ws, force=b)
    for size, t in ((6, 6), (8, 8), (8, 10)):
        g, us, vs, ws = _graph_arrays(size, size)
        dist, _ = _kernels.floyd_warshall(g.n, us, vs, ws)
        terms = random.Random(t).sample(range(g.n), t)
        yield (f"dreyfus_wagner n={g.n} t={t}",
               lambda b, dist=dist, terms=terms: _kernels.dreyfus_wagner_tables(dist, terms, force=b))
    for m_target in (12, 16, 18):
        inst = generate("ring-chords", m_target, size=m_target // 2 + 2, chords=m_target // 2 - 2, mode="forest",
                        pairs=4)
        g = inst.graph
        ws, den = scale_to_integers([w for _, _, w in g.edges] + [p for _, _, p in inst.pairs])
        ew, pw = np.asarray(ws[:g.m], dtype=np.int64), np.asarray(ws[g.m:], dtype=np.int64)
        us = np.asarray([u for u, _, _ in g.edges])
        vs = np.asarray([v for _, v, _ in g.edges])
        ps = np.asarray([s for s, _, _ in inst.pairs])
        pt = np.asarray([t for _, t, _ in inst.pairs])
        yield (f"edge_subset_search m={g.m}",
               lambda b, g=g, us=us, vs=vs, ew=ew, ps=ps, pt=pt, pw=pw:
               _kernels.edge_subset_search(g.n, us, vs, ew, ps, pt, pw, force=b))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--out")
    args = ap.parse_args(argv)
    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend can be timed", file=sys.stderr)
    rows, bad = [], 0
    print(f"{'kernel':<32} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, fn in cases():
        tn, outn = _time(lambda: fn("numba"), args.repeat)
        tp, outp = _time(lambda: fn("numpy"), args.repeat)
        same = _same(outn, outp)
        bad += not same
        rows.append({"kernel": name, "numba_s": tn, "numpy_s": tp, "speedup": tp / tn, "agree": same})
        print(f"{name:<32} {tn:>10.5f} {tp:>10.5f} {tp / tn:>7.1f}x{'' if same else '  MISMATCH'}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(rows, fh, indent=1)
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
