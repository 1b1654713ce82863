"""Seeded planar instance generators; every instance carries its rotation system."""

from __future__ import annotations

import random
from fractions import Fraction

from .graph import RotationSystem, UnionFind, WeightedGraph, check_embedding, rotation_from_coordinates
from .instance import PcInstance

KINDS = ("grid", "delaunay-like", "series-parallel", "ring-chords")


def _length(rng, lo, hi, dens):
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def _finish(rng, n, edges, rotation, mode, terminals, pairs, penalty_range, dens, root=None):
    lo, hi = penalty_range
    g = WeightedGraph(n, edges)
    if mode == "tree":
        if root is None:
            root = rng.randrange(n)
        pen = [Fraction(0)] * n
        others = [v for v in range(n) if v != root]
        for v in sorted(rng.sample(others, min(terminals, len(others)))):
            pen[v] = _length(rng, lo, hi, dens)
        return PcInstance(g, root=root, vertex_penalties=tuple(pen), rotation=rotation)
    if mode != "forest":
        raise ValueError(f"mode must be 'tree' or 'forest', got {mode!r}")
    out = []
    for _ in range(pairs if n >= 2 else 0):
        s, t = rng.sample(range(n), 2)
        out.append((s, t, _length(rng, lo, hi, dens)))
    return PcInstance(g, pairs=tuple(out), rotation=rotation)


def grid(rows: int, cols: int, seed: int = 0, mode: str = "tree", terminals: int = 3, pairs: int = 3,
         length_range=(1, 10), penalty_range=(0, 20), denominators=(1, 2, 3, 4)) -> PcInstance:
    rng = random.Random(seed)
    coords = [(c, r) for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1, _length(rng, *length_range, denominators)))
            if r + 1 < rows:
                edges.append((v, v + cols, _length(rng, *length_range, denominators)))
    g = WeightedGraph(rows * cols, edges)
    rot = rotation_from_coordinates(g, coords)
    return _finish(rng, g.n, edges, rot, mode, terminals, pairs, penalty_range, denominators)


def delaunay_like(n: int, seed: int = 0, mode: str = "tree", drop: float = 0.3, terminals: int = 3,
                  pairs: int = 3, length_range=(1, 10), penalty_range=(0, 20),
                  denominators=(1, 2, 3, 4)) -> PcInstance:
    """Delaunay triangulation of random integer points, thinned while staying connected."""
    from scipy.spatial import Delaunay

    if n < 3:
        return grid(1, max(n, 1), seed, mode, terminals, pairs, length_range, penalty_range, denominators)
    rng = random.Random(seed)
    for _attempt in range(100):
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(0, 1000), rng.randint(0, 1000)))
        coords = sorted(pts)
        try:
            tri = Delaunay(coords)
        except Exception:
            continue
        if len(set(int(v) for s in tri.simplices for v in s)) != n:
            continue
        pairs_set = set()
        for s in tri.simplices:
            a, b, c = (int(x) for x in s)
            for u, v in ((a, b), (b, c), (a, c)):
                pairs_set.add((min(u, v), max(u, v)))
        order = sorted(pairs_set)
        rng.shuffle(order)
        keep = set(order)
        for u, v in order:
            if rng.random() >= drop:
                continue
            trial = keep - {(u, v)}
            uf = UnionFind(n)
            for a, b in trial:
                uf.union(a, b)
            if len({uf.find(x) for x in range(n)}) == 1:
                keep = trial
        edges = [(u, v, _length(rng, *length_range, denominators)) for u, v in sorted(keep)]
        g = WeightedGraph(n, edges)
        rot = rotation_from_coordinates(g, coords)
        if check_embedding(g, rot).ok:
            return _finish(rng, n, edges, rot, mode, terminals, pairs, penalty_range, denominators)
    raise RuntimeError("could not build a non-degenerate triangulation")


def series_parallel(n: int, seed: int = 0, mode: str = "tree", terminals: int = 3, pairs: int = 3,
                    length_range=(1, 10), penalty_range=(0, 20), denominators=(1, 2, 3, 4),
                    parallel_bias: float = 0.5) -> PcInstance:
    """Grow a 2-terminal series-parallel graph by subdividing edges and adding parallel 2-paths."""
    rng = random.Random(seed)
    n = max(n, 2)
    ends = [[0, 1]]
    order = [[0], [1]]
    while len(order) < n:
        e = rng.randrange(len(ends))
        u, v = ends[e]
        w = len(order)
        f = len(ends)
        if rng.random() < parallel_bias and len(order) + 1 <= n:
            # u-w-v beside edge e: after e at u, before e at v.
            ends.append([u, w])
            ends.append([w, v])
            du, dv = _dart_at(ends, e, u), _dart_at(ends, e, v)
            ru = order[u]
            ru.insert(ru.index(du) + 1, 2 * f)
            rv = order[v]
            rv.insert(rv.index(dv), 2 * (f + 1) + 1)
            order.append([2 * f + 1, 2 * (f + 1)])
        else:
            # Subdivide: e becomes u-w and a new edge f runs w-v.
            dv = _dart_at(ends, e, v)
            ends[e] = [u, w]
            ends.append([w, v])
            rv = order[v]
            rv[rv.index(dv)] = 2 * f + 1
            new_dv = 2 * e + 1 if ends[e][1] == w else 2 * e
            order.append([new_dv, 2 * f])
    edges = [(a, b, _length(rng, *length_range, denominators)) for a, b in ends]
    rot = RotationSystem(tuple(tuple(r) for r in order))
    return _finish(rng, len(order), edges, rot, mode, terminals, pairs, penalty_range, denominators)


def _dart_at(ends, e, v):
    return 2 * e if ends[e][0] == v else 2 * e + 1


def ring_chords(n: int, seed: int = 0, mode: str = "tree", chords: int = 3, terminals: int = 3,
                pairs: int = 3, length_range=(1, 10), penalty_range=(0, 20),
                denominators=(1, 2, 3, 4)) -> PcInstance:
    """Outerplanar graph: an n-cycle plus non-crossing chords."""
    rng = random.Random(seed)
    n = max(n, 3)
    links = [(i, (i + 1) % n) for i in range(n)]
    present = {(min(a, b), max(a, b)) for a, b in links}
    chosen = []
    for _ in range(chords * 20):
        if len(chosen) >= chords:
            break
        a, b = sorted(rng.sample(range(n), 2))
        if (a, b) in present:
            continue
        if any(a < c < b < d or c < a < d < b for c, d in chosen):
            continue
        chosen.append((a, b))
        present.add((a, b))
    links += chosen
    edges = [(a, b, _length(rng, *length_range, denominators)) for a, b in links]
    g = WeightedGraph(n, edges)
    order = []
    for v in range(n):
        order.append(tuple(sorted(g.darts_at(v), key=lambda d: (g.head(d) - v) % n)))
    return _finish(rng, n, edges, RotationSystem(tuple(order)), mode, terminals, pairs, penalty_range, denominators)


def generate(kind: str, seed: int = 0, **params) -> PcInstance:
    """Dispatch by kind name; ``size`` is a shorthand for the natural size knob."""
    size = params.pop("size", None)
    if kind == "grid":
        if size is not None:
            params.setdefault("rows", size)
            params.setdefault("cols", size)
        return grid(params.pop("rows", 3), params.pop("cols", 3), seed=seed, **params)
    if kind in ("delaunay-like", "delaunay"):
        return delaunay_like(size or params.pop("n", 8), seed=seed, **params)
    if kind in ("series-parallel", "sp"):
        return series_parallel(size or params.pop("n", 8), seed=seed, **params)
    if kind in ("ring-chords", "ring"):
        return ring_chords(size or params.pop("n", 8), seed=seed, **params)
    raise ValueError(f"unknown generator kind {kind!r}; choose from {', '.join(KINDS)}")
