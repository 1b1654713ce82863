"""Exact shortest paths, Dreyfus-Wagner Steiner trees and brute-force optima."""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction

import numpy as np

from . import _kernels
from .graph import UnionFind, WeightedGraph
from .instance import PcInstance, SolutionForest, evaluate


def scale_to_integers(values):
    """Common-denominator integer image of rationals: (array, denominator).

    The array is int64 when every partial sum fits comfortably, and an
    object array of Python ints otherwise.
    """
    values = [Fraction(v) for v in values]
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [v.numerator * (den // v.denominator) for v in values]
    if sum(abs(x) for x in ints) < _kernels.INT_LIMIT:
        return np.array(ints, dtype=np.int64), den
    return np.array(ints, dtype=object), den


class DistanceTable:
    """All-pairs shortest paths of a graph, kept as exact scaled integers."""

    def __init__(self, g: WeightedGraph, edge_ids=None):
        self.graph = g
        ids = list(range(g.m)) if edge_ids is None else sorted(edge_ids)
        self.edge_ids = ids
        ws, self.den = scale_to_integers([g.edges[e][2] for e in ids])
        us = [g.edges[e][0] for e in ids]
        vs = [g.edges[e][1] for e in ids]
        self.dist, hop = _kernels.floyd_warshall(g.n, us, vs, ws)
        self.inf = int(_kernels.INF) << 200 if self.dist.dtype == object else _kernels.INF
        self.hop = hop
        self._ws = {ids[k]: ws[k] for k in range(len(ids))}
        self._adj = None

    def reachable(self, u: int, v: int) -> bool:
        return self.dist[u, v] < self.inf

    def d(self, u: int, v: int):
        x = self.dist[u, v]
        if x >= self.inf:
            return None
        return Fraction(int(x), self.den)

    def path(self, u: int, v: int) -> list:
        """Edge ids of a shortest u->v path."""
        if u == v:
            return []
        if not self.reachable(u, v):
            raise ValueError(f"vertex {v} is unreachable from {u}")
        g, dist = self.graph, self.dist
        out, cur = [], u
        while cur != v and len(out) <= g.n:
            k = int(self.hop[cur, v])
            e = self.edge_ids[k]
            nxt = g.other(e, cur)
            if self._ws[e] + dist[nxt, v] != dist[cur, v]:
                break
            out.append(e)
            cur = nxt
        if cur == v:
            return out
        return self._tight_bfs(u, v)

    def _tight_bfs(self, u, v):
        g, dist = self.graph, self.dist
        if self._adj is None:
            adj = [[] for _ in range(g.n)]
            for e in self.edge_ids:
                a, b, _ = g.edges[e]
                adj[a].append(e)
                if a != b:
                    adj[b].append(e)
            self._adj = adj
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                break
            for e in self._adj[x]:
                y = g.other(e, x)
                if y not in prev and self._ws[e] + dist[y, v] == dist[x, v]:
                    prev[y] = (x, e)
                    queue.append(y)
        out = []
        x = v
        while prev[x] is not None:
            x, e = prev[x]
            out.append(e)
        return out[::-1]


def spanning_subforest(g: WeightedGraph, ids) -> list:
    """Minimum spanning forest of the given edges (ties by edge id)."""
    uf = UnionFind(g.n)
    keep = []
    for e in sorted(set(ids), key=lambda e: (g.edges[e][2], e)):
        if uf.union(g.edges[e][0], g.edges[e][1]):
            keep.append(e)
    return sorted(keep)


class SteinerTables:
    """Dreyfus-Wagner tables over a fixed terminal list, with tree recovery."""

    def __init__(self, dt: DistanceTable, terminals):
        self.dt = dt
        self.terms = list(terminals)
        self.dp, self.split = _kernels.dreyfus_wagner_tables(dt.dist, self.terms)

    def cost_scaled(self, mask: int):
        if mask & (mask - 1) == 0:
            return 0
        low = (mask & -mask).bit_length() - 1
        return self.dp[mask, self.terms[low]]

    def cost(self, mask: int):
        x = self.cost_scaled(mask)
        if x >= self.dt.inf:
            return None
        return Fraction(int(x), self.dt.den)

    def tree(self, mask: int) -> list:
        if mask & (mask - 1) == 0:
            return []
        if self.cost_scaled(mask) >= self.dt.inf:
            raise ValueError("terminals are not connected")
        dt, dp, split, dist = self.dt, self.dp, self.split, self.dt.dist
        n = dist.shape[0]
        low = (mask & -mask).bit_length() - 1
        edges = set()
        stack = [(mask, self.terms[low])]
        while stack:
            sub_mask, v = stack.pop()
            if sub_mask & (sub_mask - 1) == 0:
                i = sub_mask.bit_length() - 1
                edges.update(dt.path(self.terms[i], v))
                continue
            target = dp[sub_mask, v]
            u = next(u for u in range(n) if split[sub_mask, u] + dist[u, v] == target)
            edges.update(dt.path(u, v))
            lowbit = sub_mask & -sub_mask
            rest = sub_mask ^ lowbit
            s = rest
            while True:
                a = s | lowbit
                if a != sub_mask and dp[a, u] + dp[sub_mask ^ a, u] == split[sub_mask, u]:
                    break
                s = (s - 1) & rest
            stack.append((a, u))
            stack.append((sub_mask ^ a, u))
        tree = spanning_subforest(dt.graph, edges)
        assert dt.graph.total_length(tree) == self.cost(mask)
        return tree


def dreyfus_wagner(g: WeightedGraph, terminals, cap: int = 10, edge_ids=None):
    """Minimum Steiner tree: (sorted edge ids, exact length)."""
    terms = sorted(set(int(t) for t in terminals))
    if len(terms) > cap:
        raise ValueError(f"Dreyfus-Wagner is capped at {cap} terminals (got {len(terms)})")
    if len(terms) <= 1:
        return [], Fraction(0)
    tables = SteinerTables(DistanceTable(g, edge_ids), terms)
    full = (1 << len(terms)) - 1
    tree = tables.tree(full)
    return tree, g.total_length(tree)


def brute_force_pcsf(inst: PcInstance, mode: str = "auto", edge_cap: int = 16, pair_cap: int = 6,
                     terminal_cap: int = 12):
    """Exact optimum by edge-subset enumeration or pair-subset + Steiner DP.

    Works for both forest and rooted instances (a rooted instance is the
    forest instance pairing each penalized vertex with the root).
    Returns ``(SolutionForest, cost)``.
    """
    g = inst.graph
    demands = [(s, t, p) for s, t, p in inst.demands() if p > 0]
    if mode == "auto":
        mode = "edges" if g.m <= edge_cap else "steiner"
    if mode == "edges":
        if g.m > edge_cap:
            raise ValueError(f"edge-subset oracle is capped at {edge_cap} edges (instance has {g.m})")
        return _brute_edges(inst, demands)
    if mode == "steiner":
        if len(demands) > pair_cap:
            raise ValueError(f"pair-subset oracle is capped at {pair_cap} positive pairs (instance has {len(demands)})")
        return _brute_steiner(inst, demands, terminal_cap)
    raise ValueError(f"unknown oracle mode {mode!r}")


def _brute_edges(inst, demands):
    g = inst.graph
    vals, den = scale_to_integers([w for _, _, w in g.edges] + [p for _, _, p in demands])
    ws, pw = vals[: g.m], vals[g.m :]
    best, mask = _kernels.edge_subset_search(
        g.n,
        [u for u, _, _ in g.edges],
        [v for _, v, _ in g.edges],
        ws,
        [s for s, _, _ in demands],
        [t for _, t, _ in demands],
        pw,
    )
    F = [e for e in range(g.m) if (mask >> e) & 1]
    sol = evaluate(inst, F)
    assert sol.cost == Fraction(best, den)
    return sol, sol.cost


def _brute_steiner(inst, demands, terminal_cap):
    g = inst.graph
    if not demands:
        sol = evaluate(inst, [])
        return sol, sol.cost
    terms = sorted({v for s, t, _ in demands for v in (s, t)})
    if len(terms) > terminal_cap:
        raise ValueError(f"pair-subset oracle is capped at {terminal_cap} terminals (instance has {len(terms)})")
    where = {v: i for i, v in enumerate(terms)}
    tables = SteinerTables(DistanceTable(g), terms)
    h = len(demands)
    tmask = [0] * (1 << h)
    for P in range(1, 1 << h):
        i = (P & -P).bit_length() - 1
        s, t, _ = demands[i]
        tmask[P] = tmask[P & (P - 1)] | (1 << where[s]) | (1 << where[t])
    inf = None
    forest = [None] * (1 << h)
    choice = [0] * (1 << h)
    forest[0] = Fraction(0)
    for P in range(1, 1 << h):
        low = P & -P
        rest = P ^ low
        best, pick = inf, 0
        sub = rest
        while True:
            Q = sub | low
            tree = tables.cost(tmask[Q])
            if tree is not None and forest[P ^ Q] is not None:
                cand = tree + forest[P ^ Q]
                if best is None or cand < best:
                    best, pick = cand, Q
            if sub == 0:
                break
            sub = (sub - 1) & rest
        forest[P], choice[P] = best, pick
    best_cost, best_P = None, 0
    for P in range(1 << h):
        if forest[P] is None:
            continue
        cost = forest[P] + sum((demands[i][2] for i in range(h) if not (P >> i) & 1), Fraction(0))
        if best_cost is None or cost < best_cost:
            best_cost, best_P = cost, P
    edges = set()
    P = best_P
    while P:
        Q = choice[P]
        edges.update(tables.tree(tmask[Q]))
        P ^= Q
    sol = evaluate(inst, spanning_subforest(g, edges))
    assert sol.cost == best_cost, (sol.cost, best_cost)
    return sol, sol.cost
