"""Integer kernels for the hot loops.

Every kernel works on exactly scaled integer weights, so results are exact.
Two backends exist: numba-compiled loops and a vectorized numpy fallback.
Set ``PCST_DISABLE_NUMBA=1`` to force the numpy path.  When the scaled
values could overflow int64 the callers switch to object arrays, which only
the numpy path supports.
"""

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NUMBA_DISABLED = os.environ.get("PCST_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
HAVE_NUMBA = numba is not None

# INF + INF must still fit in int64.
INF = np.int64(1) << np.int64(61)
# Scaled totals must stay below this for the int64 path.
INT_LIMIT = 1 << 59


def backend():
    return "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


# ---------------------------------------------------------------- all pairs


def _floyd_warshall_loops(n, us, vs, ws, inf):
    dist = np.full((n, n), inf, dtype=np.int64)
    hop = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        dist[i, i] = 0
    for e in range(us.shape[0]):
        u = us[e]
        v = vs[e]
        w = ws[e]
        if u == v:
            continue
        if w < dist[u, v] or (w == dist[u, v] and hop[u, v] > e):
            dist[u, v] = w
            dist[v, u] = w
            hop[u, v] = e
            hop[v, u] = e
    for k in range(n):
        for i in range(n):
            dik = dist[i, k]
            if dik >= inf:
                continue
            for j in range(n):
                cand = dik + dist[k, j]
                if cand < dist[i, j]:
                    dist[i, j] = cand
                    hop[i, j] = hop[i, k]
    return dist, hop


_floyd_warshall_numba = _jit(_floyd_warshall_loops)


def _floyd_warshall_numpy(n, us, vs, ws, inf):
    dtype = ws.dtype if ws.dtype == object else np.int64
    dist = np.full((n, n), inf, dtype=dtype)
    hop = np.full((n, n), -1, dtype=np.int64)
    for i in range(n):
        dist[i, i] = 0
    for e in range(len(us)):
        u, v, w = int(us[e]), int(vs[e]), ws[e]
        if u == v:
            continue
        if w < dist[u, v]:
            dist[u, v] = dist[v, u] = w
            hop[u, v] = hop[v, u] = e
    for k in range(n):
        cand = dist[:, k : k + 1] + dist[k : k + 1, :]
        better = cand < dist
        if better.any():
            dist = np.where(better, cand, dist)
            hop = np.where(better, hop[:, k : k + 1], hop)
    return dist, hop


def floyd_warshall(n, us, vs, ws, force=None):
    """All-pairs distances and first-hop edge ids.

    ``hop[i, j]`` is the first edge on the chosen shortest i->j path, or -1.
    Parallel edges resolve to the lowest id among the shortest.
    """
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if ws.dtype == object:
        return _floyd_warshall_numpy(n, us, vs, ws, int(INF) << 200)
    ws = np.asarray(ws, dtype=np.int64)
    which = force or backend()
    if which == "numba" and HAVE_NUMBA:
        return _floyd_warshall_numba(n, us, vs, ws, INF)
    return _floyd_warshall_numpy(n, us, vs, ws, INF)


# ---------------------------------------------------------- Dreyfus-Wagner


def _dreyfus_wagner_loops(dist, terms, inf):
    n = dist.shape[0]
    t = terms.shape[0]
    full = 1 << t
    dp = np.full((full, n), inf, dtype=np.int64)
    split = np.full((full, n), inf, dtype=np.int64)
    for i in range(t):
        for v in range(n):
            dp[1 << i, v] = dist[terms[i], v]
    for mask in range(1, full):
        if mask & (mask - 1) == 0:
            continue
        low = mask & (-mask)
        rest = mask ^ low
        for v in range(n):
            best = inf
            sub = rest
            while True:
                a = sub | low
                if a != mask:
                    cand = dp[a, v] + dp[mask ^ a, v]
                    if cand < best:
                        best = cand
                if sub == 0:
                    break
                sub = (sub - 1) & rest
            split[mask, v] = best
        for v in range(n):
            best = inf
            for u in range(n):
                cand = split[mask, u] + dist[u, v]
                if cand < best:
                    best = cand
            dp[mask, v] = best
    return dp, split


_dreyfus_wagner_numba = _jit(_dreyfus_wagner_loops)


def _dreyfus_wagner_numpy(dist, terms, inf):
    n = dist.shape[0]
    t = len(terms)
    full = 1 << t
    dtype = dist.dtype if dist.dtype == object else np.int64
    dp = np.full((full, n), inf, dtype=dtype)
    split = np.full((full, n), inf, dtype=dtype)
    for i in range(t):
        dp[1 << i] = dist[terms[i]]
    for mask in range(1, full):
        if mask & (mask - 1) == 0:
            continue
        low = mask & -mask
        rest = mask ^ low
        best = np.full(n, inf, dtype=dtype)
        sub = rest
        while True:
            a = sub | low
            if a != mask:
                best = np.minimum(best, dp[a] + dp[mask ^ a])
            if sub == 0:
                break
            sub = (sub - 1) & rest
        split[mask] = best
        dp[mask] = (best[:, None] + dist).min(axis=0)
    return dp, split


def dreyfus_wagner_tables(dist, terms, force=None):
    """Subset DP tables.

    ``dp[mask, v]`` is the cheapest tree spanning the terminals in ``mask``
    plus ``v``; ``split[mask, v]`` is the cheapest such tree in which ``v``
    joins two nonempty terminal groups.
    """
    terms = np.asarray(terms, dtype=np.int64)
    if dist.dtype == object:
        return _dreyfus_wagner_numpy(dist, terms, int(INF) << 200)
    which = force or backend()
    if which == "numba" and HAVE_NUMBA:
        return _dreyfus_wagner_numba(dist, terms, INF)
    return _dreyfus_wagner_numpy(dist, terms, INF)


# ------------------------------------------------------ edge-subset search


def _edge_subsets_loops(n, us, vs, ws, ps, pt, pw, lo, hi):
    m = us.shape[0]
    h = ps.shape[0]
    parent = np.empty(n, dtype=np.int64)
    best = np.int64(-1)
    best_mask = np.int64(-1)
    for mask in range(lo, hi):
        for i in range(n):
            parent[i] = i
        acyclic = True
        length = np.int64(0)
        for e in range(m):
            if (mask >> e) & 1:
                a = us[e]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = vs[e]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a == b:
                    acyclic = False
                    break
                parent[a] = b
                length += ws[e]
        if not acyclic:
            continue
        cost = length
        for i in range(h):
            a = ps[i]
            while parent[a] != a:
                a = parent[a]
            b = pt[i]
            while parent[b] != b:
                b = parent[b]
            if a != b:
                cost += pw[i]
        if best < 0 or cost < best:
            best = cost
            best_mask = mask
    return best, best_mask


_edge_subsets_numba = _jit(_edge_subsets_loops)


def _edge_subsets_numpy(n, us, vs, ws, ps, pt, pw, lo, hi):
    m = len(us)
    masks = np.arange(lo, hi, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1).astype(bool)
    label = np.tile(np.arange(n, dtype=np.int64), (len(masks), 1))
    # Label propagation; n - 1 sweeps over the edges reach the fixpoint.
    for _ in range(max(n - 1, 1)):
        changed = False
        for e in range(m):
            u, v = int(us[e]), int(vs[e])
            low = np.minimum(label[:, u], label[:, v])
            on = bits[:, e]
            nu = np.where(on, low, label[:, u])
            nv = np.where(on, low, label[:, v])
            if not changed and (np.any(nu != label[:, u]) or np.any(nv != label[:, v])):
                changed = True
            label[:, u] = nu
            label[:, v] = nv
        if not changed:
            break
    roots = (label == np.arange(n, dtype=np.int64)[None, :]).sum(axis=1)
    acyclic = bits.sum(axis=1) == n - roots
    dtype = ws.dtype if ws.dtype == object else np.int64
    cost = bits.astype(dtype) @ ws if m else np.zeros(len(masks), dtype=dtype)
    for i in range(len(ps)):
        cost = cost + (label[:, ps[i]] != label[:, pt[i]]).astype(dtype) * pw[i]
    if not acyclic.any():
        return -1, -1
    cost = np.where(acyclic, cost, cost.max() + 1)
    k = int(np.argmin(cost))
    return cost[k], int(masks[k])


def edge_subset_search(n, us, vs, ws, ps, pt, pw, force=None, chunk=1 << 14):
    """Cheapest acyclic edge subset; ties go to the smallest mask."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    ps = np.asarray(ps, dtype=np.int64)
    pt = np.asarray(pt, dtype=np.int64)
    total = 1 << len(us)
    which = "numpy" if ws.dtype == object else (force or backend())
    if which == "numba" and HAVE_NUMBA:
        best, mask = _edge_subsets_numba(n, us, vs, ws, ps, pt, pw, 0, total)
        return int(best), int(mask)
    best, best_mask = None, -1
    for lo in range(0, total, chunk):
        cost, mask = _edge_subsets_numpy(n, us, vs, ws, ps, pt, pw, lo, min(total, lo + chunk))
        if mask >= 0 and (best is None or cost < best):
            best, best_mask = cost, mask
    return int(best), best_mask
