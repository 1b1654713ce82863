"""Exact prize-collecting Steiner tree on a nice tree decomposition.

A table entry is keyed by a bag subgraph ``H`` (vertex tuple, edge tuple)
and a partition ``alpha`` of ``V(H)``.  It holds the cheapest forest ``F``
in the graph induced by the vertices seen so far such that ``F`` agrees
with ``H`` on the bag, ``alpha`` is exactly the connectivity ``F`` induces
on ``V(H)``, and every component of ``F`` still touches the bag.  Cost is
``Length(F)`` plus the penalties of seen vertices outside ``F``.

Equal-cost entries prefer the edge set that contains the lowest edge id
at which the two sets differ.  That order survives disjoint unions, so
the per-entry choices compose into one global rule.

Tables are built push-style from the children.  The ``solve_*`` functions
recompute single entries pull-style from the written recurrences and
serve as an independent check; with ``literal=True`` they follow the
recurrences exactly as printed (no acyclicity test in joins, no bag
penalty correction in joins, and forget nodes only through direct edges
to the bag), which is not exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import UnionFind, ValidationError, WeightedGraph
from .instance import PcInstance, SolutionForest, evaluate
from .treewidth import NiceTreeDecomposition, heuristic_decomposition, make_nice, verify_nice

# ------------------------------------------------------------ partitions


def canonical(parts) -> tuple:
    """Parts sorted internally and by their minimum element."""
    return tuple(sorted(tuple(sorted(p)) for p in parts if p))


def join_partitions(a, b) -> tuple:
    """Finest common coarsening of two partitions of the same ground set."""
    ground = sorted(x for p in a for x in p)
    idx = {x: i for i, x in enumerate(ground)}
    uf = UnionFind(len(ground))
    for part in list(a) + list(b):
        for x in part[1:]:
            uf.union(idx[part[0]], idx[x])
    groups = {}
    for x in ground:
        groups.setdefault(uf.find(idx[x]), []).append(x)
    return canonical(groups.values())


def refines(a, b) -> bool:
    """True when every part of ``a`` lies inside a part of ``b``."""
    where = {x: i for i, p in enumerate(b) for x in p}
    return all(len({where[x] for x in p}) == 1 for p in a)


def all_partitions(elements):
    elements = list(elements)
    if not elements:
        yield ()
        return
    first, rest = elements[0], elements[1:]
    for sub in all_partitions(rest):
        yield canonical(((first,),) + sub)
        for i in range(len(sub)):
            yield canonical(sub[:i] + ((first,) + sub[i],) + sub[i + 1:])


def bell(k: int) -> int:
    row = [1]
    for _ in range(k):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def component_partition(vertices, edges) -> tuple:
    idx = {x: i for i, x in enumerate(vertices)}
    uf = UnionFind(len(vertices))
    for a, b in edges:
        uf.union(idx[a], idx[b])
    groups = {}
    for x in vertices:
        groups.setdefault(uf.find(idx[x]), []).append(x)
    return canonical(groups.values())


def _drop(alpha, v) -> tuple:
    return canonical(tuple(x for x in p if x != v) for p in alpha)


def _merge_with(alpha, v, S) -> tuple:
    S = set(S)
    merged = [v]
    rest = []
    for p in alpha:
        if S.intersection(p):
            merged.extend(p)
        else:
            rest.append(p)
    return canonical(rest + [merged])


# ------------------------------------------------------------ problem data


class _Problem:
    """Simple-graph view with integer-scaled lengths and penalties."""

    def __init__(self, inst: PcInstance):
        if inst.mode != "tree":
            raise ValidationError("the tree-decomposition DP needs a rooted instance")
        g = inst.graph
        best = {}
        for e, (u, v, w) in enumerate(g.edges):
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in best or w < g.edges[best[key]][2]:
                best[key] = e
        self.inst = inst
        self.rep = best
        self.simple = WeightedGraph(g.n, [(a, b, g.edges[e][2]) for (a, b), e in sorted(best.items())])
        vals = [g.edges[e][2] for e in best.values()] + list(inst.vertex_penalties)
        den = 1
        for x in vals:
            den = den * x.denominator // math.gcd(den, x.denominator)
        self.den = den
        self.length = {k: int(g.edges[e][2] * den) for k, e in best.items()}
        self.penalty = [int(p * den) for p in inst.vertex_penalties]
        self.penalty[inst.root] = 0
        top = g.m
        self.bit = {k: 1 << (top - 1 - e) for k, e in best.items()}
        self.nbr = [dict() for _ in range(g.n)]
        for (a, b) in best:
            self.nbr[a][b] = (a, b)
            self.nbr[b][a] = (a, b)

    def frac(self, x: int) -> Fraction:
        return Fraction(x, self.den)

    def h_length(self, he) -> int:
        return sum(self.length[k] for k in he)

    def bag_penalty(self, bag, hv) -> int:
        hv = set(hv)
        return sum(self.penalty[x] for x in bag if x not in hv)


def _put(table, key, cost, rank, back):
    old = table.get(key)
    if old is None or cost < old[0] or (cost == old[0] and rank > old[1]):
        table[key] = (cost, rank, back)


# ------------------------------------------------------------ push tables


def _leaf_table():
    return {((), (), ()): (0, 0, None)}


def _introduce_table(P: _Problem, child, v):
    out = {}
    pen = P.penalty[v]
    for key, (c, rank, _) in child.items():
        hv, he, alpha = key
        _put(out, key, c + pen, rank, ("skip", key))
        nb = P.nbr[v]
        groups = [[u for u in part if u in nb] for part in alpha]
        options = [[None] + g for g in groups if g]
        hv2 = tuple(sorted(hv + (v,)))
        for choice in itertools.product(*options):
            S = [u for u in choice if u is not None]
            new = tuple(nb[u] for u in S)
            he2 = tuple(sorted(he + new))
            cost = c + sum(P.length[k] for k in new)
            r2 = rank
            for k in new:
                r2 |= P.bit[k]
            _put(out, (hv2, he2, _merge_with(alpha, v, S)), cost, r2, ("add", key, new))
    return out


def _forget_table(child, v):
    out = {}
    for key, (c, rank, _) in child.items():
        hv, he, alpha = key
        if v not in hv:
            _put(out, key, c, rank, ("keep", key))
            continue
        part = next(p for p in alpha if v in p)
        if len(part) == 1:
            continue
        hv2 = tuple(x for x in hv if x != v)
        he2 = tuple(k for k in he if v not in k)
        _put(out, (hv2, he2, _drop(alpha, v)), c, rank, ("forget", key))
    return out


def _join_table(P: _Problem, bag, left, right):
    out = {}
    by_h = {}
    for key, val in right.items():
        by_h.setdefault(key[:2], []).append((key, val))
    cache = {}
    for k1, (c1, r1, _) in left.items():
        h = k1[:2]
        if h not in by_h:
            continue
        if h not in cache:
            hv, he = h
            cache[h] = (len(component_partition(hv, he)), P.h_length(he) + P.bag_penalty(bag, hv))
        ncomp, shared = cache[h]
        a1 = k1[2]
        for k2, (c2, r2, _) in by_h[h]:
            a2 = k2[2]
            j = join_partitions(a1, a2)
            if len(j) != len(a1) + len(a2) - ncomp:
                continue  # would close a cycle
            _put(out, (h[0], h[1], j), c1 + c2 - shared, r1 | r2, ("join", k1, k2))
    return out


@dataclass
class DpStats:
    nodes: int
    width: int
    entries: int
    max_entries: int
    envelope: int

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class DpResult:
    solution: SolutionForest
    cost: Fraction
    tree: tuple
    stats: DpStats
    tables: list
    decomposition: NiceTreeDecomposition

    def dump(self, node: int, problem_den: int = 1) -> list:
        return [(key, Fraction(c, problem_den)) for key, (c, _, _) in sorted(self.tables[node].items())]


def build_tables(P: _Problem, ntd: NiceTreeDecomposition) -> list:
    tables = [None] * len(ntd.nodes)
    for i in ntd.postorder():
        node = ntd.nodes[i]
        if node.kind == "leaf":
            if node.bag:
                raise ValidationError("leaf bags must be empty")
            tables[i] = _leaf_table()
        elif node.kind == "introduce":
            tables[i] = _introduce_table(P, tables[node.children[0]], node.vertex)
        elif node.kind == "forget":
            tables[i] = _forget_table(tables[node.children[0]], node.vertex)
        else:
            tables[i] = _join_table(P, node.bag, tables[node.children[0]], tables[node.children[1]])
    return tables


def _reconstruct(ntd, tables, key):
    edges = []
    stack = [(ntd.root, key)]
    while stack:
        i, k = stack.pop()
        node = ntd.nodes[i]
        back = tables[i][k][2]
        if back is None:
            continue
        tag = back[0]
        if tag == "join":
            stack.append((node.children[0], back[1]))
            stack.append((node.children[1], back[2]))
        else:
            if tag == "add":
                edges.extend(back[2])
            stack.append((node.children[0], back[1]))
    return edges


def solve_pcst(inst: PcInstance, ntd: NiceTreeDecomposition | None = None, max_entries: int | None = None,
               max_width: int | None = None) -> DpResult:
    """Optimal tree containing the root; returns cost, tree edges (original ids) and table stats."""
    P = _Problem(inst)
    r = inst.root
    if ntd is None:
        ntd = make_nice(heuristic_decomposition(P.simple), r)
    rep = verify_nice(P.simple, ntd)
    if not rep.ok:
        raise ValidationError("invalid nice decomposition: " + "; ".join(rep.violations[:3]))
    if r not in ntd.nodes[ntd.root].bag:
        raise ValidationError(f"root vertex {r} is not in the root bag")
    if max_width is not None and ntd.width > max_width:
        raise ValidationError(f"decomposition width {ntd.width} exceeds the budget {max_width} "
                              f"({P.simple.n} vertices, {P.simple.m} edges)")
    if max_entries is not None:
        k = ntd.width + 1
        estimate = len(ntd.nodes) * bell(k) * 2 ** (k + k * (k - 1) // 2)
        if estimate > max_entries:
            raise ValidationError(f"table envelope {estimate} exceeds the budget {max_entries} (width {ntd.width})")
    tables = build_tables(P, ntd)
    root_table = tables[ntd.root]
    best = None
    for key, (c, rank, _) in root_table.items():
        hv, he, alpha = key
        if r in hv and len(alpha) == 1:
            if best is None or c < best[1] or (c == best[1] and rank > best[2]):
                best = (key, c, rank)
    simple_edges = _reconstruct(ntd, tables, best[0])
    tree = tuple(sorted({P.rep[k] for k in simple_edges}))
    sol = evaluate(inst, tree)
    cost = P.frac(best[1])
    rank = sum(P.bit[k] for k in set(simple_edges))
    if rank != best[2]:
        raise AssertionError("reconstructed edge set disagrees with the table")
    if sol.cost != cost:
        raise AssertionError(f"reconstructed tree costs {sol.cost}, table says {cost}")
    k = ntd.width + 1
    sizes = [len(t) for t in tables]
    stats = DpStats(
        nodes=len(ntd.nodes),
        width=ntd.width,
        entries=sum(sizes),
        max_entries=max(sizes),
        envelope=len(ntd.nodes) * bell(k) * 2 ** (k + k * (k - 1) // 2),
    )
    return DpResult(sol, cost, tree, stats, tables, ntd)


# ------------------------------------------------------------ pull-style recurrences


def _bag_subgraphs(P: _Problem, bag):
    bag = sorted(bag)
    for r in range(len(bag) + 1):
        for hv in itertools.combinations(bag, r):
            inner = [P.nbr[a][b] for a, b in itertools.combinations(hv, 2) if b in P.nbr[a]]
            for mask in range(1 << len(inner)):
                yield hv, tuple(sorted(inner[i] for i in range(len(inner)) if mask >> i & 1))


def _cost(table, key):
    val = table.get(key)
    return None if val is None else val[0]


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def solve_leaf(P: _Problem, bag, H, alpha):
    hv, he = H
    if alpha != component_partition(hv, he):
        return None
    return P.h_length(he) + P.bag_penalty(bag, hv)


def solve_join(P: _Problem, bag, H, alpha, t1, t2, literal=False):
    hv, he = H
    best = None
    ncomp = len(component_partition(hv, he))
    parts1 = [k[2] for k in t1 if k[:2] == H]
    parts2 = [k[2] for k in t2 if k[:2] == H]
    for a1 in parts1:
        for a2 in parts2:
            if join_partitions(a1, a2) != alpha:
                continue
            if not literal and len(alpha) != len(a1) + len(a2) - ncomp:
                continue
            val = t1[(hv, he, a1)][0] + t2[(hv, he, a2)][0] - P.h_length(he)
            if not literal:
                val -= P.bag_penalty(bag, hv)
            best = _min(best, val)
    return best


def solve_forget(P: _Problem, v, H, alpha, tj, literal=False):
    hv, he = H
    best = _cost(tj, (hv, he, alpha))
    if literal:
        cand = [u for u in hv if u in P.nbr[v]]
        for r in range(len(cand) + 1):
            for S in itertools.combinations(cand, r):
                where = [next(i for i, p in enumerate(alpha) if u in p) for u in S]
                if len(set(where)) != len(where):
                    continue
                hv2 = tuple(sorted(hv + (v,)))
                he2 = tuple(sorted(he + tuple(P.nbr[v][u] for u in S)))
                best = _min(best, _cost(tj, (hv2, he2, _merge_with(alpha, v, S))))
        return best
    for (hv2, he2, a2), (c, _, _) in tj.items():
        if v not in hv2:
            continue
        if tuple(x for x in hv2 if x != v) != hv or tuple(k for k in he2 if v not in k) != he:
            continue
        part = next(p for p in a2 if v in p)
        if len(part) == 1 or _drop(a2, v) != alpha:
            continue
        best = _min(best, c)
    return best


def solve_introduce(P: _Problem, v, H, alpha, tj):
    hv, he = H
    if v not in hv:
        c = _cost(tj, (hv, he, alpha))
        return None if c is None else c + P.penalty[v]
    S = [k[0] if k[1] == v else k[1] for k in he if v in k]
    hv2 = tuple(x for x in hv if x != v)
    he2 = tuple(k for k in he if v not in k)
    add = sum(P.length[k] for k in he if v in k)
    best = None
    for (a, b, a1), (c, _, _) in tj.items():
        if (a, b) != (hv2, he2):
            continue
        where = [next(i for i, p in enumerate(a1) if u in p) for u in S]
        if len(set(where)) != len(where):
            continue
        if _merge_with(a1, v, S) != alpha:
            continue
        best = _min(best, c + add)
    return best


def pull_tables(inst: PcInstance, ntd: NiceTreeDecomposition, literal: bool = False) -> list:
    """Every entry of every table, from the recurrences (small widths only)."""
    P = _Problem(inst)
    tables = [None] * len(ntd.nodes)
    for i in ntd.postorder():
        node = ntd.nodes[i]
        out = {}
        for H in _bag_subgraphs(P, node.bag):
            for alpha in all_partitions(H[0]):
                if not refines(component_partition(*H), alpha):
                    continue
                if node.kind == "leaf":
                    c = solve_leaf(P, node.bag, H, alpha)
                elif node.kind == "introduce":
                    c = solve_introduce(P, node.vertex, H, alpha, tables[node.children[0]])
                elif node.kind == "forget":
                    c = solve_forget(P, node.vertex, H, alpha, tables[node.children[0]], literal)
                else:
                    c = solve_join(P, node.bag, H, alpha, tables[node.children[0]], tables[node.children[1]], literal)
                if c is not None:
                    out[(H[0], H[1], alpha)] = (c, 0, None)
        tables[i] = out
    return tables


def root_value(inst: PcInstance, ntd: NiceTreeDecomposition, tables) -> Fraction | None:
    P = _Problem(inst)
    best = None
    for (hv, he, alpha), (c, _, _) in tables[ntd.root].items():
        if inst.root in hv and len(alpha) == 1:
            best = _min(best, c)
    return None if best is None else P.frac(best)


def problem_for(inst: PcInstance) -> _Problem:
    return _Problem(inst)
