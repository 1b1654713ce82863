"""Prize-collecting clustering around the trees of a scaled primal-dual forest.

Each tree of the forest is contracted to a supervertex whose potential is
the tree's length divided by epsilon.  Moats then grow with one potential
per component (no pairs), edges that end up hanging off inactive moats are
pruned, and the surviving trees split the instance into independent parts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import UnionFind, ValidationError, WeightedGraph, is_forest
from .instance import PcInstance
from .primal_dual import DualAssignment, MoatEngine

ZERO = Fraction(0)


@dataclass(frozen=True)
class ContractedGraph:
    graph: WeightedGraph
    phi: tuple
    vertex_map: tuple
    members: tuple
    edge_origin: tuple
    tree_edges: tuple
    epsilon: Fraction
    source: WeightedGraph = field(default=None, compare=False, repr=False)

    def supervertices(self) -> list:
        return [v for v in range(self.graph.n) if self.tree_edges[v]]


def contract_forest(g: WeightedGraph, F, epsilon) -> ContractedGraph:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError(f"epsilon must be positive, got {eps}")
    F = sorted(set(F))
    if not is_forest(g, F):
        raise ValidationError("the forest to contract contains a cycle")
    uf = UnionFind(g.n)
    for e in F:
        uf.union(g.edges[e][0], g.edges[e][1])
    reps = sorted({uf.find(v) for v in range(g.n)})
    qid = {r: i for i, r in enumerate(reps)}
    vmap = tuple(qid[uf.find(v)] for v in range(g.n))
    members = [[] for _ in reps]
    for v in range(g.n):
        members[vmap[v]].append(v)
    trees = [[] for _ in reps]
    for e in F:
        trees[vmap[g.edges[e][0]]].append(e)
    best = {}
    in_forest = set(F)
    for e, (u, v, w) in enumerate(g.edges):
        a, b = vmap[u], vmap[v]
        if a == b or e in in_forest:
            continue
        key = (min(a, b), max(a, b))
        if key not in best or w < g.edges[best[key]][2]:
            best[key] = e
    qedges, origin = [], []
    for (a, b), e in sorted(best.items()):
        qedges.append((a, b, g.edges[e][2]))
        origin.append(e)
    phi = tuple(g.total_length(t) / eps for t in trees)
    return ContractedGraph(
        graph=WeightedGraph(len(reps), qedges),
        phi=phi,
        vertex_map=vmap,
        members=tuple(tuple(m) for m in members),
        edge_origin=tuple(origin),
        tree_edges=tuple(tuple(t) for t in trees),
        epsilon=eps,
        source=g,
    )


@dataclass
class ClusterRun:
    contracted: ContractedGraph
    tight: tuple
    components: list
    dual: DualAssignment
    events: list
    pruned: tuple = field(default=())

    def pruned_in_g(self) -> tuple:
        return expand_forest(self.contracted, self.pruned)

    def as_dict(self) -> dict:
        cg = self.contracted
        trees = tree_groups(cg, self.pruned)
        return {
            "epsilon": str(cg.epsilon),
            "tight": list(self.tight),
            "pruned": list(self.pruned),
            "pruned_in_g": list(self.pruned_in_g()),
            "trees": [{"vertices": list(vs), "edges": list(es)} for vs, es in trees],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=1)


def run_clustering(cg: ContractedGraph, audit: bool = False) -> ClusterRun:
    eng = MoatEngine(cg.graph, cg.phi, audit=audit).run()
    run = ClusterRun(cg, tuple(eng.grown), eng.records(), eng.dual(), eng.events)
    run.pruned = prune(run)
    return run


def prune(run: ClusterRun) -> tuple:
    """Drop edges that are the only tight edge leaving some inactive moat, to a fixpoint.

    Inactive moats are those that ran out of potential plus the singletons
    that never grew (zero potential).
    """
    g = run.contracted.graph
    current = set(run.tight)
    inactive = [set(r.vertices) for r in run.components if r.deactivated_at is not None or not r.grew]
    changed = True
    while changed:
        changed = False
        for S in inactive:
            crossing = [e for e in current if (g.edges[e][0] in S) != (g.edges[e][1] in S)]
            if len(crossing) == 1:
                current.discard(crossing[0])
                changed = True
    return tuple(sorted(current))


def expand_forest(cg: ContractedGraph, qedges) -> tuple:
    """G-edges of quotient edges plus every contracted tree."""
    out = {cg.edge_origin[e] for e in qedges}
    for t in cg.tree_edges:
        out.update(t)
    return tuple(sorted(out))


def tree_groups(cg: ContractedGraph, qedges) -> list:
    """(G-vertices, G-edges) per tree of the uncontracted pruned forest that has an edge."""
    g = cg.source
    edges = expand_forest(cg, qedges)
    uf = UnionFind(g.n)
    for e in edges:
        uf.union(g.edges[e][0], g.edges[e][1])
    groups = {}
    for e in edges:
        groups.setdefault(uf.find(g.edges[e][0]), []).append(e)
    out = []
    for root in sorted(groups):
        verts = tuple(v for v in range(g.n) if uf.find(v) == root)
        out.append((verts, tuple(sorted(groups[root]))))
    return out


def exhausted_vertices(H, run: ClusterRun) -> list:
    """Quotient vertices whose every positive-dual moat is crossed by the edge set ``H``."""
    g = run.contracted.graph
    H = list(H)
    moats = {}
    for (v, s), y in run.dual.y.items():
        if y > 0:
            moats.setdefault(v, []).append(s)
    out = []
    for v in range(g.n):
        ok = True
        for s in moats.get(v, ()):
            S = run.dual.components[s]
            if not any((g.edges[e][0] in S) != (g.edges[e][1] in S) for e in H):
                ok = False
                break
        if ok:
            out.append(v)
    return out


def verify_cluster_dual(run: ClusterRun) -> list:
    """Capacity per quotient edge, budget per supervertex, and containment."""
    cg = run.contracted
    g = cg.graph
    out = []
    per_set, per_v = {}, {}
    for (v, s), y in run.dual.y.items():
        if y < 0:
            out.append(f"y[{v},{s}] negative")
        if v not in run.dual.components[s]:
            out.append(f"moat {s} does not contain vertex {v}")
        per_set[s] = per_set.get(s, ZERO) + y
        per_v[v] = per_v.get(v, ZERO) + y
    for v, tot in per_v.items():
        if tot > cg.phi[v]:
            out.append(f"vertex {v}: dual {tot} exceeds potential {cg.phi[v]}")
    for e, (a, b, w) in enumerate(g.edges):
        load = sum((y for s, y in per_set.items() if (a in run.dual.components[s]) != (b in run.dual.components[s])), ZERO)
        if load > w:
            out.append(f"quotient edge {e}: load {load} exceeds length {w}")
    return out


@dataclass(frozen=True)
class SplitInstance:
    instance: PcInstance
    tree_edges: tuple
    vertices: tuple
    pair_ids: tuple


def split_instances(inst: PcInstance, run: ClusterRun) -> tuple:
    """One instance per pruned tree that connects a pair, plus the penalty paid regardless.

    Returns ``(parts, unconditional)`` where ``unconditional`` lists the ids of
    pairs no single tree connects.
    """
    if inst.mode != "forest":
        raise ValidationError("split_instances works on forest instances")
    groups = tree_groups(run.contracted, run.pruned)
    parts = []
    covered = set()
    for verts, edges in groups:
        vs = set(verts)
        ids = tuple(i for i, (s, t, p) in enumerate(inst.pairs) if s in vs and t in vs)
        if not ids:
            continue
        covered.update(ids)
        pairs = tuple((s, t, p if i in ids else ZERO) for i, (s, t, p) in enumerate(inst.pairs))
        sub = PcInstance(inst.graph, pairs=pairs, rotation=inst.rotation, normalized=inst.normalized,
                         origin=inst.origin, base_edges=inst.base_edges)
        parts.append(SplitInstance(sub, edges, verts, ids))
    unconditional = tuple(i for i in range(len(inst.pairs)) if i not in covered)
    return parts, unconditional
