"""Tree decompositions, nice form, and edge partition + contraction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import UnionFind, ValidationError, WeightedGraph
from .instance import PcInstance, SolutionForest, evaluate

ZERO = Fraction(0)


# ------------------------------------------------------------ decompositions


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(frozenset(b) for b in self.bags))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> list:
        adj = [[] for _ in self.bags]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def _simple_nx(g: WeightedGraph):
    import networkx as nx

    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from((u, v) for u, v, _ in g.edges if u != v)
    return h


def heuristic_decomposition(g: WeightedGraph) -> TreeDecomposition:
    """Min-fill elimination decomposition; min-degree when that one is narrower."""
    from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())
    h = _simple_nx(g)
    best = None
    for fn in (treewidth_min_fill_in, treewidth_min_degree):
        width, tree = fn(h)
        if best is None or width < best[0]:
            best = (width, tree)
    tree = best[1]
    nodes = sorted(tree.nodes, key=lambda b: (sorted(b), len(b)))
    index = {b: i for i, b in enumerate(nodes)}
    edges = sorted((min(index[a], index[b]), max(index[a], index[b])) for a, b in tree.edges)
    # Stitch a forest into one tree.
    uf = UnionFind(len(nodes))
    for a, b in edges:
        uf.union(a, b)
    roots = sorted({uf.find(i) for i in range(len(nodes))})
    edges += [(roots[0], r) for r in roots[1:]]
    return TreeDecomposition(tuple(nodes), tuple(edges))


@dataclass
class DecompositionReport:
    ok: bool
    width: int
    violations: list

    def as_dict(self):
        return {"ok": self.ok, "width": self.width, "violations": list(self.violations)}


def verify_decomposition(g: WeightedGraph, td: TreeDecomposition) -> DecompositionReport:
    out = []
    nb = len(td.bags)
    if nb == 0:
        return DecompositionReport(False, -1, ["decomposition has no bags"])
    uf = UnionFind(nb)
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb):
            out.append(f"tree edge ({a}, {b}) names a missing node")
        elif not uf.union(a, b):
            out.append(f"tree edge ({a}, {b}) closes a cycle")
    if len({uf.find(i) for i in range(nb)}) != 1:
        out.append("decomposition tree is disconnected")
    covered = set().union(*td.bags)
    for v in range(g.n):
        if v not in covered:
            out.append(f"vertex {v} is in no bag")
    for x in sorted(covered):
        if not 0 <= x < g.n:
            out.append(f"bag vertex {x} is not a graph vertex")
    for e, (u, v, _) in enumerate(g.edges):
        if not any(u in b and v in b for b in td.bags):
            out.append(f"edge {e} ({u}, {v}) is in no bag")
    adj = td.neighbors()
    for v in sorted(covered):
        holders = [i for i, b in enumerate(td.bags) if v in b]
        seen = {holders[0]}
        queue = deque([holders[0]])
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                if j not in seen and v in td.bags[j]:
                    seen.add(j)
                    queue.append(j)
        if len(seen) != len(holders):
            out.append(f"bags holding vertex {v} are not connected")
    return DecompositionReport(not out, td.width, out)


def exact_treewidth(g: WeightedGraph, cap: int = 10) -> int:
    """Exact treewidth by the subset elimination recurrence (small graphs only)."""
    n = g.n
    if n > cap:
        raise ValueError(f"exact treewidth is capped at {cap} vertices (graph has {n})")
    if n == 0:
        return -1
    nbr = [0] * n
    for u, v, _ in g.edges:
        if u != v:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u

    def q_size(S, v):
        # Vertices outside S + v reachable from v through S.
        seen = 1 << v
        frontier = 1 << v
        reach = 0
        while frontier:
            x = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            for_y = nbr[x] & ~seen
            seen |= for_y
            reach |= for_y & ~S
            frontier |= for_y & S
        return bin(reach).count("1")

    full = (1 << n) - 1
    tw = {0: -1}
    for S in range(1, full + 1):
        best = n
        x = S
        while x:
            v = (x & -x).bit_length() - 1
            x &= x - 1
            rest = S & ~(1 << v)
            best = min(best, max(tw[rest], q_size(rest, v)))
        tw[S] = best
    return tw[full]


# ------------------------------------------------------------ nice form


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple
    vertex: int | None = None


@dataclass(frozen=True)
class NiceTreeDecomposition:
    nodes: tuple
    root: int

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1

    def as_td(self) -> TreeDecomposition:
        edges = [(i, c) for i, n in enumerate(self.nodes) for c in n.children]
        return TreeDecomposition(tuple(n.bag for n in self.nodes), tuple(edges))

    def postorder(self) -> list:
        out, stack = [], [(self.root, False)]
        while stack:
            i, done = stack.pop()
            if done:
                out.append(i)
                continue
            stack.append((i, True))
            for c in reversed(self.nodes[i].children):
                stack.append((c, False))
        return out


def make_nice(td: TreeDecomposition, root_vertex: int | None = None) -> NiceTreeDecomposition:
    """Nice decomposition of the same width with empty-bag leaves.

    The tree is rooted at the first bag holding ``root_vertex``; above it,
    forget nodes shrink the bag to ``{root_vertex}`` (or to the empty set
    when no root vertex is given).  A missing root vertex is introduced.
    """
    nodes = []

    def add(kind, bag, children, vertex=None):
        nodes.append(NiceNode(kind, frozenset(bag), tuple(children), vertex))
        return len(nodes) - 1

    def chain(top, bag, target):
        for v in sorted(bag - target):
            bag = bag - {v}
            top = add("forget", bag, (top,), v)
        for v in sorted(target - bag):
            bag = bag | {v}
            top = add("introduce", bag, (top,), v)
        return top

    adj = td.neighbors()
    start = 0
    if root_vertex is not None:
        start = next((i for i, b in enumerate(td.bags) if root_vertex in b), 0)
    parent = {start: None}
    order = [start]
    for i in order:
        for j in sorted(adj[i]):
            if j not in parent:
                parent[j] = i
                order.append(j)
    kids = {i: [] for i in order}
    for i in order[1:]:
        kids[parent[i]].append(i)
    built = {}
    for i in reversed(order):
        bag = td.bags[i]
        if not kids[i]:
            built[i] = chain(add("leaf", (), ()), frozenset(), bag)
            continue
        branches = [chain(built[c], td.bags[c], bag) for c in kids[i]]
        top = branches[0]
        for b in branches[1:]:
            top = add("join", bag, (top, b))
        built[i] = top
    top = built[start]
    bag = td.bags[start]
    target = frozenset() if root_vertex is None else frozenset({root_vertex})
    top = chain(top, bag, target)
    return NiceTreeDecomposition(tuple(nodes), top)


def verify_nice(g: WeightedGraph, ntd: NiceTreeDecomposition) -> DecompositionReport:
    rep = verify_decomposition(g, ntd.as_td())
    out = list(rep.violations)
    for i, node in enumerate(ntd.nodes):
        ch = [ntd.nodes[c] for c in node.children]
        if node.kind == "leaf":
            ok = not ch
        elif node.kind == "join":
            ok = len(ch) == 2 and ch[0].bag == node.bag and ch[1].bag == node.bag
        elif node.kind == "introduce":
            ok = len(ch) == 1 and node.vertex in node.bag and ch[0].bag == node.bag - {node.vertex} \
                and node.vertex not in ch[0].bag
        elif node.kind == "forget":
            ok = len(ch) == 1 and node.vertex not in node.bag and ch[0].bag == node.bag | {node.vertex} \
                and node.vertex in ch[0].bag
        else:
            ok = False
        if not ok:
            out.append(f"node {i} is not a valid {node.kind} node")
    return DecompositionReport(not out, rep.width, out)


# ------------------------------------------------------------ .td format


def td_to_text(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags):
        lines.append(" ".join(["b", str(i + 1)] + [str(v + 1) for v in sorted(b)]))
    for a, b in td.edges:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


def td_from_text(text: str) -> tuple:
    """Parse PACE ``.td`` text; returns ``(TreeDecomposition, n)``."""
    bags, edges, n, count = {}, [], None, None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        try:
            if tok[0] == "s":
                count, n = int(tok[2]), int(tok[4])
            elif tok[0] == "b":
                bags[int(tok[1]) - 1] = frozenset(int(x) - 1 for x in tok[2:])
            else:
                edges.append((int(tok[0]) - 1, int(tok[1]) - 1))
        except (IndexError, ValueError):
            raise ValueError(f"line {lineno}: malformed .td line {raw!r}") from None
    if count is None:
        raise ValueError("missing 's td' header")
    if sorted(bags) != list(range(count)):
        raise ValueError(f"expected bags 1..{count}")
    return TreeDecomposition(tuple(bags[i] for i in range(count)), tuple(edges)), n


# ------------------------------------------------------------ partition


@dataclass(frozen=True)
class EdgePartition:
    classes: tuple
    lengths: tuple
    selected: int
    levels: tuple

    @property
    def selected_edges(self) -> tuple:
        return self.classes[self.selected]


def bfs_levels(g: WeightedGraph, root: int | None = None) -> list:
    level = [-1] * g.n
    starts = ([root] if root is not None else []) + list(range(g.n))
    for s in starts:
        if level[s] >= 0:
            continue
        level[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for e in g.adj(x):
                y = g.other(e, x)
                if level[y] < 0:
                    level[y] = level[x] + 1
                    queue.append(y)
    return level


def partition_edges(g: WeightedGraph, k: int, root: int | None = None) -> EdgePartition:
    """k classes by BFS level (min endpoint level mod k); the lightest class is selected."""
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}")
    level = bfs_levels(g, root)
    classes = [[] for _ in range(k)]
    for e, (u, v, _) in enumerate(g.edges):
        classes[min(level[u], level[v]) % k].append(e)
    lengths = tuple(g.total_length(c) for c in classes)
    best = min(range(k), key=lambda i: (lengths[i], i))
    return EdgePartition(tuple(tuple(c) for c in classes), lengths, best, tuple(level))


# ------------------------------------------------------------ contraction


@dataclass
class Contraction:
    source: PcInstance
    contracted_edges: tuple
    instance: PcInstance
    vertex_map: tuple
    edge_map: tuple
    ledger: list = field(default_factory=list)

    def lift(self, F_hat) -> tuple:
        """Map a forest of the contracted graph back and add the contracted edges.

        Cycles closed by the contracted edges are broken by a minimum
        spanning forest, so the result is a forest of the source graph.
        """
        g = self.source.graph
        ids = {self.edge_map[e] for e in F_hat} | set(self.contracted_edges)
        uf = UnionFind(g.n)
        keep = []
        for e in sorted(ids, key=lambda e: (g.edges[e][2], e)):
            if uf.union(g.edges[e][0], g.edges[e][1]):
                keep.append(e)
        return tuple(sorted(keep))

    def contracted_length(self) -> Fraction:
        return self.source.graph.total_length(self.contracted_edges)


def contract_edges(inst: PcInstance, E) -> Contraction:
    """Quotient by the edge set ``E`` with terminals remapped to their classes.

    Self-loops vanish and parallel edges stay.  In tree mode the penalties
    of a class are summed; the root's class is connected for free, so its
    penalties are dropped and recorded in the ledger.  In forest mode a pair
    whose endpoints merge is dropped the same way.
    """
    g = inst.graph
    E = tuple(sorted(set(E)))
    uf = UnionFind(g.n)
    for e in E:
        uf.union(g.edges[e][0], g.edges[e][1])
    reps = sorted({uf.find(v) for v in range(g.n)})
    qid = {r: i for i, r in enumerate(reps)}
    vmap = tuple(qid[uf.find(v)] for v in range(g.n))
    qedges, emap = [], []
    Eset = set(E)
    for e, (u, v, w) in enumerate(g.edges):
        if e in Eset or vmap[u] == vmap[v]:
            continue
        qedges.append((vmap[u], vmap[v], w))
        emap.append(e)
    qg = WeightedGraph(len(reps), qedges)
    ledger = []
    if inst.mode == "tree":
        root = vmap[inst.root]
        pen = [ZERO] * len(reps)
        for v, p in enumerate(inst.vertex_penalties):
            if v == inst.root or p == 0:
                continue
            if vmap[v] == root:
                ledger.append((f"vertex {v} merged into the root class", p))
            else:
                pen[vmap[v]] += p
        new = PcInstance(qg, root=root, vertex_penalties=tuple(pen))
    else:
        pairs = []
        for i, (s, t, p) in enumerate(inst.pairs):
            if vmap[s] == vmap[t]:
                ledger.append((f"pair {i} merged by contraction", p))
            else:
                pairs.append((vmap[s], vmap[t], p))
        new = PcInstance(qg, pairs=tuple(pairs))
    return Contraction(inst, E, new, vmap, tuple(emap), ledger)


def check_lift(con: Contraction, F_hat) -> tuple:
    """(lifted solution, contracted solution, bound) with bound = contracted cost + Length(E)."""
    lifted = evaluate(con.source, con.lift(F_hat))
    small = evaluate(con.instance, F_hat)
    return lifted, small, small.cost + con.contracted_length()
