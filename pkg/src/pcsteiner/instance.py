"""Prize-collecting instances, solution evaluation and terminal normalization."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .graph import RotationSystem, UnionFind, ValidationError, WeightedGraph, to_rational

ZERO = Fraction(0)


@dataclass(frozen=True)
class PcInstance:
    """A forest instance (``pairs``) or a tree instance (``root`` + vertex penalties).

    ``origin`` maps each vertex to the vertex of the instance it was derived
    from, and ``base_edges`` counts the edges inherited from that instance;
    both are set by :func:`normalize_terminals`.
    """

    graph: WeightedGraph
    pairs: tuple = ()
    root: int | None = None
    vertex_penalties: tuple = ()
    rotation: RotationSystem | None = None
    normalized: bool = False
    origin: tuple | None = field(default=None, compare=False)
    base_edges: int | None = field(default=None, compare=False)

    def __post_init__(self):
        g = self.graph
        pairs = []
        for i, (s, t, pi) in enumerate(self.pairs):
            s, t, pi = int(s), int(t), to_rational(pi)
            if not (0 <= s < g.n and 0 <= t < g.n):
                raise ValidationError(f"pair {i} has an endpoint outside 0..{g.n - 1}")
            if s == t:
                raise ValidationError(f"pair {i} has identical endpoints")
            if pi < 0:
                raise ValidationError(f"pair {i} has negative penalty {pi}")
            pairs.append((s, t, pi))
        object.__setattr__(self, "pairs", tuple(pairs))
        if self.root is not None:
            if self.pairs:
                raise ValidationError("a rooted instance carries vertex penalties, not pairs")
            if not 0 <= self.root < g.n:
                raise ValidationError(f"root {self.root} outside 0..{g.n - 1}")
            pen = tuple(to_rational(p) for p in self.vertex_penalties) or (ZERO,) * g.n
            if len(pen) != g.n:
                raise ValidationError("vertex_penalties must list one value per vertex")
            for v, p in enumerate(pen):
                if p < 0:
                    raise ValidationError(f"vertex {v} has negative penalty {p}")
            object.__setattr__(self, "vertex_penalties", pen)
        elif self.vertex_penalties:
            raise ValidationError("vertex penalties need a root")

    @property
    def mode(self) -> str:
        return "tree" if self.root is not None else "forest"

    @property
    def n(self) -> int:
        return self.graph.n

    def penalty_of(self, v: int) -> Fraction:
        return self.vertex_penalties[v] if self.root is not None else ZERO

    def demands(self) -> list:
        """(s, t, penalty) triples in either mode; tree mode pairs each vertex with the root."""
        if self.root is None:
            return list(self.pairs)
        return [(v, self.root, p) for v, p in enumerate(self.vertex_penalties) if p > 0 and v != self.root]

    def total_penalty(self) -> Fraction:
        return sum((p for _, _, p in self.demands()), ZERO)

    def with_pairs(self, pairs) -> "PcInstance":
        return replace(self, pairs=tuple(pairs), normalized=False)


@dataclass(frozen=True)
class SolutionForest:
    edges: tuple
    length: Fraction
    penalty: Fraction
    separated: tuple = ()

    @property
    def cost(self) -> Fraction:
        return self.length + self.penalty

    def as_dict(self):
        return {
            "edges": list(self.edges),
            "length": str(self.length),
            "penalty": str(self.penalty),
            "cost": str(self.cost),
        }


def evaluate(inst: PcInstance, F) -> SolutionForest:
    """Length, penalty and cost of edge set ``F``; connectivity by union-find."""
    g = inst.graph
    ids = sorted(set(int(e) for e in F))
    for e in ids:
        if not 0 <= e < g.m:
            raise ValidationError(f"edge id {e} out of range 0..{g.m - 1}")
    uf = UnionFind(g.n)
    for e in ids:
        uf.union(g.edges[e][0], g.edges[e][1])
    length = g.total_length(ids)
    penalty = ZERO
    separated = []
    for i, (s, t, p) in enumerate(inst.demands()):
        if uf.find(s) != uf.find(t):
            penalty += p
            separated.append(i)
    return SolutionForest(tuple(ids), length, penalty, tuple(separated))


def terminal_vertices(inst: PcInstance) -> list:
    out = []
    for s, t, _ in inst.pairs:
        out.extend((s, t))
    return out


def is_normalized(inst: PcInstance) -> bool:
    if inst.mode != "forest":
        return False
    occ = terminal_vertices(inst)
    if len(set(occ)) != len(occ):
        return False
    return all(inst.graph.degree(v) == 1 for v in occ)


def _attach_pendants(graph, rotation, hosts):
    """Add one zero-length pendant per host; returns (graph, rotation, new ids)."""
    n, m = graph.n, graph.m
    edges = list(graph.edges)
    order = [list(r) for r in rotation.order] if rotation is not None else None
    new = []
    for k, v in enumerate(hosts):
        p = n + k
        e = m + k
        edges.append((v, p, ZERO))
        new.append(p)
        if order is not None:
            order[v].append(2 * e)
            order.append([2 * e + 1])
    g = WeightedGraph(n + len(hosts), edges)
    rot = RotationSystem(tuple(tuple(r) for r in order), rotation.outer) if order is not None else None
    return g, rot, new


def normalize_terminals(inst: PcInstance) -> PcInstance:
    """Put every terminal occurrence on its own degree-1 vertex.

    Tree instances become forest instances: each vertex ``v`` with positive
    penalty yields a pair between a pendant of ``v`` and a fresh pendant of
    the root.  Already-normalized instances are returned unchanged.
    """
    if is_normalized(inst):
        return inst
    g = inst.graph
    origin = inst.origin or tuple(range(g.n))
    base = inst.base_edges if inst.base_edges is not None else g.m
    if inst.mode == "tree":
        hosts, penalties = [], []
        for v, p in enumerate(inst.vertex_penalties):
            if v != inst.root and p > 0:
                hosts.extend((v, inst.root))
                penalties.append(p)
        g2, rot2, new = _attach_pendants(g, inst.rotation, hosts)
        pairs = [(new[2 * i], new[2 * i + 1], p) for i, p in enumerate(penalties)]
    else:
        count = {}
        for v in terminal_vertices(inst):
            count[v] = count.get(v, 0) + 1
        hosts, slots = [], []
        for s, t, _ in inst.pairs:
            for v in (s, t):
                if count[v] == 1 and g.degree(v) == 1:
                    slots.append(v)
                else:
                    slots.append(None)
                    hosts.append(v)
        g2, rot2, new = _attach_pendants(g, inst.rotation, hosts)
        it = iter(new)
        ends = [v if v is not None else next(it) for v in slots]
        pairs = [(ends[2 * i], ends[2 * i + 1], p) for i, (_, _, p) in enumerate(inst.pairs)]
    origin2 = origin + tuple(origin[h] for h in hosts)
    return PcInstance(
        graph=g2,
        pairs=tuple(pairs),
        rotation=rot2,
        normalized=True,
        origin=origin2,
        base_edges=base,
    )


def restrict_to_base(inst: PcInstance, F) -> tuple:
    """Drop pendant edges added by normalization."""
    limit = inst.base_edges if inst.base_edges is not None else inst.graph.m
    return tuple(sorted(e for e in F if e < limit))
