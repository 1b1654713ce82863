"""Weighted multigraphs, rotation systems and face walks.

Edge ``e = (u, v, length)`` owns two darts: ``2e`` runs u->v and ``2e + 1``
runs v->u.  A rotation system lists, for every vertex, the darts leaving it
in cyclic order; faces are traced with ``next(d) = succ(rev(d))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class ValidationError(ValueError):
    pass


def to_rational(x) -> Fraction:
    """Exact rational from an int, Fraction or decimal/fraction string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValidationError(f"not a number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"not an exact rational: {x!r}") from None
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise ValidationError(f"refusing inexact value {x!r}; pass a string or Fraction")


def rev(d: int) -> int:
    return d ^ 1


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        return True


class WeightedGraph:
    """Undirected multigraph with nonnegative rational edge lengths."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        self.n = int(n)
        out = []
        for k, (u, v, w) in enumerate(edges):
            u, v, w = int(u), int(v), to_rational(w)
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge {k} has an endpoint outside 0..{n - 1}")
            if w < 0:
                raise ValidationError(f"edge {k} has negative length {w}")
            out.append((u, v, w))
        self.edges = tuple(out)
        adj = [[] for _ in range(n)]
        for e, (u, v, _) in enumerate(self.edges):
            adj[u].append(e)
            if v != u:
                adj[v].append(e)
        self._adj = tuple(tuple(a) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adj(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return sum(2 if self.edges[e][0] == self.edges[e][1] else 1 for e in self._adj[v])

    def other(self, e: int, v: int) -> int:
        u, w, _ = self.edges[e]
        return w if u == v else u

    def length(self, e: int) -> Fraction:
        return self.edges[e][2]

    def total_length(self, ids) -> Fraction:
        return sum((self.edges[e][2] for e in ids), Fraction(0))

    def tail(self, d: int) -> int:
        u, v, _ = self.edges[d >> 1]
        return v if d & 1 else u

    def head(self, d: int) -> int:
        u, v, _ = self.edges[d >> 1]
        return u if d & 1 else v

    def darts_at(self, v: int) -> list:
        out = []
        for e in self._adj[v]:
            u, w, _ = self.edges[e]
            if u == v:
                out.append(2 * e)
            if w == v:
                out.append(2 * e + 1)
        return out

    def components(self, ids=None) -> list:
        """Component label per vertex, using all edges or only ``ids``."""
        uf = UnionFind(self.n)
        for e in range(self.m) if ids is None else ids:
            u, v, _ = self.edges[e]
            uf.union(u, v)
        return [uf.find(v) for v in range(self.n)]

    def __eq__(self, other):
        return isinstance(other, WeightedGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def is_forest(g: WeightedGraph, ids) -> bool:
    uf = UnionFind(g.n)
    return all(uf.union(g.edges[e][0], g.edges[e][1]) for e in ids)


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic dart order per vertex; ``outer`` is a dart on the outer face."""

    order: tuple
    outer: int | None = None
    _succ: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        order = tuple(tuple(int(d) for d in r) for r in self.order)
        object.__setattr__(self, "order", order)
        succ = {}
        for r in order:
            for i, d in enumerate(r):
                if d in succ:
                    raise ValidationError(f"dart {d} appears twice in the rotation")
                succ[d] = r[(i + 1) % len(r)]
        object.__setattr__(self, "_succ", succ)

    def succ(self, d: int) -> int:
        return self._succ[d]

    def next_in_face(self, d: int) -> int:
        return self._succ[d ^ 1]

    def faces(self) -> list:
        """Face walks as dart lists, in order of their smallest dart."""
        seen = set()
        out = []
        for start in sorted(self._succ):
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self._succ[d ^ 1]
            out.append(walk)
        return out

    def face_index(self) -> dict:
        index = {}
        for f, walk in enumerate(self.faces()):
            for d in walk:
                index[d] = f
        return index

    def restrict(self, keep_edges) -> "RotationSystem":
        keep = set(keep_edges)
        order = tuple(tuple(d for d in r if (d >> 1) in keep) for r in self.order)
        outer = self.outer if self.outer is not None and (self.outer >> 1) in keep else None
        return RotationSystem(order, outer)


def rotation_errors(g: WeightedGraph, rot: RotationSystem) -> list:
    errors = []
    if len(rot.order) != g.n:
        return [f"rotation lists {len(rot.order)} vertices, graph has {g.n}"]
    for v in range(g.n):
        want = sorted(g.darts_at(v))
        have = sorted(rot.order[v])
        if want != have:
            missing = sorted(set(want) - set(have))
            extra = sorted(set(have) - set(want))
            errors.append(f"vertex {v}: rotation mismatch (missing darts {missing}, foreign darts {extra})")
    return errors


@dataclass
class EmbeddingReport:
    ok: bool
    faces: int
    components: int
    outer_darts: int
    outer_length: Fraction
    errors: list

    def as_dict(self):
        return {
            "ok": self.ok,
            "faces": self.faces,
            "components": self.components,
            "outer_darts": self.outer_darts,
            "outer_length": str(self.outer_length),
            "errors": list(self.errors),
        }


def outer_face(g: WeightedGraph, rot: RotationSystem, faces=None) -> list:
    """Dart walk of the designated outer face (longest face if none is set)."""
    faces = rot.faces() if faces is None else faces
    if not faces:
        return []
    if rot.outer is not None:
        for walk in faces:
            if rot.outer in walk:
                return walk
    best = max(range(len(faces)), key=lambda f: (g.total_length(d >> 1 for d in faces[f]), -f))
    return faces[best]


def check_embedding(g: WeightedGraph, rot: RotationSystem) -> EmbeddingReport:
    errors = rotation_errors(g, rot)
    if errors:
        return EmbeddingReport(False, 0, 0, 0, Fraction(0), errors)
    faces = rot.faces()
    comp = g.components()
    verts, edges, nfaces = {}, {}, {}
    for v in range(g.n):
        verts[comp[v]] = verts.get(comp[v], 0) + 1
    for u, _, _ in g.edges:
        edges[comp[u]] = edges.get(comp[u], 0) + 1
    for walk in faces:
        c = comp[g.tail(walk[0])]
        nfaces[c] = nfaces.get(c, 0) + 1
    for c in sorted(verts):
        if edges.get(c, 0) == 0:
            continue
        chi = verts[c] - edges[c] + nfaces.get(c, 0)
        if chi != 2:
            errors.append(f"component of vertex {c}: Euler characteristic {chi} != 2 (not genus 0)")
    outer = outer_face(g, rot, faces)
    return EmbeddingReport(
        ok=not errors,
        faces=len(faces),
        components=len(verts),
        outer_darts=len(outer),
        outer_length=g.total_length(d >> 1 for d in outer),
        errors=errors,
    )


def rotation_from_networkx(g: WeightedGraph) -> RotationSystem:
    """Planar rotation via networkx's left-right test; parallel edges stay adjacent."""
    import networkx as nx

    simple = nx.Graph()
    simple.add_nodes_from(range(g.n))
    for u, v, _ in g.edges:
        if u != v:
            simple.add_edge(u, v)
    planar, emb = nx.check_planarity(simple)
    if not planar:
        raise ValidationError("graph is not planar")
    bundles = {}
    for e, (u, v, _) in enumerate(g.edges):
        if u != v:
            bundles.setdefault((u, v), []).append(2 * e)
            bundles.setdefault((v, u), []).append(2 * e + 1)
    order = []
    for v in range(g.n):
        darts = []
        if emb.has_node(v) and emb.degree(v):
            for w in emb.neighbors_cw_order(v):
                group = bundles[(v, w)]
                # An edge's two darts must appear in mirrored order at its ends.
                darts.extend(group if v < w else group[::-1])
        for e in g.adj(v):
            if g.edges[e][0] == g.edges[e][1]:
                darts.extend((2 * e, 2 * e + 1))
        order.append(tuple(darts))
    return RotationSystem(tuple(order))


def rotation_from_coordinates(g: WeightedGraph, coords) -> RotationSystem:
    """Counterclockwise dart order from exact integer coordinates."""

    def key(d):
        u = g.tail(d)
        v = g.head(d)
        dx = coords[v][0] - coords[u][0]
        dy = coords[v][1] - coords[u][1]
        return dx, dy

    def half(dx, dy):
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    from functools import cmp_to_key

    def cmp(a, b):
        ax, ay = key(a)
        bx, by = key(b)
        ha, hb = half(ax, ay), half(bx, by)
        if ha != hb:
            return ha - hb
        cross = ax * by - ay * bx
        if cross != 0:
            return -1 if cross > 0 else 1
        return (a > b) - (a < b)

    order = tuple(tuple(sorted(g.darts_at(v), key=cmp_to_key(cmp))) for v in range(g.n))
    return RotationSystem(order)
