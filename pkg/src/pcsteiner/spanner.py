"""Planar spanner around a tree: splice, strips, mortar graph, bricks, portals.

The tree ``T`` is cut open along its Euler tour.  Every tree vertex of
degree ``d`` becomes ``d`` corner vertices, one per angular gap between
consecutive tree edges, and each tree edge becomes two copies.  The tour
is then a simple cycle ``Δ`` bounding a face of the spliced graph ``G'``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import RotationSystem, UnionFind, ValidationError, WeightedGraph, check_embedding, is_forest
from .oracles import DistanceTable, SteinerTables, scale_to_integers

ZERO = Fraction(0)


# ------------------------------------------------------------ splice


@dataclass
class OuterFaceGraph:
    graph: WeightedGraph
    rotation: RotationSystem
    delta: tuple
    vertex_map: tuple
    edge_map: tuple
    source: WeightedGraph
    tree: tuple

    @property
    def delta_length(self) -> Fraction:
        return self.graph.total_length(d >> 1 for d in self.delta)

    def delta_vertices(self) -> list:
        return [self.graph.tail(d) for d in self.delta]

    def to_source_edges(self, ids) -> set:
        return {self.edge_map[e] for e in ids}


def _tree_vertices(g, tree):
    return {x for e in tree for x in g.edges[e][:2]}


def splice_open(g: WeightedGraph, rot: RotationSystem, tree, terminals=(), root: int | None = None) -> OuterFaceGraph:
    """Split ``g`` open along ``tree`` so that the doubled tour is the outer face."""
    tree = tuple(sorted(set(tree)))
    tset = set(tree)
    if not is_forest(g, tree):
        raise ValidationError("the tree to splice contains a cycle")
    tv = _tree_vertices(g, tree)
    if tree:
        comp = g.components(tree)
        if len({comp[v] for v in tv}) != 1:
            raise ValidationError("the tree to splice is disconnected")
    elif root is not None:
        tv = {root}
    missing = sorted(set(terminals) - tv) if tree or root is not None else []
    if missing:
        raise ValidationError(f"terminals {missing} are not on the tree")
    if not tree:
        return OuterFaceGraph(g, rot, (), tuple(range(g.n)), tuple(range(g.m)), g, ())

    corner_of = {}      # original dart -> corner id (non-tree darts and tree darts' own corner)
    corner_at = {}      # (v, tree dart) -> corner id
    vmap = []
    tree_darts = {}
    for v in range(g.n):
        order = rot.order[v]
        td = [d for d in order if (d >> 1) in tset]
        tree_darts[v] = td
        if not td:
            c = len(vmap)
            vmap.append(v)
            for d in order:
                corner_of[d] = c
            continue
        for t in td:
            corner_at[(v, t)] = len(vmap)
            vmap.append(v)
        start = order.index(td[0])
        cur = None
        for k in range(len(order)):
            d = order[(start + k) % len(order)]
            if (d >> 1) in tset:
                cur = corner_at[(v, d)]
            else:
                corner_of[d] = cur

    def sigma(v, t):
        td = tree_darts[v]
        return td[(td.index(t) + 1) % len(td)]

    def sigma_inv(v, t):
        td = tree_darts[v]
        return td[td.index(t) - 1]

    edges, emap, copy = [], [], {}
    for e, (u, v, w) in enumerate(g.edges):
        if e in tset:
            for x in (2 * e, 2 * e + 1):
                a, b = g.tail(x), g.head(x)
                copy[x] = len(edges)
                edges.append((corner_at[(a, sigma_inv(a, x))], corner_at[(b, x ^ 1)], w))
                emap.append(e)
        else:
            copy[2 * e] = len(edges)
            edges.append((corner_of[2 * e], corner_of[2 * e + 1], w))
            emap.append(e)
    order = [[] for _ in vmap]
    for v in range(g.n):
        td = tree_darts[v]
        if not td:
            c = corner_of[rot.order[v][0]] if rot.order[v] else None
            if c is not None:
                order[c] = [2 * copy[d & ~1] + (d & 1) for d in rot.order[v]]
            continue
        seq = rot.order[v]
        for t in td:
            c = corner_at[(v, t)]
            inner = []
            i = seq.index(t)
            while True:
                i = (i + 1) % len(seq)
                d = seq[i]
                if (d >> 1) in tset:
                    break
                inner.append(2 * copy[d & ~1] + (d & 1))
            order[c] = [2 * copy[t ^ 1] + 1] + inner + [2 * copy[sigma(v, t)]]
    gp = WeightedGraph(len(vmap), edges)
    r = root if root is not None and root in tv else min(tv)
    x0 = tree_darts[r][0]
    tour, x = [], x0
    while True:
        tour.append(2 * copy[x])
        x = sigma(g.head(x), x ^ 1)
        if x == x0:
            break
    rotp = RotationSystem(tuple(tuple(o) for o in order), outer=tour[0] ^ 1)
    ofg = OuterFaceGraph(gp, rotp, tuple(tour), tuple(vmap), tuple(emap), g, tree)
    return ofg


def check_outer_face(ofg: OuterFaceGraph) -> list:
    """Structural checks of a spliced graph; returns violation messages."""
    out = []
    gp = ofg.graph
    rep = check_embedding(gp, ofg.rotation)
    if not rep.ok:
        out.extend(rep.errors)
    if not ofg.tree:
        return out
    if ofg.delta_length != 2 * ofg.source.total_length(ofg.tree):
        out.append("outer face length differs from twice the tree length")
    face = next((f for f in ofg.rotation.faces() if ofg.delta[0] ^ 1 in f), [])
    if sorted(face) != sorted(d ^ 1 for d in ofg.delta):
        out.append("the doubled tour is not a face of the spliced graph")
    vs = ofg.delta_vertices()
    if len(set(vs)) != len(vs):
        out.append("the doubled tour revisits a corner")
    if sorted(ofg.vertex_map[v] for v in set(vs)) != sorted(
            x for x in _tree_vertices(ofg.source, ofg.tree) for _ in range(_tdeg(ofg.source, ofg.tree, x))):
        out.append("corner copies do not match tree degrees")
    return out


def _tdeg(g, tree, v):
    return sum((g.edges[e][0] == v) + (g.edges[e][1] == v) for e in tree)


# ------------------------------------------------------------ short paths


def _path_vertices(g, darts, start=None):
    if not darts:
        return [start]
    return [g.tail(darts[0])] + [g.head(d) for d in darts]


def is_eps_short(g: WeightedGraph, darts, epsilon, dt: DistanceTable | None = None, start: int | None = None) -> bool:
    """Every pair on the path is within (1+ε) of its distance in ``g``."""
    eps = Fraction(epsilon)
    if not darts:
        return True
    dt = dt or DistanceTable(g)
    vs = _path_vertices(g, darts, start)
    pre = [ZERO]
    for d in darts:
        pre.append(pre[-1] + g.length(d >> 1))
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if pre[j] - pre[i] > (1 + eps) * dt.d(vs[i], vs[j]):
                return False
    return True


# ------------------------------------------------------------ strips


@dataclass
class Strip:
    x: int
    y: int
    south: tuple
    north: tuple
    faces: frozenset
    edges: tuple
    column_tops: tuple = ()
    columns: tuple = ()
    column_lengths: tuple = ()
    k: int = 1
    selected_class: int = 0
    supercolumns: tuple = ()

    def south_length(self, g) -> Fraction:
        return g.total_length(d >> 1 for d in self.south)

    def north_length(self, g) -> Fraction:
        return g.total_length(d >> 1 for d in self.north)

    def boundary_edges(self) -> set:
        return {d >> 1 for d in self.south} | {d >> 1 for d in self.north}

    def supercolumn_length(self) -> Fraction:
        return sum((self.column_lengths[j] for j in range(len(self.columns)) if j % self.k == self.selected_class), ZERO)


def supercolumn_k(epsilon) -> int:
    eps = Fraction(epsilon)
    return math.ceil((1 / eps**2) * (1 / eps + 1))


def _darts_along(g, start, edge_path):
    out, cur = [], start
    for e in edge_path:
        u, v, _ = g.edges[e]
        if u == cur:
            out.append(2 * e)
            cur = v
        else:
            out.append(2 * e + 1)
            cur = u
    return out


def _minimal_violation(g, walk, eps, dt):
    """Smallest span, then leftmost start, of a walk segment that is not ε-short."""
    L = len(walk)
    if L < 2:
        return None
    lengths = [g.edges[d >> 1][2] for d in walk]
    ints, den = scale_to_integers(lengths + [Fraction(1)])
    ints = [int(x) for x in ints[:-1]]
    verts = [g.tail(d) for d in walk]
    a, b = (1 + eps).numerator, (1 + eps).denominator
    dden = dt.den
    dist = dt.dist
    for span in range(1, L):
        for i in range(L):
            j = (i + span) % L
            arc = 0
            for t in range(span):
                arc += ints[(i + t) % L]
            x, y = verts[i], verts[j]
            dxy = int(dist[x, y])
            if arc * b * dden > a * dxy * den:
                return i, span
    return None


def decompose_strips(ofg: OuterFaceGraph, epsilon, max_strips: int | None = None) -> tuple:
    """Greedy strip decomposition; returns (strips, final walk)."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError("epsilon must be positive")
    gp, rot = ofg.graph, ofg.rotation
    if not ofg.delta:
        return [], ()
    faces = rot.faces()
    face_of = {}
    for f, w in enumerate(faces):
        for d in w:
            face_of[d] = f
    outer = face_of[ofg.delta[0] ^ 1]
    region = set(range(len(faces))) - {outer}
    walk = list(ofg.delta)
    strips = []
    cap = max_strips if max_strips is not None else 4 * gp.m + 8
    k = supercolumn_k(eps)
    while True:
        wedges = {d >> 1 for d in walk}
        interior = [e for e in range(gp.m)
                    if face_of[2 * e] in region and face_of[2 * e + 1] in region and e not in wedges]
        if not interior:
            break
        redges = wedges | {e for e in range(gp.m) if face_of[2 * e] in region or face_of[2 * e + 1] in region}
        dt = DistanceTable(gp, redges)
        found = _minimal_violation(gp, walk, eps, dt)
        if found is None:
            break
        if len(strips) >= cap:
            raise RuntimeError("strip decomposition did not terminate")
        i, span = found
        walk = walk[i:] + walk[:i]
        seg, rest = walk[:span], walk[span:]
        x, y = gp.tail(seg[0]), gp.head(seg[-1])
        north = _darts_along(gp, x, dt.path(x, y))
        blocked = wedges | {d >> 1 for d in north}
        seeds = {face_of[d] for d in seg} | {face_of[d ^ 1] for d in seg}
        seen = set(f for f in seeds if f in region)
        queue = deque(sorted(seen))
        while queue:
            f = queue.popleft()
            for d in faces[f]:
                if (d >> 1) in blocked:
                    continue
                h = face_of[d ^ 1]
                if h in region and h not in seen:
                    seen.add(h)
                    queue.append(h)
        region -= seen
        sedges = {d >> 1 for f in seen for d in faces[f]} | {d >> 1 for d in seg} | {d >> 1 for d in north}
        strip = Strip(x, y, tuple(seg), tuple(north), frozenset(seen), tuple(sorted(sedges)), k=k)
        _columns(gp, strip, eps)
        strips.append(strip)
        walk = north + rest
    return strips, tuple(walk)


def _columns(gp, strip: Strip, eps):
    """Columns by the spacing rule, then the cheapest residue class mod k."""
    dt = DistanceTable(gp, strip.edges)
    nverts = sorted(set(_path_vertices(gp, strip.north, strip.x)))
    south_vs = _path_vertices(gp, strip.south)
    pre = [ZERO]
    for d in strip.south:
        pre.append(pre[-1] + gp.length(d >> 1))

    def to_north(v):
        best = None
        for t in nverts:
            dv = dt.d(v, t)
            if dv is not None and (best is None or dv < best[0]):
                best = (dv, t)
        return best

    tops = [0]
    cols = [()]
    lens = [ZERO]
    last = 0
    for j in range(1, len(south_vs)):
        dn, t = to_north(south_vs[j])
        if pre[j] - pre[last] > eps * dn:
            tops.append(j)
            cols.append(tuple(dt.path(south_vs[j], t)))
            lens.append(dn)
            last = j
    strip.column_tops = tuple(tops)
    strip.columns = tuple(cols)
    strip.column_lengths = tuple(lens)
    k = strip.k
    totals = [ZERO] * k
    for j, ln in enumerate(lens):
        totals[j % k] += ln
    best = min(range(k), key=lambda c: (totals[c], c))
    strip.selected_class = best
    strip.supercolumns = tuple(sorted({e for j, c in enumerate(cols) if j % k == best for e in c}))


def select_supercolumns(strip: Strip, epsilon, gp: WeightedGraph | None = None):
    """(columns, supercolumns) of a strip; recomputes when ``gp`` is given."""
    if gp is not None:
        strip.k = supercolumn_k(epsilon)
        _columns(gp, strip, Fraction(epsilon))
    return strip.columns, strip.supercolumns


# ------------------------------------------------------------ mortar graph


@dataclass
class MortarGraph:
    edges: tuple
    tree: tuple
    strip_edges: tuple
    supercolumn_edges: tuple
    length: Fraction
    vertices: frozenset

    def role(self, e: int) -> str:
        if e in self.tree:
            return "S"
        if e in self.strip_edges:
            return "N"
        return "C"


def build_mortar(ofg: OuterFaceGraph, strips) -> MortarGraph:
    g = ofg.source
    tree = set(ofg.tree)
    north = set()
    sup = set()
    for s in strips:
        north |= ofg.to_source_edges(d >> 1 for d in s.north)
        sup |= ofg.to_source_edges(s.supercolumns)
    edges = tuple(sorted(tree | north | sup))
    verts = frozenset(x for e in edges for x in g.edges[e][:2]) or frozenset(_tree_vertices(g, tree))
    return MortarGraph(edges, tuple(sorted(tree)), tuple(sorted(north - tree)),
                       tuple(sorted(sup - tree - north)), g.total_length(edges), verts)


# ------------------------------------------------------------ bricks and portals


@dataclass
class Brick:
    index: int
    boundary: tuple
    roles: tuple
    interior: tuple
    boundary_length: Fraction
    portal_positions: tuple = ()
    portals: tuple = ()
    v0_position: int = 0

    @property
    def edges(self) -> tuple:
        return tuple(sorted(set(self.interior) | {d >> 1 for d in self.boundary}))

    def segments(self) -> dict:
        """Boundary darts grouped by side; column runs alternate between W and E."""
        out = {"W": [], "S": [], "E": [], "N": []}
        flip = False
        prev = None
        for d, r in zip(self.boundary, self.roles):
            if r == "C":
                if prev != "C":
                    flip = not flip
                out["W" if flip else "E"].append(d)
            else:
                out[r].append(d)
            prev = r
        return out


def enumerate_bricks(g: WeightedGraph, rot: RotationSystem, mortar: MortarGraph) -> list:
    """One brick per mortar-graph face that strictly encloses an edge of ``g``."""
    mg = set(mortar.edges)
    gfaces = rot.faces()
    gface_of = {}
    for f, w in enumerate(gfaces):
        for d in w:
            gface_of[d] = f
    uf = UnionFind(len(gfaces))
    for e in range(g.m):
        if e not in mg:
            uf.union(gface_of[2 * e], gface_of[2 * e + 1])
    interior_by_class = {}
    for e in range(g.m):
        if e not in mg:
            interior_by_class.setdefault(uf.find(gface_of[2 * e]), []).append(e)
    if not mg:
        return []
    mfaces = rot.restrict(mg).faces()
    bricks = []
    for walk in mfaces:
        cls = uf.find(gface_of[walk[0]])
        inner = interior_by_class.get(cls)
        if not inner:
            continue
        start = walk.index(min(walk))
        walk = walk[start:] + walk[:start]
        roles = tuple(mortar.role(d >> 1) for d in walk)
        bricks.append(Brick(len(bricks), tuple(walk), roles, tuple(sorted(inner)),
                            g.total_length(d >> 1 for d in walk)))
    return bricks


def portal_positions(lengths, theta: int, start: int = 0) -> list:
    """Walk positions chosen by the strict arc rule, starting at ``start``."""
    if theta < 1:
        raise ValidationError("theta must be at least 1")
    L = len(lengths)
    total = sum(lengths, ZERO)
    if L == 0:
        return [start]
    gap = total / theta
    out = [start]
    cur = 0  # offset from start
    while True:
        arc = ZERO
        nxt = None
        for j in range(cur + 1, L + 1 + cur):
            arc += lengths[(start + j - 1) % L]
            if arc > gap:
                nxt = j
                break
        if nxt is None or nxt >= L:
            break
        out.append((start + nxt) % L)
        cur = nxt
    return out


def place_portals(g: WeightedGraph, brick: Brick, theta: int) -> tuple:
    """Set ``brick`` portals in place and return the portal vertices."""
    inner = {x for e in brick.interior for x in g.edges[e][:2]}
    verts = [g.tail(d) for d in brick.boundary]
    v0 = next((i for i, v in enumerate(verts) if v in inner), 0)
    lengths = [g.length(d >> 1) for d in brick.boundary]
    pos = portal_positions(lengths, theta, v0)
    brick.v0_position = v0
    brick.portal_positions = tuple(pos)
    seen = []
    for p in pos:
        if verts[p] not in seen:
            seen.append(verts[p])
    brick.portals = tuple(seen)
    return brick.portals


def portal_report(g: WeightedGraph, brick: Brick, theta: int) -> list:
    """Coverage radius and cardinality violations for one brick."""
    out = []
    L = len(brick.boundary)
    lengths = [g.length(d >> 1) for d in brick.boundary]
    radius = brick.boundary_length / theta
    pre = [ZERO]
    for x in lengths:
        pre.append(pre[-1] + x)
    for j in range(L):
        best = None
        for p in brick.portal_positions:
            fwd = (pre[j] - pre[p]) if j >= p else (brick.boundary_length - pre[p] + pre[j])
            back = brick.boundary_length - fwd
            dmin = min(fwd, back)
            best = dmin if best is None else min(best, dmin)
        if best is None or best > radius:
            out.append(f"brick {brick.index}: boundary position {j} is {best} from the nearest portal (> {radius})")
    if len(brick.portal_positions) > theta:
        out.append(f"brick {brick.index}: {len(brick.portal_positions)} portals exceed theta={theta}")
    return out


# ------------------------------------------------------------ portal-connected graph


@dataclass
class PortalConnectedGraph:
    graph: WeightedGraph
    rotation: RotationSystem
    vertex_map: tuple
    edge_map: tuple
    kind: tuple
    brick_of_edge: tuple

    def check(self) -> list:
        out = []
        rep = check_embedding(self.graph, self.rotation)
        if not rep.ok:
            out.extend(rep.errors)
        for e, kd in enumerate(self.kind):
            if kd == "portal" and self.graph.length(e) != 0:
                out.append(f"portal edge {e} has nonzero length")
        return out


def portal_connected_graph(g: WeightedGraph, rot: RotationSystem, mortar: MortarGraph, bricks) -> PortalConnectedGraph:
    mg = list(mortar.edges)
    mverts = sorted(mortar.vertices)
    vid = {v: i for i, v in enumerate(mverts)}
    vmap = list(mverts)
    edges, emap, kind, owner = [], [], [], []
    mcopy = {}
    for e in mg:
        u, v, w = g.edges[e]
        mcopy[e] = len(edges)
        edges.append((vid[u], vid[v], w))
        emap.append(e)
        kind.append("mortar")
        owner.append(None)
    restricted = rot.restrict(mg)
    order = [[2 * mcopy[d >> 1] + (d & 1) for d in restricted.order[v]] for v in mverts]
    for b in bricks:
        # The brick copy is cut open along its face walk: one corner copy per
        # walk position, so the walk becomes a simple outer cycle.
        inner = set(b.interior)
        L = len(b.boundary)
        cid = []
        for d in b.boundary:
            cid.append(len(vmap))
            vmap.append(g.tail(d))
            order.append([])
        on_walk = {g.tail(d) for d in b.boundary}
        single = {}
        for e in b.interior:
            for x in g.edges[e][:2]:
                if x not in on_walk and x not in single:
                    single[x] = len(vmap)
                    vmap.append(x)
                    order.append([])
        at = {}
        sectors = []
        for j, d_out in enumerate(b.boundary):
            v = g.tail(d_out)
            seq = rot.order[v]
            i = seq.index(b.boundary[j - 1] ^ 1)
            sector = []
            while True:
                i = (i + 1) % len(seq)
                d = seq[i]
                if d == d_out:
                    break
                if (d >> 1) in inner:
                    sector.append(d)
                    at[d] = cid[j]
            sectors.append(sector)
        bc = []
        for j, d in enumerate(b.boundary):
            bc.append(len(edges))
            edges.append((cid[j], cid[(j + 1) % L], g.length(d >> 1)))
            emap.append(d >> 1)
            kind.append("brick")
            owner.append(b.index)
        icopy = {}
        for e in b.interior:
            u, v, w = g.edges[e]
            icopy[e] = len(edges)
            edges.append((at.get(2 * e, single.get(u)), at.get(2 * e + 1, single.get(v)), w))
            emap.append(e)
            kind.append("brick")
            owner.append(b.index)
        for j in range(L):
            order[cid[j]] = ([2 * bc[j - 1] + 1] + [2 * icopy[d >> 1] + (d & 1) for d in sectors[j]]
                             + [2 * bc[j]])
        for x, c in single.items():
            order[c] = [2 * icopy[d >> 1] + (d & 1) for d in rot.order[x]]
        for p in b.portal_positions:
            d_in = b.boundary[(p - 1) % L]
            v = g.tail(b.boundary[p])
            pe = len(edges)
            edges.append((vid[v], cid[p], ZERO))
            emap.append(None)
            kind.append("portal")
            owner.append(b.index)
            mo = order[vid[v]]
            anchor = 2 * mcopy[d_in >> 1] + ((d_in ^ 1) & 1)
            mo.insert(mo.index(anchor) + 1, 2 * pe)
            order[cid[p]].append(2 * pe + 1)
    return PortalConnectedGraph(WeightedGraph(len(vmap), edges), RotationSystem(tuple(tuple(o) for o in order)),
                                tuple(vmap), tuple(emap), tuple(kind), tuple(owner))


# ------------------------------------------------------------ spanner


@dataclass
class SpannerResult:
    edges: tuple
    length: Fraction
    outer: OuterFaceGraph
    strips: list
    mortar: MortarGraph
    bricks: list
    brick_trees: dict
    epsilon: Fraction
    theta: int
    portal_graph: PortalConnectedGraph | None = None
    bounds: dict = field(default_factory=dict)

    def violations(self) -> list:
        return [f"{name}: {lhs} > {rhs}" for name, (lhs, rhs) in self.bounds.items() if lhs > rhs]

    def as_dict(self) -> dict:
        gp = self.outer.graph
        return {
            "epsilon": str(self.epsilon),
            "theta": self.theta,
            "delta_length": str(self.outer.delta_length),
            "strips": [{
                "x": s.x, "y": s.y,
                "south_length": str(s.south_length(gp)),
                "north_length": str(s.north_length(gp)),
                "columns": len(s.columns),
                "k": s.k, "class": s.selected_class,
                "supercolumn_length": str(s.supercolumn_length()),
            } for s in self.strips],
            "mortar": {"edges": list(self.mortar.edges), "length": str(self.mortar.length)},
            "bricks": [{
                "boundary": list(b.boundary), "interior": list(b.interior),
                "portals": list(b.portals),
            } for b in self.bricks],
            "spanner": {"edges": list(self.edges), "length": str(self.length)},
            "bounds": {k: [str(a), str(b)] for k, (a, b) in self.bounds.items()},
        }


class BudgetError(ValidationError):
    pass


def spanner_work_estimate(g: WeightedGraph, bricks, theta: int) -> int:
    return sum(3 ** min(theta, len({g.tail(d) for d in b.boundary})) * g.n for b in bricks)


def build_spanner(g: WeightedGraph, rot: RotationSystem, tree, epsilon, theta: int, terminals=(),
                  root: int | None = None, max_theta: int = 10, with_portal_graph: bool = True) -> SpannerResult:
    """Mortar graph plus an optimal Steiner tree for every portal subset of every brick."""
    eps = Fraction(epsilon)
    if not 0 < eps:
        raise ValidationError("epsilon must be positive")
    if theta < 1:
        raise ValidationError("theta must be at least 1")
    ofg = splice_open(g, rot, tree, terminals, root)
    strips, _ = decompose_strips(ofg, eps)
    mortar = build_mortar(ofg, strips)
    bricks = enumerate_bricks(g, rot, mortar) if mortar.edges else []
    if theta > max_theta:
        est = spanner_work_estimate(g, bricks, theta)
        raise BudgetError(f"theta={theta} exceeds the configured budget {max_theta}; "
                          f"about {est} Steiner DP cell updates would be needed")
    H = set(mortar.edges)
    trees = {}
    for b in bricks:
        portals = place_portals(g, b, theta)
        if len(portals) < 2:
            continue
        tables = SteinerTables(DistanceTable(g, b.edges), portals)
        for mask in range(1, 1 << len(portals)):
            if mask & (mask - 1) == 0:
                continue
            t = tables.tree(mask)
            trees[(b.index, mask)] = tuple(t)
            H.update(t)
    edges = tuple(sorted(H))
    res = SpannerResult(edges, g.total_length(edges), ofg, strips, mortar, bricks, trees, eps, theta)
    res.bounds = spanner_bounds(res)
    if with_portal_graph and bricks:
        res.portal_graph = portal_connected_graph(g, rot, mortar, bricks)
    return res


def spanner_bounds(res: SpannerResult) -> dict:
    """Named (lhs, rhs) pairs; each must satisfy lhs <= rhs."""
    eps, theta = res.epsilon, res.theta
    gp = res.outer.graph
    delta = res.outer.delta_length
    out = {}
    boundary = set()
    for s in res.strips:
        boundary |= s.boundary_edges()
    out["strips"] = (gp.total_length(boundary), (1 / eps + 1) * delta)
    sup_total = ZERO
    for i, s in enumerate(res.strips):
        out[f"columns[{i}]"] = (sum(s.column_lengths, ZERO), s.south_length(gp) / eps)
        out[f"supercolumn_class[{i}]"] = (s.supercolumn_length(), sum(s.column_lengths, ZERO) / s.k)
        sup_total += s.supercolumn_length()
    out["supercolumns"] = (sup_total, eps * delta)
    out["mortar"] = (res.mortar.length, (3 / eps + eps) * delta)
    out["spanner"] = (res.length, (1 + 2 ** (1 + theta)) * res.mortar.length)
    out["spanner_vs_delta"] = (res.length, (1 + 2 ** (1 + theta)) * (3 / eps + eps) * delta)
    return out
