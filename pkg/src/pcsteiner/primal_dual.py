"""Moat-growing primal-dual algorithm for prize-collecting Steiner forest.

Every terminal endpoint starts as an active singleton moat with half its
pair's penalty as potential.  Active moats grow uniformly; an edge whose
two sides' loads reach its length is bought and merges the moats, and a
moat whose potential runs out goes inactive, killing its live terminals.
Growth is attributed to individual pairs by walking each terminal's moat
history, which yields a feasible dual for the pair-split LP.

Event times are exact rationals.  Ties: tight edges before exhaustions,
then lowest edge id / lowest component id.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - gmpy2 is optional
    _Q = Fraction

from .graph import UnionFind, ValidationError, WeightedGraph
from .instance import PcInstance, SolutionForest, evaluate, is_normalized, normalize_terminals, restrict_to_base

ZERO = Fraction(0)


def _q(x) -> "_Q":
    x = Fraction(x)
    return _Q(x.numerator, x.denominator)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


# ------------------------------------------------------------------ records


@dataclass(frozen=True)
class ComponentRecord:
    """One member of the laminar family of moats ever formed."""

    id: int
    vertices: tuple
    children: tuple
    formed_at: Fraction
    grew: bool
    y: Fraction
    deactivated_at: Fraction | None = None
    merged_at: Fraction | None = None

    def active_during(self, start, end) -> bool:
        if not self.grew or self.formed_at > start:
            return False
        stop = [t for t in (self.deactivated_at, self.merged_at) if t is not None]
        return not stop or min(stop) >= end


@dataclass(frozen=True)
class TerminalState:
    vertex: int
    label: int
    status: str
    history: tuple
    charged: Fraction
    cause: str = ""


@dataclass
class DualAssignment:
    """Per-pair split ``y[(label, component)]`` plus the moat vertex sets."""

    y: dict
    components: dict
    totals: dict = field(default_factory=dict)

    @property
    def value(self) -> Fraction:
        return sum(self.y.values(), ZERO)

    def as_dict(self) -> dict:
        return {
            "y": [[i, s, str(v)] for (i, s), v in sorted(self.y.items())],
            "components": {str(s): sorted(vs) for s, vs in sorted(self.components.items())},
        }

    @classmethod
    def from_dict(cls, doc) -> "DualAssignment":
        y = {}
        for i, s, v in doc.get("y", []):
            key = (int(i), int(s))
            y[key] = y.get(key, ZERO) + Fraction(str(v))
        comps = {int(s): frozenset(int(v) for v in vs) for s, vs in doc.get("components", {}).items()}
        return cls(y, comps)


@dataclass
class PrimalDualRun:
    instance: PcInstance
    solution: SolutionForest
    grown: tuple
    components: list
    dual: DualAssignment
    terminals: dict
    satisfied: tuple
    events: list

    @property
    def forest(self) -> tuple:
        return self.solution.edges

    def event_log_json(self) -> str:
        return json.dumps(self.events, indent=1)


def process_history(history, uncharged, charge, label=None, y=None):
    """Charge ``charge`` against the uncharged growth of ``history``, smallest first.

    ``uncharged`` maps component id to its uncharged growth and is updated
    in place; charges are recorded in ``y[(label, S)]``.  Returns what is
    left of ``charge`` (0 if it ran out part-way).
    """
    remaining = charge
    for s in history:
        u = uncharged[s]
        if u <= remaining:
            remaining -= u
            if y is not None and u:
                y[(label, s)] = y.get((label, s), 0) + u
            uncharged[s] = u - u
        else:
            uncharged[s] = u - remaining
            if y is not None and remaining:
                y[(label, s)] = y.get((label, s), 0) + remaining
            return remaining - remaining
    return remaining


# ------------------------------------------------------------------ engine


class _Moat:
    __slots__ = ("id", "vertices", "children", "formed", "grew", "active", "y0", "pot0", "t0",
                 "alive", "deactivated", "merged")

    def __init__(self, cid, vertices, children, formed, active, pot):
        self.id = cid
        self.vertices = vertices
        self.children = children
        self.formed = formed
        self.grew = active
        self.active = active
        self.y0 = formed - formed
        self.pot0 = pot
        self.t0 = formed
        self.alive = []
        self.deactivated = None
        self.merged = None


class MoatEngine:
    """Event-driven moat growth shared by the forest algorithm and clustering.

    ``budget[v]`` is the potential a terminal vertex brings (0 for plain
    vertices); ``partner[v]`` is its pair partner or -1; ``label[v]`` names
    the dual variable family the vertex charges.
    """

    def __init__(self, g: WeightedGraph, budget, partner=None, label=None, audit=False):
        self.g = g
        n = g.n
        self.budget = [_q(b) for b in budget]
        self.partner = list(partner) if partner is not None else [-1] * n
        self.label = list(label) if label is not None else list(range(n))
        self.audit = audit
        self.lengths = [_q(w) for _, _, w in g.edges]
        zero = _Q(0)
        self.now = zero
        self.owner = list(range(n))
        self.frozen = [zero] * n
        self.moats = []
        self.status = {}
        self.history = {}
        self.charged = {}
        self.cause = {}
        self.uncharged = {}
        self.y = {}
        self.grown = []
        self.events = []
        self.heap = []
        self.edge_stamp = [0] * g.m
        for v in range(n):
            terminal = self.budget[v] > 0
            moat = _Moat(v, [v], (), zero, terminal, self.budget[v])
            self.uncharged[v] = zero
            if terminal:
                moat.alive = [v]
                self.status[v] = "alive"
                self.history[v] = [v]
            self.moats.append(moat)

    # -- time-dependent quantities
    def _settle(self, m):
        if m.active and m.t0 != self.now:
            d = self.now - m.t0
            m.y0 += d
            m.pot0 -= d
            self.uncharged[m.id] += d
            m.t0 = self.now

    def _load(self, v):
        m = self.moats[self.owner[v]]
        extra = self.now - m.t0 if m.active else 0
        return self.frozen[v] + m.y0 + extra

    def _push_edge(self, e):
        self.edge_stamp[e] += 1
        u, v, _ = self.g.edges[e]
        a, b = self.moats[self.owner[u]], self.moats[self.owner[v]]
        if a is b:
            return
        rate = int(a.active) + int(b.active)
        if rate == 0:
            return
        slack = self.lengths[e] - self._load(u) - self._load(v)
        if self.audit and slack < 0:
            raise AssertionError(f"edge {e} overpacked by {-slack}")
        heapq.heappush(self.heap, (self.now + slack / rate, 0, e, self.edge_stamp[e]))

    def _push_boundary(self, m):
        g, owner = self.g, self.owner
        seen = set()
        for v in m.vertices:
            for e in g.adj(v):
                if e in seen:
                    continue
                seen.add(e)
                u, w, _ = g.edges[e]
                if owner[u] != owner[w]:
                    self._push_edge(e)

    def _push_exhaust(self, m):
        heapq.heappush(self.heap, (self.now + m.pot0, 1, m.id, 0))

    def _charge(self, x):
        for s in self.history[x]:
            self._settle(self.moats[s])
        left = process_history(self.history[x], self.uncharged, self.budget[x], self.label[x], self.y)
        self.charged[x] = self.budget[x] - left
        return left

    # -- events
    def _tight(self, e):
        g = self.g
        u, v, _ = g.edges[e]
        a, b = self.moats[self.owner[u]], self.moats[self.owner[v]]
        self._settle(a)
        self._settle(b)
        for m in (a, b):
            m.merged = self.now
            m.active = False
            for x in m.vertices:
                self.frozen[x] += m.y0
        cid = len(self.moats)
        c = _Moat(cid, a.vertices + b.vertices, (a.id, b.id), self.now, True, a.pot0 + b.pot0)
        self.moats.append(c)
        self.uncharged[cid] = _Q(0)
        side = {x: 0 for x in a.vertices}
        side.update({x: 1 for x in b.vertices})
        united = set()
        for x in a.alive + b.alive:
            p = self.partner[x]
            if p >= 0 and p in side and side[p] != side[x]:
                united.add((min(x, p), max(x, p)))
        satisfied, died = [], []
        for s, t in sorted(united, key=lambda st: (self.label[st[0]], st)):
            both = self.status[s] == "alive" and self.status[t] == "alive"
            for x in (s, t):
                if self.status[x] == "alive":
                    c.pot0 -= self._charge(x)
            for x in (s, t):
                if both:
                    self.status[x] = "satisfied"
                elif self.status[x] == "alive":
                    self.status[x] = "dead"
                    self.cause[x] = "union"
                    died.append(self.label[x])
            if both:
                satisfied.append(self.label[s])
        c.alive = [x for x in a.alive + b.alive if self.status[x] == "alive"]
        for x in c.alive:
            self.history[x].append(cid)
        if self.audit and c.pot0 < 0:
            raise AssertionError(f"component {cid} formed with negative potential {c.pot0}")
        for x in c.vertices:
            self.owner[x] = cid
        self.grown.append(e)
        self.events.append({
            "t": str(self.now), "kind": "tight", "edge": e, "merged": [a.id, b.id], "into": cid,
            "satisfied": sorted(set(satisfied)), "dead": sorted(set(died)),
        })
        self._push_exhaust(c)
        self._push_boundary(c)

    def _exhaust(self, m):
        self._settle(m)
        m.active = False
        m.deactivated = self.now
        died = []
        for x in sorted(m.alive):
            self.status[x] = "dead"
            self.cause[x] = "exhaust"
            self._charge(x)
            died.append(self.label[x])
        m.alive = []
        self.events.append({"t": str(self.now), "kind": "exhaust", "component": m.id, "dead": sorted(set(died))})
        self._push_boundary(m)

    def _check_conservation(self):
        def subtree_uncharged(s):
            m = self.moats[s]
            return self.uncharged[s] + sum((subtree_uncharged(c) for c in m.children), _Q(0))

        for cid in set(self.owner):
            m = self.moats[cid]
            self._settle(m)
            lhs = m.pot0 + subtree_uncharged(cid)
            rhs = sum((self.budget[x] for x in m.vertices if self.status.get(x) == "alive"), _Q(0))
            if lhs != rhs:
                raise AssertionError(f"moat conservation broken for component {cid} at t={self.now}: {lhs} != {rhs}")

    def run(self):
        for m in self.moats:
            if m.active:
                self._push_exhaust(m)
        for e in range(self.g.m):
            self._push_edge(e)
        heap = self.heap
        while heap:
            t, kind, ident, stamp = heapq.heappop(heap)
            if kind == 0:
                if stamp != self.edge_stamp[ident]:
                    continue
                u, v, _ = self.g.edges[ident]
                if self.owner[u] == self.owner[v]:
                    continue
                self.now = t
                self._tight(ident)
            else:
                m = self.moats[ident]
                if not m.active or m.merged is not None:
                    continue
                self.now = t
                self._exhaust(m)
            if self.audit:
                self._check_conservation()
        return self

    # -- export
    def records(self) -> list:
        out = []
        for m in self.moats:
            out.append(ComponentRecord(
                id=m.id,
                vertices=tuple(sorted(m.vertices)),
                children=m.children,
                formed_at=_frac(m.formed),
                grew=m.grew,
                y=_frac(m.y0),
                deactivated_at=None if m.deactivated is None else _frac(m.deactivated),
                merged_at=None if m.merged is None else _frac(m.merged),
            ))
        return out

    def dual(self) -> DualAssignment:
        y = {k: _frac(v) for k, v in self.y.items() if v != 0}
        comps = {m.id: frozenset(m.vertices) for m in self.moats if m.grew}
        totals = {m.id: _frac(m.y0) for m in self.moats if m.grew}
        return DualAssignment(y, comps, totals)

    def terminal_states(self) -> dict:
        return {
            x: TerminalState(x, self.label[x], self.status[x], tuple(self.history[x]), _frac(self.charged.get(x, 0)),
                             self.cause.get(x, ""))
            for x in sorted(self.status)
        }


# ------------------------------------------------------------------ phases


def deletion_phase(g: WeightedGraph, grown, satisfied_pairs) -> tuple:
    """Minimal subforest of ``grown`` that keeps every satisfied pair connected.

    Reverse-delete over a forest keeps exactly the union of the satisfied
    pairs' tree paths, whatever the order; this computes that union.
    """
    grown = list(grown)
    adj = {}
    for e in grown:
        u, v, _ = g.edges[e]
        adj.setdefault(u, []).append((v, e))
        adj.setdefault(v, []).append((u, e))
    parent = {}
    depth = {}
    for root in sorted(adj):
        if root in parent:
            continue
        parent[root] = (None, None)
        depth[root] = 0
        stack = [root]
        while stack:
            x = stack.pop()
            for y, e in adj[x]:
                if y not in parent:
                    parent[y] = (x, e)
                    depth[y] = depth[x] + 1
                    stack.append(y)
    keep = set()
    for s, t in satisfied_pairs:
        if s not in parent or t not in parent:
            raise ValueError(f"satisfied pair ({s}, {t}) is not connected by the grown forest")
        while s != t:
            if depth[s] < depth[t]:
                s, t = t, s
            p, e = parent[s]
            if p is None:
                raise ValueError("satisfied pair is not connected by the grown forest")
            keep.add(e)
            s = p
    return tuple(sorted(keep))


def reverse_delete(g: WeightedGraph, grown, satisfied_pairs) -> tuple:
    """Literal reverse-delete (slow; used to cross-check :func:`deletion_phase`)."""
    current = list(grown)
    for e in reversed(list(grown)):
        trial = [f for f in current if f != e]
        uf = UnionFind(g.n)
        for f in trial:
            uf.union(g.edges[f][0], g.edges[f][1])
        if all(uf.find(s) == uf.find(t) for s, t in satisfied_pairs):
            current = trial
    return tuple(sorted(current))


def run_primal_dual(inst: PcInstance, audit: bool = False) -> PrimalDualRun:
    """Grow moats, delete redundant edges, and return forest, dual and log."""
    if not is_normalized(inst):
        raise ValidationError("run_primal_dual needs a normalized forest instance (see normalize_terminals)")
    g = inst.graph
    budget = [ZERO] * g.n
    partner = [-1] * g.n
    label = [-1] * g.n
    for i, (s, t, p) in enumerate(inst.pairs):
        if p > 0:
            half = p / 2
            budget[s] = budget[t] = half
            partner[s], partner[t] = t, s
            label[s] = label[t] = i
    eng = MoatEngine(g, budget, partner, label, audit=audit).run()
    states = eng.terminal_states()
    sat = sorted({st.label for st in states.values() if st.status == "satisfied"})
    sat_pairs = [(inst.pairs[i][0], inst.pairs[i][1]) for i in sat]
    forest = deletion_phase(g, eng.grown, sat_pairs)
    return PrimalDualRun(
        instance=inst,
        solution=evaluate(inst, forest),
        grown=tuple(eng.grown),
        components=eng.records(),
        dual=eng.dual(),
        terminals=states,
        satisfied=tuple(sat),
        events=eng.events,
    )


def scale_penalties(inst: PcInstance, epsilon) -> PcInstance:
    eps = Fraction(epsilon)
    if eps <= 0:
        raise ValidationError(f"epsilon must be positive, got {eps}")
    pairs = tuple((s, t, 2 * p / eps) for s, t, p in inst.pairs)
    return PcInstance(inst.graph, pairs=pairs, rotation=inst.rotation, normalized=inst.normalized,
                      origin=inst.origin, base_edges=inst.base_edges)


def run_scaled(inst: PcInstance, epsilon, audit: bool = False) -> PrimalDualRun:
    """Primal-dual on the instance whose penalties are multiplied by 2/epsilon."""
    return run_primal_dual(scale_penalties(inst, epsilon), audit=audit)


def solve_primal_dual(inst: PcInstance, epsilon=None) -> tuple:
    """Normalize any instance, run the (optionally scaled) algorithm, and map back.

    Returns ``(SolutionForest on inst, PrimalDualRun on the normalized instance)``.
    """
    norm = normalize_terminals(inst)
    run = run_primal_dual(norm) if epsilon is None else run_scaled(norm, epsilon)
    F = restrict_to_base(norm, run.forest)
    return evaluate(inst, F), run


# ------------------------------------------------------------------ checks


@dataclass
class DualReport:
    ok: bool
    value: Fraction
    violations: list

    def as_dict(self):
        return {"ok": self.ok, "dual_value": str(self.value), "violations": list(self.violations)}


def verify_dual(dual: DualAssignment, inst: PcInstance) -> DualReport:
    """Check edge capacities, pair budgets, sign and separation of a pair-split dual."""
    g = inst.graph
    violations = []
    per_set = {}
    budget = {}
    for (i, s), v in sorted(dual.y.items()):
        if v < 0:
            violations.append(f"y[{i},{s}] = {v} is negative")
        if not 0 <= i < len(inst.pairs):
            violations.append(f"y[{i},{s}] names an unknown pair")
            continue
        if s not in dual.components:
            violations.append(f"y[{i},{s}] names an unknown component")
            continue
        S = dual.components[s]
        a, b, _ = inst.pairs[i]
        if (a in S) == (b in S):
            violations.append(f"component {s} does not separate pair {i}")
        per_set[s] = per_set.get(s, ZERO) + v
        budget[i] = budget.get(i, ZERO) + v
    for i, total in sorted(budget.items()):
        if total > inst.pairs[i][2]:
            violations.append(f"pair {i}: dual total {total} exceeds penalty {inst.pairs[i][2]}")
    load = [ZERO] * g.m
    for s, total in per_set.items():
        S = dual.components[s]
        for e, (u, v, _) in enumerate(g.edges):
            if (u in S) != (v in S):
                load[e] += total
    for e, (_, _, w) in enumerate(g.edges):
        if load[e] > w:
            violations.append(f"edge {e}: dual load {load[e]} exceeds length {w}")
    return DualReport(not violations, dual.value, violations)


def charge_violations(run: PrimalDualRun, literal: bool = False) -> list:
    """Split identity y(S) = sum_i y_{i,S} and the half-penalty charge of dead endpoints.

    A terminal killed at a merge (its partner already dead) keeps whatever
    its moat history could not pay, so by default only terminals killed by
    exhaustion must carry exactly half their penalty; for the others the
    partner must have died by exhaustion.  ``literal=True`` demands the
    exact half-penalty of every dead endpoint.
    """
    out = []
    split = {}
    for (i, s), v in run.dual.y.items():
        split[s] = split.get(s, ZERO) + v
    for rec in run.components:
        if rec.grew and rec.y != split.get(rec.id, ZERO):
            out.append(f"component {rec.id}: y = {rec.y} but pair split sums to {split.get(rec.id, ZERO)}")
    pairs = run.instance.pairs
    for x, st in run.terminals.items():
        if st.status != "dead":
            continue
        want = pairs[st.label][2] / 2
        got = sum((run.dual.y.get((st.label, s), ZERO) for s in st.history), ZERO)
        if got > want:
            out.append(f"dead terminal {x}: charged {got}, more than {want}")
        elif got != want and (literal or st.cause == "exhaust"):
            out.append(f"dead terminal {x} ({st.cause}): charged {got}, expected {want}")
        elif st.cause == "union":
            s, t, _ = pairs[st.label]
            partner = run.terminals[t if x == s else s]
            if partner.cause != "exhaust":
                out.append(f"dead terminal {x} died at a merge but its partner did not die by exhaustion")
    return out


def degree_replay(run: PrimalDualRun) -> list:
    """Per growth interval: (start, end, active count, F-degree sum of active moats)."""
    g = run.instance.graph
    F = run.forest
    times = sorted({r.formed_at for r in run.components}
                   | {r.deactivated_at for r in run.components if r.deactivated_at is not None}
                   | {r.merged_at for r in run.components if r.merged_at is not None})
    out = []
    for a, b in zip(times, times[1:]):
        active = [r for r in run.components if r.active_during(a, b)]
        deg = 0
        for r in active:
            S = set(r.vertices)
            deg += sum(1 for e in F if (g.edges[e][0] in S) != (g.edges[e][1] in S))
        out.append((a, b, len(active), deg))
    return out
