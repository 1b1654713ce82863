"""End-to-end reductions: scaled primal-dual, spanner, partition and contraction, exact DP."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .clustering import contract_forest, run_clustering, split_instances
from .dp import solve_pcst
from .graph import UnionFind, ValidationError, WeightedGraph, check_embedding
from .instance import PcInstance, SolutionForest, evaluate, normalize_terminals, restrict_to_base
from .oracles import brute_force_pcsf, spanning_subforest
from .primal_dual import run_scaled
from .spanner import build_spanner
from .treewidth import contract_edges, partition_edges

ZERO = Fraction(0)


@dataclass(frozen=True)
class PipelineConfig:
    epsilon: Fraction = Fraction(1, 2)
    theta: int = 4
    k: int = 3
    solver: str = "exact-dp"
    max_theta: int = 10
    max_width: int = 7
    seed: int = 0

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps <= 1:
            raise ValidationError(f"epsilon must lie in (0, 1], got {eps}")
        if self.theta < 1:
            raise ValidationError("theta must be at least 1")
        if self.k < 2:
            raise ValidationError("k must be at least 2")
        if self.solver not in ("exact-dp", "brute-force", "plugin"):
            raise ValidationError(f"unknown solver {self.solver!r}")

    def as_dict(self) -> dict:
        return {"epsilon": str(self.epsilon), "theta": self.theta, "k": self.k, "solver": self.solver,
                "max_theta": self.max_theta, "max_width": self.max_width, "seed": self.seed}


@dataclass
class CostLedger:
    items: list = field(default_factory=list)

    def add(self, label: str, value) -> None:
        self.items.append((label, Fraction(value)))

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.items), ZERO)

    def as_dict(self) -> dict:
        return {"items": [[k, str(v)] for k, v in self.items], "total": str(self.total)}


@dataclass
class PipelineResult:
    solution: SolutionForest
    ledger: CostLedger
    stages: dict

    def as_dict(self) -> dict:
        return {"solution": self.solution.as_dict(), "ledger": self.ledger.as_dict(), "stages": self.stages}


def _require_planar(inst: PcInstance):
    if inst.rotation is None:
        raise ValidationError("the pipeline needs a planar embedding (rotation system)")
    rep = check_embedding(inst.graph, inst.rotation)
    if not rep.ok:
        raise ValidationError("embedding is not planar: " + "; ".join(rep.errors[:3]))


def _subgraph(g: WeightedGraph, edge_ids, keep_vertices=()):
    """Compact graph on the endpoints of ``edge_ids``; returns (graph, vertex ids, edge ids)."""
    verts = sorted({x for e in edge_ids for x in g.edges[e][:2]} | set(keep_vertices))
    vid = {v: i for i, v in enumerate(verts)}
    ids = sorted(edge_ids)
    sub = WeightedGraph(len(verts), [(vid[g.edges[e][0]], vid[g.edges[e][1]], g.edges[e][2]) for e in ids])
    return sub, verts, ids


def _root_component(g: WeightedGraph, ids, root: int) -> tuple:
    uf = UnionFind(g.n)
    for e in ids:
        uf.union(g.edges[e][0], g.edges[e][1])
    r = uf.find(root)
    return tuple(sorted(e for e in ids if uf.find(g.edges[e][0]) == r))


def _solve_tree(inst: PcInstance, cfg: PipelineConfig, plugin=None) -> tuple:
    if cfg.solver == "exact-dp":
        res = solve_pcst(inst, max_width=cfg.max_width)
        return res.tree, {"width": res.stats.width, "dp_entries": res.stats.entries,
                          "dp_envelope": res.stats.envelope}
    if cfg.solver == "brute-force":
        sol, _ = brute_force_pcsf(inst)
        return sol.edges, {}
    if plugin is None:
        raise ValidationError("solver 'plugin' needs a callable")
    return tuple(plugin(inst)), {}


def ptas_pcst(inst: PcInstance, cfg: PipelineConfig | None = None, plugin: Callable | None = None) -> PipelineResult:
    """Rooted prize-collecting tree through the full reduction chain."""
    cfg = cfg or PipelineConfig()
    if inst.mode != "tree":
        raise ValidationError("ptas_pcst needs a rooted instance")
    _require_planar(inst)
    g, r, eps = inst.graph, inst.root, cfg.epsilon
    stages = {"config": cfg.as_dict()}

    norm = normalize_terminals(inst)
    run = run_scaled(norm, eps)
    T = _root_component(g, restrict_to_base(norm, run.forest), r)
    reached = {x for e in T for x in g.edges[e][:2]} | {r}
    work_pen = tuple(p if v in reached else ZERO for v, p in enumerate(inst.vertex_penalties))
    dropped = [v for v, p in enumerate(inst.vertex_penalties) if p > 0 and v not in reached and v != r]
    stages["scaled"] = {"tree_edges": list(T), "tree_length": str(g.total_length(T)), "dropped": dropped}

    if T:
        terms = sorted(v for v in reached if work_pen[v] > 0 or v == r)
        sp = build_spanner(g, inst.rotation, T, eps, cfg.theta, terms, root=r, max_theta=cfg.max_theta,
                           with_portal_graph=False)
        H = _root_component(g, sp.edges, r)
        violations = sp.violations()
        if violations:
            raise AssertionError("spanner bounds violated: " + "; ".join(violations))
        stages["spanner"] = {"strips": len(sp.strips), "bricks": len(sp.bricks), "mortar_length": str(sp.mortar.length),
                             "edges": len(H), "length": str(g.total_length(H))}
    else:
        H = ()
        stages["spanner"] = {"strips": 0, "bricks": 0, "mortar_length": "0", "edges": 0, "length": "0"}

    sub, verts, ids = _subgraph(g, H, [r])
    vid = {v: i for i, v in enumerate(verts)}
    hinst = PcInstance(sub, root=vid[r], vertex_penalties=tuple(work_pen[v] for v in verts))
    part = partition_edges(sub, cfg.k, root=vid[r])
    con = contract_edges(hinst, part.selected_edges)
    F_hat, info = _solve_tree(con.instance, cfg, plugin)
    small = evaluate(con.instance, F_hat)
    lifted = con.lift(F_hat)
    final_local = _root_component(sub, lifted, vid[r])
    final = tuple(sorted(ids[e] for e in final_local))
    stages["contraction"] = {"k": cfg.k, "class": part.selected, "class_length": str(part.lengths[part.selected]),
                             "spanner_length": str(sub.total_length(range(sub.m))),
                             "contracted_vertices": con.instance.graph.n, **info}

    sol = evaluate(inst, final)
    work = evaluate(hinst, final_local)
    ledger = CostLedger()
    ledger.add("contracted solution", small.cost)
    mapped = sub.total_length(con.edge_map[e] for e in F_hat)
    ledger.add("re-expansion length", g.total_length(final) - mapped)
    ledger.add("penalty correction", work.penalty - small.penalty)
    reach = _connected_to(g, final, r)
    ledger.add("dropped terminals", sum((inst.vertex_penalties[v] for v in dropped if v not in reach), ZERO))
    if ledger.total != sol.cost:
        raise AssertionError(f"ledger total {ledger.total} != solution cost {sol.cost}")
    return PipelineResult(sol, ledger, stages)


def _connected_to(g: WeightedGraph, ids, root: int) -> set:
    uf = UnionFind(g.n)
    for e in ids:
        uf.union(g.edges[e][0], g.edges[e][1])
    return {v for v in range(g.n) if uf.find(v) == uf.find(root)}


# ------------------------------------------------------------ forest reduction


@dataclass
class ReducedPart:
    instance: PcInstance
    contraction: object
    vertices: tuple
    edge_ids: tuple
    pair_ids: tuple
    tree_edges: tuple
    spanner_length: Fraction
    class_length: Fraction


@dataclass
class Reduction:
    source: PcInstance
    normalized: PcInstance
    parts: list
    unconditional: tuple
    stages: dict

    @property
    def instances(self) -> list:
        return [p.instance for p in self.parts]

    def recombine(self, solutions) -> PipelineResult:
        """Lift one edge set per part, union them, and itemize the cost."""
        if len(solutions) != len(self.parts):
            raise ValidationError(f"expected {len(self.parts)} solutions, got {len(solutions)}")
        norm = self.normalized
        inst = self.source
        ledger = CostLedger()
        union = set()
        part_len = ZERO
        for j, (part, F_hat) in enumerate(zip(self.parts, solutions)):
            small = evaluate(part.instance, F_hat)
            lifted = part.contraction.lift(F_hat)
            ids = {part.edge_ids[e] for e in lifted}
            length = norm.graph.total_length(ids)
            ledger.add(f"part {j} contracted solution", small.cost)
            ledger.add(f"part {j} re-expansion length", length - small.length)
            ledger.add(f"part {j} penalties paid in the contracted instance", -small.penalty)
            union |= ids
            part_len += length
        F = spanning_subforest(inst.graph, restrict_to_base(norm, union))
        sol = evaluate(inst, F)
        ledger.add("overlap and cycle removal", sol.length - part_len)
        sep = set(sol.separated)
        ledger.add("unconditional pairs", sum((inst.pairs[i][2] for i in self.unconditional if i in sep), ZERO))
        ledger.add("other separated pairs", sum((inst.pairs[i][2] for i in sep if i not in self.unconditional), ZERO))
        if ledger.total != sol.cost:
            raise AssertionError(f"ledger total {ledger.total} != solution cost {sol.cost}")
        return PipelineResult(sol, ledger, dict(self.stages))


def reduce_pcsf(inst: PcInstance, cfg: PipelineConfig | None = None) -> Reduction:
    """Scaled run, clustering, split, per-part spanner, partition and contraction."""
    cfg = cfg or PipelineConfig()
    if inst.mode != "forest":
        raise ValidationError("reduce_pcsf needs a pair instance")
    _require_planar(inst)
    eps = cfg.epsilon
    norm = normalize_terminals(inst)
    g = norm.graph
    run = run_scaled(norm, eps)
    cg = contract_forest(g, run.forest, eps)
    crun = run_clustering(cg)
    parts_in, unconditional = split_instances(norm, crun)
    parts = []
    for sp_part in parts_in:
        pairs = [norm.pairs[i] for i in sp_part.pair_ids]
        terms = sorted({x for s, t, _ in pairs for x in (s, t)})
        sp = build_spanner(g, norm.rotation, sp_part.tree_edges, eps, cfg.theta, terms,
                           max_theta=cfg.max_theta, with_portal_graph=False)
        violations = sp.violations()
        if violations:
            raise AssertionError("spanner bounds violated: " + "; ".join(violations))
        comp = _connected_to(g, sp.edges, terms[0])
        H = tuple(e for e in sp.edges if g.edges[e][0] in comp)
        sub, verts, ids = _subgraph(g, H, terms)
        vid = {v: i for i, v in enumerate(verts)}
        local = PcInstance(sub, pairs=tuple((vid[s], vid[t], p) for s, t, p in pairs))
        part = partition_edges(sub, cfg.k, root=vid[terms[0]])
        con = contract_edges(local, part.selected_edges)
        parts.append(ReducedPart(con.instance, con, tuple(verts), tuple(ids), sp_part.pair_ids,
                                 sp_part.tree_edges, sub.total_length(range(sub.m)), part.lengths[part.selected]))
    stages = {
        "config": cfg.as_dict(),
        "scaled_forest": list(run.forest),
        "clustered_forest": list(crun.pruned_in_g()),
        "parts": [{"pairs": list(p.pair_ids), "vertices": len(p.vertices), "edges": len(p.edge_ids),
                   "contracted_edges": p.instance.graph.m} for p in parts],
        "unconditional": list(unconditional),
    }
    return Reduction(inst, norm, parts, tuple(unconditional), stages)


def solve_pcsf_reduced(inst: PcInstance, cfg: PipelineConfig | None = None, plugin: Callable | None = None) -> PipelineResult:
    """Reduce, solve every part (brute force unless a plugin is given), recombine."""
    red = reduce_pcsf(inst, cfg)
    sols = []
    for part in red.parts:
        if plugin is not None:
            sols.append(tuple(plugin(part.instance)))
        else:
            sols.append(brute_force_pcsf(part.instance)[0].edges)
    return red.recombine(sols)
