"""Seeded check suites with CSV/JSON reports.

Every suite regenerates its instances from ``SuiteConfig.seed``, so two runs
with the same config write byte-identical report files.  Wall-clock times
go to a separate ``timings.json``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from statistics import median_low

from .clustering import contract_forest, exhausted_vertices, run_clustering, verify_cluster_dual
from .dp import solve_pcst
from .generators import KINDS, generate
from .graph import UnionFind, WeightedGraph, is_forest, rotation_from_coordinates
from .instance import PcInstance, evaluate, normalize_terminals, restrict_to_base
from .oracles import DistanceTable, brute_force_pcsf
from .pipeline import PipelineConfig, _root_component, ptas_pcst
from .primal_dual import charge_violations, run_scaled, solve_primal_dual, verify_dual
from .spanner import build_spanner, spanner_bounds
from .treewidth import check_lift, contract_edges, heuristic_decomposition, partition_edges

ZERO = Fraction(0)
MAX_FAILURES = 20


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    oracle_runs: int = 500
    large_runs: int = 5000
    large_max_n: int = 60
    scaled_runs: int = 200
    cluster_runs: int = 150
    dp_runs: int = 300
    spanner_runs: int = 200
    contraction_runs: int = 150
    pipeline_runs: int = 200

    @classmethod
    def quick(cls, seed: int = 0) -> "SuiteConfig":
        return cls(seed=seed, oracle_runs=40, large_runs=40, large_max_n=30, scaled_runs=15, cluster_runs=10,
                   dp_runs=20, spanner_runs=10, contraction_runs=10, pipeline_runs=10)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteResult:
    name: str
    criterion: int
    passed: bool
    summary: dict
    rows: list
    failures: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"name": self.name, "criterion": self.criterion, "passed": self.passed,
                "summary": self.summary, "failures": self.failures}


class _Checker:
    """Collects failure messages, keeping the first few verbatim."""

    def __init__(self):
        self.count = 0
        self.messages = []

    def __call__(self, ok: bool, message) -> bool:
        if not ok:
            self.count += 1
            if len(self.messages) < MAX_FAILURES:
                self.messages.append(message() if callable(message) else message)
        return ok


def _fmt(x) -> str:
    return f"{float(x):.6f}"


def _dist(values) -> dict:
    """Exact min/median/max plus a few fixed-precision quantiles."""
    if not values:
        return {"count": 0}
    vs = sorted(values)
    q = lambda p: vs[min(len(vs) - 1, int(p * len(vs)))]
    return {"count": len(vs), "min": str(vs[0]), "median": str(median_low(vs)), "max": str(vs[-1]),
            "p90": _fmt(q(0.9)), "mean": _fmt(sum(vs, ZERO) / len(vs))}


def _ratio(cost, opt):
    if opt == 0:
        return Fraction(1) if cost == 0 else None
    return cost / opt


def _connected(g: WeightedGraph, ids) -> UnionFind:
    uf = UnionFind(g.n)
    for e in ids:
        uf.union(g.edges[e][0], g.edges[e][1])
    return uf


# ------------------------------------------------------------------ instances


def _small_instance(seed: int, mode: str, max_n: int, max_m: int, max_terms: int) -> PcInstance:
    """Planar instance within the size caps; resamples deterministically until it fits."""
    rng = random.Random(seed)
    for attempt in range(100):
        kind = KINDS[(seed + attempt) % len(KINDS)]
        sub = seed * 101 + attempt
        extra = {"length_range": (0, 10)} if rng.random() < 0.15 else {}
        if mode == "forest":
            extra["pairs"] = rng.randint(1, max_terms)
        else:
            extra["terminals"] = rng.randint(1, max_terms)
        if kind == "grid":
            rows = rng.randint(1, 3)
            cols = rng.randint(2, max(2, max_n // rows))
            inst = generate(kind, sub, rows=rows, cols=cols, mode=mode, **extra)
        elif kind == "ring-chords":
            inst = generate(kind, sub, size=rng.randint(3, max_n), chords=rng.randint(0, 4), mode=mode, **extra)
        else:
            inst = generate(kind, sub, size=rng.randint(3, max_n), mode=mode, **extra)
        if inst.graph.n <= max_n and inst.graph.m <= max_m:
            return inst
    raise RuntimeError(f"no instance within caps for seed {seed}")


def _large_instance(seed: int, max_n: int) -> PcInstance:
    rng = random.Random(seed)
    kind = KINDS[seed % len(KINDS)]
    n = rng.randint(9, max_n)
    pairs = rng.randint(1, 10)
    if kind == "grid":
        rows = rng.randint(2, 6)
        return generate(kind, seed, rows=rows, cols=max(2, n // rows), mode="forest", pairs=pairs)
    if kind == "ring-chords":
        return generate(kind, seed, size=n, chords=rng.randint(0, n // 2), mode="forest", pairs=pairs)
    return generate(kind, seed, size=n, mode="forest", pairs=pairs)


def _base(cfg: SuiteConfig, stream: int) -> int:
    return cfg.seed * 1_000_003 + stream * 100_000


def strip_gadget() -> PcInstance:
    """Path 0-1-2-3 of unit edges closed by a unit chord; the path is the tree."""
    g = WeightedGraph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    rot = rotation_from_coordinates(g, [(0, 0), (1, 1), (2, 1), (3, 0)])
    pen = (0, 1, 1, 1)
    return PcInstance(g, root=0, vertex_penalties=tuple(Fraction(p) for p in pen), rotation=rot)


# ------------------------------------------------------------------ primal-dual


class _Context:
    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self._pd = None

    def pd_runs(self) -> list:
        """(tag, seed, instance, solution, run, opt or None) for criteria 1 to 3."""
        if self._pd is None:
            cfg = self.cfg
            out = []
            b = _base(cfg, 1)
            for i in range(cfg.oracle_runs):
                inst = _small_instance(b + i, "forest", 8, 14, 5)
                sol, run = solve_primal_dual(inst)
                _, opt = brute_force_pcsf(inst)
                out.append(("oracle", b + i, inst, sol, run, opt))
            b = _base(cfg, 2)
            for i in range(cfg.large_runs):
                inst = _large_instance(b + i, cfg.large_max_n)
                sol, run = solve_primal_dual(inst)
                out.append(("large", b + i, inst, sol, run, None))
            self._pd = out
        return self._pd


def suite_primal_dual(ctx: _Context) -> SuiteResult:
    check = _Checker()
    rows, ratios = [], []
    oracle = large = 0
    for tag, seed, inst, sol, run, opt in ctx.pd_runs():
        dual = run.dual.value
        check(sol.cost <= 4 * dual, lambda: f"seed {seed}: cost {sol.cost} > 4 * dual {dual}")
        row = {"set": tag, "seed": seed, "n": inst.graph.n, "m": inst.graph.m, "pairs": len(inst.pairs),
               "cost": str(sol.cost), "dual": str(dual), "opt": "", "ratio_to_opt": ""}
        if opt is not None:
            oracle += 1
            check(sol.cost <= 4 * opt, lambda: f"seed {seed}: cost {sol.cost} > 4 * OPT {opt}")
            check(dual <= opt, lambda: f"seed {seed}: dual {dual} exceeds OPT {opt}")
            r = _ratio(sol.cost, opt)
            ratios.append(r)
            row["opt"], row["ratio_to_opt"] = str(opt), _fmt(r)
        else:
            large += 1
        rows.append(row)
    summary = {"oracle_instances": oracle, "large_instances": large, "violations": check.count,
               "ratio_to_opt": _dist(ratios)}
    ok = check.count == 0 and oracle >= min(500, ctx.cfg.oracle_runs) and large >= min(5000, ctx.cfg.large_runs)
    return SuiteResult("primal-dual", 1, ok, summary, rows, check.messages)


def suite_dual(ctx: _Context) -> SuiteResult:
    check = _Checker()
    rows = []
    for tag, seed, inst, sol, run, _ in ctx.pd_runs():
        rep = verify_dual(run.dual, run.instance)
        check(rep.ok, lambda: f"seed {seed}: " + "; ".join(rep.violations[:3]))
        rows.append({"set": tag, "seed": seed, "dual": str(rep.value), "ok": int(rep.ok),
                     "violations": len(rep.violations)})
    summary = {"runs": len(rows), "infeasible": check.count}
    return SuiteResult("dual", 2, check.count == 0, summary, rows, check.messages)


def suite_charges(ctx: _Context) -> SuiteResult:
    """Literal identity; the exhaustion reading is reported alongside."""
    check = _Checker()
    rows = []
    reading_bad = 0
    for tag, seed, inst, sol, run, _ in ctx.pd_runs():
        literal = charge_violations(run, literal=True)
        reading = charge_violations(run)
        reading_bad += bool(reading)
        check(not literal, lambda: f"seed {seed}: {literal[0]}")
        rows.append({"set": tag, "seed": seed, "literal_violations": len(literal),
                     "exhaustion_reading_violations": len(reading)})
    summary = {"runs": len(rows), "runs_violating_literal": check.count,
               "runs_violating_exhaustion_reading": reading_bad}
    return SuiteResult("charges", 3, check.count == 0, summary, rows, check.messages)


def suite_scaled(ctx: _Context) -> SuiteResult:
    cfg = ctx.cfg
    check = _Checker()
    rows = []
    b = _base(cfg, 3)
    slack_len, slack_pen = [], []
    for i in range(cfg.scaled_runs):
        inst = _small_instance(b + i, "forest", 8, 14, 5)
        opt_sol, opt = brute_force_pcsf(inst)
        opt_uf = _connected(inst.graph, opt_sol.edges)
        for eps in (Fraction(1), Fraction(1, 2), Fraction(1, 4)):
            sol, _ = solve_primal_dual(inst, eps)
            uf = _connected(inst.graph, sol.edges)
            X = [j for j, (s, t, p) in enumerate(inst.pairs)
                 if uf.find(s) != uf.find(t) and opt_uf.find(s) == opt_uf.find(t)]
            pen_x = sum((inst.pairs[j][2] for j in X), ZERO)
            check(sol.length <= 8 * opt / eps, lambda: f"seed {b + i} eps {eps}: length {sol.length} > 8*OPT/eps")
            check(pen_x <= eps * opt, lambda: f"seed {b + i} eps {eps}: penalty of X {pen_x} > eps*OPT")
            if opt > 0:
                slack_len.append(sol.length * eps / (8 * opt))
                slack_pen.append(pen_x / (eps * opt))
            rows.append({"seed": b + i, "epsilon": str(eps), "opt": str(opt), "length": str(sol.length),
                         "x_pairs": len(X), "x_penalty": str(pen_x)})
    summary = {"instances": cfg.scaled_runs, "runs": len(rows), "violations": check.count,
               "length_over_bound": _dist(slack_len), "x_penalty_over_bound": _dist(slack_pen)}
    return SuiteResult("scaled", 4, check.count == 0, summary, rows, check.messages)


# ------------------------------------------------------------------ clustering


def suite_clustering(ctx: _Context) -> SuiteResult:
    cfg = ctx.cfg
    check = _Checker()
    rows = []
    b = _base(cfg, 4)
    samples = exhaust_n = separate_n = 0
    for i in range(cfg.cluster_runs):
        seed = b + i
        rng = random.Random(seed)
        inst = _small_instance(seed, "forest", 24, 60, 8)
        norm = normalize_terminals(inst)
        for eps in (Fraction(1), Fraction(1, 2)):
            F = run_scaled(norm, eps).forest
            cg = contract_forest(norm.graph, F, eps)
            run = run_clustering(cg)
            q = cg.graph
            f2 = q.total_length(run.pruned)
            fl = norm.graph.total_length(F)
            check(f2 <= 2 * fl / eps, lambda: f"seed {seed} eps {eps}: Length(F2) {f2} > (2/eps) Length(F)")
            bad = verify_cluster_dual(run)
            check(not bad, lambda: f"seed {seed} eps {eps}: {bad[0]}")
            # random subgraphs pay for the potential they exhaust
            for _ in range(4):
                p = rng.random()
                H = [e for e in range(q.m) if rng.random() < p]
                ex = exhausted_vertices(H, run)
                paid = sum((cg.phi[v] for v in ex), ZERO)
                check(q.total_length(H) >= paid,
                      lambda: f"seed {seed} eps {eps}: Length(H) {q.total_length(H)} < exhausted potential {paid}")
                exhaust_n += 1
            # a path between different pruned components exhausts an endpoint
            comp = _connected(q, run.pruned)
            dt = DistanceTable(q)
            cands = [(u, v) for u in range(q.n) for v in range(u + 1, q.n)
                     if comp.find(u) != comp.find(v) and dt.reachable(u, v)]
            for u, v in rng.sample(cands, min(3, len(cands))):
                H = dt.path(u, v)
                if rng.random() < 0.5:
                    H = sorted(set(H) | {e for e in range(q.m) if rng.random() < 0.2})
                ex = set(exhausted_vertices(H, run))
                check(u in ex or v in ex, lambda: f"seed {seed} eps {eps}: H joining {u},{v} exhausts neither")
                separate_n += 1
            rows.append({"seed": seed, "epsilon": str(eps), "n": q.n, "m": q.m, "forest_length": str(fl),
                         "f2_length": str(f2), "bound": str(2 * fl / eps)})
    samples = exhaust_n + separate_n
    summary = {"clustering_runs": len(rows), "exhaustion_samples": exhaust_n, "separation_samples": separate_n,
               "violations": check.count}
    ok = check.count == 0 and samples >= min(1000, 8 * cfg.cluster_runs)
    return SuiteResult("clustering", 5, ok, summary, rows, check.messages)


# ------------------------------------------------------------------ DP


def _dp_instance(seed: int) -> PcInstance:
    for attempt in range(50):
        inst = _small_instance(seed * 53 + attempt, "tree", 12, 40, 5)
        td = heuristic_decomposition(inst.graph)
        if td.width <= 3:
            return inst
    raise RuntimeError(f"no width-3 instance for seed {seed}")


def suite_dp(ctx: _Context) -> SuiteResult:
    cfg = ctx.cfg
    check = _Checker()
    rows = []
    b = _base(cfg, 5)
    for i in range(cfg.dp_runs):
        inst = _dp_instance(b + i)
        res = solve_pcst(inst)
        _, opt = brute_force_pcsf(inst)
        ev = evaluate(inst, res.tree).cost
        check(res.cost == opt, lambda: f"seed {b + i}: dp {res.cost} != brute force {opt}")
        check(ev == res.cost, lambda: f"seed {b + i}: reconstruction evaluates to {ev}, table says {res.cost}")
        rows.append({"seed": b + i, "n": inst.graph.n, "m": inst.graph.m, "width": res.stats.width,
                     "dp": str(res.cost), "brute_force": str(opt), "entries": res.stats.entries})
    summary = {"instances": len(rows), "mismatches": check.count,
               "max_width": max((r["width"] for r in rows), default=0)}
    ok = check.count == 0 and len(rows) >= min(300, cfg.dp_runs)
    return SuiteResult("dp", 6, ok, summary, rows, check.messages)


# ------------------------------------------------------------------ spanner


def _spanner_inputs(cfg: SuiteConfig) -> list:
    """(label, instance, tree edges, terminals) with the gadget first."""
    out = [("gadget", strip_gadget(), (0, 1, 2), (0, 1, 2, 3))]
    b = _base(cfg, 6)
    for i in range(cfg.spanner_runs):
        inst = _small_instance(b + i, "tree", 20, 60, 5)
        norm = normalize_terminals(inst)
        T = _root_component(inst.graph, restrict_to_base(norm, run_scaled(norm, Fraction(1, 2)).forest), inst.root)
        if not T:
            continue
        reached = {x for e in T for x in inst.graph.edges[e][:2]}
        terms = sorted(v for v in reached if inst.vertex_penalties[v] > 0 or v == inst.root)
        out.append((str(b + i), inst, T, terms))
    return out


def suite_spanner(ctx: _Context) -> SuiteResult:
    check = _Checker()
    rows = []
    for label, inst, T, terms in _spanner_inputs(ctx.cfg):
        for eps in (Fraction(1), Fraction(1, 2)):
            for theta in (2, 4):
                res = build_spanner(inst.graph, inst.rotation, T, eps, theta, terms, root=inst.root)
                bounds = spanner_bounds(res)
                for name, (lhs, rhs) in bounds.items():
                    check(lhs <= rhs, lambda: f"{label} eps {eps} theta {theta}: {name} {lhs} > {rhs}")
                pg = res.portal_graph.check() if res.portal_graph is not None else []
                check(not pg, lambda: f"{label} eps {eps} theta {theta}: portal graph {pg[:1]}")
                worst = max((lhs / rhs for lhs, rhs in bounds.values() if rhs > 0), default=ZERO)
                rows.append({"instance": label, "epsilon": str(eps), "theta": theta,
                             "delta": str(res.outer.delta_length), "strips": len(res.strips),
                             "mortar": str(res.mortar.length), "spanner": str(res.length),
                             "bricks": len(res.bricks), "worst_bound_ratio": _fmt(worst)})
    gadget_strips = [r["strips"] for r in rows if r["instance"] == "gadget"]
    summary = {"runs": len(rows), "violations": check.count, "gadget_strips": sorted(set(gadget_strips))}
    return SuiteResult("spanner", 7, check.count == 0, summary, rows, check.messages)


# ------------------------------------------------------------------ contraction


def _random_forest(rng, g: WeightedGraph) -> list:
    uf = UnionFind(g.n)
    out = []
    for e in rng.sample(range(g.m), g.m):
        u, v, _ = g.edges[e]
        if rng.random() < 0.5 and uf.union(u, v):
            out.append(e)
    return sorted(out)


def suite_contraction(ctx: _Context) -> SuiteResult:
    cfg = ctx.cfg
    check = _Checker()
    rows = []
    b = _base(cfg, 7)
    for i in range(cfg.contraction_runs):
        seed = b + i
        rng = random.Random(seed)
        inst = _small_instance(seed, "tree", 30, 80, 5)
        g = inst.graph
        for k in (2, 3, 4):
            part = partition_edges(g, k, root=inst.root)
            cls = part.lengths[part.selected]
            total = g.total_length(range(g.m))
            check(cls <= total / k, lambda: f"seed {seed} k {k}: class length {cls} > Length(H)/k")
            con = contract_edges(inst, part.selected_edges)
            candidates = [("dp", solve_pcst(con.instance, max_width=6).tree)]
            candidates += [("random", _random_forest(rng, con.instance.graph)) for _ in range(2)]
            for how, F_hat in candidates:
                lifted, small, bound = check_lift(con, F_hat)
                check(lifted.cost <= bound, lambda: f"seed {seed} k {k} {how}: lifted {lifted.cost} > {bound}")
                rows.append({"seed": seed, "k": k, "solution": how, "class_length": str(cls),
                             "graph_length": str(total), "contracted_cost": str(small.cost),
                             "lifted_cost": str(lifted.cost), "bound": str(bound)})
    summary = {"instances": cfg.contraction_runs, "checks": len(rows), "violations": check.count}
    return SuiteResult("contraction", 8, check.count == 0, summary, rows, check.messages)


# ------------------------------------------------------------------ pipeline


def is_rooted_tree(g: WeightedGraph, edges, root: int) -> bool:
    if not edges:
        return True
    if not is_forest(g, edges):
        return False
    uf = _connected(g, edges)
    r = uf.find(root)
    return all(uf.find(g.edges[e][0]) == r for e in edges)


def suite_pipeline(ctx: _Context) -> SuiteResult:
    cfg = ctx.cfg
    check = _Checker()
    pc = PipelineConfig(epsilon=Fraction(1, 2), theta=4, k=3, seed=cfg.seed)
    rows, ratios = [], []
    b = _base(cfg, 8)
    for i in range(cfg.pipeline_runs):
        seed = b + i
        inst = _small_instance(seed, "tree", 12, 40, 5)
        res = ptas_pcst(inst, pc)
        _, opt = brute_force_pcsf(inst)
        feasible = is_rooted_tree(inst.graph, res.solution.edges, inst.root)
        check(feasible, lambda: f"seed {seed}: output is not a tree containing the root")
        check(res.ledger.total == res.solution.cost, lambda: f"seed {seed}: ledger {res.ledger.total} != cost")
        r = _ratio(res.solution.cost, opt)
        check(r is not None and r <= 4, lambda: f"seed {seed}: cost {res.solution.cost} vs OPT {opt}")
        if r is not None:
            ratios.append(r)
        rows.append({"seed": seed, "n": inst.graph.n, "m": inst.graph.m, "opt": str(opt),
                     "cost": str(res.solution.cost), "ratio": _fmt(r) if r is not None else "inf",
                     "feasible": int(feasible), "spanner_edges": res.stages["spanner"]["edges"]})
    med = median_low(ratios) if ratios else None
    summary = {"runs": len(rows), "config": pc.as_dict(), "failures": check.count,
               "ratio_to_opt": _dist(ratios), "median_target": "3/2"}
    ok = check.count == 0 and med is not None and med <= Fraction(3, 2)
    return SuiteResult("pipeline", 9, ok, summary, rows, check.messages)


# ------------------------------------------------------------------ determinism


def suite_determinism(ctx: _Context) -> SuiteResult:
    """Runs every other suite twice at quick size and compares report bytes."""
    quick = SuiteConfig.quick(ctx.cfg.seed)
    names = [n for n in SUITES if n != "determinism"]
    first = report_files(run_suites(names, quick), quick)
    second = report_files(run_suites(names, quick), quick)
    rows = []
    check = _Checker()
    for fname in sorted(set(first) | set(second)):
        a = hashlib.sha256(first.get(fname, b"")).hexdigest()
        z = hashlib.sha256(second.get(fname, b"")).hexdigest()
        check(a == z, f"{fname} differs between runs")
        rows.append({"file": fname, "sha256_first": a, "sha256_second": z, "identical": int(a == z)})
    summary = {"files": len(rows), "differing": check.count}
    return SuiteResult("determinism", 10, check.count == 0, summary, rows, check.messages)


SUITES = {
    "primal-dual": suite_primal_dual,
    "dual": suite_dual,
    "charges": suite_charges,
    "scaled": suite_scaled,
    "clustering": suite_clustering,
    "dp": suite_dp,
    "spanner": suite_spanner,
    "contraction": suite_contraction,
    "pipeline": suite_pipeline,
    "determinism": suite_determinism,
}


def resolve(selection) -> list:
    """Suite names from a list of names or comma lists; "all" expands, empty stays empty."""
    names = []
    for item in selection or ():
        for part in str(item).split(","):
            part = part.strip()
            if not part:
                continue
            if part == "all":
                names.extend(n for n in SUITES if n not in names)
            elif part not in SUITES:
                raise KeyError(f"unknown suite {part!r}; choose from {', '.join(SUITES)} or all")
            elif part not in names:
                names.append(part)
    return names


def run_suites(names, cfg: SuiteConfig | None = None, timings: dict | None = None) -> list:
    cfg = cfg or SuiteConfig()
    ctx = _Context(cfg)
    out = []
    for name in resolve(names):
        t0 = time.perf_counter()
        out.append(SUITES[name](ctx))
        if timings is not None:
            timings[name] = time.perf_counter() - t0
    return out


def _csv(rows) -> bytes:
    buf = io.StringIO()
    if rows:
        keys = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue().encode()


def report_files(results, cfg: SuiteConfig) -> dict:
    """File name to bytes; no timestamps or timings, so reruns match byte for byte."""
    doc = {"config": cfg.as_dict(), "suites": [r.as_dict() for r in results],
           "passed": all(r.passed for r in results)}
    files = {"report.json": (json.dumps(doc, indent=1, sort_keys=True) + "\n").encode()}
    files["summary.csv"] = _csv([{"criterion": r.criterion, "suite": r.name, "passed": int(r.passed),
                                  "rows": len(r.rows), "failures": len(r.failures)} for r in results])
    for r in results:
        files[f"{r.name}.csv"] = _csv(r.rows)
    return files


def write_report(results, cfg: SuiteConfig, out_dir, timings: dict | None = None) -> list:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, data in report_files(results, cfg).items():
        (out / name).write_bytes(data)
        written.append(out / name)
    if timings is not None:
        (out / "timings.json").write_text(json.dumps({k: round(v, 3) for k, v in timings.items()}, indent=1) + "\n")
        written.append(out / "timings.json")
    return written
