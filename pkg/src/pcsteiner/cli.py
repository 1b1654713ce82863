"""Command line: solve, verify, gen, bench.

Exit status is 0 when everything checks out, 1 when a check fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .generators import KINDS, generate
from .graph import ValidationError, check_embedding
from .instance import normalize_terminals
from .io import ParseError, instance_from_dict, instance_to_dict, parse_instance, read_instance, write_instance

ALGORITHMS = ("pd", "pd-scaled", "dp", "pipeline", "brute")
CHECKS = ("dual", "decomposition", "embedding", "bounds")


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _load(path: str):
    """Instance plus the parsed document when the file is a ``solve`` output."""
    p = Path(path)
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    if p.suffix.lower() == ".json":
        doc = json.loads(p.read_text(), parse_float=str)
        if isinstance(doc, dict) and "instance" in doc:
            return instance_from_dict(doc["instance"]), doc
        return parse_instance(p.read_text(), "json"), None
    return read_instance(p), None


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pipeline_config(args):
    from .pipeline import PipelineConfig

    solver = args.solver or "exact-dp"
    return PipelineConfig(epsilon=args.epsilon, theta=args.theta, k=args.k, solver=solver, seed=args.seed)


def cmd_solve(args) -> int:
    inst, _ = _load(args.input)
    doc = {"algorithm": args.alg, "instance": instance_to_dict(inst)}
    if args.alg in ("pd", "pd-scaled"):
        from .primal_dual import solve_primal_dual, verify_dual

        eps = args.epsilon if args.alg == "pd-scaled" else None
        sol, run = solve_primal_dual(inst, eps)
        rep = verify_dual(run.dual, run.instance)
        doc.update(solution=sol.as_dict(), dual=run.dual.as_dict(), dual_value=str(run.dual.value),
                   dual_feasible=rep.ok)
        if eps is not None:
            doc["epsilon"] = str(eps)
        ok = rep.ok and (eps is not None or sol.cost <= 4 * run.dual.value)
    elif args.alg == "dp":
        from .dp import solve_pcst

        if inst.mode != "tree":
            raise UsageError("the dp solver needs a rooted instance")
        res = solve_pcst(inst, max_width=args.max_width)
        doc.update(solution=res.solution.as_dict(), width=res.stats.width, entries=res.stats.entries)
        ok = True
    elif args.alg == "brute":
        from .oracles import brute_force_pcsf

        sol, cost = brute_force_pcsf(inst)
        doc.update(solution=sol.as_dict())
        ok = sol.cost == cost
    else:
        from .pipeline import ptas_pcst, solve_pcsf_reduced

        cfg = _pipeline_config(args)
        if inst.mode == "tree":
            res = ptas_pcst(inst, cfg)
        else:
            if cfg.solver == "exact-dp":
                cfg = _pipeline_config(argparse.Namespace(**{**vars(args), "solver": "brute-force"}))
            res = solve_pcsf_reduced(inst, cfg)
        doc.update(config=cfg.as_dict(), **res.as_dict())
        ok = res.ledger.total == res.solution.cost
    _emit(doc, args.output)
    return 0 if ok else 1


def _tree_for_bounds(inst, eps):
    from .instance import restrict_to_base
    from .pipeline import _root_component
    from .primal_dual import run_scaled

    if inst.mode != "tree":
        raise UsageError("bounds verification needs a rooted instance (the tree is taken from the scaled run)")
    norm = normalize_terminals(inst)
    T = _root_component(inst.graph, restrict_to_base(norm, run_scaled(norm, eps).forest), inst.root)
    reached = {x for e in T for x in inst.graph.edges[e][:2]}
    terms = sorted(v for v in reached if inst.vertex_penalties[v] > 0 or v == inst.root)
    return T, terms


def cmd_verify(args) -> int:
    inst, doc = _load(args.input)
    if args.check == "embedding":
        if inst.rotation is None:
            raise UsageError("the instance carries no rotation system")
        rep = check_embedding(inst.graph, inst.rotation)
        _emit({"check": "embedding", **rep.as_dict()}, args.output)
        return 0 if rep.ok else 1
    if args.check == "dual":
        from .primal_dual import DualAssignment, solve_primal_dual, verify_dual

        norm = normalize_terminals(inst)
        if doc is not None and "dual" in doc:
            dual = DualAssignment.from_dict(doc["dual"])
        else:
            dual = solve_primal_dual(inst)[1].dual
        rep = verify_dual(dual, norm)
        _emit({"check": "dual", **rep.as_dict()}, args.output)
        return 0 if rep.ok else 1
    if args.check == "decomposition":
        from .treewidth import heuristic_decomposition, make_nice, td_from_text, verify_decomposition, verify_nice

        if args.td:
            td, n = td_from_text(Path(args.td).read_text())
            if n != inst.graph.n:
                raise UsageError(f"decomposition covers {n} vertices, instance has {inst.graph.n}")
        else:
            td = heuristic_decomposition(inst.graph)
        rep = verify_decomposition(inst.graph, td)
        out = {"check": "decomposition", **rep.as_dict()}
        if rep.ok:
            nice = verify_nice(inst.graph, make_nice(td, inst.root))
            out["nice"] = nice.as_dict()
            ok = nice.ok
        else:
            ok = False
        _emit(out, args.output)
        return 0 if ok else 1
    from .spanner import build_spanner

    if inst.rotation is None:
        raise UsageError("the instance carries no rotation system")
    T, terms = _tree_for_bounds(inst, args.epsilon)
    if not T:
        _emit({"check": "bounds", "ok": True, "note": "scaled forest is empty; nothing to bound"}, args.output)
        return 0
    res = build_spanner(inst.graph, inst.rotation, T, args.epsilon, args.theta, terms, root=inst.root)
    bad = res.violations()
    _emit({"check": "bounds", "ok": not bad, "bounds": {k: [str(a), str(b)] for k, (a, b) in res.bounds.items()},
           "violations": bad}, args.output)
    return 0 if not bad else 1


def cmd_gen(args) -> int:
    params = {"mode": args.mode}
    if args.size is not None:
        params["size"] = args.size
    if args.mode == "tree":
        params["terminals"] = args.terminals
    else:
        params["pairs"] = args.pairs
    inst = generate(args.kind, args.seed, **params)
    write_instance(inst, args.out)
    return 0


def cmd_bench(args) -> int:
    from .suites import SuiteConfig, resolve, run_suites, write_report

    names = resolve(args.suite)
    cfg = SuiteConfig.quick(args.seed) if args.quick else SuiteConfig(seed=args.seed)
    timings = {}
    t0 = time.perf_counter()
    results = run_suites(names, cfg, timings)
    timings["total"] = time.perf_counter() - t0
    write_report(results, cfg, args.out, timings)
    for r in results:
        print(f"criterion {r.criterion:>2} {r.name:<12} {'PASS' if r.passed else 'FAIL'}")
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcsteiner", description="Prize-collecting Steiner tree/forest tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("--alg", choices=ALGORITHMS, required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--epsilon", type=_rational, default=Fraction(1, 2))
    s.add_argument("--theta", type=int, default=4)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--solver", choices=("exact-dp", "brute-force"))
    s.add_argument("--max-width", type=int, default=7)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a certificate or structural bound")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("--input", required=True)
    v.add_argument("--output")
    v.add_argument("--td", help="PACE .td file (decomposition check)")
    v.add_argument("--epsilon", type=_rational, default=Fraction(1, 2))
    v.add_argument("--theta", type=int, default=4)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="write a seeded planar instance")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--size", type=int)
    g.add_argument("--mode", choices=("tree", "forest"), default="tree")
    g.add_argument("--terminals", type=int, default=3)
    g.add_argument("--pairs", type=int, default=3)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run acceptance suites and write CSV/JSON reports")
    b.add_argument("--suite", action="append", default=[], help="suite name, comma list, or 'all'; repeatable")
    b.add_argument("--out", required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--quick", action="store_true", help="small instance counts")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ParseError, ValidationError, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pcsteiner: error: {msg}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"pcsteiner: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
