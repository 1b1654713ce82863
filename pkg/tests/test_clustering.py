from fractions import Fraction

import pytest

from pcsteiner.clustering import (
    contract_forest,
    exhausted_vertices,
    prune,
    run_clustering,
    split_instances,
    tree_groups,
    verify_cluster_dual,
)
from pcsteiner.generators import KINDS, generate
from pcsteiner.graph import ValidationError, WeightedGraph
from pcsteiner.instance import PcInstance, normalize_terminals
from pcsteiner.oracles import brute_force_pcsf
from pcsteiner.primal_dual import run_scaled

F = Fraction


def two_trees(bridge):
    """Two half-unit trees joined by one edge; at eps=1/2 each supervertex has potential 1."""
    g = WeightedGraph(4, [(0, 1, F(1, 2)), (2, 3, F(1, 2)), (1, 2, bridge)])
    return contract_forest(g, [0, 1], F(1, 2))


def test_contract_empty_forest_is_identity():
    g = WeightedGraph(3, [(0, 1, 2), (1, 2, 3)])
    cg = contract_forest(g, [], 1)
    assert cg.graph.edges == g.edges and all(p == 0 for p in cg.phi)


def test_contract_single_tree_potential():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 2)])
    cg = contract_forest(g, [0, 1], F(1, 2))
    assert cg.graph.n == 1 and cg.phi == (F(6),)


def test_contract_keeps_cheapest_parallel_edge():
    # one triangle edge contracted: the two remaining edges become parallel
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 5), (2, 0, 3)])
    cg = contract_forest(g, [0], 1)
    assert cg.graph.n == 2 and cg.graph.m == 1
    assert cg.graph.edges[0][2] == 3 and cg.edge_origin == (2,)


def test_contract_rejects_cycle():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    with pytest.raises(ValidationError):
        contract_forest(g, [0, 1, 2], 1)


def test_far_apart_supervertices_exhaust():
    run = run_clustering(two_trees(F(10)))
    assert run.tight == () and run.pruned == ()
    assert [e["t"] for e in run.events] == ["1", "1"]


def test_close_supervertices_merge():
    run = run_clustering(two_trees(F(3, 2)))
    assert run.events[0]["kind"] == "tight" and run.events[0]["t"] == "3/4"
    merged = run.components[-1]
    assert merged.vertices == (0, 1) and merged.y == F(1, 2)
    assert run.tight == (0,) and run.pruned == (0,)


def test_zero_potential_vertex_never_grows():
    g = WeightedGraph(2, [(0, 1, 1)])
    run = run_clustering(contract_forest(g, [], 1))
    assert not any(r.grew for r in run.components) and run.tight == ()


def test_prune_drops_edge_into_dead_singleton():
    g = WeightedGraph(3, [(0, 1, 5), (1, 2, 1)])
    run = run_clustering(contract_forest(g, [0], 1))
    assert run.tight == (0,)
    assert prune(run) == ()


def test_exhausted_examples():
    run = run_clustering(two_trees(F(10)))
    assert exhausted_vertices([], run) == []
    assert exhausted_vertices([0], run) == [0, 1]
    g = WeightedGraph(3, [(0, 1, 5), (1, 2, 1)])
    run = run_clustering(contract_forest(g, [0], 1))
    # vertex 1 has no positive dual, so even the empty graph exhausts it
    assert 1 in exhausted_vertices([], run)


def _forest_instance(edges, n, pairs):
    return PcInstance(WeightedGraph(n, edges), pairs=tuple(pairs))


def test_split_examples():
    # two far-apart pairs, each spanned by its own tree
    inst = _forest_instance([(0, 1, 1), (1, 2, 20), (2, 3, 1)], 4, [(0, 1, 10), (2, 3, 10)])
    cg = contract_forest(inst.graph, [0, 2], 1)
    run = run_clustering(cg)
    parts, uncond = split_instances(inst, run)
    assert len(parts) == 2 and uncond == ()
    for part in parts:
        assert sum(1 for _, _, p in part.instance.pairs if p > 0) == 1
    # a pair across the two trees is positive in neither part
    inst2 = inst.with_pairs(inst.pairs + ((0, 3, 5),))
    parts, uncond = split_instances(inst2, run)
    assert uncond == (2,)
    assert all(part.instance.pairs[2][2] == 0 for part in parts)
    # one tree connecting everything gives one part
    cg = contract_forest(inst.graph, [0, 1, 2], 1)
    parts, _ = split_instances(inst2, run_clustering(cg))
    assert len(parts) == 1 and parts[0].instance.pairs == inst2.pairs


def _runs(count=30, eps=F(1, 2)):
    for seed in range(count):
        inst = generate(KINDS[seed % 4], seed, size=10, mode="forest", pairs=4)
        norm = normalize_terminals(inst)
        F1 = run_scaled(norm, eps).forest
        cg = contract_forest(norm.graph, F1, eps)
        yield inst, norm, F1, cg, run_clustering(cg)


def test_pruned_length_and_dual_budget():
    for inst, norm, F1, cg, run in _runs():
        assert set(run.pruned) <= set(run.tight)
        assert cg.graph.total_length(run.pruned) <= 2 * norm.graph.total_length(F1) / cg.epsilon
        assert verify_cluster_dual(run) == []
        for verts, edges in tree_groups(cg, run.pruned):
            sub = {x for e in edges for x in norm.graph.edges[e][:2]}
            assert sub == set(verts)


def test_separate_parts_within_one_plus_eps_squared():
    """Sum of per-part optima is at most (1+eps)^2 OPT: (1+eps) for the split, (1+eps) for F*."""
    for eps in (F(1), F(1, 2)):
        for seed in range(24):
            inst = generate(KINDS[seed % 4], seed, size=6 if seed % 4 else 2, mode="forest", pairs=3)
            norm = normalize_terminals(inst)
            cg = contract_forest(norm.graph, run_scaled(norm, eps).forest, eps)
            parts, _ = split_instances(norm, run_clustering(cg))
            _, opt = brute_force_pcsf(inst)
            total = sum(brute_force_pcsf(p.instance, mode="steiner")[1] for p in parts)
            assert total <= (1 + eps) ** 2 * opt
