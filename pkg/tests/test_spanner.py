from fractions import Fraction

import pytest

from pcsteiner.generators import KINDS, generate
from pcsteiner.graph import ValidationError, WeightedGraph, rotation_from_coordinates
from pcsteiner.instance import normalize_terminals, restrict_to_base
from pcsteiner.pipeline import _root_component
from pcsteiner.primal_dual import run_scaled
from pcsteiner.spanner import (
    BudgetError,
    MortarGraph,
    build_mortar,
    build_spanner,
    check_outer_face,
    decompose_strips,
    enumerate_bricks,
    is_eps_short,
    portal_positions,
    portal_report,
    select_supercolumns,
    splice_open,
    supercolumn_k,
)
from pcsteiner.suites import strip_gadget

F = Fraction


def embedded(n, edges, coords):
    g = WeightedGraph(n, edges)
    return g, rotation_from_coordinates(g, coords)


def wheel():
    coords = [(0, 0), (2, 0), (0, 2), (-2, 0), (0, -2)]
    edges = [(0, 1, 1), (0, 2, 2), (0, 3, 3), (0, 4, 1), (1, 2, 5), (2, 3, 5), (3, 4, 5), (4, 1, 5)]
    return embedded(5, edges, coords)


# ------------------------------------------------------------ splice


def test_splice_single_edge():
    g, rot = embedded(3, [(0, 1, 3), (1, 2, 1), (2, 0, 1)], [(0, 0), (2, 0), (1, 2)])
    ofg = splice_open(g, rot, (0,), root=0)
    assert len(ofg.delta) == 2 and ofg.delta_length == 6
    assert check_outer_face(ofg) == []


def test_splice_star_in_wheel():
    g, rot = wheel()
    T = (0, 1, 2)
    ofg = splice_open(g, rot, T, terminals=(1, 2, 3), root=0)
    assert ofg.delta_length == 2 * g.total_length(T)
    assert check_outer_face(ofg) == []
    # the hub splits into three corners, one per gap between tree spokes
    assert sum(1 for v in ofg.vertex_map if v == 0) == 3
    assert {ofg.vertex_map[v] for v in ofg.delta_vertices()} >= {0, 1, 2, 3}
    assert sorted(ofg.edge_map) == sorted(list(range(g.m)) + list(T))


def test_splice_tree_graph_is_doubled_cycle():
    g, rot = embedded(4, [(0, 1, 1), (1, 2, 2), (1, 3, 1)], [(0, 0), (1, 0), (2, 0), (1, 1)])
    ofg = splice_open(g, rot, (0, 1, 2), root=0)
    assert ofg.graph.m == 6 and {d >> 1 for d in ofg.delta} == set(range(6))
    assert check_outer_face(ofg) == []


def test_splice_empty_tree():
    g, rot = wheel()
    ofg = splice_open(g, rot, ())
    assert ofg.delta == () and ofg.graph == g


@pytest.mark.parametrize("kind", KINDS)
def test_splice_generated(kind):
    for seed in range(15):
        inst = generate(kind, seed, size=8)
        norm = normalize_terminals(inst)
        T = _root_component(inst.graph, restrict_to_base(norm, run_scaled(norm, F(1, 2)).forest), inst.root)
        if not T:
            continue
        ofg = splice_open(inst.graph, inst.rotation, T, root=inst.root)
        assert check_outer_face(ofg) == []


# ------------------------------------------------------------ short paths and strips


def test_eps_short_examples():
    g = WeightedGraph(3, [(0, 1, F(3, 2)), (1, 2, F(3, 2)), (0, 2, 1)])
    assert not is_eps_short(g, [0, 2], 1)
    assert is_eps_short(g, [0], 0)
    assert is_eps_short(g, [4], 0)
    assert is_eps_short(g, [], 1, start=2)
    assert is_eps_short(g, [0, 2], 2)


def test_strip_gadget_one_strip():
    inst = strip_gadget()
    ofg = splice_open(inst.graph, inst.rotation, (0, 1, 2), root=0)
    strips, _ = decompose_strips(ofg, 1)
    assert len(strips) == 1
    assert ofg.to_source_edges(d >> 1 for d in strips[0].north) == {3}
    assert build_mortar(ofg, strips).edges == (0, 1, 2, 3)


def test_no_strips_when_outer_face_is_short():
    g, rot = embedded(3, [(0, 1, 1), (1, 2, 1)], [(0, 0), (1, 0), (2, 0)])
    ofg = splice_open(g, rot, (0, 1), root=0)
    assert decompose_strips(ofg, F(1, 4))[0] == []
    single = splice_open(*embedded(2, [(0, 1, 5)], [(0, 0), (1, 0)]), (0,), root=0)
    assert decompose_strips(single, F(1, 4))[0] == []
    mortar = build_mortar(ofg, [])
    assert mortar.edges == (0, 1) and mortar.strip_edges == ()


def test_supercolumn_k():
    assert supercolumn_k(F(1, 2)) == 12
    assert supercolumn_k(1) == 2


def _runs():
    for seed in range(40):
        inst = generate(KINDS[seed % 4], seed, size=9 if seed % 4 else 4)
        norm = normalize_terminals(inst)
        T = _root_component(inst.graph, restrict_to_base(norm, run_scaled(norm, F(1, 2)).forest), inst.root)
        if T:
            yield inst, T


def test_supercolumn_pigeonhole_and_empty_classes():
    sparse = 0
    for inst, T in _runs():
        ofg = splice_open(inst.graph, inst.rotation, T, root=inst.root)
        for eps in (F(1), F(1, 2)):
            strips, _ = decompose_strips(ofg, eps)
            for s in strips:
                cols, sup = select_supercolumns(s, eps)
                total = sum(s.column_lengths, F(0))
                assert s.supercolumn_length() <= total / s.k
                assert set(sup) <= {e for c in cols for e in c}
                if len(cols) < s.k:
                    sparse += 1
                    assert s.supercolumn_length() == 0
    assert sparse > 0


# ------------------------------------------------------------ bricks and portals


def two_room_house():
    coords = [(0, 0), (4, 0), (4, 4), (0, 4), (3, 1), (1, 3)]
    edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1),
             (4, 0, 1), (4, 1, 1), (4, 2, 1), (5, 0, 1), (5, 2, 1), (5, 3, 1)]
    return embedded(6, edges, coords)


def test_bricks_two_faces():
    g, rot = two_room_house()
    mg = MortarGraph((0, 1, 2, 3, 4), (0, 1, 2), (3, 4), (), F(5), frozenset(range(4)))
    bricks = enumerate_bricks(g, rot, mg)
    assert len(bricks) == 2
    interiors = sorted(e for b in bricks for e in b.interior)
    assert interiors == list(range(5, 11))
    assert all(b.interior for b in bricks)


def test_one_chord_one_brick():
    g, rot = embedded(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1), (0, 2, 1)],
                      [(0, 0), (1, 0), (1, 1), (0, 1)])
    mg = MortarGraph((0, 1, 2, 3), (0, 1, 2), (3,), (), F(4), frozenset(range(4)))
    bricks = enumerate_bricks(g, rot, mg)
    assert len(bricks) == 1 and bricks[0].interior == (4,)
    assert enumerate_bricks(g, rot, MortarGraph(tuple(range(5)), (), (), (), F(5), frozenset())) == []


def test_portal_positions_strict_rule():
    assert portal_positions([1, 1, 1, 1], 2, 0) == [0, 3]
    assert portal_positions([1, 1, 1, 1], 1, 0) == [0]
    assert portal_positions([1, 1, 1, 1], 8, 0) == [0, 1, 2, 3]
    assert portal_positions([1, 1, 1, 1], 2, 2) == [2, 1]
    with pytest.raises(ValidationError):
        portal_positions([1], 0)


def test_portals_cover_boundary():
    for inst, T in _runs():
        for theta in (1, 2, 3, 4):
            res = build_spanner(inst.graph, inst.rotation, T, F(1, 2), theta, root=inst.root,
                                with_portal_graph=False)
            for b in res.bricks:
                assert portal_report(inst.graph, b, theta) == []
                assert len(b.portal_positions) <= theta


# ------------------------------------------------------------ whole spanner


def test_spanner_on_tree_graph_is_mortar():
    g, rot = embedded(3, [(0, 1, 1), (1, 2, 1)], [(0, 0), (1, 0), (2, 0)])
    res = build_spanner(g, rot, (0, 1), F(1, 2), 2, root=0)
    assert res.bricks == [] and res.edges == res.mortar.edges == (0, 1)


def test_gadget_bounds():
    inst = strip_gadget()
    for eps in (F(1), F(1, 2)):
        res = build_spanner(inst.graph, inst.rotation, (0, 1, 2), eps, 2, root=0)
        assert res.violations() == []


def test_theta_two_adds_at_most_one_tree_per_brick():
    g, rot = two_room_house()
    res = build_spanner(g, rot, (0, 1, 2), F(1, 2), 2, root=0)
    for b in res.bricks:
        assert sum(1 for (i, _) in res.brick_trees if i == b.index) <= 1


def test_theta_budget():
    inst = strip_gadget()
    with pytest.raises(BudgetError):
        build_spanner(inst.graph, inst.rotation, (0, 1, 2), 1, 11, root=0, max_theta=10)


@pytest.mark.parametrize("eps", [F(1), F(1, 2)])
@pytest.mark.parametrize("theta", [2, 4])
def test_bounds_and_portal_graph(eps, theta):
    for inst, T in _runs():
        res = build_spanner(inst.graph, inst.rotation, T, eps, theta, root=inst.root)
        assert res.violations() == []
        assert set(res.mortar.edges) <= set(res.edges)
        assert set(T) <= set(res.mortar.edges)
        if res.portal_graph is not None:
            pg = res.portal_graph
            assert pg.check() == []
            interior = {e for b in res.bricks for e in b.interior}
            copies = [e for e, kd in zip(pg.edge_map, pg.kind) if kd == "brick" and e in interior]
            # interior edges are copied once; boundary edges once per adjacent brick
            assert sorted(copies) == sorted(interior)
            assert sum(1 for kd in pg.kind if kd == "portal") == sum(len(b.portal_positions) for b in res.bricks)
            assert set(res.mortar.edges) <= {e for e, kd in zip(pg.edge_map, pg.kind) if kd == "mortar"}
