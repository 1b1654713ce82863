import json
from fractions import Fraction

import networkx as nx
import pytest

from pcsteiner.generators import KINDS, generate
from pcsteiner.graph import (
    RotationSystem,
    ValidationError,
    WeightedGraph,
    check_embedding,
    is_forest,
    rotation_from_coordinates,
    rotation_from_networkx,
    to_rational,
)
from pcsteiner.instance import PcInstance, evaluate, is_normalized, normalize_terminals, restrict_to_base
from pcsteiner.io import ParseError, parse_instance, serialize_instance, read_instance, write_instance
from pcsteiner.oracles import brute_force_pcsf

F = Fraction


def k2(pi):
    return PcInstance(WeightedGraph(2, [(0, 1, 2)]), pairs=((0, 1, pi),))


def triangle():
    g = WeightedGraph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)])
    return g, rotation_from_coordinates(g, [(0, 0), (2, 0), (1, 2)])


# ------------------------------------------------------------ parsing


def test_parse_json_example():
    doc = '{"n": 2, "edges": [[0, 1, "2"]], "pairs": [[0, 1, "6"]]}'
    inst = parse_instance(doc, "json")
    assert inst.graph.n == 2 and inst.graph.edges == ((0, 1, F(2)),)
    assert inst.pairs == ((0, 1, F(6)),)


@pytest.mark.parametrize("fmt", ["json", "stp"])
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("mode", ["tree", "forest"])
def test_round_trip(fmt, kind, mode):
    inst = generate(kind, 5, mode=mode)
    again = parse_instance(serialize_instance(inst, fmt), fmt)
    assert again == inst
    assert again.rotation.order == inst.rotation.order


def test_file_round_trip(tmp_path):
    inst = generate("grid", 1, size=3)
    for name in ("a.json", "a.stp"):
        write_instance(inst, tmp_path / name)
        assert read_instance(tmp_path / name) == inst


def test_negative_length_rejected():
    with pytest.raises(ValidationError):
        parse_instance('{"n": 2, "edges": [[0, 1, "-1"]], "pairs": []}', "json")


@pytest.mark.parametrize("bad", ['{"n": 2, "edges": [[0, 5, "1"]]}', '{"edges": []}', "[1, 2", '{"n": 2, "pairs": [[0, 0, "1"]]}'])
def test_malformed_inputs(bad):
    with pytest.raises((ParseError, ValidationError)):
        parse_instance(bad, "json")


def test_floats_rejected_but_decimals_exact():
    assert to_rational("0.1") == F(1, 10)
    with pytest.raises(ValidationError):
        to_rational(0.1)


def test_stp_sections_parse():
    text = "\n".join([
        "33D32945 STP File, STP Format Version 1.0",
        "SECTION Graph", "Nodes 3", "Edges 2", "E 1 2 3/2", "E 2 3 1", "END",
        "SECTION Terminals", "Root 1", "TP 3 5", "END", "EOF",
    ])
    inst = parse_instance(text, "stp")
    assert inst.root == 0
    assert inst.graph.edges[0][2] == F(3, 2)
    assert inst.vertex_penalties[2] == 5


# ------------------------------------------------------------ embeddings


def test_triangle_embedding():
    g, rot = triangle()
    rep = check_embedding(g, rot)
    assert rep.ok and rep.faces == 2


def test_k5_fails_euler():
    edges = [(a, b, 1) for a in range(5) for b in range(a + 1, 5)]
    g = WeightedGraph(5, edges)
    rot = RotationSystem(tuple(tuple(g.darts_at(v)) for v in range(5)))
    rep = check_embedding(g, rot)
    assert not rep.ok


def test_single_edge_single_face():
    g = WeightedGraph(2, [(0, 1, 3)])
    rot = RotationSystem(((0,), (1,)))
    rep = check_embedding(g, rot)
    assert rep.ok and rep.faces == 1
    assert rot.faces() == [[0, 1]] or sorted(rot.faces()[0]) == [0, 1]


def test_broken_rotation_reported():
    g, _ = triangle()
    rep = check_embedding(g, RotationSystem(((0,), (1, 2), (3, 4, 5))))
    assert not rep.ok and rep.errors


@pytest.mark.parametrize("kind", KINDS)
def test_generators_planar_and_deterministic(kind):
    for seed in range(10):
        a = generate(kind, seed, size=7)
        b = generate(kind, seed, size=7)
        assert a == b and a.rotation.order == b.rotation.order
        rep = check_embedding(a.graph, a.rotation)
        assert rep.ok, rep.errors
        faces = a.rotation.faces()
        sides = sorted(d for walk in faces for d in walk)
        assert sides == list(range(2 * a.graph.m))


def test_grid_2x2():
    inst = generate("grid", 0, rows=2, cols=2)
    assert (inst.graph.n, inst.graph.m) == (4, 4)
    assert check_embedding(inst.graph, inst.rotation).ok


def test_rotation_from_networkx_planar():
    G = nx.wheel_graph(6)
    g = WeightedGraph(6, [(u, v, 1) for u, v in G.edges()])
    rot = rotation_from_networkx(g)
    assert check_embedding(g, rot).ok


# ------------------------------------------------------------ evaluate / normalize


def test_evaluate_examples():
    inst = k2(6)
    assert evaluate(inst, [0]).cost == 2
    assert evaluate(inst, []).cost == 6
    g = generate("grid", 2, size=3, mode="forest")
    assert evaluate(g, []).penalty == g.total_penalty()
    assert evaluate(g, range(g.graph.m)).penalty == 0


def test_evaluate_rejects_bad_ids():
    with pytest.raises(ValidationError):
        evaluate(k2(1), [3])


def test_normalize_degree3_terminal():
    g = WeightedGraph(4, [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
    inst = PcInstance(g, pairs=((0, 1, 5),))
    norm = normalize_terminals(inst)
    assert is_normalized(norm)
    s, t, p = norm.pairs[0]
    assert s == 4 and norm.graph.edges[3] == (0, 4, 0)
    assert t == 1 and p == 5
    assert normalize_terminals(norm) is norm


def test_normalize_tree_instance_matches_optimum():
    for seed in range(6):
        inst = generate("series-parallel", seed, size=6, terminals=2)
        norm = normalize_terminals(inst)
        assert norm.mode == "forest" and len(norm.pairs) == sum(1 for p in inst.vertex_penalties if p > 0)
        a = brute_force_pcsf(inst)[1]
        b = brute_force_pcsf(norm, mode="steiner")[1]
        assert a == b
        F, _ = brute_force_pcsf(norm, mode="steiner")
        assert evaluate(inst, restrict_to_base(norm, F.edges)).cost == b


def test_forest_check():
    g, _ = triangle()
    assert is_forest(g, [0, 1]) and not is_forest(g, [0, 1, 2])


def test_instance_validation():
    g = WeightedGraph(2, [(0, 1, 1)])
    with pytest.raises(ValidationError):
        PcInstance(g, pairs=((0, 1, -1),))
    with pytest.raises(ValidationError):
        PcInstance(g, root=3)
    with pytest.raises(ValidationError):
        WeightedGraph(2, [(0, 2, 1)])


def test_json_is_plain_strings():
    inst = generate("ring-chords", 3, mode="forest")
    doc = json.loads(serialize_instance(inst, "json"))
    assert all(isinstance(w, str) for _, _, w in doc["edges"])
