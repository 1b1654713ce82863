"""Instance files: JSON and an extended DIMACS STP format.

JSON::

    {"n": 2, "edges": [[0, 1, "2"]], "pairs": [[0, 1, "6"]],
     "root": 0, "vertex_penalties": [[1, "3/2"]], "rotation": [[0], [1]]}

``root``/``vertex_penalties`` replace ``pairs`` for rooted instances, and
``rotation`` lists dart ids (``2e`` leaves the first endpoint of edge ``e``,
``2e + 1`` the second).  Numbers may be ints or strings such as ``"1.25"``
or ``"5/4"``; they are read exactly.

STP (vertices and edges are 1-based)::

    SECTION Graph        Nodes n / Edges m / E u v len
    SECTION Terminals    Root r / TP v penalty
    SECTION PrizePairs   Pairs h / P s t penalty
    SECTION Embedding    R v +e -e ...      (+e leaves u, -e leaves v)
"""

from __future__ import annotations

import json

from .graph import RotationSystem, ValidationError, WeightedGraph, to_rational
from .instance import PcInstance


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_instance(data, format: str = "json") -> PcInstance:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if format == "json":
        return _parse_json(data)
    if format in ("stp", "stp-ext"):
        return _parse_stp(data)
    raise ValueError(f"unknown format {format!r}")


def serialize_instance(inst: PcInstance, format: str = "json") -> bytes:
    if format == "json":
        return (json.dumps(instance_to_dict(inst), indent=1) + "\n").encode()
    if format in ("stp", "stp-ext"):
        return _write_stp(inst).encode()
    raise ValueError(f"unknown format {format!r}")


def guess_format(path: str) -> str:
    return "stp-ext" if str(path).lower().endswith(".stp") else "json"


def read_instance(path) -> PcInstance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read(), guess_format(path))


def write_instance(inst: PcInstance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize_instance(inst, guess_format(path)))


# ---------------------------------------------------------------- JSON


def instance_to_dict(inst: PcInstance) -> dict:
    g = inst.graph
    out = {"n": g.n, "edges": [[u, v, str(w)] for u, v, w in g.edges]}
    if inst.root is None:
        out["pairs"] = [[s, t, str(p)] for s, t, p in inst.pairs]
    else:
        out["pairs"] = []
        out["root"] = inst.root
        out["vertex_penalties"] = [[v, str(p)] for v, p in enumerate(inst.vertex_penalties) if p != 0]
    if inst.rotation is not None:
        out["rotation"] = [list(r) for r in inst.rotation.order]
        if inst.rotation.outer is not None:
            out["outer"] = inst.rotation.outer
    return out


def instance_from_dict(doc: dict) -> PcInstance:
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    try:
        n = int(doc["n"])
        edges = [(int(u), int(v), to_rational(w)) for u, v, w in doc.get("edges", [])]
        g = WeightedGraph(n, edges)
        rot = None
        if doc.get("rotation") is not None:
            rot = RotationSystem(tuple(tuple(r) for r in doc["rotation"]), doc.get("outer"))
        if doc.get("root") is not None:
            pen = [0] * n
            for v, p in doc.get("vertex_penalties", []):
                v = int(v)
                if not 0 <= v < n:
                    raise ValidationError(f"penalty for vertex {v} outside 0..{n - 1}")
                pen[v] = to_rational(p)
            return PcInstance(g, root=int(doc["root"]), vertex_penalties=tuple(pen), rotation=rot)
        pairs = [(int(s), int(t), to_rational(p)) for s, t, p in doc.get("pairs", [])]
        return PcInstance(g, pairs=tuple(pairs), rotation=rot)
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed instance: {exc!r}") from None


def _parse_json(text: str) -> PcInstance:
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    return instance_from_dict(doc)


# ---------------------------------------------------------------- STP


def _write_stp(inst: PcInstance) -> str:
    g = inst.graph
    lines = ["33D32945 STP File, STP Format Version 1.0", "", "SECTION Graph", f"Nodes {g.n}", f"Edges {g.m}"]
    lines += [f"E {u + 1} {v + 1} {w}" for u, v, w in g.edges]
    lines += ["END", ""]
    if inst.root is not None:
        tp = [(v, p) for v, p in enumerate(inst.vertex_penalties) if p != 0]
        lines += ["SECTION Terminals", f"Terminals {len(tp)}", f"Root {inst.root + 1}"]
        lines += [f"TP {v + 1} {p}" for v, p in tp]
        lines += ["END", ""]
    else:
        lines += ["SECTION PrizePairs", f"Pairs {len(inst.pairs)}"]
        lines += [f"P {s + 1} {t + 1} {p}" for s, t, p in inst.pairs]
        lines += ["END", ""]
    if inst.rotation is not None:
        lines.append("SECTION Embedding")
        if inst.rotation.outer is not None:
            lines.append(f"Outer {_dart_token(inst.rotation.outer)}")
        for v, r in enumerate(inst.rotation.order):
            lines.append(" ".join([f"R {v + 1}"] + [_dart_token(d) for d in r]))
        lines += ["END", ""]
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _dart_token(d: int) -> str:
    return f"{'-' if d & 1 else '+'}{(d >> 1) + 1}"


def _parse_dart(tok: str, lineno: int) -> int:
    if len(tok) < 2 or tok[0] not in "+-" or not tok[1:].isdigit():
        raise ParseError(f"bad dart token {tok!r}", lineno)
    return 2 * (int(tok[1:]) - 1) + (tok[0] == "-")


def _parse_stp(text: str) -> PcInstance:
    n = None
    edges, pairs, rotation = [], [], {}
    root, outer = None, None
    penalties = {}
    section = None
    saw_header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if not saw_header:
            if "stp" not in line.lower():
                raise ParseError("missing STP header", lineno)
            saw_header = True
            continue
        if head == "eof":
            break
        if head == "section":
            if len(tokens) != 2:
                raise ParseError("SECTION needs a name", lineno)
            section = tokens[1].lower()
            continue
        if head == "end":
            section = None
            continue
        try:
            if section == "graph":
                if head == "nodes":
                    n = int(tokens[1])
                elif head == "e":
                    u, v = int(tokens[1]) - 1, int(tokens[2]) - 1
                    edges.append((u, v, to_rational(tokens[3])))
                elif head not in ("edges", "arcs"):
                    raise ParseError(f"unexpected {tokens[0]!r} in Graph", lineno)
            elif section == "terminals":
                if head in ("root", "rootp"):
                    root = int(tokens[1]) - 1
                elif head == "tp":
                    penalties[int(tokens[1]) - 1] = to_rational(tokens[2])
                elif head == "t":
                    penalties.setdefault(int(tokens[1]) - 1, to_rational(0))
                elif head != "terminals":
                    raise ParseError(f"unexpected {tokens[0]!r} in Terminals", lineno)
            elif section == "prizepairs":
                if head == "p":
                    pairs.append((int(tokens[1]) - 1, int(tokens[2]) - 1, to_rational(tokens[3])))
                elif head != "pairs":
                    raise ParseError(f"unexpected {tokens[0]!r} in PrizePairs", lineno)
            elif section == "embedding":
                if head == "r":
                    rotation[int(tokens[1]) - 1] = tuple(_parse_dart(t, lineno) for t in tokens[2:])
                elif head == "outer":
                    outer = _parse_dart(tokens[1], lineno)
                else:
                    raise ParseError(f"unexpected {tokens[0]!r} in Embedding", lineno)
            elif section is None:
                raise ParseError(f"content outside a section: {tokens[0]!r}", lineno)
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"malformed line {raw.strip()!r}", lineno) from None
    if n is None:
        raise ParseError("no Nodes line in SECTION Graph")
    g = WeightedGraph(n, edges)
    rot = None
    if rotation:
        rot = RotationSystem(tuple(rotation.get(v, ()) for v in range(n)), outer)
    if root is not None:
        pen = [0] * n
        for v, p in penalties.items():
            if not 0 <= v < n:
                raise ValidationError(f"penalty for vertex {v + 1} outside 1..{n}")
            pen[v] = p
        return PcInstance(g, root=root, vertex_penalties=tuple(pen), rotation=rot)
    return PcInstance(g, pairs=tuple(pairs), rotation=rot)
