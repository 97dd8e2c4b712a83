import json
from fractions import Fraction as F

import pytest

from mgc.catalog import path4, star4, tripod
from mgc.errors import (
    DisconnectedGraph,
    DuplicateId,
    LoopEdge,
    MalformedDocument,
    NonpositiveLength,
    ParallelEdge,
    UnknownEdge,
    UnknownVertex,
    ValidationError,
)
from mgc.graph import classify_vertex, fraction_str, parse_graph, to_fraction


def doc(vertices, edges):
    return json.dumps({
        "vertices": vertices,
        "edges": [{"id": i, "from": a, "to": b, "length": ell} for i, a, b, ell in edges],
    })


def test_parse_path_with_rational_lengths():
    g = parse_graph(doc(["a", "b", "c"], [("e1", "a", "b", "3/2"), ("e2", "b", "c", 2)]))
    assert g.total_length == F(7, 2)
    assert g.edge("e1").length == F(3, 2)
    assert g.boundary_vertices == ("a", "c")
    assert g.interior_vertices == ("b",)
    assert g.is_linear


def test_round_trip_through_json():
    g = star4()
    again = parse_graph(g.to_json())
    assert again.to_dict() == g.to_dict()


def test_degrees_and_classification():
    g = star4()
    assert classify_vertex(g, "v2") == (3, "interior")
    assert classify_vertex(g, "v1") == (1, "boundary")
    assert not g.is_linear
    p = path4()
    assert classify_vertex(p, "v2") == (2, "interior")
    assert p.is_linear


def test_edge_orientation_helpers():
    g = tripod(1, 2, 3)
    e = g.edge("e1")
    assert e.end_at("v1") == "tail" and e.end_at("v2") == "head"
    assert e.coordinate_of("v1") == 0 and e.coordinate_of("v2") == 1
    assert g.edge_position("e3") == 2


@pytest.mark.parametrize(
    "vertices, edges, error",
    [
        (["a", "b"], [("e1", "a", "a", 1)], LoopEdge),
        (["a", "b"], [("e1", "a", "b", 1), ("e2", "b", "a", 2)], ParallelEdge),
        (["a", "b"], [("e1", "a", "b", 0)], NonpositiveLength),
        (["a", "b"], [("e1", "a", "b", "-1/2")], NonpositiveLength),
        (["a", "b", "c", "d"], [("e1", "a", "b", 1), ("e2", "c", "d", 1)], DisconnectedGraph),
        (["a", "b"], [("e1", "a", "x", 1)], UnknownVertex),
        (["a", "a"], [("e1", "a", "a", 1)], DuplicateId),
        (["a", "b", "c"], [("e1", "a", "b", 1), ("e1", "b", "c", 1)], DuplicateId),
        (["a"], [], MalformedDocument),
    ],
)
def test_invalid_graphs_are_rejected(vertices, edges, error):
    with pytest.raises(error):
        parse_graph(doc(vertices, edges))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        json.dumps({"vertices": ["a"]}),
        json.dumps({"vertices": ["a", "b"], "edges": [{"id": "e1", "from": "a", "to": "b"}]}),
        json.dumps({"vertices": ["a", "b"], "edges": [{"id": "e1", "from": "a", "to": "b", "length": 1.5}]}),
        json.dumps({"vertices": ["a", "b"], "edges": [{"id": "e1", "from": "a", "to": "b", "length": "x"}]}),
        json.dumps({"vertices": ["a", "b"], "edges": [{"id": 1, "from": "a", "to": "b", "length": 1}]}),
    ],
)
def test_malformed_documents(text):
    with pytest.raises(MalformedDocument):
        parse_graph(text)


def test_validation_errors_share_a_base_class():
    with pytest.raises(ValidationError):
        parse_graph("{}")


def test_unknown_edge_lookup():
    with pytest.raises(UnknownEdge):
        star4().edge("e9")


def test_rational_helpers():
    assert to_fraction("6/4") == F(3, 2)
    assert to_fraction(3) == 3
    with pytest.raises(MalformedDocument):
        to_fraction(0.5)
    with pytest.raises(MalformedDocument):
        to_fraction(True)
    with pytest.raises(MalformedDocument):
        to_fraction("1/0")
    assert fraction_str(F(-6, 4)) == "-3/2"
    assert fraction_str(F(4, 2)) == "2"
