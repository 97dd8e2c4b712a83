"""Compact connected metric graphs: data model, validation and JSON I/O."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import (
    DisconnectedGraph,
    DuplicateId,
    LoopEdge,
    MalformedDocument,
    NonpositiveLength,
    ParallelEdge,
    UnknownEdge,
    UnknownVertex,
)


def to_fraction(value, what="value") -> Fraction:
    """Parse an exact rational from an int or a ``"p/q"`` string.

    Floats are refused: they would silently bring binary rounding into
    quantities that are supposed to be exact.
    """
    if isinstance(value, bool):
        raise MalformedDocument(f"{what}: expected rational, got boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedDocument(f"{what}: cannot parse {value!r} as a rational") from exc
    raise MalformedDocument(f"{what}: expected int or rational string, got {type(value).__name__}")


def fraction_str(q: Fraction) -> str:
    """Canonical text form: reduced, positive denominator, ``"p"`` when integral."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str   # i_e, coordinate 0
    head: str   # f_e, coordinate length
    length: Fraction

    def end_at(self, v: str) -> str:
        """``"tail"`` or ``"head"``: which end of the edge sits at vertex ``v``."""
        if v == self.tail:
            return "tail"
        if v == self.head:
            return "head"
        raise UnknownVertex(f"vertex {v!r} is not incident to edge {self.id!r}")

    def coordinate_of(self, v: str) -> Fraction:
        return Fraction(0) if self.end_at(v) == "tail" else self.length


@dataclass(frozen=True)
class MetricGraph:
    """A finite, connected metric graph without loops or parallel edges.

    Each edge is the interval ``[0, length]`` with ``0`` at ``tail``.
    Instances are immutable; construct them through :meth:`build` or
    :func:`parse_graph`, both of which validate.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    _edge_index: dict = field(init=False, repr=False, compare=False)
    _incidence: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_edge_index", {e.id: e for e in self.edges})
        inc = {v: [] for v in self.vertices}
        for e in self.edges:
            if e.tail in inc:
                inc[e.tail].append(e)
            if e.head in inc:
                inc[e.head].append(e)
        object.__setattr__(self, "_incidence", {v: tuple(es) for v, es in inc.items()})

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple]) -> "MetricGraph":
        """Validate and build a graph from ``(id, tail, head, length)`` tuples."""
        vertices = tuple(str(v) for v in vertices)
        edge_objs = tuple(
            Edge(str(eid), str(a), str(b), to_fraction(length, f"edge {eid} length"))
            for eid, a, b, length in edges
        )
        g = cls(vertices, edge_objs)
        g.validate()
        return g

    # -- structure -------------------------------------------------------

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edge_index[edge_id]
        except KeyError:
            raise UnknownEdge(f"unknown edge {edge_id!r}") from None

    def edge_position(self, edge_id: str) -> int:
        for k, e in enumerate(self.edges):
            if e.id == edge_id:
                return k
        raise UnknownEdge(f"unknown edge {edge_id!r}")

    def incident(self, v: str) -> tuple[Edge, ...]:
        try:
            return self._incidence[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.incident(v))

    def is_boundary(self, v: str) -> bool:
        return self.degree(v) == 1

    @property
    def boundary_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.degree(v) == 1)

    @property
    def interior_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.degree(v) > 1)

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    @property
    def is_linear(self) -> bool:
        return all(self.degree(v) == 2 for v in self.interior_vertices)

    def neighbors(self, v: str) -> list[str]:
        return [e.head if e.tail == v else e.tail for e in self.incident(v)]

    # -- validation ------------------------------------------------------

    def validate(self) -> None:
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DuplicateId(f"duplicate vertex id {v!r}")
            seen.add(v)
        edge_ids = set()
        pairs = {}
        for e in self.edges:
            if e.id in edge_ids:
                raise DuplicateId(f"duplicate edge id {e.id!r}")
            edge_ids.add(e.id)
            for end in (e.tail, e.head):
                if end not in seen:
                    raise UnknownVertex(f"edge {e.id!r} references unknown vertex {end!r}")
            if e.tail == e.head:
                raise LoopEdge(f"edge {e.id!r} is a loop at vertex {e.tail!r}")
            if e.length <= 0:
                raise NonpositiveLength(f"edge {e.id!r} has nonpositive length {e.length}")
            key = frozenset((e.tail, e.head))
            if key in pairs:
                raise ParallelEdge(f"edges {pairs[key]!r} and {e.id!r} join the same vertices")
            pairs[key] = e.id
        if not self.vertices:
            raise MalformedDocument("graph has no vertices")
        if not self.edges:
            raise MalformedDocument("graph has no edges")
        reached = self._reachable(self.vertices[0])
        missing = [v for v in self.vertices if v not in reached]
        if missing:
            raise DisconnectedGraph(f"vertex {missing[0]!r} is not reachable from {self.vertices[0]!r}")

    def _reachable(self, start: str) -> set[str]:
        reached = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in self.neighbors(v):
                if w not in reached:
                    reached.add(w)
                    queue.append(w)
        return reached

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [
                {"id": e.id, "from": e.tail, "to": e.head, "length": fraction_str(e.length)}
                for e in self.edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def classify_vertex(g: MetricGraph, v: str) -> tuple[int, str]:
    """Return ``(degree, "boundary" | "interior")`` for vertex ``v``."""
    d = g.degree(v)
    return d, ("boundary" if d == 1 else "interior")


def graph_from_dict(doc) -> MetricGraph:
    if not isinstance(doc, dict):
        raise MalformedDocument("graph document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in doc:
            raise MalformedDocument(f"graph document lacks key {key!r}")
    vertices, edges = doc["vertices"], doc["edges"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise MalformedDocument("'vertices' must be an array of strings")
    if not isinstance(edges, list):
        raise MalformedDocument("'edges' must be an array")
    rows = []
    for k, item in enumerate(edges):
        if not isinstance(item, dict):
            raise MalformedDocument(f"edge #{k} must be an object")
        for key in ("id", "from", "to", "length"):
            if key not in item:
                raise MalformedDocument(f"edge #{k} lacks key {key!r}")
        for key in ("id", "from", "to"):
            if not isinstance(item[key], str):
                raise MalformedDocument(f"edge #{k}: {key!r} must be a string")
        rows.append((item["id"], item["from"], item["to"],
                     to_fraction(item["length"], f"edge {item['id']!r} length")))
    return MetricGraph.build(vertices, rows)


def parse_graph(text: str) -> MetricGraph:
    """Parse and validate a graph document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return graph_from_dict(doc)
