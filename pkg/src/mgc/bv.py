"""Subsets, piecewise-affine BV functions and Kirchhoff fields on a metric graph.

Everything here is exact: coordinates and values are :class:`~fractions.Fraction`.
A :class:`PiecewiseFunction` is affine on each segment and may jump at any
breakpoint, so its derivative has an absolutely continuous part and a jump
part but never a Cantor part.

The vertex contribution to the total variation is the closed form
``min_t sum_e |[u]_e(v) - t|`` (attained at a median of the traces).  It is
the LP dual of the supremum over Kirchhoff fields at a single vertex
(``max sum_e z_e u_e`` subject to ``sum_e z_e = 0`` and ``|z_e| <= 1``).
For an indicator this reduces to ``min(k_v, d_v - k_v)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InvalidFunction, InvalidSubset, MalformedDocument, NotKirchhoff
from .graph import MetricGraph, fraction_str, to_fraction

ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# subsets
# ---------------------------------------------------------------------------

def _merge(intervals):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


@dataclass(frozen=True)
class GraphSubset:
    """A finite union of closed positive-length arcs, in canonical form.

    ``arcs`` is sorted by edge order then left endpoint; arcs on one edge
    are disjoint and non-touching (touching arcs are merged).  Null sets are
    not representable, so two subsets are equal iff they agree up to
    measure zero.
    """

    graph: MetricGraph
    arcs: tuple[tuple[str, Fraction, Fraction], ...]

    @classmethod
    def from_arcs(cls, graph: MetricGraph, arcs: Iterable) -> "GraphSubset":
        per_edge: dict[str, list] = {}
        for item in arcs:
            eid, a, b = item
            e = graph.edge(eid)
            a, b = to_fraction(a, "arc start"), to_fraction(b, "arc end")
            if a > b:
                raise InvalidSubset(f"arc on {eid!r} has start {a} > end {b}")
            if a < 0 or b > e.length:
                raise InvalidSubset(f"arc [{a}, {b}] lies outside edge {eid!r} of length {e.length}")
            if a == b:
                continue
            per_edge.setdefault(eid, []).append((a, b))
        canon = []
        for e in graph.edges:
            for a, b in _merge(per_edge.get(e.id, [])):
                canon.append((e.id, a, b))
        return cls(graph, tuple(canon))

    @classmethod
    def empty(cls, graph: MetricGraph) -> "GraphSubset":
        return cls(graph, ())

    @classmethod
    def full(cls, graph: MetricGraph) -> "GraphSubset":
        return cls(graph, tuple((e.id, ZERO, e.length) for e in graph.edges))

    @classmethod
    def edges(cls, graph: MetricGraph, edge_ids: Iterable[str]) -> "GraphSubset":
        return cls.from_arcs(graph, [(eid, 0, graph.edge(eid).length) for eid in edge_ids])

    def arcs_on(self, edge_id: str) -> list[tuple[Fraction, Fraction]]:
        return [(a, b) for eid, a, b in self.arcs if eid == edge_id]

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    def trace(self, v: str, edge_id: str) -> int:
        """1 iff an arc of ``edge_id`` abuts the end of that edge at ``v``."""
        e = self.graph.edge(edge_id)
        x = e.coordinate_of(v)
        return int(any(a == x or b == x for a, b in self.arcs_on(edge_id)))

    def interior_boundary_points(self) -> list[tuple[str, Fraction]]:
        pts = []
        for eid, a, b in self.arcs:
            ell = self.graph.edge(eid).length
            if 0 < a:
                pts.append((eid, a))
            if b < ell:
                pts.append((eid, b))
        return pts

    def complement(self) -> "GraphSubset":
        out = []
        for e in self.graph.edges:
            cursor = ZERO
            for a, b in self.arcs_on(e.id):
                if a > cursor:
                    out.append((e.id, cursor, a))
                cursor = b
            if cursor < e.length:
                out.append((e.id, cursor, e.length))
        return GraphSubset(self.graph, tuple(out))

    def intersection(self, other: "GraphSubset") -> "GraphSubset":
        out = []
        for e in self.graph.edges:
            for a, b in self.arcs_on(e.id):
                for c, d in other.arcs_on(e.id):
                    lo, hi = max(a, c), min(b, d)
                    if lo < hi:
                        out.append((e.id, lo, hi))
        return GraphSubset.from_arcs(self.graph, out)

    def union(self, other: "GraphSubset") -> "GraphSubset":
        return GraphSubset.from_arcs(self.graph, list(self.arcs) + list(other.arcs))

    def issubset(self, other: "GraphSubset") -> bool:
        return self.intersection(other) == self

    def indicator(self, value=1) -> "PiecewiseFunction":
        return PiecewiseFunction.indicator(self, value)

    def to_list(self) -> list[dict]:
        return [{"edge": eid, "from": fraction_str(a), "to": fraction_str(b)} for eid, a, b in self.arcs]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    def __repr__(self):
        body = ", ".join(f"{eid}[{a},{b}]" for eid, a, b in self.arcs)
        return f"GraphSubset({body or 'empty'})"


def subset_from_list(graph: MetricGraph, doc) -> GraphSubset:
    if not isinstance(doc, list):
        raise MalformedDocument("subset document must be a JSON array")
    arcs = []
    for k, item in enumerate(doc):
        if not isinstance(item, dict) or not {"edge", "from", "to"} <= set(item):
            raise MalformedDocument(f"subset arc #{k} must be an object with edge/from/to")
        arcs.append((item["edge"], to_fraction(item["from"], "arc start"), to_fraction(item["to"], "arc end")))
    return GraphSubset.from_arcs(graph, arcs)


def parse_subset(graph: MetricGraph, text: str) -> GraphSubset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return subset_from_list(graph, doc)


def length(E: GraphSubset) -> Fraction:
    return sum((b - a for _, a, b in E.arcs), ZERO)


def vertex_trace_count(E: GraphSubset, v: str) -> int:
    return sum(E.trace(v, e.id) for e in E.graph.incident(v))


def perimeter(E: GraphSubset) -> Fraction:
    """Per(E) = #interior cut points + sum over interior vertices of min(k_v, d_v - k_v)."""
    g = E.graph
    total = len(E.interior_boundary_points())
    for v in g.interior_vertices:
        k = vertex_trace_count(E, v)
        total += min(k, g.degree(v) - k)
    return Fraction(total)


def complement(E: GraphSubset) -> GraphSubset:
    return E.complement()


# ---------------------------------------------------------------------------
# piecewise-affine functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    x0: Fraction
    x1: Fraction
    v0: Fraction    # limit from the right at x0
    v1: Fraction    # limit from the left at x1

    @property
    def width(self) -> Fraction:
        return self.x1 - self.x0

    @property
    def slope(self) -> Fraction:
        return (self.v1 - self.v0) / self.width

    def at(self, x: Fraction) -> Fraction:
        return self.v0 + (self.v1 - self.v0) * (x - self.x0) / self.width

    def split(self, cuts) -> list["Segment"]:
        pts = [self.x0] + sorted(c for c in set(cuts) if self.x0 < c < self.x1) + [self.x1]
        return [Segment(p, q, self.at(p), self.at(q)) for p, q in zip(pts, pts[1:])]


def _refine(segments, cuts) -> list[Segment]:
    out = []
    for s in segments:
        out.extend(s.split(cuts))
    return out


@dataclass(frozen=True)
class PiecewiseFunction:
    """Per-edge piecewise-affine function with jumps allowed at breakpoints."""

    graph: MetricGraph
    pieces: tuple[tuple[str, tuple[Segment, ...]], ...]

    @classmethod
    def from_segments(cls, graph: MetricGraph, data: Mapping) -> "PiecewiseFunction":
        """``data`` maps edge id to ``[(x0, x1, v0, v1), ...]``; missing edges are zero."""
        for eid in data:
            graph.edge(eid)
        pieces = []
        for e in graph.edges:
            rows = data.get(e.id)
            if not rows:
                segs = (Segment(ZERO, e.length, ZERO, ZERO),)
            else:
                segs = tuple(
                    Segment(*(to_fraction(t, f"segment on {e.id}") for t in row)) if not isinstance(row, Segment) else row
                    for row in rows
                )
                _check_cover(e, segs)
            pieces.append((e.id, segs))
        return cls(graph, tuple(pieces))

    @classmethod
    def from_breakpoints(cls, graph: MetricGraph, data: Mapping) -> "PiecewiseFunction":
        """``data`` maps edge id to ``(breakpoints, values)``.

        Each value is a scalar (continuous there) or a ``(left, right)`` pair;
        only the left limit of the last and right limit of the first
        breakpoint are used at the edge ends.
        """
        out = {}
        for eid, (xs, vals) in data.items():
            xs = [to_fraction(x, f"breakpoint on {eid}") for x in xs]
            if len(xs) != len(vals) or len(xs) < 2:
                raise InvalidFunction(f"edge {eid!r}: need >= 2 breakpoints and one value per breakpoint")
            lr = []
            for v in vals:
                if isinstance(v, Mapping):
                    lr.append((to_fraction(v["left"]), to_fraction(v["right"])))
                elif isinstance(v, (list, tuple)):
                    lr.append((to_fraction(v[0]), to_fraction(v[1])))
                else:
                    q = to_fraction(v, f"value on {eid}")
                    lr.append((q, q))
            out[eid] = [(xs[k], xs[k + 1], lr[k][1], lr[k + 1][0]) for k in range(len(xs) - 1)]
        return cls.from_segments(graph, out)

    @classmethod
    def constant(cls, graph: MetricGraph, c) -> "PiecewiseFunction":
        c = Fraction(c)
        return cls(graph, tuple((e.id, (Segment(ZERO, e.length, c, c),)) for e in graph.edges))

    @classmethod
    def indicator(cls, E: GraphSubset, value=1) -> "PiecewiseFunction":
        g = E.graph
        value = Fraction(value)
        data = {}
        for e in g.edges:
            cuts = sorted({ZERO, e.length, *[p for a, b in E.arcs_on(e.id) for p in (a, b)]})
            inside = E.arcs_on(e.id)
            segs = []
            for p, q in zip(cuts, cuts[1:]):
                val = value if any(a <= p and q <= b for a, b in inside) else ZERO
                segs.append(Segment(p, q, val, val))
            data[e.id] = segs
        return cls.from_segments(g, data)

    @classmethod
    def from_affine(cls, graph: MetricGraph, data: Mapping) -> "PiecewiseFunction":
        """``data`` maps edge id to ``(intercept, slope)``; one segment per edge."""
        out = {}
        for eid, (c, s) in data.items():
            ell = graph.edge(eid).length
            c, s = Fraction(c), Fraction(s)
            out[eid] = [(ZERO, ell, c, c + s * ell)]
        return cls.from_segments(graph, out)

    def segments(self, edge_id: str) -> tuple[Segment, ...]:
        for eid, segs in self.pieces:
            if eid == edge_id:
                return segs
        raise InvalidFunction(f"no data for edge {edge_id!r}")

    def all_segments(self):
        for eid, segs in self.pieces:
            for s in segs:
                yield eid, s

    def trace(self, v: str, edge_id: str) -> Fraction:
        """One-sided limit ``[u]_e(v)`` at the end of ``edge_id`` sitting at ``v``."""
        e = self.graph.edge(edge_id)
        segs = self.segments(edge_id)
        return segs[0].v0 if e.end_at(v) == "tail" else segs[-1].v1

    def traces_at(self, v: str) -> list[Fraction]:
        return [self.trace(v, e.id) for e in self.graph.incident(v)]

    def jumps(self, edge_id: str) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Interior breakpoints as ``(x, left, right)``."""
        segs = self.segments(edge_id)
        return [(s.x1, s.v1, t.v0) for s, t in zip(segs, segs[1:])]

    def values(self) -> list[Fraction]:
        return sorted({v for _, s in self.all_segments() for v in (s.v0, s.v1)})

    # -- arithmetic -----------------------------------------------------

    def map_values(self, fn) -> "PiecewiseFunction":
        return PiecewiseFunction(self.graph, tuple(
            (eid, tuple(Segment(s.x0, s.x1, fn(s.v0), fn(s.v1)) for s in segs))
            for eid, segs in self.pieces
        ))

    def __mul__(self, c) -> "PiecewiseFunction":
        c = Fraction(c)
        return self.map_values(lambda v: v * c)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "PiecewiseFunction":
        return self * (1 / Fraction(c))

    def __neg__(self) -> "PiecewiseFunction":
        return self * -1

    def shift(self, c) -> "PiecewiseFunction":
        c = Fraction(c)
        return self.map_values(lambda v: v + c)

    def combine(self, other: "PiecewiseFunction", op) -> "PiecewiseFunction":
        pieces = []
        for eid, segs in self.pieces:
            osegs = other.segments(eid)
            cuts = {s.x0 for s in segs} | {s.x0 for s in osegs}
            mine, theirs = _refine(segs, cuts), _refine(osegs, cuts)
            pieces.append((eid, tuple(
                Segment(a.x0, a.x1, op(a.v0, b.v0), op(a.v1, b.v1)) for a, b in zip(mine, theirs)
            )))
        return PiecewiseFunction(self.graph, tuple(pieces))

    def __add__(self, other):
        if isinstance(other, PiecewiseFunction):
            return self.combine(other, lambda a, b: a + b)
        return self.shift(other)

    def __sub__(self, other):
        if isinstance(other, PiecewiseFunction):
            return self.combine(other, lambda a, b: a - b)
        return self.shift(-Fraction(other))

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        edges = {}
        for eid, segs in self.pieces:
            xs = [fraction_str(segs[0].x0)] + [fraction_str(s.x1) for s in segs]
            vals = [fraction_str(segs[0].v0)]
            for s, t in zip(segs, segs[1:]):
                if s.v1 == t.v0:
                    vals.append(fraction_str(s.v1))
                else:
                    vals.append({"left": fraction_str(s.v1), "right": fraction_str(t.v0)})
            vals.append(fraction_str(segs[-1].v1))
            edges[eid] = {"breakpoints": xs, "values": vals}
        return {"edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_cover(edge, segs):
    if segs[0].x0 != 0 or segs[-1].x1 != edge.length:
        raise InvalidFunction(f"edge {edge.id!r}: segments must cover [0, {edge.length}]")
    for s, t in zip(segs, segs[1:]):
        if s.x1 != t.x0:
            raise InvalidFunction(f"edge {edge.id!r}: gap or overlap at {s.x1}")
    for s in segs:
        if s.x1 <= s.x0:
            raise InvalidFunction(f"edge {edge.id!r}: empty segment at {s.x0}")


def function_from_dict(graph: MetricGraph, doc) -> PiecewiseFunction:
    if not isinstance(doc, dict) or not isinstance(doc.get("edges"), dict):
        raise MalformedDocument("function document must be an object with an 'edges' object")
    data = {}
    for eid, item in doc["edges"].items():
        if not isinstance(item, dict) or "breakpoints" not in item or "values" not in item:
            raise MalformedDocument(f"edge {eid!r}: expected breakpoints and values")
        data[eid] = (item["breakpoints"], item["values"])
    try:
        return PiecewiseFunction.from_breakpoints(graph, data)
    except (KeyError, IndexError, TypeError) as exc:
        raise MalformedDocument(f"malformed function document: {exc}") from exc


def parse_function(graph: MetricGraph, text: str) -> PiecewiseFunction:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from exc
    return function_from_dict(graph, doc)


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def vertex_variation(traces) -> Fraction:
    """``min_t sum |x - t|``; any median of the traces is a minimizer."""
    xs = sorted(traces)
    if len(xs) < 2:
        return ZERO
    med = xs[(len(xs) - 1) // 2]
    return sum((abs(x - med) for x in xs), ZERO)


def du_total(u: PiecewiseFunction) -> Fraction:
    """|Du|(Gamma): edge-interior variation including jumps at interior breakpoints."""
    total = ZERO
    for eid, segs in u.pieces:
        total += sum((abs(s.v1 - s.v0) for s in segs), ZERO)
        total += sum((abs(r - l) for _, l, r in u.jumps(eid)), ZERO)
    return total


def tv(u: PiecewiseFunction) -> Fraction:
    g = u.graph
    return du_total(u) + sum((vertex_variation(u.traces_at(v)) for v in g.interior_vertices), ZERO)


def jv(u: PiecewiseFunction) -> Fraction:
    g = u.graph
    total = ZERO
    for v in g.interior_vertices:
        t = u.traces_at(v)
        total += Fraction(sum(abs(a - b) for a in t for b in t), g.degree(v))
    return total


def integral(u: PiecewiseFunction) -> Fraction:
    return sum(((s.v0 + s.v1) * s.width / 2 for _, s in u.all_segments()), ZERO)


def _abs_integral(s: Segment) -> Fraction:
    if s.v0 * s.v1 >= 0:
        return abs(s.v0 + s.v1) * s.width / 2
    # sign change inside: split at the root
    root = s.x0 + s.width * s.v0 / (s.v0 - s.v1)
    return (abs(s.v0) * (root - s.x0) + abs(s.v1) * (s.x1 - root)) / 2


def l1_norm(u: PiecewiseFunction) -> Fraction:
    return sum((_abs_integral(s) for _, s in u.all_segments()), ZERO)


def l1_distance(u: PiecewiseFunction, c) -> Fraction:
    """``||u - c||_1`` for a constant ``c``."""
    return l1_norm(u.shift(-Fraction(c)))


def _length_above(s: Segment, t: Fraction) -> Fraction:
    lo, hi = min(s.v0, s.v1), max(s.v0, s.v1)
    if t >= hi:
        return ZERO
    if t < lo or lo == hi:
        return s.width
    return s.width * (hi - t) / (hi - lo)


def measure_above(u: PiecewiseFunction, t) -> Fraction:
    """ell({u > t})."""
    t = Fraction(t)
    return sum((_length_above(s, t) for _, s in u.all_segments()), ZERO)


def measure_below(u: PiecewiseFunction, t) -> Fraction:
    """ell({u < t})."""
    return measure_above(-u, -Fraction(t))


def measure_equal(u: PiecewiseFunction, t) -> Fraction:
    t = Fraction(t)
    return sum((s.width for _, s in u.all_segments() if s.v0 == s.v1 == t), ZERO)


def _lower_median(u: PiecewiseFunction) -> Fraction:
    """Smallest mu with ell({u > mu}) <= ell(Gamma)/2."""
    half = u.graph.total_length / 2
    cands = u.values()
    prev = None
    for c in cands:
        if measure_above(u, c) <= half:
            if prev is None:
                return c
            # on (prev, c) ell({u > t}) is affine; its left limit at c is
            # ell({u >= c}) = ell({u > c}) + ell({u = c})
            left_at_c = measure_above(u, c) + measure_equal(u, c)
            if left_at_c > half:
                return c
            g_prev = measure_above(u, prev)
            return prev + (c - prev) * (g_prev - half) / (g_prev - left_at_c)
        prev = c
    return cands[-1]


def median_set(u: PiecewiseFunction) -> tuple[Fraction, Fraction]:
    """The closed interval ``[mu_minus, mu_plus]`` of medians of ``u``."""
    return _lower_median(u), -_lower_median(-u)


def has_zero_median(u: PiecewiseFunction) -> bool:
    lo, hi = median_set(u)
    return lo <= 0 <= hi


def superlevel(u: PiecewiseFunction, t) -> GraphSubset:
    """The set {u > t}, returned as a canonical union of closed arcs."""
    t = Fraction(t)
    arcs = []
    for eid, s in u.all_segments():
        if s.v0 > t and s.v1 > t:
            arcs.append((eid, s.x0, s.x1))
        elif s.v0 > t or s.v1 > t:
            root = s.x0 + s.width * (t - s.v0) / (s.v1 - s.v0)
            arcs.append((eid, s.x0, root) if s.v0 > t else (eid, root, s.x1))
    return GraphSubset.from_arcs(u.graph, arcs)


def coarea_integral(u: PiecewiseFunction) -> Fraction:
    """Exact value of the integral over t of Per({u > t}).

    Per({u > t}) is constant between consecutive values attained at segment
    ends, so the integral is a finite sum sampled at midpoints.
    """
    levels = u.values()
    total = ZERO
    for lo, hi in zip(levels, levels[1:]):
        total += perimeter(superlevel(u, (lo + hi) / 2)) * (hi - lo)
    return total


def coarea_residual(u: PiecewiseFunction) -> Fraction:
    return abs(tv(u) - coarea_integral(u))


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VectorField:
    """Continuous piecewise-affine field on each closed edge.

    Stored as node lists ``(x, z(x))`` per edge with ``x`` running from 0 to
    the edge length.  Fields may be discontinuous across vertices.
    """

    graph: MetricGraph
    nodes: tuple[tuple[str, tuple[tuple[Fraction, Fraction], ...]], ...]

    @classmethod
    def from_nodes(cls, graph: MetricGraph, data: Mapping) -> "VectorField":
        for eid in data:
            graph.edge(eid)
        out = []
        for e in graph.edges:
            rows = data.get(e.id)
            if not rows:
                pts = ((ZERO, ZERO), (e.length, ZERO))
            else:
                pts = tuple((to_fraction(x), to_fraction(z)) for x, z in rows)
                xs = [p[0] for p in pts]
                if xs[0] != 0 or xs[-1] != e.length or any(a >= b for a, b in zip(xs, xs[1:])):
                    raise InvalidFunction(f"field on {e.id!r}: nodes must increase from 0 to {e.length}")
            out.append((e.id, pts))
        return cls(graph, tuple(out))

    @classmethod
    def from_affine(cls, graph: MetricGraph, data: Mapping) -> "VectorField":
        """``data`` maps edge id to ``(intercept, slope)``."""
        out = {}
        for eid, (c, s) in data.items():
            ell = graph.edge(eid).length
            c, s = Fraction(c), Fraction(s)
            out[eid] = [(ZERO, c), (ell, c + s * ell)]
        return cls.from_nodes(graph, out)

    def nodes_on(self, edge_id: str):
        for eid, pts in self.nodes:
            if eid == edge_id:
                return pts
        raise InvalidFunction(f"no field data for edge {edge_id!r}")

    def at(self, edge_id: str, x) -> Fraction:
        x = Fraction(x)
        pts = self.nodes_on(edge_id)
        for (p, zp), (q, zq) in zip(pts, pts[1:]):
            if p <= x <= q:
                return zp + (zq - zp) * (x - p) / (q - p)
        raise InvalidFunction(f"coordinate {x} outside edge {edge_id!r}")

    def slopes(self, edge_id: str) -> list[tuple[Fraction, Fraction, Fraction]]:
        """``(x0, x1, z')`` for each affine piece."""
        pts = self.nodes_on(edge_id)
        return [(p, q, (zq - zp) / (q - p)) for (p, zp), (q, zq) in zip(pts, pts[1:])]

    def end_value(self, v: str, edge_id: str) -> Fraction:
        """``[z]_e(v)``: ``z(l_e)`` at the head, ``-z(0)`` at the tail."""
        e = self.graph.edge(edge_id)
        pts = self.nodes_on(edge_id)
        return pts[-1][1] if e.end_at(v) == "head" else -pts[0][1]

    def kirchhoff_defect(self, v: str) -> Fraction:
        return sum((self.end_value(v, e.id) for e in self.graph.incident(v)), ZERO)

    @property
    def is_kirchhoff(self) -> bool:
        return all(self.kirchhoff_defect(v) == 0 for v in self.graph.vertices)

    @property
    def sup_norm(self) -> Fraction:
        return max(abs(z) for _, pts in self.nodes for _, z in pts)

    def to_dict(self) -> dict:
        return {"edges": {
            eid: {"breakpoints": [fraction_str(x) for x, _ in pts], "values": [fraction_str(z) for _, z in pts]}
            for eid, pts in self.nodes
        }}


def field_from_dict(graph: MetricGraph, doc) -> VectorField:
    if not isinstance(doc, dict) or not isinstance(doc.get("edges"), dict):
        raise MalformedDocument("field document must be an object with an 'edges' object")
    data = {}
    for eid, item in doc["edges"].items():
        try:
            data[eid] = list(zip(item["breakpoints"], item["values"], strict=True))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDocument(f"field edge {eid!r}: {exc}") from exc
    return VectorField.from_nodes(graph, data)


def _pairing_terms(z: VectorField, u: PiecewiseFunction) -> tuple[Fraction, Fraction]:
    """``(int z Du, int u z')`` computed on the common refinement."""
    z_du = ZERO
    u_dz = ZERO
    for eid, segs in u.pieces:
        cuts = {x for x, _ in z.nodes_on(eid)} | {s.x0 for s in segs}
        for s in _refine(segs, cuts):
            zp, zq = z.at(eid, s.x0), z.at(eid, s.x1)
            z_du += s.slope * s.width * (zp + zq) / 2
            u_dz += (zq - zp) * (s.v0 + s.v1) / 2
        for x, left, right in u.jumps(eid):
            z_du += z.at(eid, x) * (right - left)
    return z_du, u_dz


def pairing(z: VectorField, u: PiecewiseFunction) -> Fraction:
    """``int_Gamma z Du``."""
    return _pairing_terms(z, u)[0]


def green_residual(z: VectorField, u: PiecewiseFunction, require_kirchhoff: bool = True) -> Fraction:
    """Defect of Green's formula for the pair ``(z, u)``.

    With ``require_kirchhoff`` the boundary sum runs over interior vertices
    only, which is valid for Kirchhoff fields; otherwise it runs over every
    vertex and the identity holds for any field.
    """
    g = u.graph
    if require_kirchhoff:
        if not z.is_kirchhoff:
            bad = next(v for v in g.vertices if z.kirchhoff_defect(v) != 0)
            raise NotKirchhoff(f"Kirchhoff sum at {bad!r} is {z.kirchhoff_defect(bad)}")
        verts = g.interior_vertices
    else:
        verts = g.vertices
    z_du, u_dz = _pairing_terms(z, u)
    boundary = sum(
        (z.end_value(v, e.id) * u.trace(v, e.id) for v in verts for e in g.incident(v)), ZERO
    )
    return abs(z_du + u_dz - boundary)
