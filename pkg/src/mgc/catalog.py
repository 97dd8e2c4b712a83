"""Named example graphs and subsets used by tests, the CLI and the reproduction suite."""

from __future__ import annotations

from fractions import Fraction

from .bv import GraphSubset
from .graph import MetricGraph


def star4() -> MetricGraph:
    """Star with centre v2: e1 = v1v2 (length 2), e2 = v2v3, e3 = v2v4 (length 1)."""
    return MetricGraph.build(
        ["v1", "v2", "v3", "v4"],
        [("e1", "v1", "v2", 2), ("e2", "v2", "v3", 1), ("e3", "v2", "v4", 1)],
    )


def path4() -> MetricGraph:
    return MetricGraph.build(
        ["v1", "v2", "v3", "v4"],
        [("e1", "v1", "v2", 2), ("e2", "v2", "v3", 1), ("e3", "v3", "v4", 1)],
    )


def segment(length=5) -> MetricGraph:
    return MetricGraph.build(["v1", "v2"], [("e1", "v1", "v2", length)])


def tripod(l1=1, l2=None, l3=None) -> MetricGraph:
    """Star with centre v2 and legs e1 = v1v2, e2 = v2v3, e3 = v2v4."""
    l2 = l1 if l2 is None else l2
    l3 = l1 if l3 is None else l3
    return MetricGraph.build(
        ["v1", "v2", "v3", "v4"],
        [("e1", "v1", "v2", l1), ("e2", "v2", "v3", l2), ("e3", "v2", "v4", l3)],
    )


def triangle(a=1, b=1, c=1) -> MetricGraph:
    return MetricGraph.build(
        ["v1", "v2", "v3"],
        [("e1", "v1", "v2", a), ("e2", "v2", "v3", b), ("e3", "v3", "v1", c)],
    )


def ball_star4(r) -> GraphSubset:
    """Closed ball of radius ``r`` (at most 3/2) around the point 3/2 of e1 in :func:`star4`."""
    g = star4()
    r = Fraction(r)
    c = Fraction(3, 2)
    arcs = [("e1", max(Fraction(0), c - r), min(Fraction(2), c + r))]
    spill = r - (2 - c)
    if spill > 0:
        arcs += [("e2", 0, min(spill, 1)), ("e3", 0, min(spill, 1))]
    return GraphSubset.from_arcs(g, arcs)


def regression_graphs() -> dict[str, MetricGraph]:
    """Small graphs of assorted shapes used across the property suites."""
    F = Fraction
    return {
        "segment5": segment(5),
        "segment6": segment(6),
        "star4": star4(),
        "path4": path4(),
        "tripod1": tripod(1),
        "tripod_long": tripod(5, 1, 2),
        "triangle": triangle(),
        "triangle_skew": triangle(1, 2, F(3, 2)),
        "star5": MetricGraph.build(
            ["c", "a", "b", "d", "e"],
            [("e1", "c", "a", 1), ("e2", "c", "b", F(1, 2)), ("e3", "d", "c", 2), ("e4", "c", "e", F(3, 2))],
        ),
        "lollipop": MetricGraph.build(
            ["v1", "v2", "v3", "v4"],
            [("e1", "v1", "v2", 1), ("e2", "v2", "v3", 1), ("e3", "v3", "v1", 1), ("e4", "v3", "v4", 2)],
        ),
        "square": MetricGraph.build(
            ["v1", "v2", "v3", "v4"],
            [("e1", "v1", "v2", 1), ("e2", "v2", "v3", 1), ("e3", "v3", "v4", 1), ("e4", "v4", "v1", 1)],
        ),
        "caterpillar": MetricGraph.build(
            ["v1", "v2", "v3", "v4", "v5", "v6"],
            [("e1", "v1", "v2", 1), ("e2", "v2", "v3", F(3, 2)), ("e3", "v3", "v4", 1),
             ("e4", "v2", "v5", F(1, 2)), ("e5", "v3", "v6", F(3, 4))],
        ),
    }


def random_graph(rng, max_edges: int = 5) -> MetricGraph:
    """Random connected simple graph with at most ``max_edges`` edges.

    Lengths are multiples of 1/4 in [1/2, 4].
    """
    m = rng.randint(1, max_edges)
    n = rng.randint(2, m + 1)
    vertices = [f"v{k + 1}" for k in range(n)]
    pairs = []
    for k in range(1, n):                       # random spanning tree
        pairs.append((vertices[rng.randrange(k)], vertices[k]))
    extra = [(a, b) for i, a in enumerate(vertices) for b in vertices[i + 1:]
             if (a, b) not in pairs and (b, a) not in pairs]
    rng.shuffle(extra)
    pairs += extra[: m - len(pairs)]
    edges = []
    for k, (a, b) in enumerate(pairs):
        if rng.random() < 0.5:
            a, b = b, a
        edges.append((f"e{k + 1}", a, b, Fraction(rng.randint(2, 16), 4)))
    return MetricGraph.build(vertices, edges)
