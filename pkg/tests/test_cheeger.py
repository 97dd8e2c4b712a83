import random
from fractions import Fraction as F

import pytest

from generators import graph_pool, random_grid_instance, random_subset, random_subset_of
from mgc.bv import GraphSubset, PiecewiseFunction, length, perimeter
from mgc.catalog import ball_star4, regression_graphs, segment, star4, tripod
from mgc.cheeger import (
    cheeger_cut,
    cheeger_within,
    is_calibrable,
    path_convexity_probe,
    ratio,
    rayleigh_tv,
)
from mgc.errors import EmptyOmega, EmptySet, PatternBudgetExceeded, ViolatedConstraint, ZeroPerimeterOmega
from oracles import grid_cheeger, mask_to_arcs


def arcs(E):
    return [(eid, a, b) for eid, a, b in E.arcs]


# -- worked examples ---------------------------------------------------------

def test_ball_on_star_is_not_calibrable():
    B = ball_star4(F(5, 8))
    assert ratio(B) == F(24, 11)
    res = cheeger_within(B.graph, B)
    assert res.value == F(16, 9)
    assert arcs(res.witness) == [("e1", F(7, 8), 2)]
    assert is_calibrable(B.graph, B) == (False, F(24, 11), F(16, 9))


def test_small_ball_on_star():
    B = ball_star4(F(1, 2))
    assert perimeter(B) == 2 and ratio(B) == 2
    assert is_calibrable(B.graph, B)[0]


def test_two_interval_omega_is_calibrable():
    g = segment(5)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 2), ("e1", 3, 4)])
    assert is_calibrable(g, omega) == (True, 2, 2)


def test_interval_at_a_leaf_is_calibrable():
    g = segment(5)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 5)])
    assert is_calibrable(g, omega) == (True, F(1, 4), F(1, 4))


def test_interior_interval_is_calibrable():
    g = segment(6)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 5)])
    assert is_calibrable(g, omega) == (True, F(1, 2), F(1, 2))


@pytest.mark.parametrize("L", [1, 2, F(3, 2)])
def test_equilateral_tripod_cut(L):
    res = cheeger_cut(tripod(L))
    assert res.value == F(1) / L
    assert len(res.witness.arcs) == 1
    eid, a, b = res.witness.arcs[0]
    assert (a, b) == (0, L)


def test_long_edge_tripod_cut():
    g = tripod(5, 1, 2)
    res = cheeger_cut(g)
    assert res.value == F(2, 8)
    assert length(res.witness) == 4


@pytest.mark.parametrize("L", [1, 3, F(7, 2)])
def test_segment_cut_is_half(L):
    res = cheeger_cut(segment(L))
    assert res.value == F(2) / L
    assert length(res.witness) == F(L) / 2
    assert res.lower_bound_ok


@pytest.mark.parametrize("name", sorted(regression_graphs()))
def test_cut_respects_lower_bound_and_volume(name):
    g = regression_graphs()[name]
    res = cheeger_cut(g)
    assert res.lower_bound_ok
    assert 0 < length(res.witness) <= g.total_length / 2
    assert ratio(res.witness) == res.value


def test_reported_pattern_matches_witness():
    B = ball_star4(F(5, 8))
    res = cheeger_within(B.graph, B)
    # units are the arcs of Omega; the witness fills the one on e1
    assert [(row["edge"], row["tag"]) for row in res.pattern.to_list()] == [
        ("e1", "Full"), ("e2", "Empty"), ("e3", "Empty"),
    ]
    cut = cheeger_cut(tripod(5, 1, 2))
    assert [row["tag"] for row in cut.pattern.to_list()] == ["AnchorLeft", "Empty", "Empty"]


def test_omega_errors():
    g = star4()
    with pytest.raises(EmptyOmega):
        cheeger_within(g, GraphSubset.empty(g))
    with pytest.raises(ZeroPerimeterOmega):
        cheeger_within(g, GraphSubset.full(g))
    with pytest.raises(EmptySet):
        ratio(GraphSubset.empty(g))


def test_pattern_budget_is_enforced(monkeypatch):
    monkeypatch.setenv("MGC_PATTERN_BUDGET", "10")
    with pytest.raises(PatternBudgetExceeded):
        cheeger_cut(regression_graphs()["caterpillar"])


def test_results_are_deterministic():
    g = regression_graphs()["square"]
    first = cheeger_cut(g).to_dict()
    for _ in range(3):
        assert cheeger_cut(g).to_dict() == first


# -- oracle equivalence --------------------------------------------------------

@pytest.mark.parametrize("seed", range(30))
def test_enumeration_matches_grid_brute_force(seed):
    rng = random.Random(seed)
    g, h, mask = random_grid_instance(rng)
    value, _ = grid_cheeger(g, h, cut=True)
    assert cheeger_cut(g).value == value
    omega = GraphSubset.from_arcs(g, mask_to_arcs(g, h, mask))
    value, _ = grid_cheeger(g, h, omega_mask=mask)
    assert cheeger_within(g, omega).value == value


@pytest.mark.parametrize("seed", range(30))
def test_no_sampled_subset_beats_the_optimum(seed):
    rng = random.Random(500 + seed)
    g = graph_pool(seed=3)[seed % 20]
    h = cheeger_cut(g).value
    for _ in range(20):
        E = random_subset(g, rng)
        if not E.is_empty and length(E) <= g.total_length / 2:
            assert ratio(E) >= h
    omega = random_subset(g, rng)
    if omega.is_empty or perimeter(omega) == 0:
        return
    h1 = cheeger_within(g, omega).value
    for _ in range(20):
        assert ratio(random_subset_of(omega, rng)) >= h1


# -- path convexity ----------------------------------------------------------

def test_probe_finds_counterexample_for_two_intervals():
    g = segment(5)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 2), ("e1", 3, 4)])
    probe = path_convexity_probe(g, omega)
    assert arcs(probe.counterexample) == [("e1", 1, 5)]
    assert (probe.per_E, probe.per_omega_cap_E) == (1, 4)


def test_probe_on_a_single_interval_finds_nothing():
    g = segment(5)
    omega = GraphSubset.from_arcs(g, [("e1", 0, 2)])
    assert path_convexity_probe(g, omega).counterexample is None


def test_probe_refinement_finds_tripod_counterexample():
    g = tripod(1)
    omega = GraphSubset.edges(g, ["e1"])
    assert path_convexity_probe(g, omega).counterexample is None
    probe = path_convexity_probe(g, omega, subdivisions=2)
    assert probe.counterexample is not None
    assert perimeter(omega.intersection(probe.counterexample)) > perimeter(probe.counterexample)


def test_probe_cell_limit():
    g = regression_graphs()["caterpillar"]
    with pytest.raises(PatternBudgetExceeded):
        path_convexity_probe(g, GraphSubset.edges(g, ["e1"]), subdivisions=8)


def test_isoperimetric_comparison_at_equal_length():
    g = star4()
    arc = GraphSubset.from_arcs(g, [("e1", 0, F(3, 2))])
    ball = GraphSubset.from_arcs(g, [("e1", F(3, 2), 2), ("e2", 0, F(1, 2)), ("e3", 0, F(1, 2))])
    assert length(arc) == length(ball) == F(3, 2)
    assert (perimeter(arc), perimeter(ball)) == (1, 3)


# -- Rayleigh quotients ------------------------------------------------------

def test_rayleigh_of_indicators():
    B = ball_star4(F(5, 8))
    assert rayleigh_tv(B.indicator(), "within", B) == F(24, 11)
    g = segment(4)
    u = GraphSubset.from_arcs(g, [("e1", 0, 2)]).indicator()
    assert rayleigh_tv(u) == F(1, 2)


@pytest.mark.parametrize("seed", range(20))
def test_rayleigh_within_is_bounded_below_by_h1(seed):
    rng = random.Random(seed)
    g = segment(5)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 2), ("e1", 3, 4)])
    h1 = cheeger_within(g, omega).value

    def bump():
        return F(rng.randint(0, 6), rng.randint(1, 3))

    data = {"e1": [(0, 1, 0, 0), (1, 2, bump(), bump() + 1), (2, 3, 0, 0), (3, 4, bump(), bump()), (4, 5, 0, 0)]}
    u = PiecewiseFunction.from_segments(g, data)
    assert rayleigh_tv(u, "within", omega) >= h1


def test_rayleigh_constraints():
    g = segment(4)
    with pytest.raises(ViolatedConstraint):
        rayleigh_tv(PiecewiseFunction.constant(g, 1))
    omega = GraphSubset.from_arcs(g, [("e1", 0, 2)])
    with pytest.raises(ViolatedConstraint):
        rayleigh_tv(PiecewiseFunction.constant(g, 1), "within", omega)
