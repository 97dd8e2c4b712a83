import random
from fractions import Fraction as F

import pytest

from generators import graph_pool, random_subset, random_subset_of
from mgc.bv import GraphSubset, PiecewiseFunction, VectorField, length, perimeter, tv
from mgc.catalog import ball_star4, regression_graphs, segment, tripod
from mgc.cheeger import cheeger_cut, cheeger_within, ratio
from mgc.duality import (
    Eigenpair,
    check_eigenpair,
    construct_eigenpair_from_cut,
    dual_flow,
    dual_norm,
    feasible_field_sampler,
    flow_feasible,
    verify_eigenpair,
)
from mgc.errors import InfeasibleDual, InvalidFunction, NotACheegerCut, NotEigenpair, NotNormalized


def omega_choices(seed: int, count: int = 2):
    """Regression graphs paired with seeded random proper subsets."""
    rng = random.Random(seed)
    out = []
    for name, g in sorted(regression_graphs().items()):
        found = 0
        while found < count:
            omega = random_subset(g, rng)
            if omega.is_empty or perimeter(omega) == 0:
                continue
            out.append((name, g, omega))
            found += 1
    return out


# -- flow duality --------------------------------------------------------------

def test_flow_certificate_for_the_ball():
    B = ball_star4(F(5, 8))
    cert = dual_flow(B.graph, B)
    assert cert.primal == F(16, 9) and cert.gap == 0
    assert cert.field.is_kirchhoff
    assert flow_feasible(B.graph, B, F(16, 9))
    assert not flow_feasible(B.graph, B, F(16, 9) + F(1, 100))


@pytest.mark.parametrize("name, g, omega", omega_choices(7), ids=lambda x: x if isinstance(x, str) else "")
def test_strong_duality(name, g, omega):
    cert = dual_flow(g, omega)
    assert cert.gap == 0
    assert cert.field.is_kirchhoff
    for eid, a, b in omega.arcs:
        for p, q, slope in cert.field.slopes(eid):
            if a <= p and q <= b:
                assert slope == 1


@pytest.mark.parametrize("name, g, omega", omega_choices(8, count=1), ids=lambda x: x if isinstance(x, str) else "")
def test_weak_duality_on_random_pairs(name, g, omega):
    rng = random.Random(name)
    sample = feasible_field_sampler(g, omega)
    for _ in range(50):
        z = sample(rng)
        assert z.is_kirchhoff
        E = random_subset_of(omega, rng)
        assert 1 / z.sup_norm <= ratio(E)


def test_flow_dual_needs_proper_omega():
    g = segment(2)
    with pytest.raises(InfeasibleDual):
        dual_flow(g, GraphSubset.full(g))


# -- dual norm -----------------------------------------------------------------

def test_dual_norm_examples():
    g = tripod(1)
    omega = GraphSubset.edges(g, ["e1"])
    assert dual_norm(g, omega.indicator()) is None
    assert dual_norm(g, PiecewiseFunction.constant(g, 0)) == 0
    f = PiecewiseFunction.from_affine(g, {"e1": (1, 0), "e2": (F(-1, 2), 0), "e3": (F(-1, 2), 0)})
    assert dual_norm(g, f) == 1
    with pytest.raises(InvalidFunction):
        dual_norm(g, PiecewiseFunction.from_affine(g, {"e1": (0, 1)}))


@pytest.mark.parametrize("seed", range(10))
def test_dual_norm_bounds_pairings(seed):
    # for zero-mean f and any u: int f u <= ||f||_* TV(u)
    rng = random.Random(seed)
    g = graph_pool(seed=2)[seed]
    A = random_subset(g, rng)
    B = A.complement()
    if A.is_empty or B.is_empty:
        return
    f = A.indicator(1 / length(A)) - B.indicator(1 / length(B))
    norm = dual_norm(g, f)
    assert norm is not None
    for _ in range(10):
        E = random_subset(g, rng)
        if E.is_empty:
            continue
        pair = length(E.intersection(A)) / length(A) - length(E.intersection(B)) / length(B)
        assert pair <= norm * perimeter(E)


# -- eigenpairs ----------------------------------------------------------------

def test_constant_eigenpair():
    g = tripod(1)
    ep = verify_eigenpair(g, 0, PiecewiseFunction.constant(g, F(1, 3)))
    assert check_eigenpair(ep) == []


@pytest.mark.parametrize("L", [1, 2])
def test_tripod_eigenpair_from_cut(L):
    g = tripod(L)
    ep = construct_eigenpair_from_cut(g, GraphSubset.edges(g, ["e1"]))
    assert ep.lam == F(1, L)
    assert ep.zero_median and ep.xi_integral == 0
    assert check_eigenpair(ep) == []


def test_tripod_explicit_correct_field_is_accepted():
    L = F(2)
    g = tripod(L)
    u = GraphSubset.edges(g, ["e1"]).indicator() / L
    z = VectorField.from_affine(g, {"e1": (0, -1 / L), "e2": (F(-1, 2), 1 / (2 * L)), "e3": (F(-1, 2), 1 / (2 * L))})
    ep = verify_eigenpair(g, 1 / L, u, z)
    assert check_eigenpair(ep) == []


@pytest.mark.parametrize("ell", [5, 6])
def test_interval_indicator_is_rejected_for_median(ell):
    g = segment(ell)
    omega = GraphSubset.from_arcs(g, [("e1", 1, 5)])
    lam = cheeger_within(g, omega).value
    with pytest.raises(NotEigenpair) as info:
        verify_eigenpair(g, lam, omega.indicator() / length(omega))
    assert info.value.reason == "median"


def test_rejections_name_the_failed_condition():
    g = segment(4)
    half = GraphSubset.from_arcs(g, [("e1", 0, 2)])
    u = half.indicator() / 2
    with pytest.raises(NotEigenpair) as info:
        verify_eigenpair(g, 1, u)
    assert info.value.reason == "tv"
    with pytest.raises(NotNormalized):
        verify_eigenpair(g, F(1, 2), half.indicator())
    bad = VectorField.from_affine(g, {"e1": (0, 1)})
    with pytest.raises(NotEigenpair) as info:
        verify_eigenpair(g, F(1, 2), u, bad)
    assert info.value.reason in {"sign_selection", "kirchhoff", "field_bound", "divergence"}


def test_check_detects_tampering():
    g = tripod(1)
    ep = construct_eigenpair_from_cut(g, GraphSubset.edges(g, ["e1"]))
    doubled = Eigenpair(ep.lam, ep.u, ep.xi, VectorField.from_nodes(
        g, {eid: [(x, 2 * z) for x, z in pts] for eid, pts in ep.z.nodes}))
    assert "field_bound" in check_eigenpair(doubled)
    assert "divergence" in check_eigenpair(doubled)


def test_from_cut_rejects_non_cuts():
    g = tripod(1)
    with pytest.raises(NotACheegerCut):
        construct_eigenpair_from_cut(g, GraphSubset.edges(g, ["e1", "e2"]))
    with pytest.raises(NotACheegerCut):
        construct_eigenpair_from_cut(g, GraphSubset.from_arcs(g, [("e1", 0, F(1, 2))]))


@pytest.mark.parametrize("name", sorted(regression_graphs()))
def test_cut_eigenpairs_on_regression_graphs(name):
    g = regression_graphs()[name]
    res = cheeger_cut(g)
    ep = construct_eigenpair_from_cut(g, res.witness)
    assert ep.lam == res.value
    assert ep.zero_median
    assert check_eigenpair(ep) == []


@pytest.mark.parametrize("seed", range(20))
def test_accepted_eigenvalues_obey_median_and_cheeger_bound(seed):
    rng = random.Random(seed)
    g = graph_pool(seed=5)[seed % 20]
    h = cheeger_cut(g).value
    for _ in range(5):
        E = random_subset(g, rng)
        if E.is_empty:
            continue
        u = E.indicator() / length(E)
        try:
            ep = verify_eigenpair(g, tv(u), u)
        except NotEigenpair:
            continue
        assert (ep.lam != 0) == ep.zero_median
        if ep.lam != 0:
            assert ep.lam >= h
