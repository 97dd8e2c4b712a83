"""Reproduction table: published worked values against freshly computed ones.

Every row computes a canonical string and compares it to the expected
string for its id.  A missing expected value fails the row, so the table
cannot pass vacuously.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import catalog
from .bv import (
    GraphSubset,
    PiecewiseFunction,
    VectorField,
    du_total,
    green_residual,
    jv,
    length,
    median_set,
    perimeter,
    tv,
)
from .cheeger import cheeger_cut, cheeger_within, is_calibrable, path_convexity_probe, ratio, rayleigh_tv
from .duality import construct_eigenpair_from_cut, dual_flow, flow_feasible, verify_eigenpair
from .errors import MGCError, NotEigenpair
from .graph import classify_vertex, fraction_str as fs, parse_graph
from .spectral import cheeger_inequality_check

F = Fraction

EXPECTED = {
    "graph.path4": "length=4 deg(v2)=2",
    "graph.segment": "boundary=v1,v2 interior=",
    "graph.tripod_centre": "3 interior",
    "graph.degree2_junction": "2 interior",
    "bv.length_ball_5_8": "11/8",
    "bv.per_ball_1_2": "2",
    "bv.per_ball_5_8": "3",
    "bv.per_two_intervals": "4",
    "bv.per_anchored_1_5": "1",
    "bv.per_full": "0",
    "bv.per_complement_ball_5_8": "3",
    "bv.tv_continuous_equals_du": "holds",
    "bv.tv_linear_equals_du_plus_jv": "holds",
    "bv.median_indicator_1_5": "[1, 1] zero_median=false",
    "bv.green_tripod_field": "0",
    "bv.isoperimetric_failure": "1 vs 3 at length 3/2",
    "cheeger.ratio_ball_5_8": "24/11",
    "cheeger.ratio_ball_1_2": "2",
    "cheeger.ratio_7_8_2": "16/9",
    "cheeger.within_ball_5_8": "16/9 e1[7/8,2]",
    "cheeger.within_two_intervals": "2",
    "cheeger.calibrable_ball_5_8": "false 24/11 16/9",
    "cheeger.calibrable_two_intervals": "true 2 2",
    "cheeger.calibrable_1_5": "true",
    "cheeger.probe_two_intervals": "e1[1,5] 4>1",
    "cheeger.tripod_equilateral": "1/3 e1[0,3]",
    "cheeger.tripod_long_edge": "1/4 e1[0,4]",
    "cheeger.rayleigh_cheeger_set": "16/9",
    "cheeger.rayleigh_balanced": "1/4",
    "dual.flow_ball_5_8": "16/9 gap=0",
    "dual.feasibility_threshold": "feasible@h1=true feasible@h1+1/100=false",
    "eigen.constant": "verified xi=1 z=0",
    "eigen.tripod_lp": "verified lambda=1/3",
    "eigen.tripod_explicit_field": "accepted",
    "eigen.indicator_1_5": "rejected median",
    "eigen.from_cut_tripod": "1/3",
    "spectral.cheeger_inequality_tripod": "holds",
    "cli.cheeger_within_certify": "16/9 gap=0",
}


@dataclass
class Row:
    id: str
    description: str
    compute: Callable[[], str]


def _arcs(E: GraphSubset) -> str:
    return " ".join(f"{eid}[{fs(a)},{fs(b)}]" for eid, a, b in E.arcs)


def _row_path4():
    g = parse_graph(catalog.path4().to_json())
    return f"length={fs(g.total_length)} deg(v2)={g.degree('v2')}"


def _row_segment():
    g = catalog.segment(5)
    return f"boundary={','.join(g.boundary_vertices)} interior={','.join(g.interior_vertices)}"


def _row_classify(g, v):
    d, kind = classify_vertex(g, v)
    return f"{d} {kind}"


def _two_intervals():
    g = catalog.segment(5)
    return g, GraphSubset.from_arcs(g, [("e1", 1, 2), ("e1", 3, 4)])


def _omega_1_5():
    g = catalog.segment(6)
    return g, GraphSubset.from_arcs(g, [("e1", 1, 5)])


def _row_tv_continuous():
    g = catalog.star4()
    u = PiecewiseFunction.from_segments(g, {
        "e1": [(0, 1, 0, 2), (1, 2, 3, 1)],
        "e2": [(0, 1, 1, 4)],
        "e3": [(0, F(1, 2), 1, -1), (F(1, 2), 1, -1, 0)],
    })
    return "holds" if tv(u) == du_total(u) else f"differs: {tv(u)} vs {du_total(u)}"


def _row_tv_linear():
    g = catalog.path4()
    u = PiecewiseFunction.from_segments(g, {
        "e1": [(0, 2, 0, 1)], "e2": [(0, 1, 3, -1)], "e3": [(0, 1, 2, 2)],
    })
    return "holds" if tv(u) == du_total(u) + jv(u) else f"differs: {tv(u)} vs {du_total(u) + jv(u)}"


def _row_median():
    g, omega = _omega_1_5()
    lo, hi = median_set(omega.indicator())
    zero = "true" if lo <= 0 <= hi else "false"
    return f"[{fs(lo)}, {fs(hi)}] zero_median={zero}"


def tripod_explicit_field(L) -> VectorField:
    """The explicit tripod field as published: -x/L on e1, 2x/L - 2 on e2 and e3."""
    g = catalog.tripod(L)
    L = F(L)
    return VectorField.from_affine(g, {"e1": (0, -1 / L), "e2": (-2, 2 / L), "e3": (-2, 2 / L)})


def _row_green_tripod():
    g = catalog.tripod(3)
    z = tripod_explicit_field(3)
    u = GraphSubset.edges(g, ["e1"]).indicator()
    # the field is not Kirchhoff, so use the identity with every vertex in the boundary sum
    return fs(green_residual(z, u, require_kirchhoff=False))


def _row_isoperimetric():
    g = catalog.star4()
    E = GraphSubset.from_arcs(g, [("e1", 0, F(3, 2))])
    B = GraphSubset.from_arcs(g, [("e1", F(3, 2), 2), ("e2", 0, F(1, 2)), ("e3", 0, F(1, 2))])
    if length(E) != length(B):
        return "lengths differ"
    return f"{fs(perimeter(E))} vs {fs(perimeter(B))} at length {fs(length(E))}"


def _row_within_ball():
    B = catalog.ball_star4(F(5, 8))
    r = cheeger_within(B.graph, B)
    return f"{fs(r.value)} {_arcs(r.witness)}"


def _row_calibrable(g, omega, full=True):
    ok, lam, h1 = is_calibrable(g, omega)
    return f"{str(ok).lower()} {fs(lam)} {fs(h1)}" if full else str(ok).lower()


def _row_probe():
    g, omega = _two_intervals()
    p = path_convexity_probe(g, omega)
    if p.counterexample is None:
        return "none-found"
    return f"{_arcs(p.counterexample)} {fs(p.per_omega_cap_E)}>{fs(p.per_E)}"


def _row_cut(g):
    r = cheeger_cut(g)
    return f"{fs(r.value)} {_arcs(r.witness)}"


def _row_rayleigh_set():
    B = catalog.ball_star4(F(5, 8))
    E = cheeger_within(B.graph, B).witness
    return fs(rayleigh_tv(E.indicator() / length(E), "within", B))


def _row_rayleigh_balanced():
    g = catalog.tripod(5, 1, 2)
    A = GraphSubset.from_arcs(g, [("e1", 0, 4)])
    u = (A.indicator() - A.complement().indicator()) / g.total_length
    return fs(rayleigh_tv(u, "global"))


def _row_flow_ball():
    B = catalog.ball_star4(F(5, 8))
    c = dual_flow(B.graph, B)
    return f"{fs(c.dual)} gap={fs(c.gap)}"


def _row_feasibility():
    B = catalog.ball_star4(F(5, 8))
    h1 = cheeger_within(B.graph, B).value
    a = flow_feasible(B.graph, B, h1)
    b = flow_feasible(B.graph, B, h1 + F(1, 100))
    return f"feasible@h1={str(a).lower()} feasible@h1+1/100={str(b).lower()}"


def _row_eigen_constant():
    g = catalog.star4()
    ep = verify_eigenpair(g, 0, PiecewiseFunction.constant(g, 1 / g.total_length))
    xi_one = all(s.v0 == s.v1 == 1 for _, s in ep.xi.all_segments())
    z_zero = ep.z.sup_norm == 0
    return f"verified xi={1 if xi_one else '?'} z={0 if z_zero else '?'}"


def _row_eigen_tripod_lp():
    g = catalog.tripod(3)
    u = GraphSubset.edges(g, ["e1"]).indicator() / 3
    ep = verify_eigenpair(g, F(1, 3), u)
    return f"verified lambda={fs(ep.lam)}"


def _row_eigen_explicit():
    g = catalog.tripod(3)
    u = GraphSubset.edges(g, ["e1"]).indicator() / 3
    try:
        verify_eigenpair(g, F(1, 3), u, z=tripod_explicit_field(3))
    except NotEigenpair as exc:
        return f"rejected ({exc})"
    return "accepted"


def _row_eigen_1_5():
    g, omega = _omega_1_5()
    try:
        verify_eigenpair(g, ratio(omega), omega.indicator() / length(omega))
    except NotEigenpair as exc:
        return f"rejected {exc.reason}"
    return "accepted"


def _row_from_cut():
    g = catalog.tripod(3)
    return fs(construct_eigenpair_from_cut(g, GraphSubset.edges(g, ["e1"])).lam)


def _row_inequality():
    rep = cheeger_inequality_check(catalog.tripod(3))
    return "holds" if rep["ok"] else f"violated {rep}"


def _row_cli_certify():
    import json
    import os
    import tempfile

    from .cli import run

    B = catalog.ball_star4(F(5, 8))
    with tempfile.TemporaryDirectory() as tmp:
        gp, sp = os.path.join(tmp, "g.json"), os.path.join(tmp, "s.json")
        with open(gp, "w") as fh:
            fh.write(B.graph.to_json())
        with open(sp, "w") as fh:
            fh.write(B.to_json())
        code, out, _ = run(["cheeger", gp, "--within", sp, "--certify"])
    if code != 0:
        return f"exit {code}"
    doc = json.loads(out)
    return f"{doc['value']} gap={doc['certificate']['gap']}"


def rows() -> list[Row]:
    s4, t1 = catalog.star4(), catalog.tripod(1)
    b12, b58 = catalog.ball_star4(F(1, 2)), catalog.ball_star4(F(5, 8))
    two = _two_intervals()
    return [
        Row("graph.path4", "path v1-v2-v3-v4, lengths 2,1,1", _row_path4),
        Row("graph.segment", "one edge of length 5", _row_segment),
        Row("graph.tripod_centre", "tripod centre vertex", lambda: _row_classify(t1, "v2")),
        Row("graph.degree2_junction", "degree-2 junction of the path", lambda: _row_classify(catalog.path4(), "v2")),
        Row("bv.length_ball_5_8", "length of B(v,5/8)", lambda: fs(length(b58))),
        Row("bv.per_ball_1_2", "perimeter of B(v,1/2)", lambda: fs(perimeter(b12))),
        Row("bv.per_ball_5_8", "perimeter of B(v,5/8)", lambda: fs(perimeter(b58))),
        Row("bv.per_two_intervals", "perimeter of [1,2]u[3,4] on a length-5 edge", lambda: fs(perimeter(two[1]))),
        Row("bv.per_anchored_1_5", "perimeter of [1,5] at a degree-1 vertex",
            lambda: fs(perimeter(GraphSubset.from_arcs(two[0], [("e1", 1, 5)])))),
        Row("bv.per_full", "perimeter of the whole graph", lambda: fs(perimeter(GraphSubset.full(s4)))),
        Row("bv.per_complement_ball_5_8", "perimeter of the complement of B(v,5/8)",
            lambda: fs(perimeter(b58.complement()))),
        Row("bv.tv_continuous_equals_du", "TV = |Du| for vertex-continuous u", _row_tv_continuous),
        Row("bv.tv_linear_equals_du_plus_jv", "TV = |Du| + JV on a linear graph", _row_tv_linear),
        Row("bv.median_indicator_1_5", "median of chi_[1,5] on a length-6 edge", _row_median),
        Row("bv.green_tripod_field", "Green residual, explicit tripod field vs chi_e1", _row_green_tripod),
        Row("bv.isoperimetric_failure", "Per([v1,3/2]) vs Per(B(v2,1/2))", _row_isoperimetric),
        Row("cheeger.ratio_ball_5_8", "ratio of B(v,5/8)", lambda: fs(ratio(b58))),
        Row("cheeger.ratio_ball_1_2", "ratio of B(v,1/2)", lambda: fs(ratio(b12))),
        Row("cheeger.ratio_7_8_2", "ratio of [7/8,2] on e1",
            lambda: fs(ratio(GraphSubset.from_arcs(s4, [("e1", F(7, 8), 2)])))),
        Row("cheeger.within_ball_5_8", "Cheeger set of B(v,5/8)", _row_within_ball),
        Row("cheeger.within_two_intervals", "Cheeger constant of [1,2]u[3,4]",
            lambda: fs(cheeger_within(*two).value)),
        Row("cheeger.calibrable_ball_5_8", "calibrability of B(v,5/8)", lambda: _row_calibrable(s4, b58)),
        Row("cheeger.calibrable_two_intervals", "calibrability of [1,2]u[3,4]", lambda: _row_calibrable(*two)),
        Row("cheeger.calibrable_1_5", "calibrability of [1,5] on a length-6 edge",
            lambda: _row_calibrable(*_omega_1_5(), full=False)),
        Row("cheeger.probe_two_intervals", "path-convexity probe of [1,2]u[3,4]", _row_probe),
        Row("cheeger.tripod_equilateral", "Cheeger cut, equilateral tripod L=3", lambda: _row_cut(catalog.tripod(3))),
        Row("cheeger.tripod_long_edge", "Cheeger cut, tripod 5,1,2", lambda: _row_cut(catalog.tripod(5, 1, 2))),
        Row("cheeger.rayleigh_cheeger_set", "TV quotient of a normalized Cheeger set", _row_rayleigh_set),
        Row("cheeger.rayleigh_balanced", "TV quotient of a balanced two-level function", _row_rayleigh_balanced),
        Row("dual.flow_ball_5_8", "flow dual of B(v,5/8)", _row_flow_ball),
        Row("dual.feasibility_threshold", "flow feasibility at and above h1", _row_feasibility),
        Row("eigen.constant", "(0, 1/l) is an eigenpair", _row_eigen_constant),
        Row("eigen.tripod_lp", "(1/L, chi_e1/L) on the tripod", _row_eigen_tripod_lp),
        Row("eigen.tripod_explicit_field", "published tripod field certifies the eigenpair", _row_eigen_explicit),
        Row("eigen.indicator_1_5", "(ratio, chi/l) for [1,5] on a length-6 edge", _row_eigen_1_5),
        Row("eigen.from_cut_tripod", "eigenpair built from the cut e1", _row_from_cut),
        Row("spectral.cheeger_inequality_tripod", "h^2/4 <= gap on the tripod", _row_inequality),
        Row("cli.cheeger_within_certify", "cheeger --within B(v,5/8) --certify", _row_cli_certify),
    ]


def run_suite(expected: dict | None = None) -> list[dict]:
    expected = EXPECTED if expected is None else expected
    out = []
    for row in rows():
        try:
            got = row.compute()
        except MGCError as exc:
            got = f"error {type(exc).__name__}: {exc}"
        want = expected.get(row.id)
        out.append({
            "id": row.id,
            "description": row.description,
            "expected": want,
            "computed": got,
            "pass": want is not None and got == want,
        })
    return out
