"""Flow duals of the Cheeger problem, the dual norm, and 1-Laplacian eigenpairs.

All problems are posed on fields that are affine between problem
breakpoints, so the LPs are finite and solved exactly by :mod:`mgc.lp`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bv import (
    GraphSubset,
    PiecewiseFunction,
    Segment,
    VectorField,
    has_zero_median,
    integral,
    l1_norm,
    length,
    median_set,
    tv,
)
from .cheeger import cheeger_cut, cheeger_within, ratio
from .errors import InfeasibleDual, InvalidFunction, NotACheegerCut, NotEigenpair, NotNormalized
from .graph import MetricGraph, fraction_str
from .lp import INFEASIBLE, OPTIMAL, LinearProgram, solve_lp

ZERO = Fraction(0)


def _node(eid, k):
    return f"z[{eid}][{k}]"


def _add_kirchhoff(p: LinearProgram, g: MetricGraph, nodes: dict) -> None:
    for v in g.vertices:
        row = {}
        for e in g.incident(v):
            if e.end_at(v) == "head":
                row[_node(e.id, len(nodes[e.id]) - 1)] = 1
            else:
                row[_node(e.id, 0)] = -1
        p.eq(row, 0)


def _field(g: MetricGraph, nodes: dict, x: dict) -> VectorField:
    return VectorField.from_nodes(g, {
        eid: [(xs, x[_node(eid, k)]) for k, xs in enumerate(pts)] for eid, pts in nodes.items()
    })


def _omega_nodes(g: MetricGraph, Omega: GraphSubset) -> dict:
    return {
        e.id: sorted({ZERO, e.length, *[p for a, b in Omega.arcs_on(e.id) for p in (a, b)]})
        for e in g.edges
    }


def _in_omega(Omega: GraphSubset, eid, p, q) -> bool:
    mid = (p + q) / 2
    return any(a <= mid <= b for a, b in Omega.arcs_on(eid))


# ---------------------------------------------------------------------------
# max-flow dual of the constrained Cheeger problem
# ---------------------------------------------------------------------------

@dataclass
class CheegerCertificate:
    primal: Fraction
    field: VectorField
    sup_norm: Fraction

    @property
    def dual(self) -> Fraction:
        return 1 / self.sup_norm

    @property
    def gap(self) -> Fraction:
        return self.primal - self.dual

    def to_dict(self) -> dict:
        return {
            "primal": fraction_str(self.primal),
            "dual": fraction_str(self.dual),
            "sup_norm": fraction_str(self.sup_norm),
            "gap": fraction_str(self.gap),
            "field": self.field.to_dict(),
        }


def flow_lp(g: MetricGraph, Omega: GraphSubset):
    """LP: minimize ``t`` over Kirchhoff ``z`` with slope 1 on Omega and ``|z| <= t``."""
    nodes = _omega_nodes(g, Omega)
    p = LinearProgram()
    p.var("t")
    for eid, pts in nodes.items():
        for k in range(len(pts)):
            p.var(_node(eid, k))
    for eid, pts in nodes.items():
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            if _in_omega(Omega, eid, a, b):
                p.eq({_node(eid, k + 1): 1, _node(eid, k): -1}, b - a)
        for k in range(len(pts)):
            p.le({_node(eid, k): 1, "t": -1}, 0)
            p.le({_node(eid, k): -1, "t": -1}, 0)
    _add_kirchhoff(p, g, nodes)
    p.minimize({"t": 1})
    return p, nodes


def dual_flow(g: MetricGraph, Omega: GraphSubset, primal: Optional[Fraction] = None) -> CheegerCertificate:
    """Optimal flow field for Omega; ``1/||z||`` equals the Cheeger constant of Omega.

    ``primal`` defaults to the enumerated Cheeger constant of Omega.
    """
    L = length(Omega)
    if L == 0 or L >= g.total_length:
        raise InfeasibleDual("the flow dual needs 0 < l(Omega) < l(Gamma)")
    p, nodes = flow_lp(g, Omega)
    res = solve_lp(p)
    if res.status != OPTIMAL or res.value <= 0:
        raise InfeasibleDual(f"flow LP returned {res.status}")
    if primal is None:
        primal = cheeger_within(g, Omega).value
    z = _field(g, nodes, res.x)
    return CheegerCertificate(Fraction(primal), z, z.sup_norm)


def flow_feasible(g: MetricGraph, Omega: GraphSubset, h) -> bool:
    """Is there a Kirchhoff ``z`` with ``|z| <= 1`` and ``z' >= h`` on Omega?"""
    h = Fraction(h)
    nodes = _omega_nodes(g, Omega)
    p = LinearProgram()
    for eid, pts in nodes.items():
        for k in range(len(pts)):
            p.var(_node(eid, k))
            p.le({_node(eid, k): 1}, 1)
            p.ge({_node(eid, k): 1}, -1)
    for eid, pts in nodes.items():
        for k, (a, b) in enumerate(zip(pts, pts[1:])):
            if _in_omega(Omega, eid, a, b):
                p.ge({_node(eid, k + 1): 1, _node(eid, k): -1}, h * (b - a))
    _add_kirchhoff(p, g, nodes)
    return solve_lp(p).status == OPTIMAL


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Exact basis of ``{x : A x = 0}`` by Gauss-Jordan elimination."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -a[i][f]
        basis.append(vec)
    return basis


def feasible_field_sampler(g: MetricGraph, Omega: GraphSubset, base: Optional[VectorField] = None):
    """Return ``sample(rng)`` drawing random Kirchhoff fields with slope 1 on Omega.

    Each sample is ``base`` (default: the optimal flow) plus a random
    rational combination of the null space of the equality constraints, so
    it is feasible for the flow dual but its norm is unbounded.
    """
    p, nodes = flow_lp(g, Omega)
    names = [n for n in p.names if n != "t"]
    index = {n: k for k, n in enumerate(names)}
    rows = []
    for coeffs, _ in p.equalities:
        row = [ZERO] * len(names)
        for k, v in coeffs.items():
            row[index[k]] = v
        rows.append(row)
    basis = _nullspace(rows, len(names))
    if base is None:
        base = dual_flow(g, Omega, primal=Fraction(0)).field
    x0 = {_node(eid, k): z for eid, pts in base.nodes for k, (_, z) in enumerate(pts)}

    def sample(rng: random.Random) -> VectorField:
        x = dict(x0)
        for vec in basis:
            c = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
            for k, n in enumerate(names):
                if vec[k]:
                    x[n] += c * vec[k]
        return _field(g, nodes, x)

    return sample


def random_feasible_field(g: MetricGraph, Omega: GraphSubset, rng: random.Random) -> VectorField:
    return feasible_field_sampler(g, Omega)(rng)


# ---------------------------------------------------------------------------
# dual norm of a piecewise constant function
# ---------------------------------------------------------------------------

def dual_norm(g: MetricGraph, f: PiecewiseFunction) -> Optional[Fraction]:
    """``min ||z||`` over Kirchhoff ``z`` with ``z' = -f``; ``None`` if infeasible."""
    nodes = {}
    p = LinearProgram()
    p.var("t")
    for eid, segs in f.pieces:
        if any(s.v0 != s.v1 for s in segs):
            raise InvalidFunction(f"dual_norm needs a piecewise constant function (edge {eid!r})")
        pts = [segs[0].x0] + [s.x1 for s in segs]
        nodes[eid] = pts
        for k in range(len(pts)):
            p.var(_node(eid, k))
            p.le({_node(eid, k): 1, "t": -1}, 0)
            p.le({_node(eid, k): -1, "t": -1}, 0)
        for k, s in enumerate(segs):
            p.eq({_node(eid, k + 1): 1, _node(eid, k): -1}, -s.v0 * s.width)
    _add_kirchhoff(p, g, nodes)
    p.minimize({"t": 1})
    res = solve_lp(p)
    if res.status == INFEASIBLE:
        return None
    return res.value


# ---------------------------------------------------------------------------
# eigenpairs
# ---------------------------------------------------------------------------

@dataclass
class Eigenpair:
    lam: Fraction
    u: PiecewiseFunction
    xi: PiecewiseFunction
    z: VectorField

    @property
    def median(self) -> tuple[Fraction, Fraction]:
        return median_set(self.u)

    @property
    def zero_median(self) -> bool:
        return has_zero_median(self.u)

    @property
    def xi_integral(self) -> Fraction:
        return integral(self.xi)

    def to_dict(self) -> dict:
        lo, hi = self.median
        return {
            "lambda": fraction_str(self.lam),
            "u": self.u.to_dict(),
            "xi": self.xi.to_dict(),
            "z": self.z.to_dict(),
            "median": [fraction_str(lo), fraction_str(hi)],
            "zero_median": self.zero_median,
            "xi_integral": fraction_str(self.xi_integral),
            "verified": not check_eigenpair(self),
        }


def _sign_segments(u: PiecewiseFunction, eid: str, extra_cuts=()) -> list[Segment]:
    """Segments of ``u`` on ``eid`` split at zero crossings and ``extra_cuts``."""
    cuts = set(extra_cuts)
    for s in u.segments(eid):
        if s.v0 * s.v1 < 0:
            cuts.add(s.x0 + s.width * s.v0 / (s.v0 - s.v1))
    out = []
    for s in u.segments(eid):
        out.extend(s.split(cuts))
    return out


def _sign_class(s: Segment) -> int:
    if max(s.v0, s.v1) > 0:
        return 1
    if min(s.v0, s.v1) < 0:
        return -1
    return 0


def verify_eigenpair(g: MetricGraph, lam, u: PiecewiseFunction, z: Optional[VectorField] = None) -> Eigenpair:
    """Certify that ``(lam, u)`` is an eigenpair of the 1-Laplacian.

    Without ``z`` an LP searches for a selection ``xi`` of sign(u) and a
    Kirchhoff field with ``|z| <= 1`` and ``lam*xi = -z'``.  With ``z`` the
    supplied field is checked instead, ``xi`` being read off as ``-z'/lam``.
    Raises :class:`NotEigenpair` with a ``reason`` on failure.
    """
    lam = Fraction(lam)
    if l1_norm(u) != 1:
        raise NotNormalized(f"||u||_1 = {l1_norm(u)}, expected 1")
    if tv(u) != lam:
        raise NotEigenpair("tv", f"TV(u) = {tv(u)} differs from lambda = {lam}")
    if z is not None:
        return _check_supplied_field(g, lam, u, z)

    segs = {e.id: _sign_segments(u, e.id) for e in g.edges}
    nodes = {eid: [ss[0].x0] + [s.x1 for s in ss] for eid, ss in segs.items()}
    p = LinearProgram()
    for eid, ss in segs.items():
        for k in range(len(ss) + 1):
            p.var(_node(eid, k))
            p.le({_node(eid, k): 1}, 1)
            p.ge({_node(eid, k): 1}, -1)
        for k, s in enumerate(ss):
            sign = _sign_class(s)
            if sign:
                p.eq({_node(eid, k + 1): 1, _node(eid, k): -1}, -lam * sign * s.width)
            else:
                xi = p.var(f"xi[{eid}][{k}]")
                p.le({xi: 1}, 1)
                p.ge({xi: 1}, -1)
                p.eq({_node(eid, k + 1): 1, _node(eid, k): -1, xi: lam * s.width}, 0)
    _add_kirchhoff(p, g, nodes)
    res = solve_lp(p)
    if res.status != OPTIMAL:
        if lam != 0 and not has_zero_median(u):
            lo, hi = median_set(u)
            raise NotEigenpair("median", f"0 is not in med(u) = [{lo}, {hi}]")
        raise NotEigenpair("no_field", "no Kirchhoff field with |z| <= 1 matches lambda*xi = -z'")
    xi_data = {}
    for eid, ss in segs.items():
        rows = []
        for k, s in enumerate(ss):
            sign = _sign_class(s)
            val = Fraction(sign) if sign else res.x[f"xi[{eid}][{k}]"]
            rows.append((s.x0, s.x1, val, val))
        xi_data[eid] = rows
    ep = Eigenpair(lam, u, PiecewiseFunction.from_segments(g, xi_data), _field(g, nodes, res.x))
    failed = check_eigenpair(ep)
    if failed:
        raise NotEigenpair("internal", f"LP solution fails {failed}")
    if lam != 0:
        # necessary conditions; a feasible LP must satisfy them
        assert ep.zero_median and ep.xi_integral == 0
    return ep


def _check_supplied_field(g, lam, u, z) -> Eigenpair:
    if lam == 0:
        raise NotEigenpair("no_field", "xi cannot be recovered from z when lambda = 0")
    data = {}
    for e in g.edges:
        data[e.id] = [(p, q, -s / lam, -s / lam) for p, q, s in z.slopes(e.id)]
    ep = Eigenpair(lam, u, PiecewiseFunction.from_segments(g, data), z)
    failed = check_eigenpair(ep)
    if failed:
        raise NotEigenpair(failed[0], "failed clauses: " + ", ".join(failed))
    return ep


def check_eigenpair(ep: Eigenpair) -> list[str]:
    """Re-check every defining clause exactly; returns the names of failed clauses."""
    g = ep.u.graph
    failed = []
    if l1_norm(ep.u) != 1:
        failed.append("normalization")
    # xi is a selection of sign(u)
    ok = True
    for e in g.edges:
        cuts = {s.x0 for s in ep.xi.segments(e.id)}
        for s in _sign_segments(ep.u, e.id, cuts):
            mid = (s.x0 + s.x1) / 2
            xs = next(t for t in ep.xi.segments(e.id) if t.x0 <= mid <= t.x1)
            lo, hi = min(xs.v0, xs.v1), max(xs.v0, xs.v1)
            sign = _sign_class(s)
            if lo < -1 or hi > 1 or (sign == 1 and lo != 1) or (sign == -1 and hi != -1):
                ok = False
    if not ok:
        failed.append("sign_selection")
    if not ep.z.is_kirchhoff:
        failed.append("kirchhoff")
    if ep.z.sup_norm > 1:
        failed.append("field_bound")
    # lam*xi = -z' on the common refinement
    ok = True
    for e in g.edges:
        for p, q, slope in ep.z.slopes(e.id):
            for s in ep.xi.segments(e.id):
                if max(p, s.x0) < min(q, s.x1):
                    if s.v0 != s.v1 or ep.lam * s.v0 != -slope:
                        ok = False
    if not ok:
        failed.append("divergence")
    if tv(ep.u) != ep.lam:
        failed.append("tv")
    return failed


def construct_eigenpair_from_cut(g: MetricGraph, D: GraphSubset) -> Eigenpair:
    """Eigenpair ``(h, chi_D / l(D))`` for a Cheeger cut ``D``."""
    ell = length(D)
    if ell == 0 or 2 * ell > g.total_length:
        raise NotACheegerCut(f"l(D) = {ell} is not in (0, l(Gamma)/2]")
    h = cheeger_cut(g).value
    if ratio(D) != h:
        raise NotACheegerCut(f"ratio(D) = {ratio(D)} but h = {h}")
    return verify_eigenpair(g, h, D.indicator() / ell)
