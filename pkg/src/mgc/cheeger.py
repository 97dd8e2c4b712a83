"""Exact Cheeger constants, Cheeger cuts, calibrability and path-convexity probing.

A ratio minimizer never needs two disjoint components in the interior of
one edge piece (sliding one against the other keeps the length and removes
two cut points).  Each piece ("unit") therefore takes one of six
configurations, and for a fixed configuration vector the perimeter is a
constant.  Minimizing the ratio then means maximizing the volume, so the
search is a finite enumeration over configuration vectors.

Units are whole edges for the global cut and maximal arcs of Omega for the
constrained problem.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .bv import (
    GraphSubset,
    PiecewiseFunction,
    has_zero_median,
    integral,
    l1_norm,
    length,
    perimeter,
    tv,
)
from .errors import EmptyOmega, EmptySet, PatternBudgetExceeded, ViolatedConstraint, ZeroPerimeterOmega
from .graph import MetricGraph, fraction_str

TAGS = ("Empty", "Full", "AnchorLeft", "AnchorRight", "AnchorBoth", "Interior")
EMPTY, FULL, LEFT, RIGHT, BOTH, INTERIOR = range(6)
DEFAULT_BUDGET = 6 ** 12
_CHUNK = 1 << 17


def pattern_budget() -> int:
    raw = os.environ.get("MGC_PATTERN_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def ratio(E: GraphSubset) -> Fraction:
    ell = length(E)
    if ell == 0:
        raise EmptySet("ratio needs a subset of positive length")
    return perimeter(E) / ell


@dataclass(frozen=True)
class Unit:
    edge: str
    a: Fraction
    b: Fraction
    tail: Optional[str]     # vertex at a, if a is an edge end
    head: Optional[str]     # vertex at b, if b is an edge end

    @property
    def width(self) -> Fraction:
        return self.b - self.a


@dataclass(frozen=True)
class CutPattern:
    units: tuple[Unit, ...]
    tags: tuple[int, ...]

    def to_list(self) -> list[dict]:
        return [
            {"edge": u.edge, "from": fraction_str(u.a), "to": fraction_str(u.b), "tag": TAGS[t]}
            for u, t in zip(self.units, self.tags)
        ]


@dataclass
class CheegerResult:
    problem: str                # "within" or "cut"
    value: Fraction
    witness: GraphSubset
    pattern: CutPattern
    lower_bound: Optional[Fraction] = None     # 2/l(Gamma) for the global cut
    certificate: object = None
    patterns_evaluated: int = 0

    @property
    def lower_bound_ok(self) -> Optional[bool]:
        return None if self.lower_bound is None else self.value >= self.lower_bound

    def to_dict(self) -> dict:
        doc = {
            "problem": self.problem,
            "value": fraction_str(self.value),
            "witness": self.witness.to_list(),
            "pattern": self.pattern.to_list(),
        }
        if self.lower_bound is not None:
            doc["lower_bound_check"] = {"bound": fraction_str(self.lower_bound), "ok": self.lower_bound_ok}
        if self.certificate is not None:
            doc["certificate"] = self.certificate.to_dict()
        return doc


# ---------------------------------------------------------------------------
# units and per-tag tables
# ---------------------------------------------------------------------------

def edge_units(g: MetricGraph) -> list[Unit]:
    return [Unit(e.id, Fraction(0), e.length, e.tail, e.head) for e in g.edges]


def omega_units(Omega: GraphSubset) -> list[Unit]:
    g = Omega.graph
    out = []
    for eid, a, b in Omega.arcs:
        e = g.edge(eid)
        out.append(Unit(eid, a, b, e.tail if a == 0 else None, e.head if b == e.length else None))
    return out


def _tag_table(unit: Unit, tag: int):
    """``(cut points, tail bit, head bit, fixed volume, adjustable max)``."""
    inner_a = unit.tail is None     # a lies strictly inside the edge
    inner_b = unit.head is None
    w = unit.width
    if tag == EMPTY:
        return 0, 0, 0, Fraction(0), Fraction(0)
    if tag == FULL:
        return inner_a + inner_b, 1, 1, w, Fraction(0)
    if tag == LEFT:
        return inner_a + 1, 1, 0, Fraction(0), w
    if tag == RIGHT:
        return 1 + inner_b, 0, 1, Fraction(0), w
    if tag == BOTH:
        return inner_a + 2 + inner_b, 1, 1, Fraction(0), w
    return 2, 0, 0, Fraction(0), w


class _Problem:
    def __init__(self, g: MetricGraph, units: list[Unit], cap: Optional[Fraction]):
        self.g = g
        self.units = units
        self.cap = cap          # volume cap (l(Gamma)/2) for the global cut
        self.table = [[_tag_table(u, t) for t in range(6)] for u in units]
        # edge-ends at interior vertices that some unit can occupy
        self.vertex_slots = {}
        for v in g.interior_vertices:
            slots = []
            for k, u in enumerate(units):
                if u.tail == v:
                    slots.append((k, 1))
                if u.head == v:
                    slots.append((k, 2))
            self.vertex_slots[v] = slots

    def exact(self, tags) -> tuple[int, Fraction, Fraction]:
        """Perimeter, fixed volume and adjustable volume of a pattern."""
        cuts, fixed, adj = 0, Fraction(0), Fraction(0)
        for k, t in enumerate(tags):
            c, _, _, f, a = self.table[k][t]
            cuts += c
            fixed += f
            adj += a
        per = cuts
        for v, slots in self.vertex_slots.items():
            kv = sum(self.table[k][tags[k]][pos] for k, pos in slots)
            per += min(kv, self.g.degree(v) - kv)
        return per, fixed, adj

    def volume(self, fixed, adj) -> Optional[Fraction]:
        if self.cap is None:
            return fixed + adj
        if fixed > self.cap:
            return None
        return min(fixed + adj, self.cap)

    def vectorized(self, codes: np.ndarray):
        """Float ratios for a block of patterns given as base-6 codes."""
        n_units = len(self.units)
        digits = np.empty((codes.size, n_units), dtype=np.int64)
        rest = codes.copy()
        for k in range(n_units - 1, -1, -1):
            digits[:, k] = rest % 6
            rest //= 6
        cuts = np.zeros(codes.size, dtype=np.int64)
        fixed = np.zeros(codes.size)
        adj = np.zeros(codes.size)
        for k in range(n_units):
            tab = self.table[k]
            cuts += np.array([r[0] for r in tab])[digits[:, k]]
            fixed += np.array([float(r[3]) for r in tab])[digits[:, k]]
            adj += np.array([float(r[4]) for r in tab])[digits[:, k]]
        per = cuts
        for v, slots in self.vertex_slots.items():
            kv = np.zeros(codes.size, dtype=np.int64)
            for k, pos in slots:
                kv += np.array([r[pos] for r in self.table[k]])[digits[:, k]]
            per = per + np.minimum(kv, self.g.degree(v) - kv)
        if self.cap is None:
            vol = fixed + adj
            ok = vol > 0
        else:
            cap = float(self.cap)
            ok = (fixed <= cap * (1 + 1e-12)) & (fixed + adj > 0)
            vol = np.minimum(fixed + adj, cap)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(ok, per / np.where(vol > 0, vol, 1.0), np.inf)
        return r, digits

    def realize(self, tags) -> GraphSubset:
        _, fixed, adj = self.exact(tags)
        target = self.volume(fixed, adj)
        share = target - fixed
        arcs = []
        for u, t in zip(self.units, tags):
            if t == EMPTY:
                continue
            if t == FULL:
                arcs.append((u.edge, u.a, u.b))
                continue
            s = share * u.width / adj if adj else Fraction(0)
            if t == LEFT:
                arcs.append((u.edge, u.a, u.a + s))
            elif t == RIGHT:
                arcs.append((u.edge, u.b - s, u.b))
            elif t == BOTH:
                arcs.append((u.edge, u.a, u.a + s / 2))
                arcs.append((u.edge, u.b - s / 2, u.b))
            else:
                c = u.a + (u.width - s) / 2
                arcs.append((u.edge, c, c + s))
        return GraphSubset.from_arcs(self.g, arcs)

    def pattern_of(self, E: GraphSubset) -> CutPattern:
        tags = []
        for u in self.units:
            inside = [(a, b) for a, b in E.arcs_on(u.edge) if u.a <= a and b <= u.b]
            if not inside:
                tags.append(EMPTY)
            elif inside == [(u.a, u.b)]:
                tags.append(FULL)
            elif len(inside) == 2:
                tags.append(BOTH)
            elif inside[0][0] == u.a:
                tags.append(LEFT)
            elif inside[0][1] == u.b:
                tags.append(RIGHT)
            else:
                tags.append(INTERIOR)
        return CutPattern(tuple(self.units), tuple(tags))

    def solve(self, problem: str) -> CheegerResult:
        n_units = len(self.units)
        total = 6 ** n_units
        budget = pattern_budget()
        if total > budget:
            raise PatternBudgetExceeded(
                f"{total} patterns over {n_units} units exceed the budget {budget} (MGC_PATTERN_BUDGET)"
            )
        # float screening, then exact comparison of the near-optimal patterns
        best_float = np.inf
        near: list[tuple[int, ...]] = []
        for start in range(0, total, _CHUNK):
            codes = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            r, digits = self.vectorized(codes)
            m = r.min()
            if m < best_float * (1 - 1e-9):
                best_float = m
                near = []
            keep = r <= best_float * (1 + 1e-9)
            near.extend(tuple(int(x) for x in row) for row in digits[keep])
        best = None
        for tags in near:
            per, fixed, adj = self.exact(tags)
            vol = self.volume(fixed, adj)
            if vol is None or vol == 0:
                continue
            key = (per / vol, tuple((k, t) for k, t in enumerate(tags) if t != EMPTY))
            if best is None or key < best[0]:
                best = (key, tags)
        (value, _), tags = best
        witness = self.realize(tags)
        assert ratio(witness) == value, "realized witness disagrees with its pattern"
        return CheegerResult(problem, value, witness, self.pattern_of(witness), patterns_evaluated=total)


# ---------------------------------------------------------------------------
# public solvers
# ---------------------------------------------------------------------------

def _check_omega(g: MetricGraph, Omega: GraphSubset) -> None:
    if Omega.graph != g:
        raise ValueError("Omega belongs to a different graph")
    if length(Omega) == 0:
        raise EmptyOmega("Omega has zero length")
    if perimeter(Omega) == 0:
        raise ZeroPerimeterOmega("Omega is the whole graph, so its perimeter is 0")


def cheeger_within(g: MetricGraph, Omega: GraphSubset) -> CheegerResult:
    """``min Per(E)/l(E)`` over ``E`` inside ``Omega`` with positive length."""
    _check_omega(g, Omega)
    return _Problem(g, omega_units(Omega), None).solve("within")


def cheeger_cut(g: MetricGraph) -> CheegerResult:
    """``h = min Per(D)/l(D)`` over ``0 < l(D) <= l(Gamma)/2``."""
    L = g.total_length
    res = _Problem(g, edge_units(g), L / 2).solve("cut")
    res.lower_bound = 2 / L
    return res


def is_calibrable(g: MetricGraph, Omega: GraphSubset) -> tuple[bool, Fraction, Fraction]:
    own = ratio(Omega)
    h1 = cheeger_within(g, Omega).value
    return own == h1, own, h1


# ---------------------------------------------------------------------------
# path-convexity
# ---------------------------------------------------------------------------

@dataclass
class ConvexityProbe:
    counterexample: Optional[GraphSubset]
    per_E: Optional[Fraction] = None
    per_omega_cap_E: Optional[Fraction] = None
    candidates: int = 0

    def to_dict(self) -> dict:
        if self.counterexample is None:
            return {"result": "none-found", "candidates": self.candidates}
        return {
            "result": "counterexample",
            "E": self.counterexample.to_list(),
            "per_E": fraction_str(self.per_E),
            "per_omega_cap_E": fraction_str(self.per_omega_cap_E),
            "candidates": self.candidates,
        }


def probe_cells(g: MetricGraph, Omega: GraphSubset, subdivisions: int = 1) -> list[tuple[str, Fraction, Fraction]]:
    """Cells between consecutive edge ends and Omega endpoints, each cut into equal parts."""
    cells = []
    for e in g.edges:
        pts = sorted({Fraction(0), e.length, *[p for a, b in Omega.arcs_on(e.id) for p in (a, b)]})
        for p, q in zip(pts, pts[1:]):
            step = (q - p) / subdivisions
            cells.extend((e.id, p + k * step, p + (k + 1) * step) for k in range(subdivisions))
    return cells


def path_convexity_probe(g: MetricGraph, Omega: GraphSubset, subdivisions: int = 1,
                         max_cells: int = 20) -> ConvexityProbe:
    """Search unions of probe cells for ``E`` with ``Per(Omega & E) > Per(E)``.

    ``E`` with zero perimeter (the whole graph) is skipped.  Among violators
    the largest excess wins, then the shortest ``E``, then arcs that start
    later along their edges.  ``none-found`` proves nothing.
    """
    cells = probe_cells(g, Omega, subdivisions)
    if len(cells) > max_cells:
        raise PatternBudgetExceeded(f"{len(cells)} probe cells exceed the limit {max_cells}")
    best = None
    count = 0
    for mask in itertools.product((0, 1), repeat=len(cells)):
        chosen = [c for c, bit in zip(cells, mask) if bit]
        if not chosen:
            continue
        E = GraphSubset.from_arcs(g, chosen)
        count += 1
        pe = perimeter(E)
        if pe == 0:
            continue
        po = perimeter(Omega.intersection(E))
        if po > pe:
            key = (pe - po, length(E), tuple((g.edge_position(eid), -a) for eid, a, _ in E.arcs))
            if best is None or key < best[0]:
                best = (key, E, pe, po)
    if best is None:
        return ConvexityProbe(None, candidates=count)
    _, E, pe, po = best
    return ConvexityProbe(E, pe, po, count)


# ---------------------------------------------------------------------------
# Rayleigh quotients
# ---------------------------------------------------------------------------

def rayleigh_tv(u: PiecewiseFunction, mode: str = "global", Omega: Optional[GraphSubset] = None) -> Fraction:
    """``TV(u)/int u`` inside ``Omega`` or ``TV(u)/||u||_1`` for zero-median ``u``."""
    if mode == "within":
        if Omega is None:
            raise ViolatedConstraint("within mode needs Omega")
        outside = Omega.complement()
        for eid, s in u.all_segments():
            if s.v0 < 0 or s.v1 < 0:
                raise ViolatedConstraint("u must be nonnegative")
            for a, b in outside.arcs_on(eid):
                if max(a, s.x0) < min(b, s.x1) and (s.v0 != 0 or s.v1 != 0):
                    raise ViolatedConstraint("u must vanish outside Omega")
        mass = integral(u)
        if mass <= 0:
            raise ViolatedConstraint("u must have positive integral")
        var = tv(u)
        if var <= 0:
            raise ViolatedConstraint("u must have positive total variation")
        return var / mass
    if mode == "global":
        norm = l1_norm(u)
        if norm <= 0:
            raise ViolatedConstraint("u must have positive L1 norm")
        if not has_zero_median(u):
            raise ViolatedConstraint("0 must be a median of u")
        return tv(u) / norm
    raise ValueError(f"unknown mode {mode!r}")
