"""Exact rational linear programming: dense two-phase simplex with Bland's rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ComputationError

OPTIMAL = "OPTIMAL"
INFEASIBLE = "INFEASIBLE"
UNBOUNDED = "UNBOUNDED"

MAX_TABLEAU_ENTRIES = 4_000_000


class LPTooLarge(ComputationError):
    pass


@dataclass
class LinearProgram:
    """``minimize c.x`` subject to linear equalities and ``<=`` inequalities.

    Variables are free unless declared ``nonneg``.  Coefficients are given as
    ``{variable name: coefficient}`` mappings.
    """

    names: list[str] = field(default_factory=list)
    nonneg: set[str] = field(default_factory=set)
    equalities: list[tuple[dict, Fraction]] = field(default_factory=list)
    inequalities: list[tuple[dict, Fraction]] = field(default_factory=list)
    objective: dict = field(default_factory=dict)

    def var(self, name: str, nonneg: bool = False) -> str:
        if name in self.names:
            raise ValueError(f"duplicate LP variable {name!r}")
        self.names.append(name)
        if nonneg:
            self.nonneg.add(name)
        return name

    def _check(self, coeffs):
        known = set(self.names)
        for k in coeffs:
            if k not in known:
                raise ValueError(f"unknown LP variable {k!r}")
        return {k: Fraction(v) for k, v in coeffs.items() if v != 0}

    def eq(self, coeffs: Mapping, rhs) -> None:
        self.equalities.append((self._check(coeffs), Fraction(rhs)))

    def le(self, coeffs: Mapping, rhs) -> None:
        self.inequalities.append((self._check(coeffs), Fraction(rhs)))

    def ge(self, coeffs: Mapping, rhs) -> None:
        self.le({k: -Fraction(v) for k, v in coeffs.items()}, -Fraction(rhs))

    def minimize(self, coeffs: Mapping) -> None:
        self.objective = self._check(coeffs)

    def residuals_ok(self, x: Mapping) -> bool:
        """Re-substitute an assignment into every constraint, exactly."""
        def dot(c):
            return sum((v * x[k] for k, v in c.items()), Fraction(0))
        return (all(dot(c) == b for c, b in self.equalities)
                and all(dot(c) <= b for c, b in self.inequalities)
                and all(x[k] >= 0 for k in self.nonneg))


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: dict | None = None


class _Tableau:
    def __init__(self, rows, rhs, ncols):
        self.rows = [r + [b] for r, b in zip(rows, rhs)]
        self.ncols = ncols
        self.basis = []

    def pivot(self, r, c, obj):
        prow = self.rows[r]
        inv = 1 / prow[c]
        nz = [j for j, a in enumerate(prow) if a != 0]
        for j in nz:
            prow[j] *= inv
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                f = row[c]
                for j in nz:
                    row[j] -= f * prow[j]
        if obj[c] != 0:
            f = obj[c]
            for j in nz:
                obj[j] -= f * prow[j]
        self.basis[r] = c

    def run(self, obj, allowed):
        """Bland's rule simplex on the current basis; returns False if unbounded."""
        while True:
            enter = next((j for j in range(self.ncols) if allowed[j] and obj[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], enter, obj)


def solve_lp(p: LinearProgram) -> LPResult:
    """Solve exactly; status is OPTIMAL, INFEASIBLE or UNBOUNDED."""
    # column layout: for each variable its + part, then - part if free, then slacks
    cols = {}
    n = 0
    for name in p.names:
        if name in p.nonneg:
            cols[name] = (n, None)
            n += 1
        else:
            cols[name] = (n, n + 1)
            n += 2
    n_slack = len(p.inequalities)
    n_struct = n + n_slack
    m = len(p.equalities) + len(p.inequalities)
    if m * (n_struct + m) > MAX_TABLEAU_ENTRIES:
        raise LPTooLarge(f"LP with {m} rows and {n_struct} columns exceeds the dimension guard")

    def expand(coeffs):
        row = [Fraction(0)] * n_struct
        for k, v in coeffs.items():
            pos, neg = cols[k]
            row[pos] += v
            if neg is not None:
                row[neg] -= v
        return row

    rows, rhs = [], []
    for c, b in p.equalities:
        rows.append(expand(c))
        rhs.append(b)
    for s, (c, b) in enumerate(p.inequalities):
        row = expand(c)
        row[n + s] = Fraction(1)
        rows.append(row)
        rhs.append(b)
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]

    # phase 1 with one artificial per row
    total = n_struct + m
    for i in range(m):
        rows[i] = rows[i] + [Fraction(int(k == i)) for k in range(m)]
    tab = _Tableau(rows, rhs, total)
    tab.basis = list(range(n_struct, total))
    obj = [Fraction(0)] * (total + 1)
    for row in tab.rows:
        for j in range(n_struct):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    tab.run(obj, [True] * total)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n_struct:
            j = next((j for j in range(n_struct) if tab.rows[i][j] != 0), None)
            if j is None:
                del tab.rows[i]
                del tab.basis[i]
                continue
            tab.pivot(i, j, obj)
        i += 1

    cost = [Fraction(0)] * total
    for name, v in p.objective.items():
        pos, neg = cols[name]
        cost[pos] += v
        if neg is not None:
            cost[neg] -= v
    obj = cost + [Fraction(0)]
    for i, b in enumerate(tab.basis):
        cb = cost[b]
        if cb != 0:
            row = tab.rows[i]
            for j in range(total + 1):
                if row[j] != 0:
                    obj[j] -= cb * row[j]
    allowed = [j < n_struct for j in range(total)]
    if not tab.run(obj, allowed):
        return LPResult(UNBOUNDED)

    y = [Fraction(0)] * n_struct
    for i, b in enumerate(tab.basis):
        if b < n_struct:
            y[b] = tab.rows[i][-1]
    x = {}
    for name, (pos, neg) in cols.items():
        x[name] = y[pos] - (y[neg] if neg is not None else 0)
    value = sum((v * x[k] for k, v in p.objective.items()), Fraction(0))
    return LPResult(OPTIMAL, value, x)
