"""Spectral gap of the Kirchhoff Laplacian and the Cheeger inequality check.

Two independent methods:

* secular: on each edge ``u = a cos(kx) + b sin(kx)``; continuity and the
  current condition at every vertex give a square matching matrix ``M(k)``
  whose smallest singular value vanishes exactly at eigenvalues ``k**2``;
* fem: P1 elements with shared vertex nodes and a dense generalized
  symmetric eigensolve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh, svd
from scipy.optimize import minimize_scalar

from .cheeger import cheeger_cut
from .errors import MeshTooCoarse, NoRootInRange, ScanTooCoarse
from .graph import MetricGraph, fraction_str


@dataclass
class SpectralResult:
    k: float
    eigenvalue: float
    residual: float
    method: str
    multiplicity: int = 1
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "k": fmt(self.k),
            "eigenvalue": fmt(self.eigenvalue),
            "residual": fmt(self.residual),
            "multiplicity": self.multiplicity,
            "params": {key: (fmt(v) if isinstance(v, float) else v) for key, v in self.params.items()},
        }


def fmt(x: float) -> float:
    """Round to 12 significant digits for stable output."""
    return float(f"{x:.12g}")


def matching_matrix(g: MetricGraph, k: float) -> np.ndarray:
    m = len(g.edges)
    col = {e.id: 2 * j for j, e in enumerate(g.edges)}
    lengths = {e.id: float(e.length) for e in g.edges}
    rows = []
    for v in g.vertices:
        ends = []
        for e in g.incident(v):
            c0 = col[e.id]
            if e.end_at(v) == "tail":
                value = {c0: 1.0}
                deriv = {c0 + 1: -1.0}          # -u'(0)/k
            else:
                kl = k * lengths[e.id]
                value = {c0: math.cos(kl), c0 + 1: math.sin(kl)}
                deriv = {c0: -math.sin(kl), c0 + 1: math.cos(kl)}   # u'(l)/k
            ends.append((value, deriv))
        first = ends[0][0]
        for value, _ in ends[1:]:
            row = np.zeros(2 * m)
            for c, a in value.items():
                row[c] += a
            for c, a in first.items():
                row[c] -= a
            rows.append(row)
        row = np.zeros(2 * m)
        for _, deriv in ends:
            for c, a in deriv.items():
                row[c] += a
        rows.append(row)
    return np.array(rows)


def sigma_min(g: MetricGraph, k: float) -> float:
    return float(svd(matching_matrix(g, k), compute_uv=False)[-1])


def secular_gap(g: MetricGraph, k_max: float | None = None, scan_step: float | None = None,
                tol: float = 1e-7, mult_tol: float = 1e-6) -> SpectralResult:
    """Smallest ``k > 0`` with a singular matching matrix; eigenvalue ``k**2``."""
    L = float(g.total_length)
    m = len(g.edges)
    if k_max is None:
        k_max = math.pi * (m + 1) / L
    if scan_step is None:
        scan_step = math.pi / (64 * L)
    eps = 1e-6 / L
    ks = np.arange(eps, k_max + scan_step, scan_step)
    sig = np.array([sigma_min(g, k) for k in ks])
    for i in range(1, len(ks) - 1):
        if not (sig[i] <= sig[i - 1] and sig[i] <= sig[i + 1]):
            continue
        lo, hi = ks[i - 1], ks[i + 1]
        # sigma_min is V-shaped at a root; golden section has no sqrt(eps) floor
        try:
            opt = minimize_scalar(lambda k: sigma_min(g, k), bracket=(lo, ks[i], hi), method="golden",
                                  options={"xtol": 1e-15})
        except ValueError:      # flat triple, not a strict bracket
            opt = minimize_scalar(lambda k: sigma_min(g, k), bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-14 * hi})
        if opt.fun >= tol:
            continue
        fine = np.linspace(lo, hi, 33)
        fs = np.array([sigma_min(g, k) for k in fine])
        dips = [j for j in range(1, 32) if fs[j] <= fs[j - 1] and fs[j] <= fs[j + 1]
                and fs[j] < 0.5 * max(fs[0], fs[-1])]
        if len(dips) > 1:
            raise ScanTooCoarse(f"several roots between k = {lo:.6g} and {hi:.6g}; reduce scan_step")
        k = float(opt.x)
        sv = svd(matching_matrix(g, k), compute_uv=False)
        mult = int(np.sum(sv < mult_tol))
        return SpectralResult(k, k * k, float(opt.fun), "secular", max(mult, 1),
                              {"k_max": k_max, "scan_step": scan_step, "tol": tol})
    raise NoRootInRange(f"no eigenvalue with k in ({eps:.3g}, {k_max:.6g}]")


def fem_matrices(g: MetricGraph, cells_per_edge: int) -> tuple[np.ndarray, np.ndarray]:
    if cells_per_edge < 2:
        raise MeshTooCoarse("need at least 2 cells per edge")
    vidx = {v: i for i, v in enumerate(g.vertices)}
    n = len(g.vertices) + len(g.edges) * (cells_per_edge - 1)
    K = np.zeros((n, n))
    M = np.zeros((n, n))
    nxt = len(g.vertices)
    for e in g.edges:
        h = float(e.length) / cells_per_edge
        nodes = [vidx[e.tail]] + list(range(nxt, nxt + cells_per_edge - 1)) + [vidx[e.head]]
        nxt += cells_per_edge - 1
        for a, b in zip(nodes, nodes[1:]):
            K[a, a] += 1 / h
            K[b, b] += 1 / h
            K[a, b] -= 1 / h
            K[b, a] -= 1 / h
            M[a, a] += h / 3
            M[b, b] += h / 3
            M[a, b] += h / 6
            M[b, a] += h / 6
    return K, M


def fem_gap(g: MetricGraph, cells_per_edge: int = 256, mult_rtol: float = 1e-6) -> SpectralResult:
    K, M = fem_matrices(g, cells_per_edge)
    vals, vecs = eigh(K, M)
    # vals[0] is the constant mode
    lam = float(vals[1])
    mult = int(np.sum(np.abs(vals[1:] - lam) <= mult_rtol * lam))
    vec = vecs[:, 1]
    residual = float(np.linalg.norm(K @ vec - lam * (M @ vec)))
    return SpectralResult(math.sqrt(lam), lam, residual, "fem", mult, {"cells_per_edge": cells_per_edge})


def rayleigh_quotient(g: MetricGraph, values: np.ndarray, cells_per_edge: int) -> float:
    """``int u'^2 / int u^2`` for a P1 function after removing its mean."""
    K, M = fem_matrices(g, cells_per_edge)
    ones = np.ones(len(values))
    u = values - (ones @ M @ values) / (ones @ M @ ones)
    return float(u @ K @ u / (u @ M @ u))


def cheeger_inequality_check(g: MetricGraph, method: str = "secular", cells_per_edge: int = 128,
                             tol: float = 1e-9) -> dict:
    """Compare the exact ``h**2/4`` against the spectral gap."""
    h = cheeger_cut(g).value
    h2 = float(h) ** 2 / 4
    fem = fem_gap(g, cells_per_edge)
    if method == "fem":
        main = fem
    else:
        main = secular_gap(g)
    gap = main.eigenvalue
    agreement = abs(fem.eigenvalue - gap) / gap
    return {
        "h": fraction_str(h),
        "h2_over_4": fmt(h2),
        "gap": fmt(gap),
        "method": main.method,
        "residual": fmt(main.residual),
        "slack": fmt(gap - h2),
        "slack_factor": fmt(gap / h2),
        "fem_gap": fmt(fem.eigenvalue),
        "fem_relative_difference": fmt(agreement),
        "ok": bool(h2 <= gap + tol),
    }
