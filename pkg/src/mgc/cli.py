"""Command-line interface.

Exit codes: 0 success, 1 failed reproduction rows, 2 invalid input, 3 computation error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import platform
import random
import sys
import time
from contextlib import redirect_stderr, redirect_stdout

from . import __version__, catalog
from .bv import (
    coarea_integral,
    du_total,
    field_from_dict,
    function_from_dict,
    green_residual,
    jv,
    length,
    perimeter,
    subset_from_list,
    tv,
)
from .cheeger import cheeger_cut, cheeger_within, is_calibrable, path_convexity_probe
from .duality import construct_eigenpair_from_cut, dual_flow, dual_norm, verify_eigenpair
from .errors import ComputationError, InfeasibleDual, MalformedDocument, NotEigenpair, ValidationError
from .graph import fraction_str, graph_from_dict, to_fraction
from .spectral import cheeger_inequality_check, fem_gap, fmt, secular_gap


def _load(path: str, inputs: dict):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise MalformedDocument(f"cannot read {path}: {exc.strerror}") from exc
    inputs[path] = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(f"{path}: invalid JSON ({exc})") from exc


def dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def to_dot(g, highlight=None) -> str:
    """Graphviz description; edges meeting ``highlight`` are drawn red with their arcs."""
    lines = ["graph metric_graph {", "  node [shape=circle];"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for e in g.edges:
        attrs = [f'label="{e.id} ({fraction_str(e.length)})"']
        if highlight is not None:
            arcs = highlight.arcs_on(e.id)
            if arcs:
                span = " ".join(f"[{fraction_str(a)},{fraction_str(b)}]" for a, b in arcs)
                attrs = [f'label="{e.id} ({fraction_str(e.length)}) {span}"', "color=red", "penwidth=3"]
        lines.append(f'  "{e.tail}" -- "{e.head}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_validate(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    return {
        "valid": True,
        "vertices": len(g.vertices),
        "edges": len(g.edges),
        "total_length": fraction_str(g.total_length),
        "degrees": {v: g.degree(v) for v in g.vertices},
        "boundary": list(g.boundary_vertices),
        "interior": list(g.interior_vertices),
        "linear": g.is_linear,
    }


def cmd_perimeter(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    E = subset_from_list(g, _load(args.subset, inputs))
    return {"perimeter": fraction_str(perimeter(E)), "length": fraction_str(length(E))}


def cmd_tv(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    u = function_from_dict(g, _load(args.function, inputs))
    return {"tv": fraction_str(tv(u)), "du": fraction_str(du_total(u)), "jv": fraction_str(jv(u))}


def cmd_coarea(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    u = function_from_dict(g, _load(args.function, inputs))
    a, b = tv(u), coarea_integral(u)
    return {"tv": fraction_str(a), "coarea_integral": fraction_str(b),
            "residual": fraction_str(abs(a - b)), "ok": a == b}


def cmd_green(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    z = field_from_dict(g, _load(args.field, inputs))
    u = function_from_dict(g, _load(args.function, inputs))
    r = green_residual(z, u, require_kirchhoff=not args.all_vertices)
    return {"residual": fraction_str(r), "kirchhoff": z.is_kirchhoff,
            "boundary_sum": "all" if args.all_vertices else "interior", "ok": r == 0}


def cmd_cheeger(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    if args.within:
        omega = subset_from_list(g, _load(args.within, inputs))
        res = cheeger_within(g, omega)
        if args.certify:
            res.certificate = dual_flow(g, omega, primal=res.value)
    else:
        res = cheeger_cut(g)
        if args.certify:
            # the flow dual on the cut shows the cut is its own Cheeger set
            res.certificate = dual_flow(g, res.witness, primal=res.value)
    if res.certificate is not None and res.certificate.gap != 0:
        raise InfeasibleDual(f"duality gap {res.certificate.gap} is not zero")
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(g, res.witness))
    return res.to_dict()


def cmd_calibrable(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    omega = subset_from_list(g, _load(args.subset, inputs))
    ok, lam, h1 = is_calibrable(g, omega)
    return {"calibrable": ok, "lambda": fraction_str(lam), "h1": fraction_str(h1)}


def cmd_probe(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    omega = subset_from_list(g, _load(args.subset, inputs))
    res = path_convexity_probe(g, omega, subdivisions=args.subdivisions)
    if args.dot and res.counterexample is not None:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(g, res.counterexample))
    return res.to_dict()


def cmd_dual(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    if args.function:
        f = function_from_dict(g, _load(args.function, inputs))
        val = dual_norm(g, f)
        return {"dual_norm": "INFEASIBLE" if val is None else fraction_str(val)}
    if not args.subset:
        raise MalformedDocument("dual needs a subset file or --function")
    omega = subset_from_list(g, _load(args.subset, inputs))
    return dual_flow(g, omega).to_dict()


def cmd_eigen(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    try:
        if args.from_cut:
            D = subset_from_list(g, _load(args.from_cut, inputs))
            ep = construct_eigenpair_from_cut(g, D)
        else:
            if args.lam is None or not args.function:
                raise MalformedDocument("eigen needs --lambda with a function file, or --from-cut")
            lam = to_fraction(args.lam, "--lambda")
            u = function_from_dict(g, _load(args.function, inputs))
            z = field_from_dict(g, _load(args.field, inputs)) if args.field else None
            ep = verify_eigenpair(g, lam, u, z=z)
    except NotEigenpair as exc:
        return {"verified": False, "reason": exc.reason, "detail": exc.detail}
    return ep.to_dict()


def cmd_gap(args, inputs):
    g = graph_from_dict(_load(args.graph, inputs))
    results = []
    if args.method in ("secular", "both"):
        results.append(secular_gap(g))
    if args.method in ("fem", "both"):
        results.append(fem_gap(g, args.cells))
    doc = {"results": [r.to_dict() for r in results]}
    if len(results) == 2:
        a, b = results[0].eigenvalue, results[1].eigenvalue
        doc["relative_difference"] = fmt(abs(a - b) / a)
    return doc


def cmd_inequality(args, inputs):
    if args.graph:
        g = graph_from_dict(_load(args.graph, inputs))
        return cheeger_inequality_check(g, method=args.method)
    rng = random.Random(args.seed)
    reports = [cheeger_inequality_check(catalog.random_graph(rng), method=args.method)
               for _ in range(args.random)]
    return {"seed": args.seed, "graphs": reports, "all_ok": all(r["ok"] for r in reports)}


def cmd_suite(args, inputs):
    from .suite import EXPECTED, run_suite

    expected = EXPECTED
    if args.expected:
        expected = _load(args.expected, inputs)
        if not isinstance(expected, dict):
            raise MalformedDocument("expected-values file must be a JSON object")
    rows = run_suite(expected)
    failed = [r["id"] for r in rows if not r["pass"]]
    return {"rows": rows, "passed": len(rows) - len(failed), "failed": failed}


def _table(doc) -> str:
    lines = []
    for r in doc["rows"]:
        mark = "PASS" if r["pass"] else "FAIL"
        lines.append(f"{mark}  {r['id']:<38} expected={r['expected']!s:<32} computed={r['computed']}")
    lines.append(f"{doc['passed']} passed, {len(doc['failed'])} failed")
    return "\n".join(lines)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mgc", description="Cheeger cuts and total variation on metric graphs")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--record", metavar="PATH", help="write a run record (inputs, result, versions)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "validate a graph document")
    sp.add_argument("graph")
    sp = add("perimeter", cmd_perimeter, "perimeter of a subset")
    sp.add_argument("graph")
    sp.add_argument("subset")
    sp.add_argument("--json", action="store_true")
    sp = add("tv", cmd_tv, "total variation of a function")
    sp.add_argument("graph")
    sp.add_argument("function")
    sp.add_argument("--json", action="store_true")
    sp = add("coarea-check", cmd_coarea, "TV against the integral of level-set perimeters")
    sp.add_argument("graph")
    sp.add_argument("function")
    sp = add("green-check", cmd_green, "residual of Green's formula for a field and a function")
    sp.add_argument("graph")
    sp.add_argument("field")
    sp.add_argument("function")
    sp.add_argument("--all-vertices", action="store_true",
                    help="sum boundary terms over every vertex (valid for non-Kirchhoff fields)")
    sp = add("cheeger", cmd_cheeger, "Cheeger cut, or Cheeger set of a subset with --within")
    sp.add_argument("graph")
    sp.add_argument("--within", metavar="SUBSET")
    sp.add_argument("--certify", action="store_true", help="attach the flow dual and require a zero gap")
    sp.add_argument("--dot", metavar="FILE")
    sp = add("calibrable", cmd_calibrable, "is a subset its own Cheeger set")
    sp.add_argument("graph")
    sp.add_argument("subset")
    sp = add("path-convex-probe", cmd_probe, "search for a path-convexity counterexample")
    sp.add_argument("graph")
    sp.add_argument("subset")
    sp.add_argument("--subdivisions", type=int, default=1)
    sp.add_argument("--dot", metavar="FILE")
    sp = add("dual", cmd_dual, "flow dual of a subset, or --function for the dual norm")
    sp.add_argument("graph")
    sp.add_argument("subset", nargs="?")
    sp.add_argument("--function", metavar="FILE")
    sp = add("eigen", cmd_eigen, "verify or construct a 1-Laplacian eigenpair")
    sp.add_argument("graph")
    sp.add_argument("function", nargs="?")
    sp.add_argument("--lambda", dest="lam", metavar="P/Q")
    sp.add_argument("--field", metavar="FILE", help="check this field instead of solving for one")
    sp.add_argument("--from-cut", metavar="SUBSET")
    sp = add("gap", cmd_gap, "spectral gap of the Kirchhoff Laplacian")
    sp.add_argument("graph")
    sp.add_argument("--method", choices=["secular", "fem", "both"], default="secular")
    sp.add_argument("--cells", type=int, default=256)
    sp = add("cheeger-inequality", cmd_inequality, "check h^2/4 <= gap")
    sp.add_argument("graph", nargs="?")
    sp.add_argument("--method", choices=["secular", "fem"], default="secular")
    sp.add_argument("--random", type=int, default=50, help="number of random graphs when no graph is given")
    sp = add("paper-suite", cmd_suite, "reproduce the published worked values")
    sp.add_argument("--expected", metavar="FILE", help="JSON object of expected values by row id")
    sp.add_argument("--json", action="store_true")
    return p


def _record(args, argv, inputs, doc, wall):
    import numpy
    import scipy

    rec = {
        "command": args.command,
        "argv": list(argv),
        "inputs": inputs,
        "result": doc,
        "versions": {"mgc": __version__, "python": platform.python_version(),
                     "numpy": numpy.__version__, "scipy": scipy.__version__},
        "wall_time": wall,
    }
    with open(args.record, "w") as fh:
        fh.write(dump(rec) + "\n")


def run(argv) -> tuple[int, str, str]:
    """Run one command; returns ``(exit code, stdout text, stderr text)``."""
    parser = build_parser()
    err = io.StringIO()
    try:
        with redirect_stdout(err), redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        code = int(exc.code or 0)
        # --help and --version exit 0 and belong on stdout
        return (code, err.getvalue(), "") if code == 0 else (code, "", err.getvalue())
    inputs: dict = {}
    start = time.perf_counter()
    try:
        doc = args.fn(args, inputs)
    except ValidationError as exc:
        return 2, "", f"{type(exc).__name__}: {exc}\n"
    except ComputationError as exc:
        return 3, "", f"{type(exc).__name__}: {exc}\n"
    wall = time.perf_counter() - start
    if args.record:
        _record(args, argv, inputs, doc, wall)
    code = 0
    if args.command == "paper-suite":
        code = 1 if doc["failed"] else 0
        out = dump(doc) if args.json else _table(doc)
    elif args.command in ("perimeter", "tv") and not args.json:
        out = doc[args.command]
    else:
        out = dump(doc)
    return code, out + "\n", ""


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
