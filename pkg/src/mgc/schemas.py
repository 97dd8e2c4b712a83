"""JSON Schemas for every command's output document."""

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

ARCS = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["edge", "from", "to"],
        "properties": {"edge": {"type": "string"}, "from": RATIONAL, "to": RATIONAL},
    },
}

FIELD = {
    "type": "object",
    "required": ["edges"],
    "properties": {
        "edges": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["breakpoints", "values"],
                "properties": {"breakpoints": {"type": "array", "items": RATIONAL}},
            },
        }
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["primal", "dual", "sup_norm", "gap", "field"],
    "properties": {
        "primal": RATIONAL, "dual": RATIONAL, "sup_norm": RATIONAL, "gap": RATIONAL, "field": FIELD,
    },
}

SPECTRAL = {
    "type": "object",
    "required": ["method", "k", "eigenvalue", "residual", "multiplicity"],
    "properties": {
        "method": {"enum": ["secular", "fem"]},
        "k": {"type": "number"},
        "eigenvalue": {"type": "number"},
        "residual": {"type": "number"},
        "multiplicity": {"type": "integer", "minimum": 1},
    },
}

INEQUALITY = {
    "type": "object",
    "required": ["h", "h2_over_4", "gap", "method", "residual", "slack", "ok"],
    "properties": {
        "h": RATIONAL,
        "h2_over_4": {"type": "number"},
        "gap": {"type": "number"},
        "method": {"enum": ["secular", "fem"]},
        "residual": {"type": "number"},
        "slack": {"type": "number"},
        "ok": {"type": "boolean"},
    },
}

SCHEMAS = {
    "validate": {
        "type": "object",
        "required": ["valid", "vertices", "edges", "total_length", "degrees", "boundary", "interior"],
        "properties": {
            "valid": {"const": True},
            "vertices": {"type": "integer"},
            "edges": {"type": "integer"},
            "total_length": RATIONAL,
            "degrees": {"type": "object", "additionalProperties": {"type": "integer"}},
            "boundary": {"type": "array", "items": {"type": "string"}},
            "interior": {"type": "array", "items": {"type": "string"}},
            "linear": {"type": "boolean"},
        },
    },
    "perimeter": {
        "type": "object",
        "required": ["perimeter", "length"],
        "properties": {"perimeter": RATIONAL, "length": RATIONAL},
    },
    "tv": {
        "type": "object",
        "required": ["tv", "du", "jv"],
        "properties": {"tv": RATIONAL, "du": RATIONAL, "jv": RATIONAL},
    },
    "coarea-check": {
        "type": "object",
        "required": ["tv", "coarea_integral", "residual", "ok"],
        "properties": {"tv": RATIONAL, "coarea_integral": RATIONAL, "residual": RATIONAL, "ok": {"type": "boolean"}},
    },
    "green-check": {
        "type": "object",
        "required": ["residual", "kirchhoff", "boundary_sum", "ok"],
        "properties": {
            "residual": RATIONAL, "kirchhoff": {"type": "boolean"},
            "boundary_sum": {"enum": ["interior", "all"]}, "ok": {"type": "boolean"},
        },
    },
    "cheeger": {
        "type": "object",
        "required": ["problem", "value", "witness", "pattern"],
        "properties": {
            "problem": {"enum": ["within", "cut"]},
            "value": RATIONAL,
            "witness": ARCS,
            "pattern": {"type": "array", "items": {"type": "object", "required": ["edge", "from", "to", "tag"]}},
            "lower_bound_check": {
                "type": "object", "required": ["bound", "ok"],
                "properties": {"bound": RATIONAL, "ok": {"type": "boolean"}},
            },
            "certificate": CERTIFICATE,
        },
    },
    "calibrable": {
        "type": "object",
        "required": ["calibrable", "lambda", "h1"],
        "properties": {"calibrable": {"type": "boolean"}, "lambda": RATIONAL, "h1": RATIONAL},
    },
    "path-convex-probe": {
        "type": "object",
        "required": ["result", "candidates"],
        "properties": {
            "result": {"enum": ["counterexample", "none-found"]},
            "E": ARCS, "per_E": RATIONAL, "per_omega_cap_E": RATIONAL,
            "candidates": {"type": "integer"},
        },
    },
    "dual": {
        "oneOf": [
            CERTIFICATE,
            {
                "type": "object", "required": ["dual_norm"],
                "properties": {"dual_norm": {"oneOf": [RATIONAL, {"const": "INFEASIBLE"}]}},
            },
        ]
    },
    "eigen": {
        "type": "object",
        "required": ["verified"],
        "properties": {
            "verified": {"type": "boolean"},
            "lambda": RATIONAL,
            "reason": {"type": "string"},
            "median": {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2},
            "zero_median": {"type": "boolean"},
            "xi_integral": RATIONAL,
            "z": FIELD,
        },
    },
    "gap": {
        "type": "object",
        "required": ["results"],
        "properties": {
            "results": {"type": "array", "items": SPECTRAL, "minItems": 1},
            "relative_difference": {"type": "number"},
        },
    },
    "cheeger-inequality": {
        "oneOf": [
            INEQUALITY,
            {
                "type": "object", "required": ["seed", "graphs", "all_ok"],
                "properties": {
                    "seed": {"type": "integer"},
                    "graphs": {"type": "array", "items": INEQUALITY},
                    "all_ok": {"type": "boolean"},
                },
            },
        ]
    },
    "paper-suite": {
        "type": "object",
        "required": ["rows", "passed", "failed"],
        "properties": {
            "rows": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["id", "expected", "computed", "pass"],
                    "properties": {"pass": {"type": "boolean"}, "expected": {"type": ["string", "null"]}},
                },
            },
            "passed": {"type": "integer"},
            "failed": {"type": "array", "items": {"type": "string"}},
        },
    },
}
