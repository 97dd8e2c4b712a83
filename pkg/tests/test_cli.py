import json
import shutil
import subprocess
import sys
from fractions import Fraction as F

import jsonschema
import pytest

from mgc.catalog import ball_star4, segment, star4, tripod
from mgc.cli import run
from mgc.schemas import SCHEMAS
from mgc.suite import EXPECTED


def write_text(path, text):
    path.write_text(text)
    return str(path)


def write(path, doc):
    return write_text(path, json.dumps(doc))


@pytest.fixture
def files(tmp_path):
    star = star4()
    ball = ball_star4(F(5, 8))
    seg = segment(5)
    tri = tripod(1)
    return {
        "star": write(tmp_path / "star.json", star.to_dict()),
        "ball": write(tmp_path / "ball.json", ball.to_list()),
        "seg": write(tmp_path / "seg.json", seg.to_dict()),
        "two": write(tmp_path / "two.json", [{"edge": "e1", "from": "1", "to": "2"}, {"edge": "e1", "from": "3", "to": "4"}]),
        "one_five": write(tmp_path / "one_five.json", [{"edge": "e1", "from": "1", "to": "5"}]),
        "everything": write(tmp_path / "all.json", [{"edge": "e1", "from": "0", "to": "5"}]),
        "ramp": write(tmp_path / "ramp.json", {"edges": {"e1": {"breakpoints": ["0", "5"], "values": ["0", "5"]}}}),
        "jump": write(tmp_path / "jump.json", {"edges": {"e1": {
            "breakpoints": ["0", "5/2", "5"], "values": ["2/5", {"left": "2/5", "right": "0"}, "0"]}}}),
        "flat": write(tmp_path / "flat.json", {"edges": {"e1": {"breakpoints": ["0", "5"], "values": ["1", "1"]}}}),
        "zero_field": write(tmp_path / "zf.json", {"edges": {"e1": {"breakpoints": ["0", "5"], "values": ["0", "0"]}}}),
        "slope_field": write(tmp_path / "sf.json", {"edges": {"e1": {"breakpoints": ["0", "5"], "values": ["0", "1"]}}}),
        "tri": write(tmp_path / "tri.json", tri.to_dict()),
        "leg": write(tmp_path / "leg.json", [{"edge": "e1", "from": "0", "to": "1"}]),
        "bad": write(tmp_path / "bad.json", {"vertices": ["a"], "edges": [{"id": "e1", "from": "a", "to": "a", "length": 1}]}),
        "notjson": write_text(tmp_path / "nj.json", "{"),
        "tmp": tmp_path,
    }


def ok(argv, schema=None):
    code, out, err = run(argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS[schema or argv[0]])
    return doc


def test_validate(files):
    doc = ok(["validate", files["star"]])
    assert doc["total_length"] == "4"
    assert doc["degrees"]["v2"] == 3


def test_perimeter_plain_and_json(files):
    assert run(["perimeter", files["star"], files["ball"]])[1] == "3\n"
    doc = ok(["perimeter", files["star"], files["ball"], "--json"])
    assert doc == {"perimeter": "3", "length": "11/8"}


def test_tv_coarea_and_green(files):
    assert run(["tv", files["seg"], files["ramp"]])[1] == "5\n"
    ok(["tv", files["seg"], files["jump"], "--json"])
    assert ok(["coarea-check", files["seg"], files["jump"]])["ok"]
    doc = ok(["green-check", files["seg"], files["zero_field"], files["ramp"]])
    assert doc["residual"] == "0"
    doc = ok(["green-check", files["seg"], files["slope_field"], files["ramp"], "--all-vertices"])
    assert doc["ok"] and doc["boundary_sum"] == "all"


def test_green_without_kirchhoff_is_a_computation_error(files):
    code, _, err = run(["green-check", files["seg"], files["slope_field"], files["ramp"]])
    assert code == 3 and "NotKirchhoff" in err


def test_cheeger_commands(files):
    doc = ok(["cheeger", files["star"], "--within", files["ball"], "--certify"])
    assert doc["value"] == "16/9" and doc["certificate"]["gap"] == "0"
    doc = ok(["cheeger", files["tri"], "--certify"])
    assert doc["value"] == "1" and doc["lower_bound_check"]["ok"]
    dot = files["tmp"] / "cut.dot"
    ok(["cheeger", files["tri"], "--dot", str(dot)])
    text = dot.read_text()
    assert text.startswith("graph metric_graph {") and "color=red" in text


def test_calibrable_and_probe(files):
    assert ok(["calibrable", files["star"], files["ball"]]) == {"calibrable": False, "lambda": "24/11", "h1": "16/9"}
    assert ok(["calibrable", files["seg"], files["one_five"]])["lambda"] == "1/4"
    doc = ok(["path-convex-probe", files["seg"], files["two"]])
    assert doc["result"] == "counterexample"
    assert doc["E"] == [{"edge": "e1", "from": "1", "to": "5"}]
    assert (doc["per_E"], doc["per_omega_cap_E"]) == ("1", "4")


def test_dual_commands(files):
    doc = ok(["dual", files["star"], files["ball"]])
    assert doc["primal"] == doc["dual"] == "16/9"
    doc = ok(["dual", files["seg"], "--function", files["flat"]])
    assert doc == {"dual_norm": "INFEASIBLE"}


def test_eigen_commands(files):
    doc = ok(["eigen", files["tri"], "--from-cut", files["leg"]])
    assert doc["verified"] and doc["lambda"] == "1" and doc["zero_median"]
    doc = ok(["eigen", files["seg"], files["jump"], "--lambda", "2/5"])
    assert doc["verified"]
    quarter = write(files["tmp"] / "q.json", {"edges": {"e1": {
        "breakpoints": ["0", "1", "5"], "values": ["0", {"left": "0", "right": "1/4"}, "1/4"]}}})
    doc = ok(["eigen", files["seg"], quarter, "--lambda", "1/4"])
    assert doc == {"verified": False, "reason": "median", "detail": doc["detail"]}


def test_gap_and_inequality(files):
    doc = ok(["gap", files["seg"], "--method", "both", "--cells", "64"])
    assert len(doc["results"]) == 2 and doc["relative_difference"] < 1e-3
    assert ok(["cheeger-inequality", files["tri"]])["ok"]
    doc = ok(["cheeger-inequality", "--random", "5", "--seed", "4"])
    assert doc["all_ok"] and len(doc["graphs"]) == 5


def test_exit_codes(files):
    assert run(["validate", files["bad"]])[0] == 2
    code, _, err = run(["validate", files["notjson"]])
    assert code == 2 and "invalid JSON" in err
    assert run(["validate", str(files["tmp"] / "missing.json")])[0] == 2
    assert run(["perimeter", files["seg"], write(files["tmp"] / "x.json", [{"edge": "e1", "from": "0", "to": "9"}])])[0] == 2
    assert run(["cheeger", files["seg"], "--within", files["everything"]])[0] == 3
    assert run(["eigen", files["seg"]])[0] == 2
    assert run(["no-such-command"])[0] == 2


def test_outputs_are_deterministic(files):
    for argv in (
        ["cheeger", files["star"], "--within", files["ball"], "--certify"],
        ["gap", files["tri"], "--method", "both", "--cells", "32"],
        ["cheeger-inequality", "--random", "3", "--seed", "9"],
        ["paper-suite", "--json"],
    ):
        assert run(argv) == run(argv)


def test_run_record(files):
    rec = files["tmp"] / "rec.json"
    ok(["perimeter", files["star"], files["ball"], "--json", "--record", str(rec)], "perimeter")
    doc = json.loads(rec.read_text())
    assert doc["command"] == "perimeter"
    assert set(doc["inputs"]) == {files["star"], files["ball"]}
    assert all(len(h) == 64 for h in doc["inputs"].values())
    assert doc["result"]["perimeter"] == "3"


def test_paper_suite_document():
    code, out, _ = run(["paper-suite", "--json"])
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS["paper-suite"])
    assert {r["id"] for r in doc["rows"]} == set(EXPECTED)
    assert code == (1 if doc["failed"] else 0)


@pytest.mark.parametrize("key", sorted(EXPECTED))
def test_paper_suite_is_live(key, tmp_path):
    partial = {k: v for k, v in EXPECTED.items() if k != key}
    path = write(tmp_path / "expected.json", partial)
    code, out, _ = run(["paper-suite", "--expected", path, "--json"])
    assert code != 0
    assert key in json.loads(out)["failed"]


def test_console_script():
    exe = shutil.which("mgc")
    cmd = [exe] if exe else [sys.executable, "-m", "mgc.cli"]
    proc = subprocess.run(cmd + ["--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
