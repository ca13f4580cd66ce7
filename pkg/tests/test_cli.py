"""End-to-end CLI behavior: JSON shape against the shipped schema, exit
code classes, determinism modulo the header timestamp, and batch isolation.
"""

import importlib.resources
import json
import subprocess
import sys

import jsonschema
import pytest


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "ringlab.cli", *args],
        capture_output=True,
        text=True,
    )


@pytest.fixture(scope="module")
def validator():
    schema = json.loads(
        importlib.resources.files("ringlab")
        .joinpath("schemas/reports.schema.json")
        .read_text()
    )
    return jsonschema.Draft202012Validator(schema)


GOOD_COMMANDS = [
    ("ring", "info", "Z/360"),
    ("poly", "ddeg", "--ring", "Z/4", "--poly", "0,0,0,0,1"),
    ("subgroup", "--ring", "PQ(q=2;g=0,0,1)", "--poly", "0,0,1"),
    ("expsum", "--ring", "Z/13", "--poly", "0,0,1", "--table"),
    ("tebound", "--ring", "GF(9)", "--poly", "0,0,1", "--random", "5", "--seed", "7"),
    ("vdc", "--ring", "Z/8", "--subgroup", "0,4", "--k", "2", "--random", "5"),
    ("rootcount", "--ring", "Z/12", "--coeffs", "[0,6]"),
    ("sarkozy", "--ring", "Z/13", "--poly", "0,0,1", "--sets", "squares", "0,1,2"),
    ("intersective", "--family", "INTEGERS", "--poly=-2,0,1", "--bound", "20"),
    ("paley", "--ring", "Z/13", "--d", "2", "--sets", "structured"),
]


@pytest.mark.parametrize("args", GOOD_COMMANDS, ids=lambda a: a[0])
def test_reports_validate_against_schema(args, validator):
    proc = run_cli(*args)
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(proc.stdout)
    validator.validate(doc)
    assert doc["header"]["tool"] == "ringlab"


def test_ring_info_values():
    proc = run_cli("ring", "info", "Z/360")
    doc = json.loads(proc.stdout)
    assert doc["result"]["lpf"] == 2
    assert doc["result"]["prime_profile"] == [[2, 3], [3, 2], [5, 1]]


def test_parse_error_exit_2():
    proc = run_cli("ring", "info", "Z/billion")
    assert proc.returncode == 2
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "ParseError"
    assert err["error"]["exit_code"] == 2
    assert proc.stdout == ""


def test_unknown_flag_exit_2():
    proc = run_cli("ring", "info", "Z/12", "--frobnicate")
    assert proc.returncode == 2


def test_order_guard_exit_3():
    proc = run_cli("ring", "info", "Z/1048577")
    assert proc.returncode == 3
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "OrderTooLarge"


def test_non_subgroup_exit_3():
    proc = run_cli("vdc", "--ring", "Z/8", "--subgroup", "0,4,5", "--k", "1")
    assert proc.returncode == 3
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "NotASubgroup"


def test_hypothesis_unmet_exit_3():
    proc = run_cli("sarkozy", "--ring", "PQ(q=2;g=0,0,1)", "--poly", "#2,0,1")
    assert proc.returncode == 3
    err = json.loads(proc.stderr)
    assert err["error"]["type"] == "HypothesisUnmet"


def test_false_external_claim_exit_4():
    """An externally measured set size that violates the bound is exactly
    what exit 4 exists for."""
    proc = run_cli("sarkozy", "--ring", "Z/13", "--poly", "0,0,1", "--measured", "1000")
    assert proc.returncode == 4
    doc = json.loads(proc.stdout)
    assert not doc["result"]["bound_check"]["satisfied"]


def test_determinism_modulo_header():
    args = ("tebound", "--ring", "Z/8", "--poly", "0,0,1", "--random", "3", "--seed", "5")
    a = json.loads(run_cli(*args).stdout)
    b = json.loads(run_cli(*args).stdout)
    a.pop("header")
    b.pop("header")
    assert a == b


def test_seed_changes_functions():
    base = ("tebound", "--ring", "Z/8", "--poly", "0,0,1", "--random", "3")
    a = json.loads(run_cli(*base, "--seed", "1").stdout)
    b = json.loads(run_cli(*base, "--seed", "2").stdout)
    assert a["result"]["functions"] != b["result"]["functions"]


def test_paley_edges_plain_text():
    proc = run_cli("paley", "--ring", "Z/5", "--d", "2", "--edges")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines == ["0 1", "0 4", "1 2", "2 3", "3 4"]


def test_paley_char_divides_degree_warns_instead_of_failing():
    proc = run_cli("paley", "--ring", "GF(4)", "--d", "2")
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["verdict"] is None
    assert "characteristic divides" in doc["result"]["warning"]


def test_expsum_single_character():
    proc = run_cli("expsum", "--ring", "Z/5", "--poly", "0,0,1", "--char", "1")
    doc = json.loads(proc.stdout)
    single = doc["result"]["single_character"]
    assert single["modulus"] == pytest.approx(5**-0.5, abs=1e-9)


def test_batch_isolation(tmp_path, validator):
    manifest = {
        "seed": 9,
        "jobs": [
            {"label": "ok", "args": ["ring", "info", "Z/12"]},
            {"label": "toolarge", "args": ["ring", "info", "Z/1048577"]},
            {"label": "te", "args": ["tebound", "--ring", "Z/8", "--poly", "0,0,1", "--random", "2"]},
        ],
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    proc = run_cli("batch", str(path))
    assert proc.returncode == 3
    doc = json.loads(proc.stdout)
    validator.validate(doc)
    jobs = {j["label"]: j for j in doc["result"]["jobs"]}
    assert jobs["ok"]["exit_code"] == 0
    assert jobs["toolarge"]["exit_code"] == 3
    assert jobs["toolarge"]["error"]["type"] == "OrderTooLarge"
    assert jobs["te"]["exit_code"] == 0
    assert "--seed" in jobs["te"]["args"]
    assert doc["result"]["overall_exit"] == 3


def test_batch_empty_manifest(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"jobs": []}))
    proc = run_cli("batch", str(path))
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["job_count"] == 0


def test_batch_output_dir(tmp_path):
    manifest = {
        "jobs": [{"label": "ring8", "args": ["ring", "info", "Z/8"]}],
    }
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(manifest))
    out = tmp_path / "reports"
    proc = run_cli("batch", str(path), "--output-dir", str(out))
    assert proc.returncode == 0
    written = json.loads((out / "ring8.json").read_text())
    assert written["result"]["order"] == 8


def test_batch_malformed_manifest_exit_2(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    proc = run_cli("batch", str(path))
    assert proc.returncode == 2


def test_set_families():
    proc = run_cli(
        "sarkozy", "--ring", "Z/13", "--poly", "0,0,1",
        "--sets", "coset:0,0,1:1", "random:4:9",
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["result"]["config"]["size_b"] == 4
