import csv
import io
import json

import pytest

from nonadd.cli import main
from nonadd.scenario import VERSION, corpus_paths, validate_output

CORPUS = {p.stem: str(p) for p in corpus_paths()}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.mark.parametrize("engine,code,value", [("rl", 0, "[0]"), ("bs", 0, "[0]"), ("gould", 2, "-")])
def test_counterexample_engines(engine, code, value):
    rc, text = run("integrate", CORPUS["example4_12"], "--engine", engine)
    assert rc == code
    assert text.split()[:3] == [engine, {0: "value", 2: "divergent"}[code], value]


def test_json_verdicts_validate():
    for name in ("example4_12", "pointmass123", "distortion_sqrt", "table_square"):
        for engine in ("rl", "bs", "gould"):
            rc, text = run("integrate", CORPUS[name], "--engine", engine, "--json")
            doc = json.loads(text)
            validate_output(doc)
            assert doc["status"] in ("value", "divergent", "unknown")
            assert rc == {"value": 0, "divergent": 2, "unknown": 3}[doc["status"]]


def test_zero_function_all_engines():
    for engine in ("rl", "bs", "gould"):
        rc, text = run("integrate", CORPUS["zero_function"], "--engine", engine)
        assert rc == 0 and "[0" in text


def test_integrate_on_set():
    rc, text = run("integrate", CORPUS["table_square"], "--set", "finite:[0,2]")
    assert rc == 0
    # f = (1, -2, 1/2, 3) with singleton weights 1
    assert text.startswith("rl value [3/2]")


@pytest.mark.parametrize("name,expected", [("pointmass123", "6"), ("table_square", "16"), ("example4_12", "inf")])
def test_variation(name, expected):
    rc, text = run("variation", CORPUS[name])
    doc = json.loads(text)
    validate_output(doc)
    value = doc["value"] if isinstance(doc["value"], str) else doc["value"]["decimal"]
    assert rc == 0 and value == expected


def test_properties_and_atoms():
    rc, text = run("properties", CORPUS["example4_12"])
    doc = json.loads(text)
    validate_output(doc)
    assert doc["monotone"]["status"] == "proved"
    assert doc["finitely_additive"]["status"] == "refuted"
    rc, text = run("atoms", CORPUS["table_square"])
    assert rc == 0
    validate_output(json.loads(text))
    assert run("atoms", CORPUS["example4_12"])[0] == 4


def test_bad_inputs_exit_1(tmp_path):
    assert run("integrate", str(tmp_path / "missing.json"))[0] == 1
    assert run("integrate", write(tmp_path, "bad.json", {"version": VERSION}))[0] == 1
    assert run("integrate", CORPUS["example4_12"], "--engine", "simpson")[0] == 1
    assert run("integrate", CORPUS["example4_12"], "--set", "primes")[0] == 1
    assert run("integrate", CORPUS["example4_12"], "--budget", "depth=0")[0] == 1
    assert run("verify", "--profile", "lattice")[0] == 1
    assert run("verify", "--theorem", "T9.9")[0] == 1
    assert run()[0] == 1


def test_output_is_byte_identical():
    for argv in (("integrate", CORPUS["example4_12"], "--engine", "gould", "--json"),
                 ("properties", CORPUS["distortion_piecewise"]),
                 ("trace", CORPUS["example4_12"])):
        assert run(*argv) == run(*argv)


def test_trace_csv(tmp_path):
    target = tmp_path / "trace.csv"
    rc, text = run("trace", CORPUS["example4_12"], "--csv", str(target))
    assert rc == 2 and text == ""
    rows = list(csv.reader(target.read_text().splitlines()))
    assert rows[0] == ["step", "k_blocks", "sigma_0", "radius"]
    sigmas = [int(r[2]) for r in rows[1:]]
    assert len(sigmas) >= 11 and sigmas == list(range(1, len(sigmas) + 1))
    rc, text = run("trace", CORPUS["pointmass123"], "--engine", "rl")
    assert rc == 0
    rows = list(csv.reader(text.splitlines()))
    assert [r[2] for r in rows[1:]] == ["1", "3", "6"]


def test_verify_report_and_replay(tmp_path):
    report = tmp_path / "report.json"
    rc, text = run("verify", "--no-corpus", "--profile", "finite:3", "--count", "3", "--report", str(report))
    assert rc == 0 and text.rstrip().endswith("ok: 0 failure(s)")
    doc = json.loads(report.read_text())
    validate_output(doc)
    assert doc["seed"] == 0 and doc["count"] == 3
    assert run("replay", str(report)) == (0, "")
    # a fabricated failure does not reproduce
    doc["theorems"][0]["failures"].append({
        "profile": "finite:3", "seed": 0, "index": 0,
        "witness": {"theorem": doc["theorems"][0]["theorem"], "observed": "made up"}})
    report.write_text(json.dumps(doc))
    rc, text = run("replay", str(report))
    assert rc == 1 and "now reports pass" in text


def test_verify_extra_scenario_skips_broken_hypotheses(tmp_path):
    broken = write(tmp_path, "broken.json", {
        "version": VERSION,
        "ground": {"finite": 2},
        "measure": {"family": "table", "values": [0, 2, 1, 1]},
        "function": {"table": [1, 1]},
    })
    report = tmp_path / "r.json"
    rc, _ = run("verify", "--no-corpus", "--profile", "finite:2", "--count", "1",
                "--scenario", broken, "--report", str(report))
    assert rc == 0
    doc = json.loads(report.read_text())
    skipped = {t["theorem"]: s["reason"] for t in doc["theorems"]
               for s in t["skips"] if s["profile"] == f"file:{broken}"}
    assert "not proved monotone" in skipped["T3.14ii-monotone-If"]
    assert "T4.14-atom-finite" in skipped
