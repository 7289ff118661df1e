import json

import pytest

from parcelforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def test_verify_passes(capsys):
    code, data, err = run(capsys, "verify", "--instance", "builtin:triangle-cycle", "--theorem", "thm3.1",
                          "--sigma", "4", "--group", "cyclic:3")
    assert code == 0 and data["equal"] is True
    assert "pass" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from parcelforge import registry
    real = registry.homogeneous
    monkeypatch.setattr(registry, "homogeneous", lambda *a: real(*a) + 1)
    code, data, _ = run(capsys, "verify", "--instance", "builtin:k4-cycle", "--theorem", "thm3.1",
                        "--sigma", "3", "--group", "cyclic:2")
    assert code == 1 and data["status"] == "fail"


def test_rankpoly(capsys):
    code, data, _ = run(capsys, "rankpoly", "--instance", "builtin:k4-vertex")
    assert code == 0 and data["rank"] == 3
    tutte = {(t["l"], t["x"]): int(t["c"]) for t in data["tutte"]["terms"]}
    assert tutte == {(3, 0): 1, (2, 0): 3, (1, 0): 2, (1, 1): 4, (0, 1): 2, (0, 2): 3, (0, 3): 1}
    assert all(isinstance(t["c"], str) for t in data["rank_generating_polynomial"]["terms"])


def test_charpoly_and_flows(capsys):
    code, data, _ = run(capsys, "charpoly", "--instance", "builtin:triangle-vertex", "--at", "3")
    assert code == 0 and data["value"] == "2" and "chromatic_polynomial" in data
    code, data, _ = run(capsys, "flows", "--instance", "builtin:triangle-cycle", "--group", "cyclic:2", "--list")
    assert data["count"] == "2" and data["flows"] == [[0, 0, 0], [1, 1, 1]]
    assert data["kernel_census"] == {"0": "1", "3": "1"}


def test_census_and_enumerator(capsys):
    code, data, _ = run(capsys, "census", "--instance", "builtin:triangle-cycle", "--family", "hamming",
                        "--group", "cyclic:2", "--sigma", "2", "--tier", "1")
    assert code == 0 and data["bins"] == {"0": "8", "1": "8"} and data["tier"] == 1
    code, data, _ = run(capsys, "census", "--instance", "builtin:triangle-vertex", "--family", "prop25",
                        "--q", "3")
    assert int(data["bins"]["1"]) - int(data["bins"]["-1"]) == 6
    code, data, _ = run(capsys, "enumerator", "--instance", "builtin:hamming74", "--group", "gfp:2:1")
    assert {t["x"]: t["c"] for t in data["terms"]} == {0: "1", 3: "7", 4: "7", 7: "1"}
    code, data, _ = run(capsys, "census", "--instance", "builtin:k4-cycle", "--family", "setop", "--op=->",
                        "--group", "product:cyclic:2:1", "--sigma", "inf")
    assert code == 0 and data["sigma"] == "inf"


def test_instance_file(capsys, tmp_path):
    path = tmp_path / "tri.json"
    path.write_text('{"kind":"graph","vertices":3,"edges":[[0,1],[1,2],[2,0]],"side":"cycle"}')
    code, data, _ = run(capsys, "verify", "--instance", str(path), "--theorem", "cor3.4", "--group", "cyclic:3")
    assert code == 0 and data["lhs"] == "10" and data["instance"] == "tri"


@pytest.mark.parametrize("argv", [
    ["verify", "--instance", "builtin:nope", "--theorem", "thm3.1"],
    ["verify", "--instance", "builtin:k4-cycle", "--theorem", "thm9.9"],
    ["verify", "--instance", "builtin:k4-cycle", "--theorem", "thm3.1", "--group", "cyclic:3"],
    ["verify", "--instance", "builtin:fano", "--theorem", "thm3.1", "--group", "cyclic:2", "--sigma", "2"],
    ["census", "--instance", "builtin:k4-cycle", "--family", "hamming", "--group", "abc:1"],
    ["census", "--instance", "builtin:k4-cycle", "--family", "hamming", "--group", "cyclic:2", "--sigma", "x"],
    ["census", "--instance", "builtin:k4-cycle", "--family", "prop25", "--q", "4"],
    ["flows", "--instance", "/does/not/exist.json", "--group", "cyclic:2"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    code, data, err = run(capsys, *argv)
    assert code == 2 and "error" in data and err.startswith("error:")


def test_budget_exceeded_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("PARCELFORGE_BUDGET", "tier1=10")
    code, data, _ = run(capsys, "census", "--instance", "builtin:k4-cycle", "--family", "hamming",
                        "--group", "cyclic:2", "--sigma", "2", "--tier", "1")
    assert code == 2 and "budget" in data["error"]


def test_verify_all_subset(capsys):
    code, data, err = run(capsys, "verify-all", "--corpus", "builtin", "--theorem", "cor3.2", "--theorem", "lemma1.5")
    assert code == 0 and data["summary"]["fail"] == "0"
    from parcelforge.registry import IDENTITY_IDS
    keys = [(r["theorem"], r["instance"]) for r in data["reports"]]
    assert keys == sorted(keys, key=lambda k: (IDENTITY_IDS.index(k[0]), k[1]))
    assert {k[0] for k in keys} == {"cor3.2", "lemma1.5"}
    assert "passed" in err


def test_verify_all_parallel_matches_serial(capsys):
    args = ["verify-all", "--theorem", "thm4.16b", "--instance", "builtin:k4-cycle", "--instance", "builtin:fano"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "2")
    strip = lambda d: [{k: v for k, v in r.items() if k != "wall_time"} for r in d["reports"]]
    assert strip(serial) == strip(parallel)


def test_verify_all_time_cap_skips(capsys):
    code, data, _ = run(capsys, "verify-all", "--theorem", "thm1.1", "--instance", "builtin:bridge-cycle",
                        "--time-cap", "0.000001")
    assert code == 0 and data["summary"]["skipped"] == "1" and data["summary"]["pass"] == "0"
    assert data["reports"][0]["status"] == "skipped"


def test_corpus_listing(capsys):
    code, data, _ = run(capsys, "corpus")
    assert code == 0 and len(data) >= 14
    assert {"name": "k4-cycle", "kind": "graph-cycle", "ground_size": 6, "rank": 3} in data
