"""Batch front-end: exit codes, report shape, determinism, round trips."""

import json
import subprocess
import sys

import pytest

from qsakit.cli import main

PLAQUETTE_ARGS = ["compile", "--target", "XZZX", "--tg", "0.3"]


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def complete_graph_file(tmp_path, n):
    edges = [[a, b] for a in range(n) for b in range(a + 1, n)]
    return write_json(tmp_path / f"complete{n}.json", {"n_sites": n, "edges": edges})


def test_compile_writes_verifiable_schedule(tmp_path, capsys):
    graph = complete_graph_file(tmp_path, 4)
    out_file = tmp_path / "plaquette.json"
    code, out = run_cli(
        capsys,
        PLAQUETTE_ARGS + ["--graph", graph, "--out", str(out_file)],
    )
    report = json.loads(out)
    assert code == 0
    assert report["status"] == "pass"
    assert report["metrics"]["depth"] == 1
    assert report["metrics"]["dense_distance"] <= 1e-10
    assert {c["name"] for c in report["checks"]} >= {
        "validator-clean", "dense-identity", "artifact-round-trip",
    }

    code, out = run_cli(capsys, ["verify", "--schedule", str(out_file)])
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_reports_are_byte_identical(tmp_path, capsys):
    graph = complete_graph_file(tmp_path, 4)
    argv = PLAQUETTE_ARGS + ["--graph", graph]
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    assert first == second


def test_verify_names_the_violated_invariant(tmp_path, capsys):
    out_file = tmp_path / "schedule.json"
    code, _ = run_cli(capsys, PLAQUETTE_ARGS + ["--out", str(out_file)])
    assert code == 0
    data = json.loads(out_file.read_text())
    data["layers"][0][1]["attached_site"] = data["layers"][0][0]["attached_site"]
    bad_file = write_json(tmp_path / "corrupt.json", data)
    code, out = run_cli(capsys, ["verify", "--schedule", bad_file])
    report = json.loads(out)
    assert code == 1
    assert report["status"] == "fail"
    failures = [c["name"] for c in report["checks"] if not c["passed"]]
    assert any("share sites" in name for name in failures)


def test_malformed_input_exits_two(tmp_path, capsys):
    bad = tmp_path / "garbage.json"
    bad.write_text("{not json")
    code, out = run_cli(capsys, ["verify", "--schedule", str(bad)])
    assert code == 2
    assert json.loads(out)["status"] == "malformed-input"
    code, _ = run_cli(capsys, ["compile", "--target", "XQZX"])
    assert code == 2
    code, _ = run_cli(capsys, ["compile"])
    assert code == 2


def test_resource_limit_exits_three(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("QSA_MAX_DENSE_QUBITS", raising=False)
    spec = write_json(
        tmp_path / "wen44.json",
        {"rows": 4, "cols": 4, "boundary": "open", "model": "wen"},
    )
    code, out = run_cli(capsys, ["toric", "ground", "--spec", spec])
    assert code == 3
    assert json.loads(out)["status"] == "resource-limit"
    monkeypatch.setenv("QSA_MAX_DENSE_QUBITS", "16")
    code, out = run_cli(capsys, ["toric", "ground", "--spec", spec])
    assert code == 0
    assert json.loads(out)["metrics"]["sweep_fidelity"] >= 1.0 - 1e-10


def test_toric_build_and_digital(tmp_path, capsys):
    spec = write_json(
        tmp_path / "wen33.json",
        {"rows": 3, "cols": 3, "boundary": "open", "model": "wen"},
    )
    code, out = run_cli(capsys, ["toric", "build", "--spec", spec])
    assert code == 0
    report = json.loads(out)
    assert report["metrics"]["n_terms"] == 4
    code, out = run_cli(capsys, ["toric", "digital", "--spec", spec, "--tau", "0.3"])
    assert code == 0
    assert json.loads(out)["metrics"]["distance"] <= 1e-8


def test_anyon_syndrome_subcommand(tmp_path, capsys):
    spec = write_json(
        tmp_path / "wen44.json",
        {"rows": 4, "cols": 4, "boundary": "open", "model": "wen"},
    )
    path = write_json(
        tmp_path / "path.json", {"sites": [[1, 1], [2, 2]], "letters": "ZZ"}
    )
    code, out = run_cli(capsys, ["anyon", "syndrome", "--spec", spec, "--path", path])
    assert code == 0
    report = json.loads(out)
    assert report["metrics"]["syndrome"]["entries"] == [
        [[0, 0], "e"], [[2, 2], "e"],
    ]
    code, _ = run_cli(capsys, ["anyon", "syndrome", "--spec", spec])
    assert code == 2


def test_anyon_magic_and_cnot(tmp_path, capsys):
    spec = write_json(
        tmp_path / "holes.json",
        {
            "rows": 3, "cols": 4, "model": "kitaev_holes",
            "holes": [
                {"plaquettes": [[1, 0]], "kind": "smooth"},
                {"plaquettes": [[1, 2]], "kind": "rough"},
            ],
        },
    )
    magic = write_json(tmp_path / "magic.json", {"theta": 0.785398, "hole": 0})
    code, out = run_cli(capsys, ["anyon", "magic", "--spec", spec, "--path", magic])
    assert code == 0
    assert json.loads(out)["metrics"]["fidelity"] >= 1.0 - 1e-10

    cnot = write_json(tmp_path / "cnot.json", {"control": 0, "target": 1})
    code, out = run_cli(capsys, ["anyon", "cnot", "--spec", spec, "--path", cnot])
    assert code == 0
    assert json.loads(out)["metrics"]["max_distance"] <= 1e-8

    swapped = write_json(tmp_path / "swapped.json", {"control": 1, "target": 0})
    code, out = run_cli(capsys, ["anyon", "cnot", "--spec", spec, "--path", swapped])
    assert code == 2
    assert "EncodingError" in json.loads(out)["error"]


def test_analyze_strength_and_scaling(tmp_path, capsys):
    code, out = run_cli(
        capsys,
        [
            "analyze", "strength",
            "--g", "1", "--t", "1", "--tau", "0.1", "--tau-prime", "0.1",
        ],
    )
    assert code == 0
    metrics = json.loads(out)["metrics"]
    assert metrics["g_prime"] == pytest.approx(1.0 / 1.2)
    assert metrics["g_wall"] == pytest.approx(1.0 / 4.8)

    out_file = tmp_path / "plaquette.json"
    run_cli(capsys, PLAQUETTE_ARGS + ["--out", str(out_file)])
    code, out = run_cli(
        capsys, ["analyze", "error-scaling", "--schedule", str(out_file)]
    )
    assert code == 0
    assert 0.9 <= json.loads(out)["metrics"]["slope"] <= 1.1

    code, _ = run_cli(capsys, ["analyze", "error-scaling"])
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qsakit", "analyze", "strength",
         "--g", "1", "--t", "1", "--tau", "0", "--tau-prime", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["metrics"]["g_prime"] == 1.0
