import json
import shutil
import subprocess
import sys

import pytest

from graphlim import serialize as ser

CLI = [sys.executable, "-m", "graphlim.cli"]


def run_cli(*args):
    return subprocess.run([*CLI, *args], capture_output=True, text=True,
                          timeout=600)


@pytest.fixture(scope="module")
def plain6(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "plain6.json"
    proc = run_cli("build", "--size-cap", "3", "--depth", "6",
                   "--out", str(path))
    assert proc.returncode == 0, proc.stderr
    return path


def test_help_documents_the_schemas():
    proc = run_cli("--help")
    assert proc.returncode == 0
    for needle in ("GRAPHLIM_NO_NUMBA", "GRAPHLIM_DEPTH", '"members"',
                   '"assign"'):
        assert needle in proc.stdout


def test_enumerate_emits_a_verified_artifact():
    proc = run_cli("enumerate", "--n", "4")
    assert proc.returncode == 0, proc.stderr
    kind, payload, config = ser.unwrap(json.loads(proc.stdout))
    assert kind == "enumerate"
    assert config["n"] == 4
    assert payload["count"] == 11
    assert len(payload["graphs"]) == 11


def test_verify_replays_a_built_artifact(plain6):
    proc = run_cli("verify", "--in", f"@{plain6}")
    assert proc.returncode == 0, proc.stderr
    _, payload, _ = ser.unwrap(json.loads(proc.stdout))
    assert payload["replay_ok"] is True
    assert payload["pending"] == 0
    assert payload["levels"] == [2, 3, 4, 5, 6, 30]


def test_repeated_builds_are_byte_identical(tmp_path):
    out = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        proc = run_cli("build", "--size-cap", "3", "--depth", "3",
                       "--out", str(path))
        assert proc.returncode == 0, proc.stderr
        out.append(path.read_bytes())
    assert out[0] == out[1]


def test_find_edge_witness(plain6):
    proc = run_cli("find-edge", "--in", f"@{plain6}",
                   "--clopen", '{"level":0,"members":[0]}')
    assert proc.returncode == 0, proc.stderr
    _, payload, _ = ser.unwrap(json.loads(proc.stdout))
    assert payload == {"level": 5, "pair": [24, 25]}


def test_find_edge_exhaustion_writes_a_partial_artifact(plain6, tmp_path):
    partial = tmp_path / "partial.json"
    proc = run_cli("find-edge", "--in", f"@{plain6}",
                   "--clopen", '{"level":0,"members":[0]}',
                   "--depth", "3", "--out", str(partial))
    assert proc.returncode == 2
    assert "exhausted" in proc.stderr
    _, payload, _ = ser.unwrap(json.loads(partial.read_text()))
    assert payload["depth_exhausted"] is True
    assert payload["depth"] == 3


def test_separate_then_export_dot(plain6, tmp_path):
    split = tmp_path / "split.json"
    proc = run_cli("separate", "--in", f"@{plain6}",
                   "--a", '{"level":2,"members":[0]}',
                   "--b", '{"level":2,"members":[2]}',
                   "--out", str(split))
    assert proc.returncode == 0, proc.stderr
    _, payload, _ = ser.unwrap(json.loads(split.read_text()))
    assert payload["w_a"] == {"level": 2, "members": [0, 1]}
    assert payload["w_b"] == {"level": 2, "members": [2, 3]}

    proc = run_cli("export", "--in", f"@{split}", "--format", "dot")
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("graph g {")
    assert 'fillcolor="lightblue"' in proc.stdout
    assert 'fillcolor="lightsalmon"' in proc.stdout


def test_export_json_round_trips_inline_documents():
    proc = run_cli("export", "--in", '{"n":3,"edges":[[0,1]]}')
    assert proc.returncode == 0, proc.stderr
    _, payload, _ = ser.unwrap(json.loads(proc.stdout))
    assert payload == {"n": 3, "edges": [[0, 1]]}


def test_overlapping_inputs_exit_one(plain6):
    proc = run_cli("separate", "--in", f"@{plain6}",
                   "--a", '{"level":0,"members":[0]}',
                   "--b", '{"level":0,"members":[0]}')
    assert proc.returncode == 1
    assert proc.stderr.startswith("error:")


def test_missing_input_exits_three():
    proc = run_cli("verify", "--in", "@/nonexistent/build.json")
    assert proc.returncode == 3
    assert proc.stderr.startswith("error:")


@pytest.mark.skipif(shutil.which("graphlim") is None,
                    reason="console script not on PATH")
def test_console_script_is_installed():
    proc = subprocess.run(["graphlim", "--help"], capture_output=True,
                          text=True, timeout=120)
    assert proc.returncode == 0
