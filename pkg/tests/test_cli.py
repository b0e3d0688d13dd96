from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

import momentangle.cli as cli
from momentangle.constructions import catalog, polygon
from momentangle.hochster import BettiTable

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, K in [("square", polygon(4)), ("c5", polygon(5)), ("o6", catalog("O6")), ("b8", catalog("b(8)"))]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(K.to_json()))
        out[name] = str(p)
    return out


def run(runner, args, input=None):
    return runner.invoke(cli.main, args, input=input)


def test_betti_both_oracles_agree(runner, files):
    r = run(runner, ["betti", "--in", files["square"], "--oracle", "both"])
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert data["agree"] is True
    assert {"i": 1, "j": 2, "rank": 2} in data["hochster"]["entries"]
    assert data["config"]["field"] == "gf2"


def test_betti_on_icosahedron_is_symmetric(runner, tmp_path):
    p = tmp_path / "i12.json"
    p.write_text(json.dumps(catalog("I12").to_json()))
    r = run(runner, ["betti", "--in", str(p)])
    entries = {(e["i"], e["j"]): e["rank"] for e in json.loads(r.output)["hochster"]["entries"]}
    assert all(entries[9 - i, 12 - j] == v for (i, j), v in entries.items())


def test_mismatch_is_never_silent(runner, files, monkeypatch):
    real = cli.tor_dims_via_taylor

    def corrupted(K, field, multigraded=False):
        t = real(K, field, multigraded)
        data = t.nonzero()
        data[(1, 2)] += 1
        return BettiTable(t.field, t.m, data)

    monkeypatch.setattr(cli, "tor_dims_via_taylor", corrupted)
    r = run(runner, ["betti", "--in", files["c5"], "--oracle", "both"])
    assert r.exit_code == 1
    assert json.loads(r.output)["agree"] is False


def test_malformed_json_exits_2(runner, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"m": 3, "facets": [[1, 2]')
    r = run(runner, ["betti", "--in", str(p)])
    assert r.exit_code == 2
    r = run(runner, ["betti", "--stdin"], input='{"m": 2, "facets": [[1, 3]]}')
    assert r.exit_code == 2


def test_cap_exceeded_exits_3(runner, files):
    r = run(runner, ["--sweep-cap", "4", "betti", "--in", files["c5"]])
    assert r.exit_code == 3


def test_non_positive_caps_are_usage_errors(runner, files):
    r = run(runner, ["--threads", "0", "betti", "--in", files["c5"]])
    assert r.exit_code == 2


def test_props_on_octahedron(runner, files):
    r = run(runner, ["props", "--in", files["o6"]])
    assert r.exit_code == 0
    p = json.loads(r.output)["props"]
    assert p["suspension"] is True and p["scc"]["verdict"] == "fails" and p["nsc"] is False


def test_construct_ep_pipes_into_props(runner):
    r = run(runner, ["construct", "ep", "--polytope", "icosahedron"])
    assert r.exit_code == 0
    r2 = run(runner, ["props", "--stdin"], input=r.output)
    p = json.loads(r2.output)["props"]
    assert p["m"] == 46 and p["flag"] is True and p["nsc"] is True and p["scc"]["verdict"] == "holds"


def test_construct_and_compare_puzzle(runner, files, tmp_path):
    r = run(runner, ["construct", "puzzle", "--in", files["b8"], "--circuit", "1,7,4,8", "--swap", "1,4"])
    assert r.exit_code == 0, r.output
    p = tmp_path / "moved.json"
    p.write_text(r.output)
    r = run(runner, ["compare", "--a", files["b8"], "--b", str(p)])
    assert r.exit_code == 0 and json.loads(r.output)["compare"]["equal"] is True


def test_compare_reports_first_difference(runner, files):
    r = run(runner, ["compare", "--a", files["square"], "--b", files["c5"]])
    assert r.exit_code == 1
    assert json.loads(r.output)["compare"]["first_difference"] == "betti"


def test_product_command(runner, files):
    r = run(runner, ["--field", "gf3", "product", "--in", files["square"], "-a", "1,3", "-b", "2,4"])
    out = json.loads(r.output)
    assert out["zero"] is False and out["product"][0]["degree"] == 6
    r = run(runner, ["product", "--in", files["square"], "-a", "1,3", "-b", "1,3", "--star"])
    assert json.loads(r.output)["zero"] is True
    r = run(runner, ["product", "--in", files["square"], "-a", "1,2", "-b", "2,4"])
    assert r.exit_code == 2


def test_toric_commands(runner):
    assert run(runner, ["toric", "validate", "--hirzebruch", "2"]).exit_code == 0
    r = run(runner, ["--format", "text", "toric", "ranks", "--hirzebruch", "3"])
    assert r.output.splitlines()[-1] == "1 3 3 1"
    r = run(runner, ["toric", "equiv", "--hirzebruch", "2", "--hirzebruch", "-2"])
    assert r.exit_code == 0 and json.loads(r.output)["witness"]["A"]
    assert run(runner, ["toric", "equiv", "--hirzebruch", "0", "--hirzebruch", "1"]).exit_code == 1


def test_text_format_echoes_config(runner, files):
    r = run(runner, ["--format", "text", "--field", "gf3", "betti", "--in", files["square"]])
    first = r.output.splitlines()[0]
    assert first.startswith("config: ") and json.loads(first[8:])["field"] == "gf3"


def test_version_lists_catalog_checksums(runner):
    r = run(runner, ["--version"])
    assert r.exit_code == 0
    assert all(f"{name}=" in r.output for name in cli.CHECKSUM_NAMES)


GOLDEN_CASES = {
    "betti_o6_gf3": ["--field", "gf3", "betti", "--in", "{o6}", "--oracle", "both", "--multigraded"],
    "props_c5": ["props", "--in", "{c5}"],
    "fingerprint_square": ["fingerprint", "--in", "{square}"],
}


@pytest.mark.parametrize("case", sorted(GOLDEN_CASES))
def test_outputs_are_deterministic(runner, files, case):
    args = [a.format(**files) for a in GOLDEN_CASES[case]]
    first, second = run(runner, args).output, run(runner, args).output
    assert first == second
    golden = GOLDEN / f"{case}.json"
    if os.environ.get("MOMENTANGLE_REGEN_GOLDEN"):
        golden.write_text(first)
    assert first == golden.read_text()


def test_installed_entry_point_reads_a_pipe():
    K = json.dumps(polygon(4).to_json())
    p = subprocess.run(
        [sys.executable, "-m", "momentangle.cli", "betti", "--stdin"], input=K, capture_output=True, text=True
    )
    assert p.returncode == 0 and {"i": 2, "j": 4, "rank": 1} in json.loads(p.stdout)["hochster"]["entries"]
