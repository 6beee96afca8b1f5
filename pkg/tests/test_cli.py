import json
import subprocess
import sys

import pytest

from qboson.cli import CACHE_ENV, main
from qboson.poisson import g2_table, parse_poly


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def test_roots_report(capsys):
    status, out, _ = run(capsys, "roots", "--type", "A2")
    rep = json.loads(out)
    assert status == 0
    assert rep["schema"] == 1 and rep["command"] == "roots" and rep["type"] == "A2"
    assert rep["result"]["roots"] == [[1, 0], [1, 1], [0, 1]]
    assert rep["result"]["minus_w0_fixed_dim"] == 1


def test_type_and_rank_flags_agree(capsys):
    _, a, _ = run(capsys, "roots", "--type", "B2")
    _, b, _ = run(capsys, "roots", "--type", "B", "--rank", "2")
    assert a == b


@pytest.mark.parametrize("command", ["pbw", "ls", "kashiwara", "casimir"])
def test_commands_run(capsys, command):
    status, out, _ = run(capsys, command, "--type", "A2")
    assert status == 0
    assert json.loads(out)["command"] == command


def test_poisson_g2_out_file(capsys, tmp_path):
    target = tmp_path / "table.json"
    status, out, _ = run(capsys, "poisson", "--type", "G2", "--out", str(target))
    assert status == 0 and out == ""
    pairs = json.loads(target.read_text())["result"]["pairs"]
    assert len(pairs) == 15
    ref = g2_table()
    for p in pairs:
        assert parse_poly(p["bracket"], 6) == ref.entry(p["i"], p["j"])


def test_rank_a3_seed_7(capsys):
    status, out, _ = run(capsys, "rank", "--type", "A3", "--seed", "7")
    assert status == 0
    assert json.loads(out)["result"]["rank"] == 4


def test_verify_a2(capsys):
    status, out, err = run(capsys, "verify", "--type", "A2")
    assert status == 0
    checks = json.loads(out)["result"]["checks"]
    assert all(v is not False for v in checks.values())
    assert "Jacobi" in err and "FAIL" not in err


def test_verify_b2_not_applicable_rows(capsys):
    status, out, _ = run(capsys, "verify", "--type", "B2")
    checks = json.loads(out)["result"]["checks"]
    assert status == 0
    assert checks["Casimirs"] is None and checks["Jacobi"] is True


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "rank", "--type", "A2", "--seed", "3")
    _, b, _ = run(capsys, "rank", "--type", "A2", "--seed", "3")
    assert a == b


def test_cache_is_transparent(capsys, tmp_path):
    cache = str(tmp_path / "cache")
    _, plain, _ = run(capsys, "poisson", "--type", "A3")
    _, cold, _ = run(capsys, "poisson", "--type", "A3", "--cache-dir", cache)
    _, warm, _ = run(capsys, "poisson", "--type", "A3", "--cache-dir", cache)
    assert plain == cold == warm
    assert list((tmp_path / "cache").glob("*.json"))


def test_cache_env_variable(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    run(capsys, "poisson", "--type", "A2")
    assert list(tmp_path.glob("poisson-A2-*.json"))


def test_corrupted_cache_recomputes(capsys, tmp_path):
    cache = str(tmp_path)
    _, first, _ = run(capsys, "poisson", "--type", "A2", "--cache-dir", cache)
    (entry,) = tmp_path.glob("poisson-A2-*.json")
    data = json.loads(entry.read_text())
    data["payload"]["pairs"][0]["bracket"] = "x1"
    entry.write_text(json.dumps(data))
    with pytest.warns(UserWarning, match="content hash"):
        _, again, _ = run(capsys, "poisson", "--type", "A2", "--cache-dir", cache)
    assert again == first
    entry.write_text("{not json")
    with pytest.warns(UserWarning, match="recomputing"):
        _, third, _ = run(capsys, "poisson", "--type", "A2", "--cache-dir", cache)
    assert third == first


def test_stale_header_rejected(capsys, tmp_path):
    cache = str(tmp_path)
    run(capsys, "poisson", "--type", "A2", "--cache-dir", cache)
    (entry,) = tmp_path.glob("poisson-A2-*.json")
    data = json.loads(entry.read_text())
    data["header"]["engine_version"] = "0.0.0"
    entry.write_text(json.dumps(data))
    with pytest.warns(UserWarning, match="header mismatch"):
        run(capsys, "poisson", "--type", "A2", "--cache-dir", cache)


def test_custom_word(capsys):
    status, out, _ = run(capsys, "roots", "--type", "A2", "--word", "2,1,2")
    assert status == 0
    assert json.loads(out)["result"]["roots"] == [[0, 1], [1, 1], [1, 0]]


@pytest.mark.parametrize("argv", [
    ["roots", "--type", "X9"],
    ["roots", "--type", "A2", "--word", "1,1,1"],
    ["roots", "--type", "A2", "--word", "a,b"],
    ["rank", "--type", "A2", "--samples", "0"],
    ["frobnicate", "--type", "A2"],
    ["roots"],
    ["roots", "--type", "A2", "--format", "xml"],
])
def test_bad_flags(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qboson", "roots", "--type", "A1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["N"] == 1
