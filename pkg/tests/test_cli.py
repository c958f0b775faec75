import csv
import io
import json
import math
from pathlib import Path

import pytest

from gasbound import __version__
from gasbound.cli import ALL_CHECKS, run
from gasbound.threshold import SWEEP_COLUMNS

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def cfg(name):
    return str(CONFIGS / name)


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_constants_hard_rod(capsys):
    code, out, _ = call(capsys, "constants", "--potential", cfg("hardrod.toml"), "--beta", "1")
    assert code == 0
    d = json.loads(out)
    assert d["c_phi"] == pytest.approx(2.0, abs=1e-12)
    assert set(d) >= {"c_phi", "a_phi", "p_phi", "c_hat_phi", "beta", "error", "config_hash", "version"}
    assert d["version"] == __version__ and len(d["config_hash"]) == 64


def test_threshold_hard_rod(capsys):
    code, out, _ = call(capsys, "threshold", "--potential", cfg("hardrod.toml"), "--beta", "1", "--delta", "2")
    assert code == 0
    d = json.loads(out)
    assert d["new"] == pytest.approx(math.e / 2, rel=1e-14)
    assert d["ratio_pr"] == pytest.approx(math.e**2, rel=1e-12)


def test_threshold_auto_delta_is_conservative(capsys):
    code, out, _ = call(capsys, "threshold", "--potential", cfg("hardrod.toml"), "--samples", "1e5")
    d = json.loads(out)
    assert code == 0
    assert 5 ** (1 / 3) <= d["delta_used"] + 1e-12 <= 2.0 + 1e-12
    code, out, _ = call(capsys, "threshold", "--potential", cfg("hardrod.toml"), "--method", "quadrature")
    assert json.loads(out)["delta_used"] == pytest.approx(5 ** (1 / 3), abs=1e-9)


def test_sweep_csv(capsys):
    code, out, _ = call(capsys, "sweep", "--potential", cfg("sqwell.toml"), "--beta-min", "0.5",
                        "--beta-max", "2", "--steps", "4")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == SWEEP_COLUMNS
    assert out.splitlines()[0] == "beta,c_phi,a_phi,delta,lambda_tilde,z_tilde_sq,new,pr,py,ratio_pr,ratio_py"
    assert len(rows) == 5
    assert float(rows[2][1]) == pytest.approx(3.0)


def test_sweep_json_and_failures(capsys):
    code, out, _ = call(capsys, "sweep", "--potential", cfg("sqwell.toml"), "--beta-min", "0.1",
                        "--beta-max", "1", "--steps", "2", "--delta", "0.5", "--format", "json")
    rows = json.loads(out)
    assert code == 1
    assert rows[0]["error"] is None and rows[1]["error"]
    assert all("config_hash" in r for r in rows)


def test_vk_and_delta(capsys):
    code, out, _ = call(capsys, "vk", "--potential", cfg("hardrod.toml"), "--k", "3", "--samples", "1e5",
                        "--seed", "42", "--convention", "trailing")
    d = json.loads(out)
    assert code == 0 and d["samples"] == 100000 and d["k"] == 3
    assert abs(d["mean"] - 5.0) <= 4 * d["std_error"]
    code, out, _ = call(capsys, "delta", "--potential", cfg("hardrod.toml"), "--kmax", "3", "--method", "quadrature")
    d = json.loads(out)
    assert d["delta_hat"] == pytest.approx(5 ** (1 / 3), abs=1e-9) and d["witnessing_k"] == 3


def test_csv_for_single_objects(capsys):
    code, out, _ = call(capsys, "constants", "--potential", cfg("sqwell.toml"), "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and float(rows[0]["a_phi"]) == pytest.approx(1.0)


def test_output_file(tmp_path, capsys):
    target = tmp_path / "c.json"
    code, out, _ = call(capsys, "constants", "--potential", cfg("kac.toml"), "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["a_phi"] == pytest.approx(0.3855124073372, abs=1e-10)


def test_output_identical_across_thread_counts(capsys, monkeypatch):
    outs = []
    for n in ("1", "3"):
        monkeypatch.setenv("GASBOUND_THREADS", n)
        outs.append(call(capsys, "vk", "--potential", cfg("kac.toml"), "--k", "2", "--samples", "2e5")[1])
    assert outs[0] == outs[1]


def test_config_hash_tracks_inputs(capsys, tmp_path):
    h = lambda *a: json.loads(call(capsys, "constants", "--potential", cfg("sqwell.toml"), *a)[1])["config_hash"]
    assert h("--beta", "1") == h("--beta", "1.0") == h("--beta", "1", "--log-level", "INFO")
    assert h("--beta", "1") != h("--beta", "2")


def test_verify_square_well(capsys):
    code, out, _ = call(capsys, "verify", "--potential", cfg("sqwell.toml"), "--lambda", "0.1",
                        "--volume", "1.5", "--trials", "20")
    res = json.loads(out)
    assert code == 0
    names = [r["check"] for r in res]
    assert names == ["logz", "recursion", "correspondence_k1", "correspondence_k2", "selfmap",
                     "contraction_k1", "zerofree"]
    assert all(r["pass"] and r["residual"] <= r["tolerance"] for r in res)
    assert all({"check", "residual", "tolerance", "pass", "config_hash", "version"} <= r.keys() for r in res)


def test_verify_complex_activity(capsys):
    code, out, _ = call(capsys, "verify", "--potential", cfg("hardrod.toml"), "--lambda", "0.1+0.05i",
                        "--checks", "logz,recursion")
    assert code == 0 and len(json.loads(out)) == 2


def test_verify_failed_check_exit_code(capsys):
    # the hard-rod box [0, 1.5] has a zero of Z inside |lam| < e/2
    code, out, _ = call(capsys, "verify", "--potential", cfg("hardrod.toml"), "--checks", "zerofree")
    res = json.loads(out)
    assert code == 2 and not res[0]["pass"] and res[0]["residual"] == 1.0


@pytest.mark.parametrize("argv", [
    ["constants", "--potential", "missing.toml"],
    ["constants"],
    ["vk", "--potential", "x", "--samples", "lots"],
    ["verify", "--potential", "x", "--checks", "logz,bogus"],
    ["threshold", "--potential", "x", "--delta", "-1"],
    ["frobnicate"],
    ["constants", "--potential", "x", "--log-level", "CHATTY"],
])
def test_usage_errors(capsys, argv, tmp_path):
    argv = [cfg("hardrod.toml") if a == "x" else a for a in argv]
    assert call(capsys, *argv)[0] == 64


def test_malformed_config(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("kind = square_well\nwell_range = 0.5\nwell_depth = 1\n")
    assert call(capsys, "constants", "--potential", str(bad))[0] == 64
    assert call(capsys, "verify", "--potential", cfg("hardsphere3d.toml"))[0] == 64


def test_computational_failure(capsys, caplog):
    code, out, _ = call(capsys, "threshold", "--potential", cfg("sqwell.toml"), "--delta", "0.5")
    assert code == 1 and out == ""
    assert "A_phi" in caplog.text


def test_help(capsys):
    assert run(["--help"]) == 0
    assert run(["verify", "--help"]) == 0
    assert "--checks" in capsys.readouterr().out


def test_all_checks_listed():
    assert ALL_CHECKS == ("logz", "recursion", "correspondence", "selfmap", "contraction", "zerofree")
