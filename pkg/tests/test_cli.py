import json

import pytest

from gittins.cli import main
from gittins.table import build_table, load_table, save_table


@pytest.fixture(scope="module")
def table_file(tmp_path_factory):
    p = tmp_path_factory.mktemp("tbl") / "t40.dat"
    save_table(build_table(40, 1e-5), p)
    return p


def test_index_exact(capsys):
    assert main(["index", "--mean", "0", "--variance", "1", "--remaining", "2"]) == 0
    assert capsys.readouterr().out.strip() == "0.195183"


def test_index_m1_echoes_mean(capsys):
    assert main(["index", "--mean", "0.7", "--variance", "3", "--remaining", "1"]) == 0
    assert capsys.readouterr().out.strip() == "0.700000"


def test_index_approx(capsys):
    assert main(["index", "--approx", "--mean", "0", "--variance", "1",
                 "--remaining", "10000"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(2.998, abs=1e-3)


def test_index_usage_error(capsys):
    assert main(["index", "--mean", "0", "--variance", "1", "--remaining", "0"]) == 2


def test_build_table_cmd(tmp_path, capsys):
    out = tmp_path / "t.dat"
    assert main(["build-table", "--horizon", "100", "--tol", "1e-4",
                 "--out", str(out)]) == 0
    assert "4950 entries" in capsys.readouterr().out
    tbl = load_table(out)
    assert tbl.lookup(1, 2) == pytest.approx(0.195183, abs=1e-4)
    assert main(["build-table", "--horizon", "1", "--out", str(out)]) == 2


def test_sweep_cmd(tmp_path, table_file, capsys):
    cfg = {"horizon": 40, "arms": 2, "deltas": [0.5], "reps": 20, "seed": 3,
           "policies": ["ucb", "gittins"]}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["sweep", "--config", str(cfg_path), "--table", str(table_file),
                 "--out", str(tmp_path / "out")]) == 0
    data = (tmp_path / "out" / "regret_n40_d2.dat").read_text()
    rows = [ln for ln in data.splitlines() if not ln.startswith("%")]
    assert len(rows) == 1
    assert len(rows[0].split()) == 5  # Delta + 2 regrets + 2 stderrs


def test_sweep_schema_errors_reported_together(tmp_path, capsys):
    bad = {"horizon": 0, "arms": 2, "deltas": [], "reps": 0,
           "policies": ["ucb", "nope"], "extra": 1}
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps(bad))
    assert main(["sweep", "--config", str(cfg_path),
                 "--out", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    for frag in ("horizon", "deltas", "reps", "seed", "nope", "extra"):
        assert frag in err


def test_sweep_missing_table(tmp_path, capsys):
    cfg = {"horizon": 40, "arms": 2, "deltas": [0.5], "reps": 5, "seed": 0,
           "policies": ["gittins"]}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["sweep", "--config", str(cfg_path),
                 "--out", str(tmp_path / "o")]) == 2
    assert "40" in capsys.readouterr().err


def test_verify_cmd_pass(table_file, capsys):
    assert main(["verify", "--table", str(table_file), "--reps", "2000"]) == 0
    assert "overall: pass" in capsys.readouterr().out


def test_verify_cmd_corrupted_table(tmp_path, capsys):
    tbl = build_table(30, 1e-5)
    tbl.values[0, 9] = 5.0  # (T=1, m=10): beta explodes past the upper bound
    p = tmp_path / "bad.dat"
    save_table(tbl, p)
    assert main(["verify", "--table", str(p), "--reps", "2000"]) == 1
    out = capsys.readouterr().out
    assert "T=1,m=10" in out and "FAIL" in out


def test_verify_low_reps_downgrade(table_file, capsys):
    assert main(["verify", "--table", str(table_file), "--reps", "100"]) == 0
    out = capsys.readouterr().out
    assert "downgraded to report-only" in out


def test_bayes2_cmd(capsys):
    assert main(["bayes2", "--nu2", "0.05", "0.1", "0.13", "0.2"]) == 0
    rows = [ln.split() for ln in capsys.readouterr().out.splitlines()
            if not ln.startswith("%")]
    assert rows == [["0.05", "1", "1"], ["0.1", "2", "1"],
                    ["0.13", "2", "2"], ["0.2", "2", "2"]]


def test_bayes2_horizon_guard(capsys):
    assert main(["bayes2", "--horizon", "5000", "--nu2", "0.1"]) == 2
