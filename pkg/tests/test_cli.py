import csv
import io
import json

import pytest

from udwent import cli
from udwent.config import RunConfig, build_config, parse_pairs, read_config_file
from udwent.errors import ConfigError, IndeterminateError


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def data_rows(text):
    body = "\n".join(l for l in text.splitlines() if not l.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def test_point_vacuum(capsys):
    code, out = run(capsys, "point", "--scenario", "vacuum", "--L", "2", "--omega", "0")
    rec = json.loads(out)
    assert code == 0
    assert rec["X_re"] == pytest.approx(-0.042819, abs=5e-7)
    assert rec["A"] == pytest.approx(0.0795775, abs=5e-8)
    assert rec["N"] == 0 and rec["entangled"] is False
    assert rec["config"]["content_hash"]


def test_point_entangled(capsys):
    code, out = run(capsys, "point", "--set", "L=10", "--set", "omega=10")
    assert code == 0 and json.loads(out)["entangled"] is True


def test_point_large_frequency_keeps_exponent(capsys):
    code, out = run(capsys, "point", "--L", "1500", "--omega", "800", "--scenario", "thermal")
    rec = json.loads(out)
    assert code == 0 and rec["log_scale"] < -600 and rec["A"] > 0


def test_point_guard_exit(capsys):
    code, out = run(capsys, "point", "--scenario", "thermal", "--two-pi-T-sigma", "0.5", "--L", "50")
    assert code == 2
    assert json.loads(out)["error"] == "GuardError"


def test_point_indeterminate_exit(capsys, monkeypatch):
    def tie(*a, **k):
        raise IndeterminateError("tie", margin=0.0, tolerance=1e-12)
    monkeypatch.setattr(cli, "classify", tie)
    code, out = run(capsys, "point", "--L", "10", "--omega", "3")
    assert code == 3 and json.loads(out)["entangled"] is None


def test_bad_config_exit(capsys):
    code, out = run(capsys, "point", "--set", "nonsense=1")
    assert code == 2
    code, out = run(capsys, "point", "--per-decade", "abc")
    assert code == 2


def test_kernel(capsys):
    code, out = run(capsys, "kernel", "--kernel", "response", "--v", "50", "--two-pi-T-sigma",
                    str(2 * 3.141592653589793 * 0.01))
    assert code == 0
    assert json.loads(out)["re"] == pytest.approx(-4.7e-6, abs=5e-8)
    code, out = run(capsys, "kernel", "--kernel", "vacuum", "--v", "3", "--L", "3")
    assert code == 3


def test_selftest_passes(capsys):
    code, out = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 5


def test_selftest_negative_control(capsys):
    code, out = run(capsys, "selftest", "--rel-tol-1d", "1", "--lattice-L-count", "3", "--omega-count", "3")
    assert code == 4
    assert "closed-form calibration  FAIL" in out


CURVE = ("curve", "--scenarios", "vacuum", "--L-lo", "10", "--L-hi", "1000", "--L-count", "5")


def test_curve_columns_and_roundtrip(capsys, tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    code, _ = run(capsys, *CURVE, "--out", str(out1))
    assert code == 0
    text = (out1 / "curve.csv").read_text()
    rows = data_rows(text)
    assert tuple(rows[0].keys()) == cli.CSV_COLUMNS
    assert len(rows) == 5
    assert all(r["omega_upper_sigma"] == "" and r["horizon_over_sigma"] == "1000.0" for r in rows)
    # full round-trip precision
    assert all(float(repr(float(r["omega_lower_sigma"]))) == float(r["omega_lower_sigma"]) for r in rows)
    code, _ = run(capsys, "curve", "--config", str(out1 / "curve.csv"), "--out", str(out2))
    assert code == 0
    assert (out2 / "curve.csv").read_bytes() == (out1 / "curve.csv").read_bytes()
    assert (out2 / "curve.json").read_bytes() == (out1 / "curve.json").read_bytes()
    code, _ = run(capsys, "curve", "--config", str(out1 / "curve.json"), "--out", str(out2))
    assert (out2 / "curve.csv").read_bytes() == (out1 / "curve.csv").read_bytes()


def test_curve_thermal_empty_rows(capsys, tmp_path):
    code, _ = run(capsys, "curve", "--scenarios", "thermal", "--L-lo", "3000", "--L-hi", "5000",
                  "--L-count", "2", "--out", str(tmp_path), "--formats", "csv")
    rows = data_rows((tmp_path / "curve.csv").read_text())
    last = rows[-1]
    assert last["omega_lower_sigma"] == "" and last["omega_upper_sigma"] == ""
    assert not (tmp_path / "curve.json").exists()


def test_config_file_flags_win(tmp_path):
    f = tmp_path / "run.cfg"
    f.write_text("# comment\nL = 20\nomega = 3\nmethod = series\n")
    cfg = build_config(read_config_file(f), {"omega": "5"})
    assert (cfg.L, cfg.omega, cfg.method) == (20.0, 5.0, "series")


def test_config_echo_parses_back():
    cfg = RunConfig(L=33.0, scenarios=("thermal",), formats=("csv",))
    assert build_config(parse_pairs("\n".join(cfg.echo_lines()))) == cfg
    assert cfg.content_hash() == cfg.replace(out="elsewhere", workers=3).content_hash()
    assert cfg.content_hash() != cfg.replace(L=34.0).content_hash()


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        build_config({"scenario": "anti-de-sitter"})
    with pytest.raises(ConfigError):
        build_config({"formats": "png"})
