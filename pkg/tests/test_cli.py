import json
import re

import numpy as np
import pytest

from tdse_xform.cli import csv_text, dump_json, main

SMALL_FREE = {"grid": {"x_min": 0.5, "x_max": 4.0, "n": 128}, "axis": {"t0": 0.0, "t1": 1.0, "m": 64}}
SMALL_SEXTIC = {"grid": {"x_min": -4.0, "x_max": 4.0, "n": 257}, "axis": {"t0": 0.0, "t1": 0.5, "m": 256}}


def _config(tmp_path, obj, name="c.json"):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def _report(path):
    return json.loads(open(path).read())


def test_catalog_list(tmp_path, capsys):
    assert main(["catalog"]) == 0
    first = capsys.readouterr().out
    lines = first.strip().splitlines()
    assert lines[0].split()[0] == "name" and len(lines) == 5
    assert main(["catalog"]) == 0
    assert capsys.readouterr().out == first
    assert main(["catalog", _config(tmp_path, {"filter": "sextic"})]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 3


def test_verify_passes_and_writes_report(tmp_path):
    cfg = _config(tmp_path, {"entry": "free-particle", "params": {"n": 1}, **SMALL_FREE})
    out = tmp_path / "r" / "report.json"
    assert main(["verify", cfg, "--out", str(out), "--quiet", "--check", "reality,darboux,theorem,norms"]) == 0
    rep = _report(out)
    names = [c["name"] for c in rep["checks"]]
    assert "reality" in names and "darboux:V1_closed_form" in names and "theorem:fit" in names
    assert all(c["pass"] for c in rep["checks"])
    assert re.fullmatch("[0-9a-f]{64}", rep["config_digest"])
    assert b"\r\n" not in out.read_bytes()


def test_verify_tolerance_failure_exits_1(tmp_path):
    cfg = _config(tmp_path, {"entry": "free-particle", **SMALL_FREE, "tolerances": {"norms": 1e-30}})
    assert main(["verify", cfg, "--check", "norms", "--quiet"]) == 1


def test_configuration_errors_exit_2(tmp_path):
    assert main(["verify", _config(tmp_path, {"entry": "free-particle", "colour": 1})]) == 2
    assert main(["verify", _config(tmp_path, {"entry": "nope"})]) == 2
    assert main(["verify", _config(tmp_path, {"entry": "free-particle"}), "--check", "magic"]) == 2
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", str(bad)]) == 2
    assert main(["transform", _config(tmp_path, {"potential": "x^^2"})]) == 2
    assert main(["verify"]) == 2
    assert main(["frobnicate"]) == 2


def test_verify_sextic_static_residual(tmp_path):
    cfg = _config(tmp_path, {"entry": {"name": "sextic-static", "params": {"n": 0, "alpha": 3}}, **SMALL_SEXTIC})
    out = tmp_path / "rep.json"
    assert main(["verify", cfg, "--check", "residual,norms", "--out", str(out), "--quiet"]) == 0


def test_propagate_csv(tmp_path):
    cfg = _config(tmp_path, {"entry": {"name": "sextic-static", "params": {"n": 0}}, **SMALL_SEXTIC,
                             "stride_t": 64, "stride_x": 64})
    out = tmp_path / "prop.json"
    assert main(["propagate", cfg, "--out", str(out), "--quiet"]) == 0
    text = (tmp_path / "prop.csv").read_text()
    lines = text.splitlines()
    assert lines[0] == "t,x,re_psi,im_psi,abs_psi,re_exact,im_exact"
    assert len(lines) == 1 + 5 * 5
    rep = _report(out)
    assert [c["name"] for c in rep["checks"]] == ["l2_error_final", "linf_error", "norm_drift"]


def test_transform_harmonic_to_free(tmp_path):
    # C = sqrt(1+t^2), B = 0, A = 2 arctan t maps x^2/4 + 1/2 onto V = 0
    cfg = {
        "potential": "x^2/4 + 1/2",
        "transform": {"A": "2*arctan(t)", "C": "sqrt(1+t^2)"},
        "expect_potential": "0",
        "grid": {"x_min": -4, "x_max": 4, "n": 65},
        "axis": {"t0": 0, "t1": 1, "m": 16},
    }
    out = tmp_path / "t.json"
    assert main(["transform", _config(tmp_path, cfg), "--out", str(out), "--quiet"]) == 0
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "t,x,V"


def test_transform_identity_and_compare_entry(tmp_path):
    cfg = {
        "entry": {"name": "sextic-static", "params": {"n": 1}},
        "compare_entry": {"name": "sextic-static", "params": {"n": 1}},
        "grid": {"x_min": -3, "x_max": 3, "n": 65},
        "axis": {"t0": 0, "t1": 1, "m": 16},
    }
    out = tmp_path / "t.json"
    assert main(["transform", _config(tmp_path, cfg), "--out", str(out), "--quiet"]) == 0
    checks = {c["name"]: c for c in _report(out)["checks"]}
    assert checks["potential:sextic-static"]["defect"] == 0
    assert checks["wavefunction:state-0"]["defect"] == 0


def test_transform_degenerate_scale_exits_1(tmp_path):
    cfg = {"potential": "x^2", "transform": {"C": "cos(3*t)"}, "grid": {"x_min": -1, "x_max": 1, "n": 33},
           "axis": {"t0": 0, "t1": 1, "m": 16}}
    out = tmp_path / "t.json"
    assert main(["transform", _config(tmp_path, cfg), "--out", str(out), "--quiet"]) == 1
    assert _report(out)["error"]["code"] == "degenerate-scale"


def test_darboux_outputs(tmp_path):
    # default 512 x 256 window, where the default tolerances apply
    cfg = {"entry": "free-particle", "params": {"n": 1}, "inverse": True}
    out = tmp_path / "d.json"
    assert main(["darboux", _config(tmp_path, cfg), "--out", str(out), "--quiet"]) == 0
    checks = {c["name"]: c for c in _report(out)["checks"]}
    assert checks["kernel:seed"]["pass"] and checks["im_V1"]["defect"] == 0
    assert "roundtrip:gaussian" in checks
    for suffix in ("_V1", "_psi1", "_inverse_gaussian"):
        assert (tmp_path / f"d{suffix}.csv").exists()


def test_float_format_has_17_digits():
    assert dump_json({"x": 0.1}) == '{\n  "x": 0.10000000000000001\n}'
    text = csv_text(["a"], [np.array([1 / 3])])
    assert text == "a\n0.33333333333333331\n"
    assert float(text.splitlines()[1]) == 1 / 3


def test_quiet_suppresses_stdout(tmp_path, capsys):
    assert main(["catalog", "--quiet"]) == 0
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize("command", ["propagate", "darboux"])
def test_unknown_keys_are_rejected_per_command(tmp_path, command):
    assert main([command, _config(tmp_path, {"entry": "free-particle", "checks": ["x"]})]) == 2
