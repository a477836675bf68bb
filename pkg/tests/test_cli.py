import csv
import json
import os
import subprocess
import sys
from fractions import Fraction as F

import pytest

from oscdecay import cli

QUART = {"kind": "power_sum", "dimension": 1, "terms": [[1, 4], [1, 2]]}


def run_cfg(cfg, tmp_path, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    out = tmp_path / "out"
    return cli.main(["--config", str(path), "--out", str(out)]), out


def artifacts(out):
    return sorted(os.listdir(out)) if out.exists() else []


def test_empty_sampling_plan_exits_2(tmp_path, capsys):
    code, out = run_cfg({"kind": "pointwise_decay", "phase": QUART, "sampling": {}}, tmp_path)
    assert code == 2
    assert "sampling plan is empty" in capsys.readouterr().err
    assert artifacts(out) == []


@pytest.mark.parametrize("cfg", [
    {"kind": "nope"},
    {"kind": "pointwise_decay", "phase": {"kind": "pure_power"}, "sampling": {"time_fits": []}},
    {"kind": "pointwise_decay", "phase": QUART,
     "sampling": {"time_fits": [{"regime": "weird", "t_range": [1, 100], "points": 10}]}},
    {"kind": "lp_lq_ratio", "phase": QUART, "sampling": {"p": 0.5, "q": 2, "t_windows": [[1, 2]]}},
])
def test_invalid_configs_exit_2(cfg, tmp_path):
    code, out = run_cfg(cfg, tmp_path)
    assert code == 2 and artifacts(out) == []


def test_unreadable_config_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["--config", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert cli.main(["--config", str(tmp_path / "missing.json"), "--out", str(tmp_path / "o")]) == 2


def test_inadmissible_strichartz_pair_exits_3(tmp_path):
    cfg = {"kind": "strichartz", "phase": {"kind": "pure_power", "dimension": 1, "m": 4},
           "sampling": {"pairs": [[8, 1]], "T": 1, "time_steps": 8, "points": 256,
                        "half_width": 64, "width": 2.0}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 3 and artifacts(out) == []


def test_hypothesis_violation_symbol_exits_3(tmp_path):
    cfg = {"kind": "pointwise_decay", "phase": QUART, "symbol": {"kind": "bessel_weight", "b": -3},
           "sampling": {"time_fits": [{"regime": "small_t", "t_range": [1e-3, 1e-1], "points": 8}]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 3 and artifacts(out) == []


def test_numeric_failure_exits_4(tmp_path):
    # a space sweep spanning less than one decade cannot be fitted
    cfg = {"kind": "pointwise_decay", "phase": {"kind": "pure_power", "dimension": 1, "m": 2},
           "sampling": {"space_fits": [{"t": 1.0, "scaled_x_range": [10, 20], "points": 8}]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 4 and artifacts(out) == []


def test_failed_verdict_exits_5_and_writes(tmp_path):
    cfg = {"kind": "pointwise_decay", "phase": QUART,
           "sampling": {"time_fits": [{"regime": "small_t", "t_range": [1e-3, 1e-1], "points": 10,
                                       "predicted": "-1/2"}]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 5
    assert artifacts(out) == ["fits.json", "report.json", "samples.csv"]
    fits = json.loads((out / "fits.json").read_text())
    assert fits[0]["verdict"] == "fail" and fits[0]["predicted_exponent"] == "-1/2"
    assert abs(fits[0]["fitted_exponent"] + 0.25) < 0.05


def test_pointwise_outputs_round_trip(tmp_path):
    cfg = {"kind": "pointwise_decay", "phase": QUART,
           "sampling": {"time_fits": [{"regime": "small_t", "t_range": [1e-3, 1e-1], "points": 10}]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 0
    with open(out / "samples.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x_1", "re", "im", "abs", "method", "epsilon", "est_error"]
    assert len(rows) == 11
    from oscdecay import oscint as oi, phase as ph, symbol as sy
    t = float(rows[3][0])
    s = oi.evaluate(ph.from_dict(QUART), sy.constant_one(), t, 0.0)
    assert float(rows[3][2]) == s.value.real and float(rows[3][3]) == s.value.imag
    report = json.loads((out / "report.json").read_text())
    assert report["passed"] and report["config"] == cfg
    assert report["envelope"]["pieces"]


def test_region_report_vertices(tmp_path):
    cfg = {"kind": "region_report",
           "region": {"n": 3, "m2": 4, "b": 1, "pairs": [[1, "inf"], [2, 2]]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 0
    reg = json.loads((out / "report.json").read_text())["region"]
    n, m2, b = 3, F(4), F(1)
    p0 = 2 * n * (m2 - 2) / (n * (m2 - 2) + 2 * b)
    ups2 = (n * (m2 - 2) - 2 * b) / (2 * (m2 - 1))
    p1 = n / (n - ups2)
    assert F(reg["p0"]) == p0 == F(3, 2) and F(reg["p1"]) == p1 == F(9, 7)
    assert [F(v) for v in reg["A"]] == [1 / p0, 1 - 1 / p0]
    assert [F(v) for v in reg["B"]] == [1, 1 - 1 / p1]
    assert [F(v) for v in reg["D"]] == [1 / p1, 0]


def test_bundled_region_report(tmp_path):
    out = tmp_path / "o"
    assert cli.main(["--config", "region_report.json", "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["region"]["p0"] == "1" and rep["region"]["A"] == ["1", "0"]
    first = rep["pairs"][0]
    assert first["prediction"]["large_t"] == "499/1000" and first["prediction"]["epsilon_used"]
    assert rep["frac_schrodinger"]


def test_ellipticity_audit(tmp_path):
    cfg = {"kind": "ellipticity_audit",
           "phase": {"kind": "power_sum", "dimension": 2, "terms": [[1, 2], [1, 3]]}}
    code, out = run_cfg(cfg, tmp_path)
    assert code == 0
    assert json.loads((out / "report.json").read_text())["ellipticity"]["holds"]


def test_console_script_and_module_entry(tmp_path):
    out = tmp_path / "o"
    r = subprocess.run([sys.executable, "-m", "oscdecay.cli", "--config", "region_report.json",
                        "--out", str(out), "--threads", "0"], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (out / "report.json").exists()
    assert not [p for p in os.listdir(out) if p.startswith(".partial")]
