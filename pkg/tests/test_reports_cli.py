import csv
import json
import math

import numpy as np
import pytest

from nevanlinna_lab.cli import parse_and_dispatch
from nevanlinna_lab.lab import BoundFit, LemmaReport, ScanGrid, Witness, log_spaced, theorem_scan
from nevanlinna_lab.reports import (
    CSV_COLUMNS,
    dumps,
    emit_report,
    report_from_json,
    report_to_json,
    samples_to_csv,
    strip_volatile,
)


def sample_report(witnesses=None):
    fit = BoundFit(0.1, 1 / 3, 0.0, 0.54 + 1241.86j, 12)
    ws = [Witness("binding", 0.54, 1241.86, 2.0 / 7)] if witnesses is None else witnesses
    return LemmaReport("THM", {"t_values": [16.0, 0.1], "sigma_values": [0.54], "delta": 0.01}, True, fit, ws,
                       {"c6": 0.1, "c8": math.exp(1 / 3)}, [(0.54, 16.0, 0.2, 0.3, 0.1)], 12.5)


# -- serialisation ------------------------------------------------------------------


def test_float_formatting_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(4.0) == "4.0"
    for x in (1e-300, 1 / 3, math.pi * 1e200, -2.0**-1074, 0.1 + 0.2):
        assert float(dumps(x)) == x
    assert dumps(math.nan) == "null"
    assert dumps(np.float64(2.5)) == "2.5" and dumps(np.int64(3)) == "3" and dumps(np.bool_(True)) == "true"
    with pytest.raises(TypeError):
        dumps(object())


def test_json_roundtrip_equal_report():
    rep = sample_report()
    text = report_to_json(rep, "20260101T000000000000Z")
    back = report_from_json(text)
    assert back == rep
    assert back.runtime_ms == rep.runtime_ms


def test_json_key_order_and_schema():
    d = json.loads(report_to_json(sample_report(), "X"))
    assert list(d) == ["lemma_id", "params", "pass", "fit", "witnesses", "constants", "runtime_ms", "timestamp"]
    assert list(d["fit"]) == ["slope", "offset", "max_residual", "witness", "n_samples"]


def test_empty_witness_list():
    text = report_to_json(sample_report(witnesses=[]), "X")
    assert json.loads(text)["witnesses"] == []
    assert report_from_json(text).witnesses == []


def test_roundtrip_real_report():
    rep = theorem_scan(ScanGrid(tuple(log_spaced(16, 200, 4)), (0.54, 1.0), 0.01))
    assert report_from_json(report_to_json(rep)) == rep


def test_strip_volatile():
    a = report_to_json(sample_report(), "A")
    rep = sample_report()
    rep.runtime_ms = 99.0
    b = report_to_json(rep, "B")
    assert a != b and strip_volatile(a) == strip_volatile(b)


def test_csv_columns():
    text = samples_to_csv([(0.5, 16.0, 1.0, 2.0, 1.0)])
    rows = list(csv.reader(text.splitlines()))
    assert tuple(rows[0]) == CSV_COLUMNS == ("sigma", "t", "value", "bound", "margin")
    assert rows[1] == ["0.5", "16", "1", "2", "1"]


def test_emit_both_writes_two_files(tmp_path):
    paths = emit_report(sample_report(), tmp_path, "both", "20260101T000000000000Z")
    assert sorted(p.name for p in paths) == ["THM-20260101T000000000000Z.csv", "THM-20260101T000000000000Z.json"]
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(p.name for p in paths)


def test_emit_missing_dir(tmp_path):
    with pytest.raises(FileNotFoundError):
        emit_report(sample_report(), tmp_path / "nope", "json")


# -- CLI ----------------------------------------------------------------------------


def run(argv, tmp_path):
    return parse_and_dispatch(list(argv) + ["--out-dir", str(tmp_path)])


def test_help_exit_zero(capsys):
    assert parse_and_dispatch(["--help"]) == 0
    assert "lemma5" in capsys.readouterr().out


def test_usage_errors(tmp_path, capsys):
    assert parse_and_dispatch([]) == 2
    assert parse_and_dispatch(["bogus"]) == 2
    assert run(["lemma8", "--delta", "0.5"], tmp_path) == 2
    assert run(["lemma5", "--t-step", "-1"], tmp_path) == 2
    assert run(["census", "--fn", "nosuch", "--radius", "1"], tmp_path) == 2
    err = capsys.readouterr().err
    assert "usage" in err or "nevanlinna-lab" in err


def test_io_error_exit_three(tmp_path):
    target = tmp_path / "file"
    target.write_text("x")
    assert parse_and_dispatch(["lemma4", "--n-alpha", "1000", "--out-dir", str(target)]) == 3
    assert parse_and_dispatch(["lemma4", "--config", str(tmp_path / "missing.cfg")]) == 3


def test_lemma_failure_exit_one_prints_witness(tmp_path, capsys):
    # alpha taken at N = 10 is far from its limit, so the tail bound at xi = 1e6 cannot hold
    code = run(["lemma4", "--fn", "inv_x", "--a", "1", "--xi", "1000000", "--n-alpha", "10"], tmp_path)
    assert code == 1
    assert "witness residual" in capsys.readouterr().err
    assert len(list(tmp_path.glob("L4-*.json"))) == 1


def test_lemma5_small_scan_exit_zero(tmp_path):
    assert run(["lemma5", "--t-min", "-5", "--t-max", "5", "--t-step", "0.5", "--format", "both"], tmp_path) == 0
    (json_path,) = tmp_path.glob("L5-*.json")
    rep = report_from_json(json_path.read_text())
    assert rep.passed and rep.params["t_count"] == 21
    (csv_path,) = tmp_path.glob("L5-*.csv")
    assert len(csv_path.read_text().splitlines()) == 1 + 6 * 21


def test_census_command(tmp_path, capsys):
    assert run(["census", "--fn", "zeta-minus-1-shift:100", "--center", "0", "--radius", "3.48"], tmp_path) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["winding"] == len(doc["divisors"]) == 2


def test_characteristic_and_jensen_commands(tmp_path, capsys):
    assert run(["characteristic", "--fn", "exp", "--radius", "3"], tmp_path) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["values"][0]["T"] == pytest.approx(3 / math.pi, abs=1e-10)
    assert run(["jensen", "--fn", "rational:zeros=0.3,0.4;poles=0.6;scale=1", "--rho", "0.9"], tmp_path) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True
    assert run(["jensen", "--fn", "exp-shift:2", "--rho", "4"], tmp_path) == 0
    assert run(["jensen", "--fn", "sin", "--rho", "1"], tmp_path) == 2


def test_config_defaults_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nt_min = -2\nt-max = 2\nt_step = 1\nformat = csv\n")
    assert run(["lemma5", "--config", str(cfg), "--t-max", "3"], tmp_path) == 0
    (csv_path,) = tmp_path.glob("L5-*.csv")
    ts = sorted({float(r[1]) for r in list(csv.reader(csv_path.read_text().splitlines()))[1:]})
    assert ts == [-2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
    assert not list(tmp_path.glob("L5-*.json"))
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense = 1\n")
    assert run(["lemma5", "--config", str(bad)], tmp_path) == 2


def test_cli_rerun_is_byte_identical_modulo_timestamp(tmp_path):
    argv = ["theorem", "--t-min", "16", "--t-max", "100", "--per-decade", "4", "--sigma", "0.54", "1", "4"]
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert run(argv, a) == 0 and run(argv, b) == 0
    (ja,), (jb,) = list(a.glob("*.json")), list(b.glob("*.json"))
    assert strip_volatile(ja.read_text()) == strip_volatile(jb.read_text())


def test_atomic_write_leaves_no_temp_files(tmp_path):
    run(["lemma4", "--fn", "inv_x4", "--a", "2", "--xi", "10", "--n-alpha", "1000", "--format", "both"], tmp_path)
    assert all(not p.name.startswith(".") for p in tmp_path.iterdir())
