import csv
import json
import math

import numpy as np
import pytest

from monogamy_toolkit.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main
from monogamy_toolkit.monogamy_toolkit.families import StandardState, standard_state
from monogamy_toolkit.monogamy_toolkit.measures import REPORT_FIELDS
from monogamy_toolkit.monogamy_toolkit.verify import suites
from monogamy_toolkit.monogamy_toolkit.verify.results import MarginTracker

R = 1 / math.sqrt(2)


def ket(n, entries):
    amplitudes = [[0.0, 0.0] for _ in range(4 * n)]
    for index, value in entries.items():
        amplitudes[index] = [value, 0.0]
    return {"n": n, "amplitudes": amplitudes}


def test_measure_bell_times_zero(write_state, capsys):
    path = write_state(ket(2, {0: R, 6: R}))
    assert main(["measure", path]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    for name in ("concurrence", "negativity", "coa"):
        assert report[name] == pytest.approx(1.0, abs=1e-12)
    for name in ("tau", "chi", "varpi", "eta"):
        assert report[name] == pytest.approx(0.0, abs=1e-12)
    assert report["ranks"] == [2, 2, 1]


def test_measure_product_csv(write_state, capsys):
    path = write_state(ket(2, {0: 1.0}))
    assert main(["measure", path, "--format", "csv"]) == EXIT_OK
    header, row = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert header == REPORT_FIELDS + ["rank_A", "rank_B", "rank_C"]
    assert [float(x) for x in row[:7]] == [0.0] * 7
    assert row[7:] == ["1", "1", "1"]


def test_measure_table_format(write_state, capsys):
    path = write_state(ket(2, {0: R, 7: R}))
    assert main(["measure", path, "--format", "table"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "coa" in out and "(2, 2, 2)" in out


def test_measure_truncated_amplitudes(write_state, capsys):
    data = ket(2, {0: 1.0})
    data["amplitudes"] = data["amplitudes"][:5]
    assert main(["measure", write_state(data)]) == EXIT_INPUT
    assert "amplitudes length 5 != 4n = 8" in capsys.readouterr().err


def test_measure_amplitude_too_large_for_a_float(write_state, capsys):
    data = ket(1, {0: 1.0})
    data["amplitudes"][0] = [10 ** 400, 0]
    assert main(["measure", write_state(data)]) == EXIT_INPUT
    assert "Amplitude 0 does not fit a float" in capsys.readouterr().err


def test_measure_missing_file(tmp_path, capsys):
    assert main(["measure", str(tmp_path / "nope.json")]) == EXIT_INPUT
    assert "Cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("data, label", [
    (ket(2, {1: 1 / math.sqrt(3), 2: 1 / math.sqrt(3), 4: 1 / math.sqrt(3)}),
     "W-type (2,2,2)"),
    (ket(2, {0: R, 7: R}), "GHZ-type (2,2,2)"),
    (standard_state(StandardState.S224).to_dict(), "(2,2,4) class"),
    (ket(2, {0: 1.0}), "separable (A-BC or B-AC or AB-C)"),
    (ket(2, {0: R, 5: R}), "separable (B-AC)"),
])
def test_classify(write_state, capsys, data, label):
    assert main(["classify", write_state(data)]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0] == label
    assert "1e-09" in out and "0.0001" in out


def test_sweep_ghz_writes_csv(tmp_path):
    out = tmp_path / "ghz.csv"
    code = main(["sweep", "--family", "ghz", "--param", "lambda0=0.05:0.95:19",
                 "--out", str(out)])
    assert code == EXIT_OK
    rows = list(csv.reader(out.read_text(encoding="utf-8").splitlines()))
    assert rows[0] == ["lambda0", "lambda1", "theta", "concurrence", "negativity",
                       "coa", "tau", "chi", "varpi", "eta"]
    assert len(rows) == 20
    data = np.array(rows[1:], dtype=float)
    expected = 2 * data[:, 0] * np.sqrt(1 - data[:, 0] ** 2)
    assert np.max(np.abs(data[:, 7] - expected)) <= 1e-9


def test_sweep_w_header(tmp_path):
    out = tmp_path / "w.csv"
    code = main(["sweep", "--family", "w", "--param", "lt0=0.2:0.4:3", "--fix",
                 "lt1=0.5", "--fix", "lt2=0.5", "--out", str(out)])
    assert code == EXIT_OK
    header = out.read_text(encoding="utf-8").splitlines()[0]
    assert header == "lt0,lt1,lt2,lt3,concurrence,negativity,coa,tau,chi,varpi,eta"


def test_sweep_infeasible_grid(tmp_path, capsys):
    code = main(["sweep", "--family", "w", "--param", "lt0=0.1:0.9:5", "--fix",
                 "lt1=0.6", "--fix", "lt2=0.6", "--out", str(tmp_path / "w.csv")])
    assert code == EXIT_INPUT
    assert "Infeasible" in capsys.readouterr().err
    assert not (tmp_path / "w.csv").exists()


def test_sweep_repeated_parameter(tmp_path):
    code = main(["sweep", "--family", "ghz", "--param", "lambda0=0.1:0.2:2",
                 "--param", "lambda0=0.3:0.4:2", "--out", str(tmp_path / "g.csv")])
    assert code == EXIT_INPUT


def test_verify_streams_json_lines(capsys):
    code = main(["verify", "--seed", "3", "--trials", "5", "--suite", "ordering",
                 "--suite", "lu_invariance"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    names = [json.loads(line)["name"] for line in lines]
    assert names == ["ordering", "lu_invariance"]
    assert all(json.loads(line)["violations"] == 0 for line in lines)


def test_verify_output_is_byte_identical(capsys):
    argv = ["verify", "--seed", "42", "--trials", "20", "--suite", "ordering",
            "--suite", "monotonicity"]
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "bogus"],
    ["verify", "--trials", "0"],
    ["verify", "--tol", "-1"],
    ["verify", "--seed", "-5"],
    ["measure"],
    [],
])
def test_bad_arguments_exit_2(argv):
    assert main(argv) == EXIT_INPUT


def test_verify_violation_exits_1(monkeypatch, capsys):
    def failing(cfg):
        tracker = MarginTracker("ordering")
        tracker.record(-1.0, cfg.tol, lambda: {"trial": 0})
        return tracker.result()

    monkeypatch.setattr(suites, "check_ordering", failing)
    assert main(["verify", "--trials", "1", "--suite", "ordering"]) == EXIT_VIOLATION
    line = json.loads(capsys.readouterr().out)
    assert line["violations"] == 1 and line["witness"] == {"trial": 0}


def test_help_exits_0():
    assert main(["--help"]) == EXIT_OK


@pytest.mark.slow
def test_default_verify_run_passes(capsys):
    assert main(["verify"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == len(suites.SUITES) + 1
