import csv
import io
import json

import numpy as np
import pytest

from tempered_wave import cli
from tempered_wave.problems import manufactured_problem


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_converge_matches_table(capsys):
    code, out, _ = run(capsys, "converge", "--alpha", "1.5", "--gamma", "2", "--lambda", "0.1",
                       "--resolutions", "20,40,80,160", "--workers", "1")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["tau", "h", "max_error", "rate"]
    errors = [float(r["max_error"]) for r in table]
    np.testing.assert_allclose(errors, [5.2886e-05, 1.4084e-05, 3.6352e-06, 9.2322e-07], rtol=0.02)
    assert float(table[0]["tau"]) == 0.05 and float(table[0]["h"]) == 0.05


def test_solve_error_computed_externally(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "manufactured", "--m", "20", "--n", "10",
                       "--alpha", "1.5", "--gamma", "2", "--lambda", "0.1")
    assert code == 0
    table = rows(out)
    x = np.array([float(r["x"]) for r in table])
    u = np.array([float(r["u"]) for r in table])
    assert x[0] == 0.0 and x[-1] == 1.0 and u[0] == 0.0 and u[-1] == 0.0
    exact = manufactured_problem(1.5, 2.0, 0.1).exact(x, 0.5)
    assert np.max(np.abs(u - exact)) == pytest.approx(5.2886e-05, rel=0.02)


def test_dump_tempered(capsys):
    code, out, _ = run(capsys, "dump-coeffs", "--kind", "tempered", "--beta", "1", "--lambda", "0",
                       "--count", "4")
    assert code == 0
    values = [float(r["l_k"]) for r in rows(out)]
    np.testing.assert_allclose(values, [2 / 3, 8 / 9, 26 / 27, 80 / 81], rtol=1e-15)


def test_dump_riesz_and_grunwald(capsys):
    _, out, _ = run(capsys, "dump-coeffs", "--kind", "riesz", "--alpha", "2", "--count", "5")
    assert [float(r["w_m"]) for r in rows(out)] == [1, -2, 1, 0, 0]
    _, out, _ = run(capsys, "dump-coeffs", "--kind", "grunwald", "--beta", "1", "--count", "3")
    assert [float(r["g_m"]) for r in rows(out)] == [1, 1, 1]


def test_full_precision_formatting(capsys):
    _, out, _ = run(capsys, "dump-coeffs", "--beta", "1", "--lambda", "0", "--count", "1")
    assert out == "k,l_k\n0,0.66666666666666663\n"


@pytest.mark.parametrize(
    "argv,flag",
    [
        (["solve", "--alpha", "2.5"], "--alpha"),
        (["solve", "--gamma", "1"], "--gamma"),
        (["solve", "--lambda", "-1"], "--lambda"),
        (["solve", "--m", "2"], "--m"),
        (["solve", "--domain", "0,2"], "--domain"),
        (["converge", "--resolutions", "20"], "--resolutions"),
        (["converge", "--resolutions", "3,6"], "--resolutions"),
        (["dump-coeffs", "--beta", "1.5"], "--beta"),
    ],
)
def test_usage_errors(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err


def test_parse_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve", "--m", "many"])
    assert exc.value.code == 2


def test_missing_subcommand(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "subcommand" in err


def test_runtime_failure_exits_1(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("solver exploded")

    monkeypatch.setattr(cli, "solve", boom)
    code, _, err = run(capsys, "solve")
    assert code == 1 and "solver exploded" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--alpha", "1.3", "--gamma", "1.7", "--m", "16", "--n", "8"],
        ["converge", "--alpha", "1.7", "--gamma", "1.3", "--resolutions", "10,20,40"],
        ["dump-coeffs", "--kind", "tempered", "--beta", "0.4", "--lambda", "0.3", "--tau", "0.1"],
    ],
)
def test_record_round_trip(capsys, tmp_path, argv):
    csv_path = tmp_path / "direct.csv"
    record = tmp_path / "run.json"
    assert cli.main(argv + ["--output-path", str(csv_path), "--record", str(record)]) == 0

    data = json.loads(record.read_text())
    assert set(data) >= {"params", "rows", "wall_ms", "version"}
    assert data["params"]["subcommand"] == argv[0]

    again = tmp_path / "again.csv"
    capsys.readouterr()
    assert cli.main(["--config", str(record)]) == 0
    again.write_text(capsys.readouterr().out)
    assert again.read_bytes() == csv_path.read_bytes()


def test_json_output(capsys):
    code, out, _ = run(capsys, "converge", "--resolutions", "20,40", "--output-format", "json")
    assert code == 0
    data = json.loads(out)
    assert [r["M"] for r in data["rows"]] == [20, 40]
    assert data["rows"][1]["rate"] > 1.8


def test_bad_config(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"params": {"subcommand": "solve", "colour": "red"}}))
    code, _, err = run(capsys, "--config", str(bad))
    assert code == 2 and "colour" in err
    code, _, _ = run(capsys, "--config", str(tmp_path / "missing.json"))
    assert code == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 5 and all(line.startswith("[PASS]") for line in lines)
