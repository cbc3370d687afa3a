import csv
import json
import subprocess
import sys

import pytest

from shagrowth.cli import RunConfig, build_parser, main, parse_layers


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_layers():
    assert parse_layers("1..4") == [1, 2, 3, 4]
    assert parse_layers("1,3") == [1, 3]
    with pytest.raises(ValueError):
        parse_layers("-1..2")


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig("growth", digits=20)
    with pytest.raises(ValueError):
        RunConfig("growth", output_format="xml")
    with pytest.raises(ValueError):
        RunConfig("growth", options={"p": 4})


def test_local_machine_output(capsys):
    code, out, _ = run(capsys, "local", "--curve", "11a1", "--prime", "11", "--format", "machine")
    doc = json.loads(out)
    assert code == 0 and doc["kodaira"] == "I5" and doc["tamagawa"] == 5


def test_table_and_machine_agree(capsys, tmp_path):
    args = ["growth", "--pair", "11a1:11a3", "--tower", "false-tate:3:7", "--p", "5", "--layers", "1..4"]
    _, table, _ = run(capsys, *args)
    _, machine, _ = run(capsys, *args, "--format", "machine")
    doc = json.loads(machine)
    for row in doc["layers"]:
        line = next(l for l in table.splitlines() if l.split()[:1] == [str(row["layer"])])
        assert line.split()[1] == row["exponent_center"]
    assert doc["mu"] in table


def test_csv_and_figure(capsys, tmp_path):
    fig, table = tmp_path / "g.png", tmp_path / "g.csv"
    code, _, _ = run(capsys, "growth", "--pair", "75a1:75a2", "--tower", "z5sq-qi", "--p", "5",
                     "--layers", "1..5", "--figure", str(fig), "--csv", str(table))
    assert code == 0 and fig.stat().st_size > 0
    rows = list(csv.DictReader(table.open()))
    assert [r["exponent_center"] for r in rows] == ["0", "-200", "-5000", "-130000", "-3250000"]


def test_require_exact_exit_code(capsys):
    code, _, err = run(capsys, "omega-phi", "--pair", "54a2:54a3", "--prime", "3", "--e", "3",
                       "--require-exact")
    assert code == 3 and "interval" in err


def test_omega_phi_with_conductor(capsys):
    code, out, _ = run(capsys, "omega-phi", "--pair", "243a1:243a2", "--prime", "3", "--e", "3",
                       "--conductor-F", "9", "--format", "machine")
    assert code == 0 and json.loads(out)["omega_phi"] == {"center": "2", "halfwidth": "0"}


def test_unknown_curve_is_an_error(capsys):
    code, _, err = run(capsys, "local", "--curve", "37a1", "--prime", "37")
    assert code == 1 and "37a1" in err


def test_non_prime_p(capsys):
    code, _, err = run(capsys, "growth", "--pair", "11a1:11a3", "--tower", "cyclotomic:5", "--p", "4")
    assert code == 1 and "prime" in err


def test_periods_quotients(capsys):
    code, out, _ = run(capsys, "periods", "--curve", "11a1", "--curve2", "11a3", "--format", "machine")
    doc = json.loads(out)
    assert doc["omega_quotient"] == "5" and doc["omega_star_quotient"] == "1/5" and doc["torsion"] == 5


def test_conductor_bound(capsys):
    code, out, _ = run(capsys, "conductor-bound", "--l", "2", "--v", "1", "--format", "machine")
    assert json.loads(out) == {"ceiling": "8"}


def test_digits_from_environment(monkeypatch):
    monkeypatch.setenv("SHAGROWTH_DIGITS", "60")
    args = build_parser().parse_args(["local", "--curve", "11a1", "--prime", "11"])
    assert args.digits == 60


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "shagrowth.cli", "conductor-bound", "--f", "8", "--e", "4"],
                         capture_output=True, text=True, check=True).stdout
    assert "26" in out and "13/2" in out
