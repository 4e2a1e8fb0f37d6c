import csv
import io
import math

import mpmath
import orjson
import pytest

from main import EXIT_OK, EXIT_USAGE, main
from src.commands import (
    OutputFormat,
    OutputRecord,
    Provenance,
    parse_lambdas,
    render,
    run_command,
    to_csv,
    validate_command_input,
    write_output,
)
from src.errors import UsageError


@pytest.mark.parametrize("text", ["", "2,,1", "a,1", "1,-2", "0", "inf"])
def test_parse_lambdas_rejects(text):
    with pytest.raises(UsageError):
        parse_lambdas(text)


def test_parse_lambdas():
    assert parse_lambdas(" 2, 1 ") == [2.0, 1.0]


def test_validate_command_input():
    with pytest.raises(UsageError):
        validate_command_input("nope", {})
    with pytest.raises(UsageError):
        validate_command_input("gamma", {})
    with pytest.raises(UsageError):
        validate_command_input("bounds", {"setting": "normal", "m": 2})
    assert validate_command_input("lp", {"setting": "uniform", "m": "2"}) == {
        "setting": "uniform",
        "m": 2,
        "lambdas": None,
        "n": 11,
        "quantile": 0.999,
    }


def test_bounds_uniform():
    record = run_command("bounds", {"setting": "uniform", "m": 2})
    assert record.ok
    assert record.results["upper_bound"] == pytest.approx(5 / 9)
    assert record.results["srev"] == pytest.approx(0.5)
    assert record.results["brev"] == pytest.approx(0.544331, abs=1e-6)
    assert record.provenance == [Provenance.CLOSED_FORM, Provenance.NUMERIC]


def test_bounds_exponential_single_item():
    record = run_command("bounds", {"setting": "exp", "lambdas": "1"})
    assert record.results["upper_bound"] == pytest.approx(math.exp(-1))
    assert record.results["srev"] == pytest.approx(record.results["upper_bound"])


def test_bounds_missing_argument():
    with pytest.raises(UsageError):
        run_command("bounds", {"setting": "uniform"})
    with pytest.raises(UsageError):
        run_command("bounds", {"setting": "exp"})


def test_gamma_command():
    record = run_command("gamma", {"m": 2})
    assert record.ok
    assert record.results["gamma_star"] == pytest.approx(1.6180339887, abs=1e-9)
    assert record.results["G"] == pytest.approx(0.839962, abs=1e-6)
    assert Provenance.QUADRATURE in record.provenance


def test_gamma_command_large_m_stays_lossless():
    record = run_command("gamma", {"m": 200})
    payload = orjson.loads(render(record, OutputFormat.JSON))
    big = payload["results"]["G"]
    assert isinstance(big, str)
    assert float(mpmath.log(mpmath.mpf(big))) == pytest.approx(payload["results"]["log_G"], rel=1e-14)
    assert payload["results"]["G_over_m_fact"] < 1.0


def test_fig_one_marks_numeric_provenance():
    record = run_command("fig", {"which": "1", "max_m": 3})
    assert record.provenance == [Provenance.CLOSED_FORM, Provenance.NUMERIC]
    assert record.rows[1]["ratio_bundle"] == pytest.approx(1.0206, abs=1e-4)


def test_fig_two():
    record = run_command("fig", {"which": "2", "max_m": 3})
    assert [r["m"] for r in record.rows] == [1, 2, 3]
    assert record.rows[0]["ratio_sep_exp"] == pytest.approx(1.0)


def test_simulate_proportional():
    record = run_command(
        "simulate",
        {"mechanism": "proportional", "setting": "exp", "lambdas": "2,1", "n": 100_000, "pairs": 1000, "seed": 3},
    )
    assert record.seed == 3
    assert record.results["closed_form"] == pytest.approx(0.41998, abs=1e-5)
    assert record.results["ic_violations"] == 0
    assert abs(record.results["z_score"]) < 4


def test_simulate_proportional_needs_exponential():
    with pytest.raises(UsageError):
        run_command("simulate", {"mechanism": "proportional", "setting": "uniform", "m": 2})


def test_lp_command():
    record = run_command("lp", {"setting": "uniform", "m": 1, "n": 11})
    assert record.ok
    assert record.results["value"] == pytest.approx(0.25, abs=1e-9)
    assert record.results["status"] == "optimal"


def test_csv_keeps_full_precision():
    record = run_command("bounds", {"setting": "exp", "lambdas": "2,1"})
    rows = dict(csv.reader(io.StringIO(to_csv(record))))
    assert float(rows["upper_bound"]) == record.results["upper_bound"]
    assert float(rows["srev"]) == record.results["srev"]


def test_json_round_trip():
    record = run_command("gamma", {"m": 3})
    payload = orjson.loads(render(record, OutputFormat.JSON))
    assert payload["results"]["gamma_star"] == record.results["gamma_star"]
    assert payload["provenance"] == ["closed-form", "quadrature"]
    assert OutputRecord.model_validate(payload) == record


def test_table_lists_violations():
    record = OutputRecord(command="lp")
    record.fail("LP status iteration-limit")
    text = render(record, "table")
    assert "FAILED" in text
    assert "LP status iteration-limit" in text


def test_write_output_bad_path(tmp_path):
    target = tmp_path / "missing" / "out.txt"
    with pytest.raises(OSError, match="missing"):
        write_output("x", target)


def test_main_exit_codes(tmp_path):
    out = tmp_path / "bounds.json"
    assert main(["--format", "json", "--out", str(out), "bounds", "uniform", "--m", "2"]) == EXIT_OK
    payload = orjson.loads(out.read_bytes())
    assert payload["ok"] is True
    assert payload["results"]["upper_bound"] == pytest.approx(5 / 9)

    assert main(["--out", str(tmp_path / "bad.txt"), "bounds", "exp", "--lambdas", "2,,1"]) == EXIT_USAGE
    assert "usage" in (tmp_path / "bad.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize(
    "argv",
    [
        ["gamma", "--m", "0"],
        ["lp", "uniform", "--m", "2", "--n", "30"],
        ["verify-dual", "uniform", "--m", "4", "--grid", "51"],
    ],
)
def test_main_domain_preconditions_are_usage_errors(tmp_path, argv):
    out = tmp_path / "out.txt"
    assert main(["--out", str(out), *argv]) == EXIT_USAGE
    assert "usage" in out.read_text(encoding="utf-8")


def test_main_verify_dual(tmp_path):
    code = main(["--out", str(tmp_path / "dual.txt"), "verify-dual", "uniform", "--m", "1", "--grid", "1000"])
    assert code == EXIT_OK


def test_main_rejects_unknown_choice():
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "normal", "--m", "2"])
    assert exc.value.code == 2
