"""
Tests for the command-line driver.
"""

import csv
import json
import math
from unittest.mock import patch

import pytest

from koenigs import __version__
from koenigs.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_NUMERIC, EXIT_OK, main
from koenigs.config import koenigs_config
from koenigs.decorators import CheckResult, SuiteReport
from koenigs.exceptions import ConvergenceError, DomainError

HALF_PARABOLA = '{"variant": "HalfParabola", "params": {"alpha": 2, "m": 1}}'


def _rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_version(capsys):
    """Test --version prints the package version"""
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_speeds_csv(tmp_path):
    """Test the speeds command writes one row per grid point"""
    out = tmp_path / "speeds.csv"

    code = main(["speeds", "--family", "parabolic-auto", "--t-grid", "log:1:100:3", "--out", str(out)])

    assert code == EXIT_OK
    rows = _rows(out)
    assert rows[0] == ["family", "alpha", "mu", "t", "v_total", "v_ortho", "v_tang", "main_gap"]
    assert len(rows) == 4
    first = rows[1]
    assert first[:3] == ["parabolic-auto", "", ""]
    assert float(first[3]) == 1.0
    assert float(first[5]) == pytest.approx(0.25 * math.log(2.0))
    assert float(first[7]) == pytest.approx(float(first[6]))


def test_speeds_omega_columns(tmp_path):
    """Test the Omega family reports its parameters"""
    out = tmp_path / "omega.csv"

    code = main(
        ["speeds", "--family", "omega", "--alpha", "2", "--mu", "1", "--t-grid", "log:1:1e8:5", "--out", str(out)]
    )

    assert code == EXIT_OK
    rows = _rows(out)
    assert len(rows) == 6
    assert rows[1][:3] == ["omega", "2", "1"]
    assert all(math.isfinite(float(value)) for row in rows[1:] for value in row[3:])


def test_speeds_to_stdout(capsys):
    """Test --out - writes CSV to stdout"""
    assert main(["speeds", "--t-grid", "log:1:10:2"]) == EXIT_OK

    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("family,alpha,mu,t")
    assert len(lines) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["speeds", "--t-grid", "log:1:10:0"],
        ["speeds", "--t-grid", "lin:1:10:5"],
        ["speeds", "--family", "elliptic"],
        ["speeds", "--family", "hyperbolic", "--lambda", "-1"],
        ["verify", "nope"],
        ["verify", "hm"],
        ["verify", "metric", "--walks", "10"],
        ["hm"],
        ["hm", "--seed", "1", "--point", "-1+1j"],
        ["hm", "--seed", "1", "--point", "one"],
        ["slope", "--domain", "{not json", "--point", "1+2j"],
        ["slope", "--domain", HALF_PARABOLA, "--point", "1+2j", "--t-max", "10"],
    ],
)
def test_configuration_errors(argv):
    """Test bad arguments and preconditions exit with code 2"""
    assert main(argv) == EXIT_CONFIG


def test_numerical_failure_exit_code():
    """Test a numerical failure exits with code 3"""
    failure = ConvergenceError("Newton iteration did not converge", residual=1.0, iterations=100)

    with patch("koenigs.cli.speed_table", side_effect=failure):
        assert main(["speeds", "--t-grid", "log:1:10:2"]) == EXIT_NUMERIC


@pytest.mark.parametrize(
    "target,argv",
    [
        ("koenigs.cli.speed_table", ["speeds", "--t-grid", "log:1:10:2"]),
        ("koenigs.cli.slope_classify", ["slope", "--domain", HALF_PARABOLA, "--point", "1+2j"]),
        ("koenigs.cli.hm_wos", ["hm", "--seed", "1"]),
    ],
)
def test_domain_error_inside_numerics_exit_code(target, argv):
    """Test a DomainError raised mid-computation exits with code 3, not 2"""
    with patch(target, side_effect=DomainError("iterate left the half-strip")):
        assert main(argv) == EXIT_NUMERIC


def test_slope_verdict(tmp_path, capsys):
    """Test the slope command prints a verdict and writes the trace"""
    out = tmp_path / "trace.csv"

    code = main(["slope", "--domain", HALF_PARABOLA, "--point", "1,2", "--out", str(out)])

    assert code == EXIT_OK
    assert capsys.readouterr().out == "verdict: tangential, slope -pi/2\n"
    rows = _rows(out)
    assert rows[0] == ["t", "delta_plus", "delta_minus", "ratio"]
    assert len(rows) == 41


def test_slope_reads_domain_file(tmp_path, capsys):
    """Test --domain accepts a path to a JSON document"""
    domain = tmp_path / "strip.json"
    domain.write_text('{"variant": "VerticalStrip", "params": {"a": 0, "b": 3.141592653589793}}')

    code = main(["slope", "--domain", str(domain), "--point", "1.5707963267948966", "--out", str(tmp_path / "t.csv")])

    assert code == EXIT_OK
    assert "non-tangential" in capsys.readouterr().out


def test_verify_metric(tmp_path):
    """Test a passing suite writes a JSON report and exits 0"""
    out = tmp_path / "metric.json"

    code = main(["verify", "metric", "--out", str(out)])

    assert code == EXIT_OK
    document = json.loads(out.read_text(encoding="utf-8"))
    assert document["tool"] == "koenigs"
    assert document["version"] == __version__
    assert document["passed"] is True
    assert document["suites"][0]["suite"] == "metric"
    assert document["config"]["tolerances"]["tol_metric"] == 1e-12
    assert "INEQUALITY_TOL" in document["settings"]


def test_verify_failure_exit_code(tmp_path):
    """Test a failing check exits with code 1"""
    failing = [SuiteReport("metric", [CheckResult("forced", False, 1.0, 0.0)])]

    with patch("koenigs.cli.run_suite", return_value=failing):
        code = main(["verify", "metric", "--out", str(tmp_path / "r.json")])

    assert code == EXIT_FAILED


def test_verify_tolerance_flags(tmp_path):
    """Test --tol-* flags reach the suite options"""
    captured = {}

    def fake_run(name, options):
        captured["options"] = options
        return [SuiteReport(name, [CheckResult("ok", True)])]

    with patch("koenigs.cli.run_suite", side_effect=fake_run):
        code = main(["verify", "euclid", "--tol-inequality", "1e-6", "--out", str(tmp_path / "r.json")])

    assert code == EXIT_OK
    assert captured["options"].tol_inequality == 1e-6
    assert captured["options"].seed == 7


def test_hm_command(tmp_path):
    """Test the hm command writes an estimate"""
    out = tmp_path / "hm.json"

    code = main(["hm", "--seed", "7", "--walks", "2000", "--out", str(out)])

    assert code == EXIT_OK
    estimate = json.loads(out.read_text(encoding="utf-8"))["estimate"]
    assert estimate["valid"] is True
    assert 0.6 < estimate["value"] < 0.9


def test_slope_verdict_leaves_stdout_to_csv(capsys):
    """Test --out - keeps stdout pure CSV and sends the verdict to stderr"""
    code = main(["slope", "--domain", HALF_PARABOLA, "--point", "1+2j"])

    assert code == EXIT_OK
    captured = capsys.readouterr()
    rows = list(csv.reader(captured.out.splitlines()))
    assert rows[0] == ["t", "delta_plus", "delta_minus", "ratio"]
    assert len(rows) == 41
    assert "verdict: tangential, slope -pi/2" in captured.err


def test_verify_reports_active_settings(tmp_path):
    """Test the settings block echoes the configuration in force"""
    koenigs_config.NEWTON_TOL = 1e-10
    out = tmp_path / "metric.json"

    assert main(["verify", "metric", "--out", str(out)]) == EXIT_OK

    settings = json.loads(out.read_text(encoding="utf-8"))["settings"]
    assert settings["NEWTON_TOL"] == 1e-10
    assert settings["INEQUALITY_TOL"] == koenigs_config.INEQUALITY_TOL


@pytest.mark.parametrize(
    "argv",
    [
        ["speeds", "--family", "omega", "--t-grid", "log:1:1e8:20"],
        ["hm", "--seed", "7", "--walks", "2000"],
        ["verify", "metric"],
    ],
    ids=["speeds", "hm", "verify"],
)
def test_repeated_runs_are_byte_identical(tmp_path, small_chunks, argv):
    """Test two runs with the same arguments write the same bytes"""
    out = tmp_path / "result"

    assert main(argv + ["--out", str(out)]) == EXIT_OK
    first = out.read_bytes()
    assert main(argv + ["--out", str(out)]) == EXIT_OK

    assert out.read_bytes() == first
