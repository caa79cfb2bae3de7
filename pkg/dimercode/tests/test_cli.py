"""Tests for CLI commands."""

import json
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest
from typer.testing import CliRunner

from dimercode.cli.main import app, run
from dimercode.config import SETTINGS_ENV
from dimercode.tools.statistics import HISTOGRAM_COLUMNS

runner = CliRunner()
GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Run every command without user settings."""
    monkeypatch.delenv(SETTINGS_ENV, raising=False)
    monkeypatch.chdir(tmp_path)


def test_version_command():
    """Test version command."""
    result = runner.invoke(app, ["version"])
    assert result.exit_code == 0
    assert "0.1.0" in result.stdout
    assert "pcg64-bits-v1" in result.stdout


def test_enumerate_matches_golden():
    """Test enumerate output against the stored dimer list."""
    result = runner.invoke(app, ["enumerate", "--config", "rbbrbrrrbr"])
    assert result.exit_code == 0
    assert result.stdout == (GOLDEN / "enumerate_rbbrbrrrbr.json").read_text()


def test_enumerate_to_file(tmp_path):
    """Test enumerate writes JSON to --out."""
    out = tmp_path / "dimers.json"
    result = runner.invoke(app, ["enumerate", "--config", "rbr", "--out", str(out)])

    assert result.exit_code == 0
    assert json.loads(out.read_text()) == [{"start": 1, "end": 3, "colour": "r"}]


def test_enumerate_invalid_colouring():
    """Test an illegal character is an input error."""
    result = runner.invoke(app, ["enumerate", "--config", "rbxr"])
    assert result.exit_code == 1
    assert "position 3" in result.output


def test_count_command():
    """Test count with both methods and the empty configuration."""
    result = runner.invoke(app, ["count", "--config", "rbbrbrrrbr"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "28"

    result = runner.invoke(app, ["count", "--config", "r" * 10, "--method", "brute"])
    assert result.stdout.strip() == "88"

    result = runner.invoke(app, ["count", "--config", "r" * 10, "--include-empty"])
    assert result.stdout.strip() == "89"


def test_count_overflow_needs_wide():
    """Test counts beyond 64 bits."""
    result = runner.invoke(app, ["count", "--config", "r" * 93])
    assert result.exit_code == 1

    result = runner.invoke(app, ["count", "--config", "r" * 93, "--wide"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "19740274219868223166"


def test_zeta_command():
    """Test exact and float evaluation of Z."""
    result = runner.invoke(app, ["zeta", "--config", "rbr", "-u", "2", "-v", "3", "-w", "1/2"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "5/2"

    result = runner.invoke(app, ["zeta", "--config", "rbr", "-u", "2", "-v", "3", "-w", "0.5"])
    assert result.exit_code == 0
    assert result.stdout.strip() == "2.5"

    result = runner.invoke(
        app, ["zeta", "--config", "rrr", "--method", "enumeration", "--mode", "exact"]
    )
    assert result.stdout.strip() == "3"


def test_zeta_rejects_bad_weight():
    """Test non-positive dimer weights."""
    result = runner.invoke(app, ["zeta", "--config", "rbr", "-u", "0"])
    assert result.exit_code == 1

    result = runner.invoke(app, ["zeta", "--config", "rbr", "-w", "abc"])
    assert result.exit_code == 1


def test_avg_command(tmp_path):
    """Test the averaged generating function table."""
    out = tmp_path / "avg.json"
    args = ["avg", "--n", "3", "-u", "1", "-v", "1", "-w", "2", "--format", "json"]
    result = runner.invoke(app, args + ["--out", str(out)])
    assert result.exit_code == 0

    values = {row["quantity"]: row["value"] for row in json.loads(out.read_text())}
    assert values["formula"] == "5/2"
    assert values["bruteforce"] == "5/2"
    assert values["series_direct"] == values["series_closed_candidate"]
    assert {"lower", "upper", "A", "C1", "C"} <= set(values)


def test_avg_without_bounds(tmp_path):
    """Test w = 0 skips the bounds."""
    out = tmp_path / "avg.csv"
    result = runner.invoke(app, ["avg", "--n", "2", "-w", "0", "--out", str(out)])
    assert result.exit_code == 0

    lines = out.read_text().splitlines()
    assert lines[0] == "quantity,value"
    assert "formula,3/2" in lines
    assert not any(line.startswith("upper,") for line in lines)


def test_verify_command(tmp_path):
    """Test a small verification run writes a passing JSON-lines report."""
    out = tmp_path / "verify.jsonl"
    result = runner.invoke(
        app,
        [
            "verify",
            "--max-n",
            "4",
            "--identity-max-n",
            "8",
            "--binomial-max-n",
            "5",
            "--series-max-n",
            "6",
            "--threads",
            "1",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0

    records = [json.loads(line) for line in out.read_text().splitlines()]
    assert records
    assert set(records[0]) == {"check", "params", "lhs", "rhs", "abs_err", "rel_err", "pass"}
    assert all(r["pass"] for r in records if r["check"] != "series_closed_paper")


def test_audit_bounds_command(tmp_path):
    """Test the audit table header and row count."""
    out = tmp_path / "audit.csv"
    result = runner.invoke(
        app,
        ["audit-bounds", "--n-max", "5", "--grid-size", "3", "--threads", "1", "--out", str(out)],
    )
    assert result.exit_code == 0

    lines = out.read_text().splitlines()
    assert lines[0] == "N,u,v,w,lower,avg,upper,lower_ok,upper_ok"
    assert len(lines) == 1 + 5 * 3
    assert all(line.endswith(",true") for line in lines[1:])


def test_census_command(tmp_path):
    """Test census table and chart."""
    out = tmp_path / "census.csv"
    chart = tmp_path / "census.svg"
    curve = tmp_path / "curve.csv"
    args = ["census", "--n", "10", "--threads", "1", "--out", str(out), "--svg", str(chart)]
    result = runner.invoke(app, args + ["--curve", str(curve)])
    assert result.exit_code == 0

    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(HISTOGRAM_COLUMNS)
    assert sum(int(line.split(",")[1]) for line in lines[1:]) == 1024
    assert curve.read_text().splitlines()[0] == "x,kde,overlay_pdf"

    root = ET.fromstring(chart.read_text())
    assert len(list(root.iter("{http://www.w3.org/2000/svg}polyline"))) == 2

    first = out.read_text()
    rerun = runner.invoke(app, args)
    assert rerun.exit_code == 0
    assert out.read_text() == first


def test_census_rejects_large_n():
    """Test the census budget."""
    result = runner.invoke(app, ["census", "--n", "15", "--method", "bruteforce"])
    assert result.exit_code == 1


def test_sample_command_is_reproducible(tmp_path):
    """Test equal seeds give identical tables, counts and traces."""
    def invoke(tag):
        paths = {name: tmp_path / f"{tag}.{name}" for name in ("csv", "counts", "trace")}
        result = runner.invoke(
            app,
            [
                "sample",
                "--n",
                "10",
                "--m",
                "200",
                "--seed",
                "3",
                "--threads",
                "1",
                "--out",
                str(paths["csv"]),
                "--counts",
                str(paths["counts"]),
                "--trace",
                str(paths["trace"]),
            ],
        )
        assert result.exit_code == 0
        return {name: path.read_text() for name, path in paths.items()}

    first, second = invoke("a"), invoke("b")
    assert first == second

    counts = first["counts"].splitlines()
    assert counts[0] == "run_index,count"
    assert len(counts) == 201
    traces = first["trace"].splitlines()
    assert len(traces) == 200
    assert [line.split("\t")[2] for line in traces] == [c.split(",")[1] for c in counts[1:]]


def test_run_exit_codes():
    """Test exit codes of the programmatic entry point."""
    assert run(["version"]) == 0
    assert run(["count"]) == 1
    assert run(["enumerate", "--config", "rx"]) == 1
    assert run(["--log-level", "nope", "version"]) == 1
    assert run(["no-such-command"]) == 1


def test_count_and_zeta_match_golden():
    """Test count and exact Z output byte for byte."""
    result = runner.invoke(app, ["count", "--config", "rbbrbrrrbr"])
    assert result.exit_code == 0
    assert result.stdout == (GOLDEN / "count_rbbrbrrrbr.txt").read_text()

    args = ["zeta", "--config", "rbbrbrrrbr", "-u", "1/2", "-v", "3", "-w", "2/3"]
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    assert result.stdout == (GOLDEN / "zeta_rbbrbrrrbr.txt").read_text()


def test_avg_matches_golden(tmp_path):
    """Test the averaged table, bounds and constants byte for byte."""
    out = tmp_path / "avg.csv"
    args = ["avg", "--n", "6", "-u", "1/2", "-v", "1/4", "-w", "1", "--out", str(out)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    assert out.read_text() == (GOLDEN / "avg_n6.csv").read_text()


def test_verify_matches_golden(tmp_path):
    """Test a reduced verification report byte for byte."""
    out = tmp_path / "verify.jsonl"
    result = runner.invoke(
        app,
        [
            "verify",
            "--max-n",
            "1",
            "--identity-max-n",
            "3",
            "--binomial-max-n",
            "1",
            "--series-max-n",
            "2",
            "--threads",
            "1",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    assert out.read_text() == (GOLDEN / "verify_small.jsonl").read_text()


def test_audit_bounds_matches_golden(tmp_path):
    """Test a two-value audit grid byte for byte."""
    settings = tmp_path / "audit.yaml"
    settings.write_text('audit_values: ["1/3", "3"]\n')
    out = tmp_path / "audit.csv"
    result = runner.invoke(
        app,
        [
            "--settings",
            str(settings),
            "audit-bounds",
            "--n-max",
            "3",
            "--grid-size",
            "8",
            "--threads",
            "1",
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    assert out.read_text() == (GOLDEN / "audit_small.csv").read_text()


def test_census_matches_golden(tmp_path):
    """Test the N=10 census table and chart byte for byte."""
    out = tmp_path / "census.csv"
    chart = tmp_path / "census.svg"
    args = ["census", "--n", "10", "--threads", "1", "--out", str(out), "--svg", str(chart)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    assert out.read_text() == (GOLDEN / "census_n10.csv").read_text()
    assert chart.read_text() == (GOLDEN / "census_n10.svg").read_text()


def test_sample_matches_golden(tmp_path):
    """Test a seeded sample table, counts and trace byte for byte."""
    out, counts, trace = tmp_path / "s.csv", tmp_path / "s.counts", tmp_path / "s.trace"
    result = runner.invoke(
        app,
        [
            "sample",
            "--n",
            "8",
            "--m",
            "30",
            "--seed",
            "11",
            "--threads",
            "1",
            "--out",
            str(out),
            "--counts",
            str(counts),
            "--trace",
            str(trace),
        ],
    )
    assert result.exit_code == 0
    assert out.read_text() == (GOLDEN / "sample_n8_m30_seed11.csv").read_text()
    assert counts.read_text() == (GOLDEN / "sample_n8_m30_seed11_counts.csv").read_text()
    assert trace.read_text() == (GOLDEN / "sample_n8_m30_seed11.trace").read_text()


@pytest.mark.parametrize(
    "args, flag",
    [
        (["census", "--n", "0"], "--n"),
        (["census", "--n", "10", "--threads", "0"], "--threads"),
        (["census", "--n", "10", "--bandwidth", "0"], "--bandwidth"),
        (["census", "--n", "10", "--bins", "0"], "--bins"),
        (["sample", "--n", "8", "--m", "0"], "--m"),
        (["sample", "--n", "0", "--m", "5"], "--n"),
        (["sample", "--n", "8", "--m", "5", "--seed", "-1"], "--seed"),
        (["audit-bounds", "--n-max", "0", "--grid-size", "1"], "--n-max"),
        (["audit-bounds", "--n-max", "2", "--grid-size", "0"], "--grid-size"),
        (["verify", "--max-n", "0"], "--max-n"),
        (["verify", "--max-n", "1", "--series-max-n", "0"], "--series-max-n"),
        (["verify", "--max-n", "1", "--threads", "0"], "--threads"),
    ],
)
def test_zero_flags_are_rejected(args, flag):
    """Test an explicit zero or negative flag is an input error naming the flag."""
    result = runner.invoke(app, args)
    assert result.exit_code == 1
    assert f"{flag}:" in result.output


def test_settings_file_is_announced(tmp_path):
    """Test a loaded settings file is named on the console."""
    settings = tmp_path / "dimercode.yaml"
    settings.write_text("census_n: 4\n")
    result = runner.invoke(app, ["--settings", str(settings), "count", "--config", "rbr"])
    assert result.exit_code == 0
    assert "Settings from" in result.output
    assert result.stdout.endswith("1\n")


def test_default_settings_are_not_announced():
    """Test nothing is announced without a settings file."""
    result = runner.invoke(app, ["count", "--config", "rbr"])
    assert "Settings from" not in result.output
