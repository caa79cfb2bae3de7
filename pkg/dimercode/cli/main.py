"""Main CLI entry point for DimerCode."""

import logging
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

import typer

try:  # newer typer vendors click and raises its own exception classes
    from typer import _click as click
except ImportError:
    import click
from pydantic import ValidationError
from rich.logging import RichHandler

from dimercode import __version__
from dimercode.config import DEFAULT_SOURCE, Settings, resolve_settings
from dimercode.errors import ColouringParseError, DimerCodeError, ParameterRangeError
from dimercode.models import (
    ArithmeticMode,
    CountMethod,
    GFParams,
    OutputFormat,
    Sample,
    SampleSpec,
)
from dimercode.models.dimer import to_fraction
from dimercode.models.report import AUDIT_COLUMNS, format_decimal, format_scalar
from dimercode.tools import averaging, dimers, reports, sampler, statistics, verification
from dimercode.ui import display, svg

logger = logging.getLogger("dimercode")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CHECK_FAILED = 2

app = typer.Typer(
    name="dimercode",
    help="Coloured hard-dimer enumeration, generating functions and sampling",
    add_completion=False,
)


def configure_logging(level: str):
    """Route library logging through rich on stderr."""
    if not isinstance(logging.getLevelName(level), int):
        raise ParameterRangeError(f"--log-level: unknown level {level!r}")
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=display.console, show_path=False)],
        force=True,
    )


@contextmanager
def reported_errors() -> Iterator[None]:
    """Turn library and validation errors into an error panel and exit code 1."""
    try:
        yield
    except DimerCodeError as e:
        display.display_error(type(e).__name__, str(e))
        raise typer.Exit(EXIT_INVALID)
    except ValidationError as e:
        display.display_error("Invalid input", str(e))
        raise typer.Exit(EXIT_INVALID)


def parse_config(text: str):
    try:
        return dimers.parse_colouring(text)
    except ColouringParseError as e:
        raise ColouringParseError(f"--config: {e}", position=e.position) from e


def parse_weight(flag: str, text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParameterRangeError(f"{flag}: {text!r} is not a decimal or p/q rational")


def parse_params(u: str, v: str, w: str) -> GFParams:
    """Weights from their flag texts; u and v must be positive, w non-negative."""
    values = {flag: parse_weight(flag, text) for flag, text in (("-u", u), ("-v", v), ("-w", w))}
    for flag in ("-u", "-v"):
        if values[flag] <= 0:
            raise ParameterRangeError(f"{flag}: weight must be > 0, got {values[flag]}")
    if values["-w"] < 0:
        raise ParameterRangeError(f"-w: weight must be >= 0, got {values['-w']}")
    return GFParams(u=values["-u"], v=values["-v"], w=values["-w"])


def resolve_mode(mode: Optional[ArithmeticMode], *texts: str) -> ArithmeticMode:
    """
    Explicit --mode wins; otherwise integers and p/q rationals select exact
    arithmetic and any decimal literal selects float.
    """
    if mode is not None:
        return mode
    if any(marker in text.lower() for text in texts for marker in (".", "e")):
        return ArithmeticMode.FLOAT
    return ArithmeticMode.EXACT


def parse_method(text: str) -> CountMethod:
    try:
        return CountMethod(text.lower())
    except ValueError:
        raise ParameterRangeError(f"--method: expected dp or bruteforce (brute), got {text!r}")


def given(value, default):
    """The flag value, or the settings default when the flag is absent."""
    return value if value is not None else default


def require_range(flag: str, value, low, high=None):
    """Return value, or raise naming the flag unless low <= value (<= high)."""
    if value < low or (high is not None and value > high):
        bound = f">= {low}" if high is None else f"{low} <= value <= {high}"
        raise ParameterRangeError(f"{flag}: need {bound}, got {value}")
    return value


def resolve_threads(threads: Optional[int], settings: Settings) -> Optional[int]:
    threads = given(threads, settings.threads)
    return None if threads is None else require_range("--threads", threads, 1)


def resolve_bandwidth(bandwidth: Optional[float], settings: Settings) -> float:
    bandwidth = given(bandwidth, settings.bandwidth)
    if not bandwidth > 0:
        raise ParameterRangeError(f"--bandwidth: need > 0, got {bandwidth}")
    return bandwidth


def emit(text: str, out: Optional[Path]):
    """Write a document and fail with exit code 1 if it cannot be written."""
    result = reports.write_output(text, out)
    if not result["success"]:
        display.display_error(f"Could not write {result['path']}", result["error"])
        raise typer.Exit(EXIT_INVALID)
    if result["path"]:
        display.display_success(f"Wrote {result['path']}")


@app.callback()
def main_callback(
    ctx: typer.Context,
    settings: Optional[Path] = typer.Option(
        None,
        "--settings",
        help="YAML settings file (else $DIMERCODE_SETTINGS, else ./dimercode.yaml)",
    ),
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Logging level (DEBUG, INFO, WARNING, ERROR)"
    ),
):
    """
    Coloured hard-dimers on red/blue site sequences.
    """
    with reported_errors():
        resolved, source = resolve_settings(settings)
        configure_logging((log_level or resolved.log_level).upper())
    if source != DEFAULT_SOURCE:
        display.display_info(f"Settings from {source}")
    ctx.obj = resolved


@app.command("enumerate")
def enumerate_command(
    config: str = typer.Option(..., "--config", help="Colouring as an r/b string"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write JSON here instead of stdout"),
):
    """
    List every dimer of a colouring as JSON, sorted by (start, end).

    Example:
        dimercode enumerate --config rbbrbrrrbr
    """
    with reported_errors():
        colouring = parse_config(config)
        payload = [d.model_dump(mode="json") for d in dimers.enumerate_dimers(colouring)]
    emit(reports.render_json(payload), out)


@app.command()
def count(
    config: str = typer.Option(..., "--config", help="Colouring as an r/b string"),
    method: str = typer.Option("dp", "--method", help="dp or brute"),
    include_empty: bool = typer.Option(
        False, "--include-empty/--exclude-empty", help="Count the empty configuration"
    ),
    wide: bool = typer.Option(False, "--wide", help="Allow counts beyond 2^64 - 1"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the count here"),
):
    """Count the hard-dimers of a colouring."""
    with reported_errors():
        colouring = parse_config(config)
        if parse_method(method) is CountMethod.DP:
            total = dimers.count_hard_dimers_dp(colouring, include_empty, wide)
        else:
            total = dimers.count_hard_dimers_bruteforce(colouring, include_empty)
    emit(f"{total}\n", out)


@app.command()
def zeta(
    config: str = typer.Option(..., "--config", help="Colouring as an r/b string"),
    u: str = typer.Option("1", "-u", help="Blue dimer weight (decimal or p/q)"),
    v: str = typer.Option("1", "-v", help="Red dimer weight (decimal or p/q)"),
    w: str = typer.Option("1", "-w", help="Crossing weight (decimal or p/q)"),
    mode: Optional[ArithmeticMode] = typer.Option(
        None, "--mode", help="exact or float (default: exact for integer or p/q weights)"
    ),
    method: dimers.ZetaMethod = typer.Option(
        dimers.ZetaMethod.LINEAR, "--method", help="linear or enumeration"
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the value here"),
):
    """Evaluate the generating function Z(u, v, w) of a colouring."""
    with reported_errors():
        colouring = parse_config(config)
        params = parse_params(u, v, w)
        value = dimers.zeta(colouring, params, method, resolve_mode(mode, u, v, w))
    emit(format_scalar(value) + "\n", out)


@app.command()
def avg(
    n: int = typer.Option(..., "--n", help="Number of sites"),
    u: str = typer.Option("1", "-u", help="Blue dimer weight (decimal or p/q)"),
    v: str = typer.Option("1", "-v", help="Red dimer weight (decimal or p/q)"),
    w: str = typer.Option("1", "-w", help="Crossing weight (decimal or p/q)"),
    mode: Optional[ArithmeticMode] = typer.Option(
        None, "--mode", help="exact or float (default: exact for integer or p/q weights)"
    ),
    bruteforce: Optional[bool] = typer.Option(
        None, "--bruteforce/--no-bruteforce", help="Include the 2^N average (default: N <= 12)"
    ),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the table here"),
):
    """
    Averaged generating function with series diagnostics and bounds.

    Example:
        dimercode avg --n 10 -u 1/2 -v 1/2 -w 1
    """
    with reported_errors():
        if n < 1:
            raise ParameterRangeError(f"--n: need N >= 1, got {n}")
        params = parse_params(u, v, w)
        arithmetic = resolve_mode(mode, u, v, w)
        rows = [("formula", averaging.avg_zeta_formula(n, params, arithmetic))]
        if bruteforce is None:
            bruteforce = n <= 12
        if bruteforce:
            rows.append(("bruteforce", averaging.avg_zeta_bruteforce(n, params, arithmetic)))
        rows += [
            ("series_direct", averaging.series_direct(n, params, arithmetic)),
            ("series_closed_paper", averaging.series_closed_paper(n, params, arithmetic)),
            ("series_closed_candidate", averaging.series_closed_candidate(n, params, arithmetic)),
        ]
        records = [{"quantity": name, "value": format_scalar(value)} for name, value in rows]
        if params.is_interior:
            estimate = averaging.bounds(n, params)
            records += [
                {"quantity": "lower", "value": format_decimal(estimate.lower)},
                {"quantity": "upper", "value": format_decimal(estimate.upper)},
                {"quantity": "A", "value": format_decimal(estimate.constants.a)},
                {"quantity": "C1", "value": format_decimal(estimate.constants.c1)},
                {"quantity": "C", "value": format_decimal(estimate.constants.c)},
            ]
        else:
            display.display_warning("bounds need w > 0; skipped")
    emit(reports.render_table(records, ["quantity", "value"], fmt), out)


@app.command()
def verify(
    ctx: typer.Context,
    max_n: Optional[int] = typer.Option(
        None, "--max-n", help="Largest N of the brute-force oracle (default 12)"
    ),
    identity_max_n: Optional[int] = typer.Option(None, "--identity-max-n"),
    binomial_max_n: Optional[int] = typer.Option(None, "--binomial-max-n"),
    series_max_n: Optional[int] = typer.Option(None, "--series-max-n"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker processes"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the JSON-lines report here"),
):
    """
    Run the identity and oracle checks as a JSON-lines report.

    Exit code 2 if an asserted check fails. Closed-form discrepancies are
    reported but do not fail the run.
    """
    settings: Settings = ctx.obj
    with reported_errors():
        max_n = require_range(
            "--max-n", given(max_n, settings.verify_max_n), 1, averaging.BRUTEFORCE_MAX_N
        )
        identity_max_n = require_range(
            "--identity-max-n", given(identity_max_n, settings.identity_max_n), 2
        )
        binomial_max_n = require_range(
            "--binomial-max-n", given(binomial_max_n, settings.binomial_max_n), 0
        )
        series_max_n = require_range(
            "--series-max-n", given(series_max_n, settings.series_max_n), 1
        )
        threads = resolve_threads(threads, settings)
        with display.create_spinner("Running checks"):
            records = list(
                verification.run_checks(
                    max_n=max_n,
                    identity_max_n=identity_max_n,
                    binomial_max_n=binomial_max_n,
                    series_max_n=series_max_n,
                    threads=threads,
                )
            )
    emit(reports.render_json_lines(records), out)

    summary = verification.summarize_checks(records)
    display.display_summary("Verification", summary)
    display.display_discrepancies([r for r in records if not r.passed and not r.asserted])
    failures = [r for r in records if not r.passed and r.asserted]
    if failures:
        display.display_failures(failures)
        raise typer.Exit(EXIT_CHECK_FAILED)
    display.display_success(f"{summary['passed']} checks passed")


@app.command("audit-bounds")
def audit_bounds(
    ctx: typer.Context,
    n_max: Optional[int] = typer.Option(None, "--n-max", help="Largest N (default 500)"),
    grid_size: Optional[int] = typer.Option(
        None, "--grid-size", help="Grid points sampled from the weight cube (default 60)"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed of the grid sample"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker processes"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the audit table here"),
):
    """
    Compare the averaged generating function with its lower and upper estimates.

    Exit code 2 if the upper estimate fails anywhere; lower-estimate
    violations are listed only.
    """
    settings: Settings = ctx.obj
    with reported_errors():
        n_max = require_range("--n-max", given(n_max, settings.audit_n_max), 1)
        grid = verification.default_grid(
            settings.audit_fractions(),
            size=require_range("--grid-size", given(grid_size, settings.grid_size), 1),
            seed=require_range("--seed", given(seed, settings.grid_seed), 0),
        )
        threads = resolve_threads(threads, settings)
        with display.create_spinner(f"Auditing {len(grid)} grid points"):
            rows = verification.audit_bounds(n_max, grid, threads)
    emit(reports.render_table([row.as_record() for row in rows], AUDIT_COLUMNS, fmt), out)

    display.display_summary("Bounds audit", verification.summarize_audit(rows))
    violations = [row for row in rows if not row.lower_ok]
    series_bounds = [
        averaging.lower_bound_series(row.n, GFParams(u=row.u, v=row.v, w=row.w))
        for row in violations[:10]
    ]
    display.display_violations(violations, series_bounds)
    if any(not row.upper_ok for row in rows):
        display.display_error("Upper estimate violated", "see upper_ok in the audit table")
        raise typer.Exit(EXIT_CHECK_FAILED)


def _write_figure(
    figure,
    fmt: OutputFormat,
    out: Optional[Path],
    svg_path: Optional[Path],
    curve_path: Optional[Path],
    title: str,
    overlay_label: str,
):
    rows = statistics.histogram_rows(figure)
    emit(reports.render_table(rows, statistics.HISTOGRAM_COLUMNS, fmt), out)
    if curve_path is not None:
        curve_rows = statistics.curve_rows(figure)
        emit(reports.render_table(curve_rows, statistics.CURVE_COLUMNS, fmt), curve_path)
    if svg_path is not None:
        curves = [
            (f"smoothed (h={figure.smoothed.bandwidth:g})", figure.smoothed),
            (overlay_label, figure.overlay),
        ]
        emit(svg.render_svg(figure.histogram, curves, title=title), svg_path)
    if figure.histogram.clamped:
        display.display_warning(f"{figure.histogram.clamped} values clamped into the end bins")


@app.command()
def census(
    ctx: typer.Context,
    n: Optional[int] = typer.Option(None, "--n", help="Number of sites (default 10)"),
    method: str = typer.Option("dp", "--method", help="dp or bruteforce"),
    bins: Optional[int] = typer.Option(
        None, "--bins", help="Equal-width bins (default: unit bins of the raw counts)"
    ),
    bandwidth: Optional[float] = typer.Option(None, "--bandwidth", help="KDE bandwidth (0.1)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker processes"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the histogram table here"),
    svg_path: Optional[Path] = typer.Option(None, "--svg", help="Write an SVG chart here"),
    curve_path: Optional[Path] = typer.Option(
        None, "--curve", help="Write the full smoothed/overlay curves here"
    ),
):
    """
    Histogram of hard-dimer counts over all 2^N colourings, standardized.

    Example:
        dimercode census --n 10 --svg census10.svg
    """
    settings: Settings = ctx.obj
    with reported_errors():
        counting = parse_method(method)
        n = require_range(
            "--n", given(n, settings.census_n), 2, statistics.CENSUS_LIMITS[counting]
        )
        if bins is not None:
            require_range("--bins", bins, 1)
        bandwidth = resolve_bandwidth(bandwidth, settings)
        values = statistics.census(n, counting, resolve_threads(threads, settings))
        figure = statistics.figure_data(values, bandwidth, bins)
    _write_figure(figure, fmt, out, svg_path, curve_path, f"Census N={n}", "standard normal")
    display.display_summary(f"Census N={n}", figure.raw_summary)


@app.command("sample")
def sample_command(
    ctx: typer.Context,
    n: Optional[int] = typer.Option(None, "--n", help="Sites per run (default 50)"),
    m: Optional[int] = typer.Option(None, "--m", help="Number of runs (default 100000)"),
    seed: Optional[int] = typer.Option(None, "--seed", help="64-bit seed"),
    bins: Optional[int] = typer.Option(
        None, "--bins", help="Equal-width bins (default: unit bins of the raw counts)"
    ),
    bandwidth: Optional[float] = typer.Option(None, "--bandwidth", help="KDE bandwidth (0.1)"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker processes"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", help="csv or json"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the histogram table here"),
    svg_path: Optional[Path] = typer.Option(None, "--svg", help="Write an SVG chart here"),
    curve_path: Optional[Path] = typer.Option(
        None, "--curve", help="Write the full smoothed/overlay curves here"
    ),
    counts_path: Optional[Path] = typer.Option(
        None, "--counts", help="Write per-run counts (run_index,count) here"
    ),
    trace: Optional[Path] = typer.Option(
        None, "--trace", help="Write one trace line per run here"
    ),
):
    """
    Histogram of dimer counts from the randomized hard-dimer generator.

    Example:
        dimercode sample --n 50 --m 100000 --seed 7 --svg sample.svg
    """
    settings: Settings = ctx.obj
    with reported_errors():
        spec = SampleSpec(
            n=require_range("--n", given(n, settings.sample_n), 2),
            m=require_range("--m", given(m, settings.sample_m), 1),
            seed=require_range("--seed", given(seed, settings.seed), 0, 2**64 - 1),
        )
        if bins is not None:
            require_range("--bins", bins, 1)
        bandwidth = resolve_bandwidth(bandwidth, settings)
        counts = sampler.sample(spec, resolve_threads(threads, settings))
    if counts_path is not None:
        rows = [{"run_index": i, "count": int(c)} for i, c in enumerate(counts)]
        emit(reports.render_csv(rows, ["run_index", "count"]), counts_path)
    if trace is not None:
        lines = "".join(sampler.trace_line(run) + "\n" for run in sampler.iter_runs(spec))
        emit(lines, trace)

    with reported_errors():
        figure = statistics.figure_data(
            Sample(values=counts), bandwidth, bins, matched_overlay=True
        )
    _write_figure(
        figure,
        fmt,
        out,
        svg_path,
        curve_path,
        f"Sample N={spec.n}, m={spec.m}, seed={spec.seed}",
        "matched normal",
    )
    display.display_summary(f"Sample ({sampler.SAMPLER_VERSION})", figure.raw_summary)


@app.command()
def version():
    """Show version information."""
    typer.echo(f"DimerCode version {__version__} (sampler {sampler.SAMPLER_VERSION})")


def run(argv: Optional[list[str]] = None) -> int:
    """
    Run the CLI and return its exit code.

    0 on success, 1 on invalid input (including usage errors), 2 when an
    asserted verification check fails.
    """
    try:
        result = app(args=argv, prog_name="dimercode", standalone_mode=False)
    except click.exceptions.UsageError as e:
        display.display_error("Invalid command line", e.format_message())
        return EXIT_INVALID
    except click.exceptions.Abort:
        display.display_error("Aborted")
        return EXIT_INVALID
    return result if isinstance(result, int) else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
