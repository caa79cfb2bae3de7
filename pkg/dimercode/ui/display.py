"""Rich terminal output for status, summaries and diagnostics.

Everything here prints to stderr so that stdout carries only data.
"""

from typing import Any, Mapping, Optional, Sequence

from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from dimercode.models.report import AuditRow, CheckRecord, format_decimal

console = Console(stderr=True)


def display_summary(title: str, values: Mapping[str, Any]):
    """Display a two-column key/value table."""
    table = Table(title=title, show_header=False, box=None, padding=(0, 2))
    for key, value in values.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        table.add_row(f"{key}:", f"[cyan]{value}[/cyan]")
    console.print(table)


def display_discrepancies(records: Sequence[CheckRecord], max_display: int = 20):
    """Display unasserted checks that did not match (published, not failed)."""
    if not records:
        console.print("[green]No closed-form discrepancies[/green]")
        return

    table = Table(title=f"Closed-form discrepancies ({len(records)})")
    table.add_column("check")
    table.add_column("params")
    table.add_column("closed form", justify="right")
    table.add_column("direct sum", justify="right")
    table.add_column("rel err", justify="right")
    for record in records[:max_display]:
        params = " ".join(f"{key}={value}" for key, value in record.params.items())
        table.add_row(record.check, params, record.lhs, record.rhs, f"{record.rel_err:.3g}")
    console.print(table)
    if len(records) > max_display:
        console.print(f"[dim]... and {len(records) - max_display} more in the report[/dim]")


def display_failures(records: Sequence[CheckRecord], max_display: int = 10):
    """Display asserted checks that failed."""
    for record in records[:max_display]:
        console.print(
            f"[red]✗[/red] {record.check} {record.params}: "
            f"lhs={record.lhs} rhs={record.rhs} rel_err={record.rel_err:.3g}"
        )
    if len(records) > max_display:
        console.print(f"[dim]... and {len(records) - max_display} more failures[/dim]")


def display_violations(
    rows: Sequence[AuditRow],
    series_bounds: Optional[Sequence[Any]] = None,
    max_display: int = 10,
):
    """Display audit rows where the average falls below the lower estimate."""
    if not rows:
        console.print("[green]Lower estimate holds at every audited point[/green]")
        return

    table = Table(title=f"Lower-estimate violations ({len(rows)})")
    for column in ("N", "u", "v", "w", "lower", "avg"):
        table.add_column(column, justify="right")
    if series_bounds is not None:
        table.add_column("lower (series)", justify="right")
    for index, row in enumerate(rows[:max_display]):
        cells = [
            str(row.n),
            row.u,
            row.v,
            row.w,
            format_decimal(row.lower, 8),
            format_decimal(row.avg, 8),
        ]
        if series_bounds is not None:
            cells.append(format_decimal(series_bounds[index], 8))
        table.add_row(*cells)
    console.print(table)
    if len(rows) > max_display:
        console.print(f"[dim]... and {len(rows) - max_display} more in the CSV[/dim]")


def display_error(message: str, details: str = None):
    """Display an error message."""
    panel_content = f"[bold red]{message}[/bold red]"
    if details:
        panel_content += f"\n\n[dim]{details}[/dim]"

    console.print(Panel(panel_content, border_style="red", title="Error"))


def display_success(message: str):
    """Display a success message."""
    console.print(f"[green]✓[/green] {message}")


def display_warning(message: str):
    """Display a warning message."""
    console.print(f"[yellow]⚠[/yellow] {message}")


def display_info(message: str):
    """Display an info message."""
    console.print(f"[cyan]ℹ[/cyan] {message}")


def create_spinner(message: str):
    """Create a progress spinner for long operations."""
    progress = Progress(
        SpinnerColumn(),
        TextColumn("[bold blue]{task.description}"),
        console=console,
        transient=True,
    )
    progress.add_task(message, total=None)
    return progress
