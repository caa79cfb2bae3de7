"""
Oracle checks and the bounds audit.

Every check compares two exact (or float) evaluations of the same quantity and
produces a CheckRecord. Checks marked ``asserted=False`` are diagnostics: their
failures are published but do not fail a verification run.
"""

import itertools
import logging
from decimal import localcontext
from fractions import Fraction
from functools import partial
from typing import Any, Iterable, Iterator, Optional, Sequence

import numpy as np

from dimercode.errors import ParameterRangeError
from dimercode.models.dimer import GFParams
from dimercode.models.report import ArithmeticMode, AuditRow, CheckRecord, Scalar, format_scalar
from dimercode.tools.averaging import (
    DECIMAL_DIGITS,
    avg_zeta_bruteforce,
    avg_zeta_formula,
    avg_zeta_sequence,
    bound_constants,
    bounds,
    identity_2_12,
    identity_2_18,
    series_closed_candidate,
    series_closed_paper,
    series_direct,
    to_decimal,
)
from dimercode.tools.parallel import ordered_map

logger = logging.getLogger(__name__)

AUDIT_VALUES = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4))
ORACLE_VALUES = (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))
IDENTITY_T_VALUES = tuple(Fraction(t) for t in ("-2", "-1", "0", "1/2", "1", "3"))
FLOAT_TOLERANCE = 1e-10


def product_grid(values: Sequence[Any]) -> list[GFParams]:
    """Every (u, v, w) drawn from ``values``, in lexicographic order."""
    return [GFParams(u=u, v=v, w=w) for u, v, w in itertools.product(values, repeat=3)]


def default_grid(
    values: Sequence[Any] = AUDIT_VALUES, size: int = 60, seed: int = 0
) -> list[GFParams]:
    """
    A seeded subset of the cube of ``values``.

    Picks ``size`` distinct points without replacement and returns them in
    lexicographic order, so the same seed always yields the same grid.
    """
    full = product_grid(values)
    if size >= len(full):
        return full
    rng = np.random.default_rng(seed)
    picked = np.sort(rng.choice(len(full), size=size, replace=False))
    return [full[int(i)] for i in picked]


def audit_point(n_max: int, params: GFParams) -> list[AuditRow]:
    """Bounds and exact average for N = 1..n_max at one grid point."""
    averages = avg_zeta_sequence(n_max, params)
    constants = bound_constants(params)
    labels = params.as_strings()
    rows = []
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        for n, value in enumerate(averages, 1):
            estimate = bounds(n, params, constants)
            avg = to_decimal(value)
            rows.append(
                AuditRow(
                    n=n,
                    lower=estimate.lower,
                    avg=avg,
                    upper=estimate.upper,
                    lower_ok=avg >= estimate.lower,
                    upper_ok=avg <= estimate.upper,
                    **labels,
                )
            )
    return rows


def audit_bounds(
    n_max: int, grid: Sequence[GFParams], threads: Optional[int] = None
) -> list[AuditRow]:
    """
    Compare the averaged generating function with both estimates on a grid.

    Rows are ordered by N, then by grid position. The lower estimate is
    recorded, never asserted.

    Raises:
        ParameterRangeError: empty grid, n_max < 1 or a grid point with w = 0
    """
    if not grid:
        raise ParameterRangeError("audit grid is empty")
    if n_max < 1:
        raise ParameterRangeError(f"n_max must be >= 1, got {n_max}")
    for params in grid:
        if not params.is_interior:
            raise ParameterRangeError(f"audit needs w > 0, got {params.as_strings()}")

    per_point = ordered_map(partial(audit_point, n_max), grid, threads)
    rows = [point_rows[n] for n in range(n_max) for point_rows in per_point]
    logger.info(
        "audited %d points: %d lower violations, %d upper violations",
        len(rows),
        sum(not row.lower_ok for row in rows),
        sum(not row.upper_ok for row in rows),
    )
    return rows


def summarize_audit(rows: Iterable[AuditRow]) -> dict:
    """Row and violation counts of an audit."""
    rows = list(rows)
    return {
        "rows": len(rows),
        "lower_violations": sum(not row.lower_ok for row in rows),
        "upper_violations": sum(not row.upper_ok for row in rows),
    }


def _errors(lhs: Scalar, rhs: Scalar) -> tuple[float, float]:
    difference = abs(Fraction(lhs) - Fraction(rhs))
    scale = max(abs(Fraction(lhs)), abs(Fraction(rhs)))
    relative = difference / scale if scale else Fraction(0)
    try:
        absolute = float(difference)
    except OverflowError:
        absolute = float("inf")
    return absolute, float(relative)


def make_record(
    check: str,
    params: dict[str, Any],
    lhs: Scalar,
    rhs: Scalar,
    tolerance: float = 0.0,
    asserted: bool = True,
) -> CheckRecord:
    """
    Build a check record.

    With ``tolerance == 0`` the check passes only on exact equality, otherwise
    when the relative error is within ``tolerance``.
    """
    abs_err, rel_err = _errors(lhs, rhs)
    passed = lhs == rhs if tolerance == 0 else rel_err <= tolerance
    return CheckRecord(
        check=check,
        params=params,
        lhs=format_scalar(lhs),
        rhs=format_scalar(rhs),
        abs_err=abs_err,
        rel_err=rel_err,
        passed=passed,
        asserted=asserted,
    )


def check_identity_2_12(max_n: int = 50) -> Iterator[CheckRecord]:
    """Coefficient rearrangement over every admissible (N, t, s) with N <= max_n."""
    for n in range(2, max_n + 1):
        for t in range(2, n + 1):
            for s in range(1, t // 2 + 1):
                lhs, rhs = identity_2_12(n, t, s)
                yield make_record("identity_2_12", {"N": n, "t": t, "s": s}, Fraction(lhs), rhs)


def check_identity_2_18(
    max_n: int = 30, t_values: Sequence[Fraction] = IDENTITY_T_VALUES
) -> Iterator[CheckRecord]:
    """Binomial convolution identity over n <= max_n, 0 <= k <= n."""
    for n in range(max_n + 1):
        for k in range(n + 1):
            for t in t_values:
                lhs, rhs = identity_2_18(n, k, t)
                yield make_record("identity_2_18", {"n": n, "k": k, "t": str(t)}, lhs, rhs)


def _formula_checks(task: tuple[int, GFParams]) -> list[CheckRecord]:
    n, params = task
    labels = {"N": n, **params.as_strings()}
    exact = avg_zeta_formula(n, params)
    return [
        make_record("formula_vs_bruteforce", labels, exact, avg_zeta_bruteforce(n, params)),
        make_record(
            "formula_float_vs_exact",
            labels,
            avg_zeta_formula(n, params, ArithmeticMode.FLOAT),
            exact,
            tolerance=FLOAT_TOLERANCE,
        ),
        make_record("sequence_vs_formula", labels, avg_zeta_sequence(n, params)[-1], exact),
    ]


def check_formula(
    max_n: int = 12,
    grid: Optional[Sequence[GFParams]] = None,
    threads: Optional[int] = None,
) -> list[CheckRecord]:
    """Averaged formula against brute force, float mode and the recurrence."""
    grid = grid if grid is not None else product_grid(ORACLE_VALUES)
    tasks = [(n, params) for n in range(1, max_n + 1) for params in grid]
    chunks = ordered_map(_formula_checks, tasks, threads)
    return [record for chunk in chunks for record in chunk]


def _series_points(values: Sequence[Fraction]) -> list[GFParams]:
    """One grid point per distinct (u + v, w), plus the w = 0 boundary."""
    seen: set[tuple[Fraction, Fraction]] = set()
    points = []
    for u, v, w in itertools.product(values, values, (Fraction(0), *values)):
        if (u + v, w) not in seen:
            seen.add((u + v, w))
            points.append(GFParams(u=u, v=v, w=w))
    return points


def check_series(
    max_n: int = 64, values: Sequence[Fraction] = ORACLE_VALUES
) -> Iterator[CheckRecord]:
    """
    Closed forms of the series against direct summation.

    The published closed form is asserted only at w = 0, where it is exact;
    elsewhere its difference from the direct sum is published as a discrepancy.
    The corrected form is asserted everywhere. Both depend on (u, v) only
    through u + v, so one point per distinct sum is checked.
    """
    for params in _series_points(values):
        for n in range(1, max_n + 1):
            labels = {"N": n, **params.as_strings()}
            direct = series_direct(n, params)
            yield make_record(
                "series_closed_paper",
                labels,
                series_closed_paper(n, params),
                direct,
                asserted=params.w == 0,
            )
            yield make_record(
                "series_closed_candidate", labels, series_closed_candidate(n, params), direct
            )


def run_checks(
    max_n: int = 12,
    identity_max_n: int = 50,
    binomial_max_n: int = 30,
    series_max_n: int = 64,
    threads: Optional[int] = None,
) -> Iterator[CheckRecord]:
    """The full verification suite, in a fixed order."""
    yield from check_identity_2_12(identity_max_n)
    yield from check_identity_2_18(binomial_max_n)
    yield from check_formula(max_n, threads=threads)
    yield from check_series(series_max_n)


def summarize_checks(records: Iterable[CheckRecord]) -> dict:
    """
    Totals of a verification run.

    Returns:
        Dict with total, passed, failed (asserted failures) and discrepancies
        (unasserted failures) counts
    """
    summary = {"total": 0, "passed": 0, "failed": 0, "discrepancies": 0}
    for record in records:
        summary["total"] += 1
        if record.passed:
            summary["passed"] += 1
        elif record.asserted:
            summary["failed"] += 1
        else:
            summary["discrepancies"] += 1
    return summary
