"""Tests for oracle checks and the bounds audit."""

from fractions import Fraction

import pytest

from dimercode.errors import ParameterRangeError
from dimercode.models import GFParams
from dimercode.tools.verification import (
    AUDIT_VALUES,
    audit_bounds,
    audit_point,
    check_formula,
    check_identity_2_12,
    check_identity_2_18,
    check_series,
    default_grid,
    make_record,
    product_grid,
    run_checks,
    summarize_audit,
    summarize_checks,
)


def test_product_grid():
    """Test the full cube in lexicographic order."""
    grid = product_grid([1, 2])
    assert len(grid) == 8
    assert grid[0] == GFParams(u=1, v=1, w=1)
    assert grid[1] == GFParams(u=1, v=1, w=2)
    assert grid[-1] == GFParams(u=2, v=2, w=2)


def test_default_grid_is_seeded():
    """Test the audit grid has 60 distinct points and depends only on the seed."""
    grid = default_grid()

    assert len(grid) == 60
    assert len({(p.u, p.v, p.w) for p in grid}) == 60
    assert grid == default_grid(AUDIT_VALUES, 60, 0)
    assert grid != default_grid(AUDIT_VALUES, 60, 1)
    assert default_grid([1, 2], size=100) == product_grid([1, 2])


def test_make_record_exact_and_tolerant():
    """Test exact and tolerance-based comparisons."""
    exact = make_record("x", {}, Fraction(1, 3), Fraction(1, 3))
    assert exact.passed
    assert exact.lhs == "1/3"
    assert exact.abs_err == 0

    off = make_record("x", {}, Fraction(1), Fraction(2))
    assert not off.passed
    assert off.abs_err == 1
    assert off.rel_err == pytest.approx(0.5)

    close = make_record("x", {}, 1.0 + 1e-12, Fraction(1), tolerance=1e-10)
    assert close.passed


def test_identity_checks_pass():
    """Test every identity record passes."""
    records = list(check_identity_2_12(20)) + list(check_identity_2_18(10))
    assert records
    assert all(record.passed for record in records)


def test_formula_checks_pass():
    """Test formula, float and recurrence checks on a small grid."""
    grid = product_grid(["1/2", 2])
    records = check_formula(max_n=6, grid=grid, threads=1)

    assert len(records) == 3 * 6 * len(grid)
    assert {record.check for record in records} == {
        "formula_vs_bruteforce",
        "formula_float_vs_exact",
        "sequence_vs_formula",
    }
    assert all(record.passed for record in records)


def test_series_checks():
    """Test the corrected form passes and the published one is only asserted at w = 0."""
    records = list(check_series(max_n=10))
    candidate = [r for r in records if r.check == "series_closed_candidate"]
    published = [r for r in records if r.check == "series_closed_paper"]

    assert all(r.passed and r.asserted for r in candidate)
    assert all(r.passed for r in published if r.asserted)
    assert all(r.params["w"] == "0" for r in published if r.asserted)
    assert any(not r.passed for r in published)

    summary = summarize_checks(records)
    assert summary["failed"] == 0
    assert summary["discrepancies"] > 0
    assert summary["total"] == len(records)


def test_series_checks_deduplicate_sums():
    """Test one point per distinct u + v."""
    records = list(check_series(max_n=1, values=[Fraction(1), Fraction(2)]))
    sums = {(Fraction(r.params["u"]) + Fraction(r.params["v"]), r.params["w"]) for r in records}
    # u + v in {2, 3, 4}, w in {0, 1, 2}, two checks each
    assert len(sums) == 9
    assert len(records) == 18


@pytest.mark.slow
def test_full_verification_run():
    """Test the default suite has no asserted failures."""
    summary = summarize_checks(run_checks(threads=1))
    assert summary["failed"] == 0
    assert summary["passed"] > 0


def test_audit_point_rows():
    """Test audit rows of one grid point."""
    rows = audit_point(5, GFParams(u=1, v=1, w=1))

    assert [row.n for row in rows] == [1, 2, 3, 4, 5]
    assert rows[0].avg == 1
    assert all(row.upper_ok for row in rows)
    assert rows[0].u == "1"


def test_lower_estimate_fails_at_one_site():
    """Test the lower estimate exceeds the average at N = 1 once A > 1."""
    row = audit_point(1, GFParams(u=1, v=1, w=1))[0]
    assert not row.lower_ok
    assert row.lower > row.avg


def test_lower_estimate_fails_for_small_dimer_weights():
    """Test a lower-estimate violation away from N = 1."""
    row = audit_point(10, GFParams(u="1/10000", v="1/10000", w=1))[9]
    assert not row.lower_ok
    assert row.upper_ok


def test_audit_bounds_order_and_upper():
    """Test rows are ordered by N then grid point, and the upper estimate holds."""
    grid = default_grid(size=6)
    rows = audit_bounds(40, grid, threads=1)

    assert len(rows) == 40 * 6
    assert [row.n for row in rows[:6]] == [1] * 6
    assert [(row.u, row.v, row.w) for row in rows[:6]] == [
        (p.as_strings()["u"], p.as_strings()["v"], p.as_strings()["w"]) for p in grid
    ]
    assert all(row.upper_ok for row in rows)

    summary = summarize_audit(rows)
    assert summary["rows"] == 240
    assert summary["upper_violations"] == 0


@pytest.mark.slow
def test_audit_bounds_default_size():
    """Test the upper estimate over the default grid up to N = 500."""
    rows = audit_bounds(500, default_grid())
    assert summarize_audit(rows)["upper_violations"] == 0


def test_audit_bounds_errors():
    """Test audit argument validation."""
    with pytest.raises(ParameterRangeError):
        audit_bounds(5, [])
    with pytest.raises(ParameterRangeError):
        audit_bounds(0, [GFParams(u=1, v=1, w=1)])
    with pytest.raises(ParameterRangeError):
        audit_bounds(5, [GFParams(u=1, v=1, w=0)])
