"""Tests for the census and the histogram statistics."""

import math

import numpy as np
import pytest

from dimercode.errors import (
    BudgetExceededError,
    GridMismatchError,
    ParameterRangeError,
    ZeroVarianceError,
)
from dimercode.models import CountMethod, Sample
from dimercode.tools.statistics import (
    GRID_POINTS,
    HISTOGRAM_COLUMNS,
    census,
    curve_rows,
    density_grid,
    describe,
    equal_width_histogram,
    figure_data,
    histogram,
    histogram_rows,
    kde,
    normal_overlay,
    normal_pdf,
    standardize,
    sup_distance,
)

PEAK = 1 / math.sqrt(2 * math.pi)


def test_census_two_sites():
    """Test counts of rr, br, rb, bb in bitmask order."""
    assert census(2, threads=1).values.tolist() == [1, 0, 0, 1]


def test_census_three_sites():
    """Test the three-site census and its moments."""
    values = census(3, threads=1).values

    assert sorted(values.tolist()) == [1, 1, 1, 1, 1, 1, 2, 2]
    stats = describe(Sample(values=values))
    assert stats["mean"] == pytest.approx(1.25)
    assert stats["std"] ** 2 == pytest.approx(1.5 / 7)


def test_census_methods_agree():
    """Test dp and brute-force census for N <= 9."""
    for n in range(2, 10):
        dp = census(n, CountMethod.DP, threads=1).values
        brute = census(n, CountMethod.BRUTEFORCE, threads=1).values
        assert np.array_equal(dp, brute)


def test_census_colour_swap_symmetry():
    """Test a colouring and its complement have the same count."""
    n = 10
    values = census(n, threads=1).values
    full = (1 << n) - 1
    for mask in range(1 << n):
        assert values[mask] == values[mask ^ full]


def test_census_budget():
    """Test site count limits of each method."""
    with pytest.raises(BudgetExceededError):
        census(1)
    with pytest.raises(BudgetExceededError):
        census(25)
    with pytest.raises(BudgetExceededError):
        census(15, CountMethod.BRUTEFORCE)


def test_standardize():
    """Test standardization with the n-1 divisor."""
    y = standardize(Sample(values=[1, 2, 3]))
    assert y.values == pytest.approx([-1.0, 0.0, 1.0])

    again = standardize(y)
    assert again.values == pytest.approx(y.values)


def test_standardize_moments():
    """Test mean 0 and sample standard deviation 1 on a census and a random sample."""
    random_sample = Sample(values=np.random.default_rng(5).normal(loc=3.0, scale=2.0, size=1000))
    for raw in (census(10, threads=1), random_sample):
        y = standardize(raw).values
        assert abs(float(y.mean())) <= 1e-12
        assert abs(float(y.std(ddof=1)) - 1.0) <= 1e-12


def test_standardize_errors():
    """Test degenerate samples."""
    with pytest.raises(ZeroVarianceError):
        standardize(Sample(values=[4, 4, 4]))
    with pytest.raises(ParameterRangeError):
        standardize(Sample(values=[4]))


def test_histogram_unit_bins():
    """Test integer-centred unit bins."""
    hist = histogram(Sample(values=[0, 0, 1, 2, 2]))

    assert hist.centers.tolist() == [0.0, 1.0, 2.0]
    assert hist.counts.tolist() == [2, 1, 2]
    assert float(np.sum(hist.densities * hist.widths)) == pytest.approx(1.0)
    assert hist.clamped == 0


def test_histogram_single_value():
    """Test equal values fall in one bin."""
    hist = histogram(Sample(values=[3, 3, 3]))
    assert hist.counts.tolist() == [3]


def test_histogram_clamps_to_fixed_bins():
    """Test values beyond a fixed bin range go to the end bins."""
    hist = histogram(Sample(values=[0, 5, 10]), bin_width=1.0, origin=0.0, n_bins=3)

    assert hist.counts.tolist() == [1, 0, 2]
    assert hist.clamped == 2
    assert hist.n == 3


def test_histogram_rejects_bad_width():
    """Test bin width and count validation."""
    with pytest.raises(ParameterRangeError):
        histogram(Sample(values=[1, 2]), bin_width=0)
    with pytest.raises(ParameterRangeError):
        histogram(Sample(values=[1, 2]), n_bins=0)


def test_equal_width_histogram():
    """Test the maximum lands in the last bin."""
    hist = equal_width_histogram(Sample(values=[0, 1, 2, 3]), 3)

    assert hist.counts.tolist() == [1, 1, 2]
    assert hist.clamped == 0
    assert equal_width_histogram(Sample(values=[2, 2]), 5).counts.tolist() == [2]


def test_equal_width_histogram_never_clamps():
    """Test the maximum is never clamped by a rounded last edge."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        x = Sample(values=rng.normal(size=50))
        hist = equal_width_histogram(x, 7)

        assert hist.clamped == 0
        assert hist.bin_edges[-1] == x.values.max()
        assert hist.bin_edges[0] == x.values.min()
        assert int(hist.counts.sum()) == 50


def test_kde_single_point_peak():
    """Test the kernel height at its centre."""
    density = kde(Sample(values=[0.0]), 0.1, grid=np.array([-1.0, 0.0, 1.0]))
    assert density.values[1] == pytest.approx(PEAK / 0.1)
    assert density.values[0] == pytest.approx(density.values[2])


def test_kde_integrates_to_one():
    """Test the default grid holds the whole kernel mass."""
    rng = np.random.default_rng(0)
    x = Sample(values=rng.normal(size=2000))
    density = kde(x, 0.1)

    assert density.grid.size == GRID_POINTS
    assert density.integral() == pytest.approx(1.0, abs=1e-3)


def test_kde_integrates_to_one_on_skewed_census():
    """Test the default grid also covers far outliers of a census."""
    y = standardize(census(10, threads=1))
    assert kde(y, 0.1).integral() == pytest.approx(1.0, abs=1e-3)


def test_density_grid_covers_sample():
    """Test every sample point sits well inside the grid."""
    x = Sample(values=[0] * 999 + [1])
    grid = density_grid(x, 0.1)
    assert grid[0] <= -0.6
    assert grid[-1] >= 1.6 - 1e-9


def test_normal_overlay():
    """Test the standard normal peak and symmetry."""
    grid = np.linspace(-3, 3, 61)
    overlay = normal_overlay(0.0, 1.0, grid)

    assert overlay.values[30] == pytest.approx(PEAK)
    assert overlay.values == pytest.approx(overlay.values[::-1])
    shifted = normal_overlay(1.0, 2.0, grid)
    assert shifted.values.argmax() == 40
    with pytest.raises(ParameterRangeError):
        normal_overlay(0.0, 0.0, grid)


def test_sup_distance():
    """Test distances of identical and shifted normals."""
    grid = np.linspace(-8, 9, 17001)
    a = normal_overlay(0.0, 1.0, grid)
    b = normal_overlay(1.0, 1.0, grid)

    assert sup_distance(a, a) == 0
    assert sup_distance(a, b) == pytest.approx(0.2229, abs=5e-4)


def test_sup_distance_grid_mismatch():
    """Test densities on different grids are refused."""
    a = normal_overlay(0.0, 1.0, np.linspace(-1, 1, 11))
    b = normal_overlay(0.0, 1.0, np.linspace(-1, 1, 12))
    with pytest.raises(GridMismatchError):
        sup_distance(a, b)


def test_sup_distance_grows_with_bandwidth():
    """Test smoothing further away from a reference estimate."""
    x = Sample(values=[-1.0, 1.0])
    grid = np.linspace(-5, 5, 2001)
    reference = kde(x, 0.1, grid)

    distances = [sup_distance(reference, kde(x, h, grid)) for h in (0.2, 0.4, 0.8)]
    assert distances[0] < distances[1] < distances[2]


def test_figure_data_census():
    """Test the census figure on the standardized scale."""
    raw = census(6, threads=1)
    figure = figure_data(raw)

    assert figure.raw_summary["n"] == 64
    assert figure.standardized.values.mean() == pytest.approx(0.0, abs=1e-12)
    assert figure.histogram.n == 64
    assert figure.histogram.clamped == 0
    assert figure.histogram.widths == pytest.approx(1 / figure.raw_summary["std"])
    assert figure.overlay.values.max() == pytest.approx(PEAK, rel=1e-3)

    rows = histogram_rows(figure)
    assert list(rows[0]) == HISTOGRAM_COLUMNS
    assert sum(row["count"] for row in rows) == 64
    assert len(curve_rows(figure)) == GRID_POINTS


def test_figure_data_equal_bins_and_matched_overlay():
    """Test equal-width bins and an overlay matched to the sample."""
    raw = Sample(values=[0, 1, 1, 2, 2, 2, 3, 3, 4, 7])
    figure = figure_data(raw, n_bins=4, matched_overlay=True)

    assert figure.histogram.counts.size == 4
    assert figure.histogram.n == 10
    assert figure.overlay_mean == pytest.approx(0.0, abs=1e-12)
    assert figure.overlay.bandwidth == pytest.approx(1.0)
    assert figure.overlay_std == pytest.approx(1.0)


def test_histogram_rows_use_overlay_std():
    """Test the per-bin overlay follows the stored overlay deviation."""
    figure = figure_data(census(6, threads=1), matched_overlay=True)
    wide = figure.model_copy(update={"overlay_std": 2.0})
    centers = figure.histogram.centers

    rows = histogram_rows(wide)
    expected = normal_pdf(centers, wide.overlay_mean, 2.0)
    assert [row["overlay_pdf"] for row in rows] == pytest.approx(expected.tolist())
    assert [row["overlay_pdf"] for row in histogram_rows(figure)] == pytest.approx(
        normal_pdf(centers, figure.overlay_mean, figure.overlay_std).tolist()
    )
