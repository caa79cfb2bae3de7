"""Census over all colourings and the sample statistics behind the histogram figures."""

import logging
import math
from typing import Optional

import numpy as np

from dimercode.errors import (
    BudgetExceededError,
    GridMismatchError,
    ParameterRangeError,
    ZeroVarianceError,
)
from dimercode.models.report import CountMethod
from dimercode.models.stats import FigureData, Histogram, Sample, SmoothedDensity
from dimercode.tools.dimers import count_text_bruteforce, count_text_dp, mask_text
from dimercode.tools.parallel import chunk_ranges, ordered_map

logger = logging.getLogger(__name__)

CENSUS_LIMITS = {CountMethod.DP: 24, CountMethod.BRUTEFORCE: 14}
CENSUS_CHUNK = 1 << 12
DEFAULT_BANDWIDTH = 0.1
GRID_POINTS = 1201
GRID_HALF_WIDTH = 6.0
_SQRT_2PI = math.sqrt(2 * math.pi)


def _census_chunk(task: tuple[int, int, int, CountMethod]) -> np.ndarray:
    n, start, stop, method = task
    count = count_text_dp if method is CountMethod.DP else count_text_bruteforce
    return np.fromiter(
        (count(mask_text(mask, n), False) for mask in range(start, stop)),
        dtype=np.int64,
        count=stop - start,
    )


def census(
    n: int, method: CountMethod = CountMethod.DP, threads: Optional[int] = None
) -> Sample:
    """
    Non-empty hard-dimer counts of all 2^N colourings, in bitmask order.

    Raises:
        BudgetExceededError: N outside 2..24 (dp) or 2..14 (bruteforce)
    """
    limit = CENSUS_LIMITS[method]
    if not 2 <= n <= limit:
        raise BudgetExceededError(
            f"census with method {method.value} needs 2 <= N <= {limit}, got N={n}"
        )
    tasks = [(n, start, stop, method) for start, stop in chunk_ranges(1 << n, CENSUS_CHUNK)]
    logger.debug("census N=%d over %d chunks", n, len(tasks))
    return Sample(values=np.concatenate(ordered_map(_census_chunk, tasks, threads)))


def describe(x: Sample) -> dict:
    """Size, mean, sample standard deviation and range."""
    values = x.values
    return {
        "n": x.n,
        "mean": float(values.mean()),
        "std": float(values.std(ddof=1)) if x.n > 1 else 0.0,
        "min": float(values.min()),
        "max": float(values.max()),
    }


def standardize(x: Sample) -> Sample:
    """
    Shift to mean 0 and scale to sample standard deviation 1 (n-1 divisor).

    Raises:
        ParameterRangeError: fewer than two values
        ZeroVarianceError: all values equal
    """
    if x.n < 2:
        raise ParameterRangeError("standardization needs at least two values")
    mean = x.values.mean()
    std = x.values.std(ddof=1)
    if std == 0:
        raise ZeroVarianceError("sample has zero variance")
    return Sample(values=(x.values - mean) / std)


def carried_unit_bins(mean: float, std: float) -> tuple[float, float]:
    """(width, origin) of integer-centred unit bins after standardization."""
    return 1.0 / std, (-0.5 - mean) / std


def histogram(
    x: Sample,
    bin_width: float = 1.0,
    origin: float = -0.5,
    n_bins: Optional[int] = None,
    upper: Optional[float] = None,
) -> Histogram:
    """
    Histogram with half-open bins [origin + k*width, origin + (k+1)*width).

    Without ``n_bins`` the bins cover exactly the data range. With ``n_bins``
    the bins start at ``origin``; values beyond the last edge are clamped into
    the end bins and counted in ``clamped``. The last edge itself belongs to
    the last bin; ``upper`` pins its exact value.
    """
    if bin_width <= 0:
        raise ParameterRangeError(f"bin width must be > 0, got {bin_width}")
    values = x.values
    index = np.floor((values - origin) / bin_width).astype(np.int64)
    if n_bins is None:
        first, last = int(index.min()), int(index.max())
    else:
        if n_bins < 1:
            raise ParameterRangeError(f"need at least one bin, got {n_bins}")
        first, last = 0, n_bins - 1

    edges = origin + bin_width * np.arange(first, last + 2, dtype=float)
    if upper is not None:
        edges[-1] = upper
    offsets = np.clip(index - first, 0, last - first)
    clamped = int(np.count_nonzero((values < edges[0]) | (values > edges[-1])))
    if clamped:
        logger.warning("%d values clamped into the end bins", clamped)
    counts = np.bincount(offsets, minlength=last - first + 1)
    return Histogram(
        bin_edges=edges,
        counts=counts,
        densities=counts / (x.n * bin_width),
        clamped=clamped,
    )


def equal_width_histogram(x: Sample, n_bins: int) -> Histogram:
    """``n_bins`` equal bins spanning [min, max]."""
    low, high = float(x.values.min()), float(x.values.max())
    if high == low:
        return histogram(x, 1.0, low - 0.5)
    return histogram(x, (high - low) / n_bins, low, n_bins=n_bins, upper=high)


def density_grid(
    x: Sample,
    bandwidth: float = DEFAULT_BANDWIDTH,
    half_width: float = GRID_HALF_WIDTH,
    points: int = GRID_POINTS,
) -> np.ndarray:
    """
    Evenly spaced points over mean +- half_width bandwidth-inflated deviations.

    The range is widened so every sample point sits at least half_width
    bandwidths inside it.
    """
    stats = describe(x)
    spread = half_width * math.sqrt(stats["std"] ** 2 + bandwidth**2)
    low = min(stats["mean"] - spread, stats["min"] - half_width * bandwidth)
    high = max(stats["mean"] + spread, stats["max"] + half_width * bandwidth)
    return np.linspace(low, high, points)


def _check_grid(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ParameterRangeError("grid must be a strictly increasing sequence of >= 2 points")
    return grid


def kde(
    x: Sample, bandwidth: float = DEFAULT_BANDWIDTH, grid: Optional[np.ndarray] = None
) -> SmoothedDensity:
    """
    Gaussian kernel density estimate with standard deviation ``bandwidth``.

    Repeated values are weighted rather than expanded, so integer-valued
    samples with millions of entries stay cheap.
    """
    grid = _check_grid(grid if grid is not None else density_grid(x, bandwidth))
    return SmoothedDensity(grid=grid, values=kde_at(x, bandwidth, grid), bandwidth=bandwidth)


def kde_at(x: Sample, bandwidth: float, points: np.ndarray) -> np.ndarray:
    """Kernel density estimate at arbitrary points."""
    if bandwidth <= 0:
        raise ParameterRangeError(f"bandwidth must be > 0, got {bandwidth}")
    centres, weights = np.unique(x.values, return_counts=True)
    z = (np.asarray(points, dtype=float)[:, None] - centres[None, :]) / bandwidth
    return np.exp(-0.5 * z**2) @ weights / (x.n * bandwidth * _SQRT_2PI)


def normal_overlay(mean: float, stddev: float, grid: np.ndarray) -> SmoothedDensity:
    """Normal pdf with the given mean and standard deviation on a grid."""
    if stddev <= 0:
        raise ParameterRangeError(f"standard deviation must be > 0, got {stddev}")
    grid = _check_grid(grid)
    return SmoothedDensity(grid=grid, values=normal_pdf(grid, mean, stddev), bandwidth=stddev)


def normal_pdf(points: np.ndarray, mean: float, stddev: float) -> np.ndarray:
    z = (np.asarray(points, dtype=float) - mean) / stddev
    return np.exp(-0.5 * z**2) / (stddev * _SQRT_2PI)


def sup_distance(a: SmoothedDensity, b: SmoothedDensity) -> float:
    """
    Largest absolute difference of two densities on a shared grid.

    Raises:
        GridMismatchError: the grids differ
    """
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise GridMismatchError("densities are evaluated on different grids")
    return float(np.max(np.abs(a.values - b.values)))


HISTOGRAM_COLUMNS = ["bin_center", "count", "density", "smoothed_density", "overlay_pdf"]
CURVE_COLUMNS = ["x", "kde", "overlay_pdf"]


def figure_data(
    raw: Sample,
    bandwidth: float = DEFAULT_BANDWIDTH,
    n_bins: Optional[int] = None,
    matched_overlay: bool = False,
) -> FigureData:
    """
    Everything a histogram figure shows, on the standardized scale.

    Bins default to the raw integer-centred unit bins carried through the
    standardization; ``n_bins`` switches to equal-width bins over the data.
    The overlay is the standard normal, or with ``matched_overlay`` the
    normal with the standardized sample's own mean and deviation.
    """
    summary = describe(raw)
    y = standardize(raw)
    if n_bins is None:
        width, origin = carried_unit_bins(summary["mean"], summary["std"])
        hist = histogram(y, width, origin)
    else:
        hist = equal_width_histogram(y, n_bins)

    grid = density_grid(y, bandwidth)
    mean, std = 0.0, 1.0
    if matched_overlay:
        matched = describe(y)
        mean, std = matched["mean"], matched["std"]
    return FigureData(
        raw_summary=summary,
        standardized=y,
        histogram=hist,
        smoothed=kde(y, bandwidth, grid),
        overlay=normal_overlay(mean, std, grid),
        overlay_mean=mean,
        overlay_std=std,
    )


def histogram_rows(figure: FigureData) -> list[dict]:
    """Per-bin records; smoothed and overlay values are taken at the bin centres."""
    hist = figure.histogram
    centers = hist.centers
    smoothed = kde_at(figure.standardized, figure.smoothed.bandwidth, centers)
    overlay = normal_pdf(centers, figure.overlay_mean, figure.overlay_std)
    return [
        {
            "bin_center": float(center),
            "count": int(count),
            "density": float(density),
            "smoothed_density": float(s),
            "overlay_pdf": float(o),
        }
        for center, count, density, s, o in zip(
            centers, hist.counts, hist.densities, smoothed, overlay
        )
    ]


def curve_rows(figure: FigureData) -> list[dict]:
    """The full smoothed and overlay curves on the evaluation grid."""
    return [
        {"x": float(x), "kde": float(k), "overlay_pdf": float(o)}
        for x, k, o in zip(figure.smoothed.grid, figure.smoothed.values, figure.overlay.values)
    ]
