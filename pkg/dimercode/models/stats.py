"""Pydantic models for samples, histograms and smoothed densities."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_array(value: Any, dtype: type = float) -> np.ndarray:
    array = np.array(value, dtype=dtype)
    if array.ndim != 1:
        raise ValueError(f"expected a one-dimensional sequence, got shape {array.shape}")
    array.setflags(write=False)
    return array


class Sample(BaseModel):
    """Raw counts X or standardized values Y."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray = Field(..., description="Sample values")

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        array = _frozen_array(value)
        if array.size < 1:
            raise ValueError("a sample needs at least one value")
        if not np.all(np.isfinite(array)):
            raise ValueError("sample values must be finite")
        return array

    @property
    def n(self) -> int:
        return int(self.values.size)


class Histogram(BaseModel):
    """Fixed-width histogram with densities normalized to unit mass."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bin_edges: np.ndarray = Field(..., description="Strictly increasing bin edges")
    counts: np.ndarray = Field(..., description="Values per bin")
    densities: np.ndarray = Field(..., description="counts / (n * width)")
    clamped: int = Field(default=0, ge=0, description="Values clamped into the end bins")

    @field_validator("bin_edges", "densities", mode="before")
    @classmethod
    def _as_float_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value)

    @field_validator("counts", mode="before")
    @classmethod
    def _as_int_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, dtype=np.int64)

    @model_validator(mode="after")
    def _check_shapes(self) -> "Histogram":
        if self.bin_edges.size != self.counts.size + 1:
            raise ValueError("need exactly one more edge than bins")
        if self.counts.size != self.densities.size:
            raise ValueError("counts and densities differ in length")
        if np.any(np.diff(self.bin_edges) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if np.any(self.counts < 0):
            raise ValueError("negative bin count")
        return self

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return (self.bin_edges[:-1] + self.bin_edges[1:]) / 2


class SmoothedDensity(BaseModel):
    """Density values on an evaluation grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: np.ndarray = Field(..., description="Evaluation points")
    values: np.ndarray = Field(..., description="Density estimates")
    bandwidth: float = Field(..., gt=0, description="Kernel (or overlay) standard deviation")

    @field_validator("grid", "values", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen_array(value)

    @model_validator(mode="after")
    def _check(self) -> "SmoothedDensity":
        if self.grid.size != self.values.size:
            raise ValueError("grid and values differ in length")
        if np.any(self.values < 0):
            raise ValueError("density values must be non-negative")
        return self

    def integral(self) -> float:
        """Trapezoidal integral over the grid."""
        widths = np.diff(self.grid)
        return float(np.sum(widths * (self.values[:-1] + self.values[1:]) / 2))


class FigureData(BaseModel):
    """Standardized sample with its histogram, smoothed curve and normal overlay."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    raw_summary: dict[str, float] = Field(..., description="describe() of the raw counts")
    standardized: Sample
    histogram: Histogram
    smoothed: SmoothedDensity
    overlay: SmoothedDensity
    overlay_mean: float = Field(default=0.0, description="Mean of the overlay normal")
    overlay_std: float = Field(
        default=1.0, gt=0, description="Standard deviation of the overlay normal"
    )
