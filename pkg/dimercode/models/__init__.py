"""Data models for colourings, hard-dimers, samples and reports."""

from dimercode.models.dimer import (
    Colour,
    Colouring,
    Dimer,
    DimerStats,
    GFParams,
    HardDimer,
)
from dimercode.models.report import (
    ArithmeticMode,
    AuditRow,
    BoundConstants,
    BoundsResult,
    CheckRecord,
    CountMethod,
    OutputFormat,
    Scalar,
)
from dimercode.models.sampling import Attribute, BaseElement, OpenState, RunResult, SampleSpec
from dimercode.models.stats import FigureData, Histogram, Sample, SmoothedDensity

__all__ = [
    "ArithmeticMode",
    "Attribute",
    "AuditRow",
    "BaseElement",
    "BoundConstants",
    "BoundsResult",
    "CheckRecord",
    "Colour",
    "Colouring",
    "CountMethod",
    "Dimer",
    "DimerStats",
    "FigureData",
    "GFParams",
    "HardDimer",
    "Histogram",
    "OpenState",
    "OutputFormat",
    "RunResult",
    "Sample",
    "SampleSpec",
    "Scalar",
    "SmoothedDensity",
]
