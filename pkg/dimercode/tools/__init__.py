"""Operations: dimers, averaged generating functions, sampling, statistics and checks."""

from dimercode.tools import (
    averaging,
    dimers,
    parallel,
    reports,
    sampler,
    statistics,
    verification,
)

__all__ = [
    "averaging",
    "dimers",
    "parallel",
    "reports",
    "sampler",
    "statistics",
    "verification",
]
