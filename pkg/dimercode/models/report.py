"""Models for bounds, audits and verification reports."""

from decimal import Decimal
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class ArithmeticMode(str, Enum):
    """Arithmetic used for averaged generating functions and series."""

    EXACT = "exact"
    FLOAT = "float"


#: A value in either arithmetic mode.
Scalar = Union[Fraction, float]


class BoundConstants(BaseModel):
    """Constants of the averaged generating function estimates."""

    model_config = ConfigDict(frozen=True)

    a: Decimal = Field(..., description="A = sqrt(u+v) + w/2")
    c1: Decimal = Field(..., description="C1 = exp(-1/6) * sqrt(2/pi)")
    c: Decimal = Field(..., description="C = (C1/2) * min(1, (w+2)/(A+1))")


class BoundsResult(BaseModel):
    """Lower and upper estimate for one (N, u, v, w)."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Site count")
    lower: Decimal = Field(..., description="Lower estimate")
    upper: Decimal = Field(..., description="Upper estimate")
    constants: BoundConstants


class AuditRow(BaseModel):
    """One audited grid point."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    u: str = Field(..., description="Exact weight as text")
    v: str
    w: str
    lower: Decimal
    avg: Decimal
    upper: Decimal
    lower_ok: bool
    upper_ok: bool

    def as_record(self) -> dict[str, Any]:
        """Record with the bounds-audit CSV column names."""
        return {
            "N": self.n,
            "u": self.u,
            "v": self.v,
            "w": self.w,
            "lower": format_decimal(self.lower),
            "avg": format_decimal(self.avg),
            "upper": format_decimal(self.upper),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
        }


AUDIT_COLUMNS = ["N", "u", "v", "w", "lower", "avg", "upper", "lower_ok", "upper_ok"]


class CheckRecord(BaseModel):
    """One line of the verification report."""

    check: str = Field(..., description="Check name")
    params: dict[str, Any] = Field(default_factory=dict, description="Check parameters")
    lhs: str = Field(..., description="Left-hand side as decimal or p/q")
    rhs: str = Field(..., description="Right-hand side as decimal or p/q")
    abs_err: float = Field(..., ge=0)
    rel_err: float = Field(..., ge=0)
    passed: bool = Field(..., serialization_alias="pass")
    asserted: bool = Field(
        default=True, exclude=True, description="Whether a failure fails the run"
    )

    def to_json_line(self) -> str:
        return self.model_dump_json(by_alias=True)


def format_decimal(value: Decimal, digits: int = 17) -> str:
    """Short scientific text for a Decimal."""
    return format(value, f".{digits}g")


def format_scalar(value: Scalar) -> str:
    """p/q for exact values, repr-precision decimal for floats."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


class CountMethod(str, Enum):
    """Hard-dimer counting path."""

    DP = "dp"
    BRUTEFORCE = "bruteforce"

    @classmethod
    def _missing_(cls, value: object) -> Optional["CountMethod"]:
        if value == "brute":
            return cls.BRUTEFORCE
        return None


class OutputFormat(str, Enum):
    """Tabular output encoding."""

    CSV = "csv"
    JSON = "json"
