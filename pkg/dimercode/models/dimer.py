"""Pydantic models for colourings, dimers and hard-dimer configurations."""

from enum import Enum
from fractions import Fraction
from typing import Any, Iterable

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Colour(str, Enum):
    """Colour of a lattice site."""

    RED = "r"
    BLUE = "b"

    @property
    def other(self) -> "Colour":
        """The opposite colour."""
        return Colour.BLUE if self is Colour.RED else Colour.RED


class Colouring(BaseModel):
    """A length-N sequence of red/blue sites. Positions are 1-based externally."""

    model_config = ConfigDict(frozen=True)

    sites: tuple[Colour, ...] = Field(..., min_length=1, description="Site colours, left to right")

    def __len__(self) -> int:
        return len(self.sites)

    def __str__(self) -> str:
        return self.text

    @property
    def text(self) -> str:
        """Lowercase r/b string form."""
        return "".join(site.value for site in self.sites)

    def colour_at(self, position: int) -> Colour:
        """Colour of the site at a 1-based position."""
        if not 1 <= position <= len(self.sites):
            raise IndexError(f"position {position} outside 1..{len(self.sites)}")
        return self.sites[position - 1]

    def count(self, colour: Colour) -> int:
        """Number of sites with the given colour."""
        return sum(1 for site in self.sites if site is colour)


class Dimer(BaseModel):
    """An edge joining two nearest same-colour sites."""

    model_config = ConfigDict(frozen=True)

    start: int = Field(..., ge=1, description="1-based left endpoint")
    end: int = Field(..., ge=1, description="1-based right endpoint")
    colour: Colour = Field(..., description="Colour of both endpoints")

    @model_validator(mode="after")
    def _check_order(self) -> "Dimer":
        if self.start >= self.end:
            raise ValueError(f"dimer start {self.start} must be < end {self.end}")
        return self

    @property
    def crossings(self) -> int:
        """Number of opposite-colour sites strictly inside the dimer."""
        return self.end - self.start - 1

    def sort_key(self) -> tuple[int, int]:
        return (self.start, self.end)

    def is_valid_on(self, colouring: Colouring) -> bool:
        """Endpoints carry the dimer colour and no site strictly between does."""
        if self.end > len(colouring):
            return False
        sites = colouring.sites
        if sites[self.start - 1] is not self.colour or sites[self.end - 1] is not self.colour:
            return False
        return all(site is not self.colour for site in sites[self.start : self.end - 1])


def intervals_disjoint(dimers: Iterable[Dimer]) -> bool:
    """True iff the closed intervals [start, end] are pairwise disjoint."""
    last_end = 0
    for dimer in sorted(dimers, key=Dimer.sort_key):
        if dimer.start <= last_end:
            return False
        last_end = dimer.end
    return True


class HardDimer(BaseModel):
    """A set of pairwise non-intersecting dimers, kept sorted by start."""

    model_config = ConfigDict(frozen=True)

    dimers: tuple[Dimer, ...] = Field(default=(), description="Member dimers sorted by start")

    @field_validator("dimers")
    @classmethod
    def _sort_and_check(cls, value: tuple[Dimer, ...]) -> tuple[Dimer, ...]:
        ordered = tuple(sorted(value, key=Dimer.sort_key))
        if not intervals_disjoint(ordered):
            raise ValueError("dimers intersect (shared endpoint or nesting)")
        return ordered

    def __len__(self) -> int:
        return len(self.dimers)

    def is_valid_on(self, colouring: Colouring) -> bool:
        return all(dimer.is_valid_on(colouring) for dimer in self.dimers)


class DimerStats(BaseModel):
    """Counts attached to a hard-dimer on a colouring."""

    model_config = ConfigDict(frozen=True)

    n_b: int = Field(..., ge=0, description="Blue dimers")
    n_r: int = Field(..., ge=0, description="Red dimers")
    n_br: int = Field(..., ge=0, description="Crossings")
    gamma_b: int = Field(..., ge=0, description="Blue single points")
    gamma_r: int = Field(..., ge=0, description="Red single points")
    t: int = Field(..., ge=0, description="Sites occupied by dimers")
    s: int = Field(..., ge=0, description="Number of dimers")

    @model_validator(mode="after")
    def _check_relations(self) -> "DimerStats":
        if self.s != self.n_b + self.n_r:
            raise ValueError(f"s={self.s} differs from n_b + n_r = {self.n_b + self.n_r}")
        if self.t != 2 * self.s + self.n_br:
            raise ValueError(f"t={self.t} differs from 2s + n_br = {2 * self.s + self.n_br}")
        if self.n_br and not self.s:
            raise ValueError("crossings without dimers")
        return self

    @property
    def n_sites(self) -> int:
        """Left-hand side of the site constraint; equals N."""
        return 2 * self.n_b + 2 * self.n_r + self.n_br + self.gamma_b + self.gamma_r


def to_fraction(value: Any) -> Fraction:
    """Coerce int/float/str/Decimal/Fraction to an exact Fraction.

    Strings may be integers, decimals ("0.25", "1e-4") or rationals ("1/4").
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("boolean is not a weight")
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty weight")
        return Fraction(text)
    return Fraction(value)


class GFParams(BaseModel):
    """Positive weights (u, v, w) of the generating function.

    u weights blue dimers, v red dimers, w crossings. Values are held as exact
    fractions; w = 0 is accepted as a boundary extension for identity checks.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    u: Fraction = Field(..., description="Blue dimer weight")
    v: Fraction = Field(..., description="Red dimer weight")
    w: Fraction = Field(..., description="Crossing weight")

    @field_validator("u", "v", "w", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> Fraction:
        return to_fraction(value)

    @field_validator("u", "v")
    @classmethod
    def _positive(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError(f"dimer weight must be > 0, got {value}")
        return value

    @field_validator("w")
    @classmethod
    def _non_negative(cls, value: Fraction) -> Fraction:
        if value < 0:
            raise ValueError(f"crossing weight must be >= 0, got {value}")
        return value

    @property
    def is_interior(self) -> bool:
        """All three weights strictly positive."""
        return self.w > 0

    def swapped(self) -> "GFParams":
        """Exchange the blue and red weights."""
        return GFParams(u=self.v, v=self.u, w=self.w)

    def as_strings(self) -> dict[str, str]:
        return {"u": str(self.u), "v": str(self.v), "w": str(self.w)}
