"""Pydantic models for the randomized hard-dimer generator."""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dimercode.models.dimer import Colour, Colouring


class Attribute(str, Enum):
    """Role of a site in a base element."""

    EQUAL = "e"
    RIGHT = "r"
    LEFT = "l"
    MIXED = "m"


class BaseElement(str, Enum):
    """Per-site building block: colour x attribute, plus the omission marker."""

    RE = "re"
    RR = "rr"
    RL = "rl"
    RM = "rm"
    BE = "be"
    BR = "br"
    BL = "bl"
    BM = "bm"
    X = "x"

    @classmethod
    def of(cls, colour: Colour, attribute: Attribute) -> "BaseElement":
        return cls(colour.value + attribute.value)

    @property
    def colour(self) -> Optional[Colour]:
        """Site colour, None for the omission marker."""
        if self is BaseElement.X:
            return None
        return Colour(self.value[0])

    @property
    def attribute(self) -> Optional[Attribute]:
        if self is BaseElement.X:
            return None
        return Attribute(self.value[1])

    @property
    def open_state(self) -> "OpenState":
        """Whether a dimer is open after this element, and its colour."""
        return _OPEN_AFTER.get(self, OpenState.NONE)


class OpenState(str, Enum):
    """Open dimer carried from one site to the next."""

    NONE = "none"
    OPEN_BLUE = "open_blue"
    OPEN_RED = "open_red"

    @property
    def colour(self) -> Optional[Colour]:
        if self is OpenState.OPEN_BLUE:
            return Colour.BLUE
        if self is OpenState.OPEN_RED:
            return Colour.RED
        return None

    @classmethod
    def opened_by(cls, colour: Colour) -> "OpenState":
        return cls.OPEN_BLUE if colour is Colour.BLUE else cls.OPEN_RED


_OPEN_AFTER = {
    BaseElement.BR: OpenState.OPEN_BLUE,
    BaseElement.RM: OpenState.OPEN_BLUE,
    BaseElement.RR: OpenState.OPEN_RED,
    BaseElement.BM: OpenState.OPEN_RED,
}


class RunResult(BaseModel):
    """One sampled configuration."""

    model_config = ConfigDict(frozen=True)

    colouring: Colouring = Field(..., description="Sampled site colours")
    elements: tuple[BaseElement, ...] = Field(..., description="One base element per site")
    dimer_count: int = Field(..., ge=0, description="Number of closed dimers")
    omitted: bool = Field(default=False, description="Last element is the omission marker")

    @model_validator(mode="after")
    def _check_consistency(self) -> "RunResult":
        if len(self.elements) != len(self.colouring):
            raise ValueError("one base element per site required")
        lefts = sum(1 for el in self.elements if el.attribute is Attribute.LEFT)
        if lefts != self.dimer_count:
            raise ValueError(f"dimer_count {self.dimer_count} != {lefts} left elements")
        if self.omitted != (self.elements[-1] is BaseElement.X):
            raise ValueError("omitted flag disagrees with the last element")
        if BaseElement.X in self.elements[:-1]:
            raise ValueError("omission marker before the last site")
        return self


class SampleSpec(BaseModel):
    """Size and seed of a random sample."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Sites per run")
    m: int = Field(..., ge=1, description="Number of runs")
    seed: int = Field(default=0, ge=0, lt=2**64, description="64-bit reproducibility seed")
