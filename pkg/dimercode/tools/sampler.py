"""
Randomized hard-dimer generator.

A run colours N sites with fair coin flips, then walks the sites left to right
choosing one base element per site. The only state carried between sites is
whether a dimer is open and its colour (``OpenState``). The last site may only
close a dimer or stay single; a dimer that cannot close there is marked with
the omission element ``x`` and not counted.

Every random choice consumes exactly one bit from a ``BitStream``: first the N
colour bits, then one bit for each element choice, left to right. Bit 0 means
red (for colours) or equal (for elements), bit 1 blue or right.
"""

import logging
from typing import Iterator, Optional, Sequence

import numpy as np

from dimercode.errors import InvalidConfigurationError, ParameterRangeError
from dimercode.models.dimer import Colour, Colouring, Dimer, HardDimer
from dimercode.models.sampling import (
    Attribute,
    BaseElement,
    OpenState,
    RunResult,
    SampleSpec,
)
from dimercode.tools.parallel import chunk_ranges, ordered_map

logger = logging.getLogger(__name__)

#: Stamp of the bit generator and its consumption order.
SAMPLER_VERSION = "pcg64-bits-v1"
#: Runs per substream; fixed so output does not depend on the thread count.
CHUNK_SIZE = 4096


class BitStream:
    """Uniform random bits from a PCG64 substream keyed by (seed, chunk_index)."""

    def __init__(self, seed: int, chunk_index: int = 0, block_size: int = 4096):
        sequence = np.random.SeedSequence([seed, chunk_index])
        self._rng = np.random.Generator(np.random.PCG64(sequence))
        self.block_size = block_size
        self._block: list[int] = []
        self._position = 0
        self.consumed = 0

    def _refill(self) -> None:
        self._block = self._rng.integers(0, 2, size=self.block_size, dtype=np.uint8).tolist()
        self._position = 0

    def bit(self) -> int:
        if self._position >= len(self._block):
            self._refill()
        value = self._block[self._position]
        self._position += 1
        self.consumed += 1
        return value

    def bits(self, count: int) -> list[int]:
        return [self.bit() for _ in range(count)]


def random_colouring(n: int, rng: BitStream) -> Colouring:
    """N independent fair colours (bit 1 = blue)."""
    if n < 1:
        raise ParameterRangeError(f"site count must be >= 1, got {n}")
    return Colouring(sites=tuple(Colour.BLUE if bit else Colour.RED for bit in rng.bits(n)))


def first_element(colour: Colour, rng: BitStream) -> BaseElement:
    """Equal or right of the site colour, each with probability 1/2."""
    attribute = Attribute.RIGHT if rng.bit() else Attribute.EQUAL
    return BaseElement.of(colour, attribute)


def transition(prev: BaseElement, next_colour: Colour, rng: BitStream) -> BaseElement:
    """
    Element of an interior site given its left neighbour.

    With no open dimer the site is equal or right at random. An open dimer of
    the site colour closes here (left); one of the other colour passes over it
    (mixed). Only the random branch consumes a bit.

    Raises:
        InvalidConfigurationError: prev is the omission marker
    """
    if prev is BaseElement.X:
        raise InvalidConfigurationError("the omission marker only ends a run")
    state = prev.open_state
    if state is OpenState.NONE:
        return first_element(next_colour, rng)
    if state.colour is next_colour:
        return BaseElement.of(next_colour, Attribute.LEFT)
    return BaseElement.of(next_colour, Attribute.MIXED)


def finalize(
    prev: BaseElement, last_colour: Colour, rng: Optional[BitStream] = None
) -> BaseElement:
    """
    Element of the last site: close the open dimer, stay single, or omit.

    Consumes no bits; ``rng`` is accepted for a uniform step signature.

    Raises:
        InvalidConfigurationError: prev is the omission marker
    """
    if prev is BaseElement.X:
        raise InvalidConfigurationError("the omission marker only ends a run")
    state = prev.open_state
    if state is OpenState.NONE:
        return BaseElement.of(last_colour, Attribute.EQUAL)
    if state.colour is last_colour:
        return BaseElement.of(last_colour, Attribute.LEFT)
    return BaseElement.X


def _walk(colouring: Colouring, rng: BitStream) -> list[BaseElement]:
    sites = colouring.sites
    elements = [first_element(sites[0], rng)]
    for colour in sites[1:-1]:
        elements.append(transition(elements[-1], colour, rng))
    elements.append(finalize(elements[-1], sites[-1], rng))
    return elements


def generate_run(n: int, rng: BitStream) -> RunResult:
    """
    One sampled configuration on N sites.

    Raises:
        ParameterRangeError: N < 2
    """
    if n < 2:
        raise ParameterRangeError(f"a run needs at least 2 sites, got {n}")
    colouring = random_colouring(n, rng)
    elements = _walk(colouring, rng)
    return RunResult(
        colouring=colouring,
        elements=tuple(elements),
        dimer_count=sum(1 for element in elements if element.attribute is Attribute.LEFT),
        omitted=elements[-1] is BaseElement.X,
    )


def dimers_from_elements(colouring: Colouring, elements: Sequence[BaseElement]) -> HardDimer:
    """
    Dimer set implied by an element sequence.

    Each left element closes the dimer opened by the latest right element of
    its colour; an open dimer left at an omission marker is dropped.

    Raises:
        InvalidConfigurationError: the sequence is not self-consistent
    """
    if len(elements) != len(colouring):
        raise InvalidConfigurationError("one element per site required")

    dimers = []
    open_at: Optional[int] = None
    open_colour: Optional[Colour] = None
    for position, (site, element) in enumerate(zip(colouring.sites, elements), 1):
        if element is BaseElement.X:
            if position != len(colouring) or open_at is None:
                raise InvalidConfigurationError(f"stray omission marker at site {position}")
            continue
        if element.colour is not site:
            raise InvalidConfigurationError(
                f"element {element.value} at site {position} does not match colour {site.value}"
            )
        attribute = element.attribute
        if attribute is Attribute.RIGHT:
            if open_at is not None:
                raise InvalidConfigurationError(f"dimer opened at {position} while one is open")
            open_at, open_colour = position, site
        elif attribute is Attribute.LEFT:
            if open_at is None or open_colour is not site:
                raise InvalidConfigurationError(
                    f"left element at {position} without an open dimer of its colour"
                )
            dimers.append(Dimer(start=open_at, end=position, colour=site))
            open_at = open_colour = None
        elif attribute is Attribute.MIXED:
            if open_at is None or open_colour is site:
                raise InvalidConfigurationError(
                    f"mixed element at {position} without an open dimer of the other colour"
                )
        elif open_at is not None:
            raise InvalidConfigurationError(f"single point at {position} inside an open dimer")
    return HardDimer(dimers=tuple(dimers))


def trace_line(run: RunResult) -> str:
    """``colouring TAB elements TAB count`` with comma-joined element tokens."""
    tokens = ",".join(element.value for element in run.elements)
    return f"{run.colouring.text}\t{tokens}\t{run.dimer_count}"


def _chunk_runs(seed: int, n: int, chunk_index: int, count: int) -> Iterator[RunResult]:
    rng = BitStream(seed, chunk_index)
    for _ in range(count):
        yield generate_run(n, rng)


def _chunk_counts(task: tuple[int, int, int, int]) -> np.ndarray:
    seed, n, chunk_index, count = task
    return np.fromiter(
        (run.dimer_count for run in _chunk_runs(seed, n, chunk_index, count)),
        dtype=np.int64,
        count=count,
    )


def _chunk_tasks(spec: SampleSpec) -> list[tuple[int, int, int, int]]:
    return [
        (spec.seed, spec.n, index, stop - start)
        for index, (start, stop) in enumerate(chunk_ranges(spec.m, CHUNK_SIZE))
    ]


def iter_runs(spec: SampleSpec) -> Iterator[RunResult]:
    """Every run of a sample, in output order, generated serially."""
    for seed, n, chunk_index, count in _chunk_tasks(spec):
        yield from _chunk_runs(seed, n, chunk_index, count)


def sample(spec: SampleSpec, threads: Optional[int] = None) -> np.ndarray:
    """
    Dimer counts of m independent runs.

    Runs are split into fixed chunks, each with its own substream; results are
    merged in chunk order, so output depends only on (seed, N, m) and
    SAMPLER_VERSION.
    """
    tasks = _chunk_tasks(spec)
    logger.debug("sampling %d runs of N=%d in %d chunks", spec.m, spec.n, len(tasks))
    return np.concatenate(ordered_map(_chunk_counts, tasks, threads))
