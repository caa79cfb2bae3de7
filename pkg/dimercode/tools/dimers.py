"""Dimer enumeration, hard-dimer counting and per-colouring generating functions.

Positions are 1-based everywhere in this module's public API. The private
helpers work on plain ``"rb..."`` strings so that census loops over millions of
colourings do not pay for model construction.
"""

import logging
from bisect import bisect_left
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

from dimercode.errors import (
    ColouringParseError,
    CountOverflowError,
    EnumerationLimitError,
    InvalidConfigurationError,
)
from dimercode.models.dimer import (
    Colour,
    Colouring,
    Dimer,
    DimerStats,
    GFParams,
    HardDimer,
    intervals_disjoint,
)
from dimercode.models.report import ArithmeticMode, Scalar

logger = logging.getLogger(__name__)

#: Largest dimer list the subset scan accepts.
ENUMERATION_LIMIT = 30
#: Largest count representable without wide-integer mode.
UINT64_MAX = 2**64 - 1

Span = tuple[int, int, str]
T = TypeVar("T")


class ZetaMethod(str, Enum):
    """Evaluation path for the per-colouring generating function."""

    LINEAR = "linear"
    ENUMERATION = "enumeration"


def parse_colouring(text: str) -> Colouring:
    """
    Parse the lowercase r/b text format.

    Raises:
        ColouringParseError: empty input or an illegal character (1-based offset)
    """
    if not text:
        raise ColouringParseError("colouring is empty")
    for offset, char in enumerate(text, 1):
        if char not in ("r", "b"):
            raise ColouringParseError(
                f"illegal character {char!r} at position {offset} (expected 'r' or 'b')",
                position=offset,
            )
    return Colouring(sites=tuple(Colour(char) for char in text))


def mask_text(mask: int, n: int) -> str:
    """Colouring text of a bitmask: bit i gives site i+1, 0 = red, 1 = blue."""
    return "".join("b" if (mask >> i) & 1 else "r" for i in range(n))


def colouring_from_mask(mask: int, n: int) -> Colouring:
    return parse_colouring(mask_text(mask, n))


def colour_swap(colouring: Colouring) -> Colouring:
    """Exchange red and blue on every site."""
    return Colouring(sites=tuple(site.other for site in colouring.sites))


def reverse(colouring: Colouring) -> Colouring:
    return Colouring(sites=tuple(reversed(colouring.sites)))


def dimer_spans(text: str) -> list[Span]:
    """(start, end, colour) for every nearest same-colour pair, sorted by (start, end)."""
    last: dict[str, int] = {}
    spans = []
    for position, char in enumerate(text, 1):
        previous = last.get(char)
        if previous is not None:
            spans.append((previous, position, char))
        last[char] = position
    spans.sort()
    return spans


def enumerate_dimers(colouring: Colouring) -> list[Dimer]:
    """All dimers of a colouring (the set ED), sorted by (start, end)."""
    return [
        Dimer(start=start, end=end, colour=Colour(char))
        for start, end, char in dimer_spans(colouring.text)
    ]


def is_hard(dimers: Iterable[Dimer]) -> bool:
    """True iff the closed intervals of the dimers are pairwise disjoint."""
    return intervals_disjoint(dimers)


def _conflict_masks(spans: Sequence[Span]) -> list[int]:
    masks = []
    for i, (start_i, end_i, _) in enumerate(spans):
        mask = 0
        for j, (start_j, end_j, _) in enumerate(spans):
            if i != j and start_i <= end_j and start_j <= end_i:
                mask |= 1 << j
        masks.append(mask)
    return masks


def _hard_subsets(spans: Sequence[Span]) -> Iterator[int]:
    """
    Bitmasks over ``spans`` whose members pairwise do not intersect, in mask order.

    Walks the subset tree from the highest bit down, leaving a bit out before
    putting it in, and prunes a branch as soon as two chosen spans intersect.
    """
    if len(spans) > ENUMERATION_LIMIT:
        raise EnumerationLimitError(len(spans), ENUMERATION_LIMIT)
    conflicts = _conflict_masks(spans)

    def extend(index: int, chosen: int) -> Iterator[int]:
        if index < 0:
            yield chosen
            return
        yield from extend(index - 1, chosen)
        if not conflicts[index] & chosen:
            yield from extend(index - 1, chosen | (1 << index))

    return extend(len(spans) - 1, 0)


def enumerate_hard_dimers(colouring: Colouring) -> Iterator[HardDimer]:
    """
    Yield every hard-dimer on the colouring, the empty one included.

    Order follows the subset bitmask over the sorted dimer list, so output is
    stable across runs.

    Raises:
        EnumerationLimitError: more than 30 dimers (use count_hard_dimers_dp)
    """
    dimers = enumerate_dimers(colouring)
    spans = [(d.start, d.end, d.colour.value) for d in dimers]
    for subset in _hard_subsets(spans):
        members = tuple(dimers[i] for i in range(len(dimers)) if (subset >> i) & 1)
        yield HardDimer(dimers=members)


def count_hard_dimers_bruteforce(colouring: Colouring, include_empty: bool = True) -> int:
    """Count hard-dimers by scanning all subsets of the dimer list."""
    return count_text_bruteforce(colouring.text, include_empty)


def count_text_bruteforce(text: str, include_empty: bool = True) -> int:
    total = sum(1 for _ in _hard_subsets(dimer_spans(text)))
    return total if include_empty else total - 1


def _interval_sum(spans: Sequence[Span], weight: Callable[[Span], T], one: T) -> list[T]:
    """
    Prefix sums of weighted independent sets over spans sorted by end.

    Entry j is the weighted number of hard subsets of the first j spans, using
    C(j) = C(j-1) + weight(j) * C(p(j)), where p(j) counts spans ending strictly
    before span j starts.
    """
    by_end = sorted(spans, key=lambda span: span[1])
    ends = [span[1] for span in by_end]
    table = [one]
    for j, span in enumerate(by_end):
        p = bisect_left(ends, span[0], 0, j)
        table.append(table[j] + weight(span) * table[p])
    return table


def count_text_dp(text: str, include_empty: bool = True, wide: bool = False) -> int:
    table = _interval_sum(dimer_spans(text), lambda _: 1, 1)
    total = table[-1]
    if not wide and total > UINT64_MAX:
        raise CountOverflowError(
            f"hard-dimer count for N={len(text)} exceeds the 64-bit unsigned range; "
            "retry with wide integers"
        )
    return total if include_empty else total - 1


def count_hard_dimers_dp(
    colouring: Colouring, include_empty: bool = True, wide: bool = False
) -> int:
    """
    Count hard-dimers in time linear in the number of dimers.

    Args:
        colouring: Site colours
        include_empty: Whether the empty configuration is counted
        wide: Allow results beyond 2**64 - 1

    Raises:
        CountOverflowError: count above 2**64 - 1 while ``wide`` is False
    """
    return count_text_dp(colouring.text, include_empty, wide)


def dimer_stats(hard_dimer: HardDimer, colouring: Colouring) -> DimerStats:
    """
    Dimer, crossing and single-point counts of a hard-dimer on a colouring.

    Raises:
        InvalidConfigurationError: a member dimer is not valid on the colouring
    """
    for dimer in hard_dimer.dimers:
        if not dimer.is_valid_on(colouring):
            raise InvalidConfigurationError(
                f"dimer ({dimer.start},{dimer.end},{dimer.colour.value}) is not a nearest "
                f"same-colour pair on {colouring.text}"
            )

    covered = [False] * len(colouring)
    n_b = n_r = n_br = 0
    for dimer in hard_dimer.dimers:
        if dimer.colour is Colour.BLUE:
            n_b += 1
        else:
            n_r += 1
        n_br += dimer.crossings
        for position in range(dimer.start, dimer.end + 1):
            covered[position - 1] = True

    gamma_b = gamma_r = 0
    for site, used in zip(colouring.sites, covered):
        if not used:
            if site is Colour.BLUE:
                gamma_b += 1
            else:
                gamma_r += 1

    return DimerStats(
        n_b=n_b,
        n_r=n_r,
        n_br=n_br,
        gamma_b=gamma_b,
        gamma_r=gamma_r,
        t=len(colouring) - gamma_b - gamma_r,
        s=n_b + n_r,
    )


def _weights(params: GFParams, mode: ArithmeticMode) -> tuple[Scalar, Scalar, Scalar]:
    if mode is ArithmeticMode.FLOAT:
        return float(params.u), float(params.v), float(params.w)
    return params.u, params.v, params.w


def zeta_text(text: str, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT) -> Scalar:
    """Linear-time generating function on a plain colouring string."""
    u, v, w = _weights(params, mode)
    one: Scalar = Fraction(1) if mode is ArithmeticMode.EXACT else 1.0
    powers = [one]
    for _ in range(len(text)):
        powers.append(powers[-1] * w)

    def weight(span: Span) -> Scalar:
        start, end, char = span
        return (u if char == "b" else v) * powers[end - start - 1]

    return _interval_sum(dimer_spans(text), weight, one)[-1]


def zeta(
    colouring: Colouring,
    params: GFParams,
    method: ZetaMethod = ZetaMethod.LINEAR,
    mode: ArithmeticMode = ArithmeticMode.EXACT,
) -> Scalar:
    """
    Generating function Z(u, v, w) of a colouring.

    Sums u^n_b * v^n_r * w^n_br over all hard-dimers; the empty configuration
    contributes 1. ``method=ENUMERATION`` is the reference path and refuses
    more than 30 dimers.
    """
    if method is ZetaMethod.LINEAR:
        return zeta_text(colouring.text, params, mode)

    u, v, w = _weights(params, mode)
    total: Scalar = Fraction(0) if mode is ArithmeticMode.EXACT else 0.0
    for hard_dimer in enumerate_hard_dimers(colouring):
        stats = dimer_stats(hard_dimer, colouring)
        total += u**stats.n_b * v**stats.n_r * w**stats.n_br
    logger.debug("zeta by enumeration on %s = %s", colouring.text, total)
    return total
