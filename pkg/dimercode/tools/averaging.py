"""
Averaged generating function, its series and closed forms, bounds and identities.

Exact mode works on ``Fraction`` values with arbitrary-precision binomials and is
the verification default. Float mode evaluates in binary64; the averaged formula
is summed in log space so that large N never overflows an intermediate binomial.
Bounds are irrational (square roots, e, pi) and are evaluated as 50-digit
``Decimal`` values, which also keeps (A + 1)**N finite for N in the hundreds.
"""

import logging
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

import numpy as np

from dimercode.errors import BudgetExceededError, ParameterRangeError
from dimercode.models.dimer import GFParams
from dimercode.models.report import (
    ArithmeticMode,
    BoundConstants,
    BoundsResult,
    Scalar,
)
from dimercode.tools.dimers import mask_text, zeta_text

logger = logging.getLogger(__name__)

#: Largest N accepted by the 2^N brute-force average.
BRUTEFORCE_MAX_N = 24
#: Working precision for bounds and audits.
DECIMAL_DIGITS = 50
PI = Decimal("3.14159265358979323846264338327950288419716939937510582097494459")


class BinomialTable:
    """Exact binomial coefficients from cached Pascal rows.

    C(n, k) is 0 for k < 0 or k > n. Rows above ``row_limit`` are not cached and
    fall back to ``math.comb``.
    """

    def __init__(self, row_limit: int = 1024):
        self.row_limit = row_limit
        self._rows: list[list[int]] = [[1]]

    def _extend(self, n: int) -> None:
        rows = self._rows
        while len(rows) <= n:
            previous = rows[-1]
            rows.append([1] + [a + b for a, b in zip(previous, previous[1:])] + [1])

    def comb(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            return 0
        if n > self.row_limit:
            return math.comb(n, k)
        if n >= len(self._rows):
            self._extend(n)
        return self._rows[n][k]


BINOMIALS = BinomialTable()


def _one(mode: ArithmeticMode) -> Scalar:
    return Fraction(1) if mode is ArithmeticMode.EXACT else 1.0


def _zero(mode: ArithmeticMode) -> Scalar:
    return Fraction(0) if mode is ArithmeticMode.EXACT else 0.0


def _cast(value: Fraction, mode: ArithmeticMode) -> Scalar:
    return value if mode is ArithmeticMode.EXACT else float(value)


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterRangeError(f"site count must be >= 1, got {n}")


def avg_zeta_bruteforce(
    n: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT
) -> Scalar:
    """
    Mean of Z over all 2^N colourings, by direct enumeration.

    Raises:
        BudgetExceededError: N outside 1..24
    """
    if not 1 <= n <= BRUTEFORCE_MAX_N:
        raise BudgetExceededError(
            f"brute-force average needs 1 <= N <= {BRUTEFORCE_MAX_N}, got N={n}"
        )
    total = _zero(mode)
    for mask in range(1 << n):
        total += zeta_text(mask_text(mask, n), params, mode)
    return total / (1 << n)


def avg_zeta_formula(
    n: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT
) -> Scalar:
    """
    Averaged generating function from its explicit double sum.

    1 + sum_{t=1}^{N} sum_{s=1}^{t//2} C(N-t+s, s) C(t-s-1, s-1) x^s y^(t-2s)
    with x = (u+v)/4 and y = w/2.
    """
    _check_n(n)
    if mode is ArithmeticMode.FLOAT:
        return _avg_zeta_formula_float(n, params)

    x = (params.u + params.v) / 4
    y = params.w / 2
    x_powers = [Fraction(1)]
    y_powers = [Fraction(1)]
    for _ in range(n):
        x_powers.append(x_powers[-1] * x)
        y_powers.append(y_powers[-1] * y)

    total = Fraction(1)
    for t in range(1, n + 1):
        for s in range(1, t // 2 + 1):
            coefficient = BINOMIALS.comb(n - t + s, s) * BINOMIALS.comb(t - s - 1, s - 1)
            total += coefficient * x_powers[s] * y_powers[t - 2 * s]
    return total


def _log_factorials(n: int) -> np.ndarray:
    return np.array([math.lgamma(k + 1) for k in range(n + 1)])


def _avg_zeta_formula_float(n: int, params: GFParams) -> float:
    x = float(params.u + params.v) / 4
    y = float(params.w) / 2
    log_x = math.log(x)
    log_y = math.log(y) if y > 0 else -math.inf
    lf = _log_factorials(n)

    row_sums = [0.0]  # log of the leading 1
    for t in range(2, n + 1):
        s = np.arange(1, t // 2 + 1)
        free = t - 2 * s
        if y == 0:
            keep = free == 0
            if not keep.any():
                continue
            s, free = s[keep], free[keep]
        log_terms = (
            lf[n - t + s] - lf[s] - lf[n - t]
            + lf[t - s - 1] - lf[s - 1] - lf[free]
            + s * log_x
        )
        if y > 0:
            log_terms = log_terms + free * log_y
        peak = float(log_terms.max())
        row_sums.append(peak + math.log(float(np.exp(log_terms - peak).sum())))

    logs = np.array(row_sums)
    peak = float(logs.max())
    log_total = peak + math.log(float(np.exp(logs - peak).sum()))
    try:
        return math.exp(log_total)
    except OverflowError:
        logger.warning("averaged generating function overflows binary64 at N=%d", n)
        return math.inf


def avg_zeta_sequence(
    n_max: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT
) -> list[Scalar]:
    """
    Averaged generating function for N = 1..n_max in one pass.

    Colourings with a hard-dimer decompose into single points and dimer blocks,
    which gives f(N) = (1 + y) f(N-1) - (y - x) f(N-2), f(0) = f(1) = 1,
    with x = (u+v)/4 and y = w/2.
    """
    _check_n(n_max)
    x = _cast((params.u + params.v) / 4, mode)
    y = _cast(params.w / 2, mode)
    before, current = _one(mode), _one(mode)
    values = [current]
    for _ in range(2, n_max + 1):
        before, current = current, (1 + y) * current - (y - x) * before
        values.append(current)
    return values


def series_direct(n: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT) -> Scalar:
    """sum_{t=1}^{N} sum_{s=1}^{t//2} C(N,2s) C(N-2s,t-2s) (u+v)^s (w/2)^(t-2s), summed directly."""
    _check_n(n)
    uv = _cast(params.u + params.v, mode)
    y = _cast(params.w / 2, mode)
    total = _zero(mode)
    for t in range(1, n + 1):
        for s in range(1, t // 2 + 1):
            coefficient = BINOMIALS.comb(n, 2 * s) * BINOMIALS.comb(n - 2 * s, t - 2 * s)
            total += coefficient * uv**s * y ** (t - 2 * s)
    return total


def series_full_closed(n: int, params: GFParams) -> Fraction:
    """
    The series with s and t starting from 0, in closed form.

    Equals 1/2 [(a + b)^N + (b - a)^N] with a = sqrt(u+v), b = 1 + w/2; the odd
    powers of a cancel, so the value is the exact rational
    sum_j C(N, 2j) (u+v)^j b^(N-2j).
    """
    _check_n(n)
    uv = params.u + params.v
    b = 1 + params.w / 2
    return sum(
        (BINOMIALS.comb(n, 2 * j) * uv**j * b ** (n - 2 * j) for j in range(n // 2 + 1)),
        Fraction(0),
    )


def _half_sum_float(n: int, params: GFParams) -> float:
    a = math.sqrt(float(params.u + params.v))
    b = 1 + float(params.w) / 2
    return 0.5 * ((a + b) ** n + (b - a) ** n)


def series_closed_paper(
    n: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT
) -> Scalar:
    """Published closed form 1/2 [(sqrt(u+v) + w/2 + 1)^N + (-sqrt(u+v) + w/2 + 1)^N] - 1."""
    _check_n(n)
    if mode is ArithmeticMode.FLOAT:
        return _half_sum_float(n, params) - 1
    return series_full_closed(n, params) - 1


def series_closed_candidate(
    n: int, params: GFParams, mode: ArithmeticMode = ArithmeticMode.EXACT
) -> Scalar:
    """
    Corrected closed form: the half sum minus (1 + w/2)^N.

    The terms with s = 0 and t >= 1 sum to (1 + w/2)^N - 1, so subtracting only
    the t = s = 0 term leaves them in; this form removes all of them and equals
    series_direct exactly.
    """
    _check_n(n)
    if mode is ArithmeticMode.FLOAT:
        return _half_sum_float(n, params) - (1 + float(params.w) / 2) ** n
    return series_full_closed(n, params) - (1 + params.w / 2) ** n


def to_decimal(value: Scalar) -> Decimal:
    """Fraction or float to a Decimal in the current context."""
    if isinstance(value, Fraction):
        return Decimal(value.numerator) / Decimal(value.denominator)
    return Decimal(value)


def bound_constants(params: GFParams) -> BoundConstants:
    """A, C1 and C for the given weights (50 significant digits)."""
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        root = to_decimal(params.u + params.v).sqrt()
        half_w = to_decimal(params.w) / 2
        a = root + half_w
        c1 = (Decimal(-1) / 6).exp() * (2 / PI).sqrt()
        ratio = (to_decimal(params.w) + 2) / (a + 1)
        c = c1 / 2 * min(Decimal(1), ratio)
        return BoundConstants(a=+a, c1=+c1, c=+c)


def bounds(
    n: int, params: GFParams, constants: Optional[BoundConstants] = None
) -> BoundsResult:
    """
    Lower and upper estimates of the averaged generating function.

    lower = 1 - C1/(2^N sqrt N) + (C/sqrt N) ((A+1)/2)^N
    upper = 1 - 1/sqrt N + (1/sqrt N) (A+1)^N

    Raises:
        ParameterRangeError: N < 1 or a weight that is not strictly positive
    """
    _check_n(n)
    if not params.is_interior:
        raise ParameterRangeError("bounds need strictly positive u, v, w")
    if constants is None:
        constants = bound_constants(params)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        root_n = Decimal(n).sqrt()
        a1 = constants.a + 1
        lower = 1 - constants.c1 / (Decimal(2) ** n * root_n) + constants.c / root_n * (a1 / 2) ** n
        upper = 1 - 1 / root_n + a1**n / root_n
    return BoundsResult(n=n, lower=lower, upper=upper, constants=constants)


def lower_bound_series(n: int, params: GFParams) -> Decimal:
    """Lower estimate before the closed form is substituted: 1 + C1/(2^N sqrt N) * S.

    S is the series in its exact O(N) form, equal to series_direct.
    """
    _check_n(n)
    c1 = bound_constants(params).c1
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        s = to_decimal(series_closed_candidate(n, params))
        return 1 + c1 / (Decimal(2) ** n * Decimal(n).sqrt()) * s


def upper_bound_series(n: int, params: GFParams) -> Decimal:
    """Upper estimate before the closed form is substituted: 1 + S / sqrt N."""
    _check_n(n)
    with localcontext() as ctx:
        ctx.prec = DECIMAL_DIGITS
        return 1 + to_decimal(series_closed_candidate(n, params)) / Decimal(n).sqrt()


def identity_2_12(n: int, t: int, s: int) -> tuple[int, Fraction]:
    """
    Rearrangement of the averaged-formula coefficient.

    lhs = C(N-t+s, s) C(t-s-1, s-1)
    rhs = s C(2s, s) / (N C(N-1, t-s-1)) * C(N, 2s) C(N-2s, t-2s)

    Raises:
        ParameterRangeError: unless 1 <= s <= t//2 and t <= N
    """
    if not (1 <= s <= t // 2 and t <= n):
        raise ParameterRangeError(f"need 1 <= s <= t//2 and t <= N, got N={n}, t={t}, s={s}")
    comb = BINOMIALS.comb
    lhs = comb(n - t + s, s) * comb(t - s - 1, s - 1)
    rhs = (
        Fraction(s * comb(2 * s, s), n * comb(n - 1, t - s - 1))
        * comb(n, 2 * s)
        * comb(n - 2 * s, t - 2 * s)
    )
    return lhs, rhs


def identity_2_18(n: int, k: int, t: Fraction) -> tuple[Fraction, Fraction]:
    """
    sum_{nu=0}^{k} C(n, nu) C(n-nu, k-nu) t^nu = C(n, k) (t+1)^k.

    Raises:
        ParameterRangeError: unless 0 <= k <= n
    """
    if not 0 <= k <= n:
        raise ParameterRangeError(f"need 0 <= k <= n, got n={n}, k={k}")
    t = Fraction(t)
    comb = BINOMIALS.comb
    lhs = sum((comb(n, nu) * comb(n - nu, k - nu) * t**nu for nu in range(k + 1)), Fraction(0))
    rhs = comb(n, k) * (t + 1) ** k
    return lhs, Fraction(rhs)
