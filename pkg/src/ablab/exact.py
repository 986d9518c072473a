"""Exact integer/rational helpers: k-th roots, rational-exponent power
comparisons, and certified brackets for ratios of logarithms.

Everything here is float-free.  Logarithm ratios are bracketed by running
the continued-fraction expansion of log(value)/log(base) with exact
power comparisons, so the returned endpoints are true rational bounds.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def floor_kth_root(n: int, k: int) -> int:
    """Largest r with r**k <= n, for n >= 0 and k >= 1 (integer Newton)."""
    if n < 0 or k < 1:
        raise ValueError("floor_kth_root requires n >= 0 and k >= 1")
    if k == 1 or n in (0, 1):
        return n
    x = 1 << (-(-n.bit_length() // k))  # power-of-two seed >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def ceil_kth_root(n: int, k: int) -> int:
    """Smallest r with r**k >= n."""
    r = floor_kth_root(n, k)
    return r if r ** k == n else r + 1


def ceil_pow(base: int, exponent: Fraction) -> int:
    """ceil(base**exponent) for base >= 1 and rational exponent >= 0."""
    if base < 1 or exponent < 0:
        raise ValueError("ceil_pow requires base >= 1 and exponent >= 0")
    return ceil_kth_root(base ** exponent.numerator, exponent.denominator)


def cmp_vs_pow(x: Fraction, base: Fraction, exponent: Fraction) -> int:
    """Sign of x - base**exponent, decided by cross-multiplied powers."""
    if x <= 0 or base <= 0:
        raise ValueError("cmp_vs_pow requires positive x and base")
    lhs = Fraction(x) ** exponent.denominator
    rhs = Fraction(base) ** exponent.numerator
    return (lhs > rhs) - (lhs < rhs)


def cmp_log_ratio(value: Fraction, base: Fraction, r: Fraction) -> int:
    """Sign of log(value)/log(base) - r, for value >= 1 and base > 1."""
    value, base = Fraction(value), Fraction(base)
    if value < 1 or base <= 1:
        raise ValueError("cmp_log_ratio requires value >= 1 and base > 1")
    return cmp_vs_pow(value, base, r)


def _partial_bracket(p_prev: int, q_prev: int, p_cur: int, q_cur: int,
                     digit_min: int) -> tuple[Fraction, Fraction]:
    """Bracket of t from knowing the next partial quotient is >= digit_min.

    With tail y >= digit_min, t = (p_cur*y + p_prev)/(q_cur*y + q_prev)
    lies between the value at y = digit_min and the limit p_cur/q_cur.
    """
    near = Fraction(p_cur * digit_min + p_prev, q_cur * digit_min + q_prev)
    far = Fraction(p_cur, q_cur)
    return (near, far) if near <= far else (far, near)


def log_ratio_bounds(
    value: Fraction | int,
    base: Fraction | int,
    tol: Fraction = Fraction(1, 1 << 20),
) -> tuple[Fraction, Fraction]:
    """Certified bracket [lo, hi] of log(value)/log(base) with hi - lo <= tol.

    Requires value >= 1 and base > 1.  Runs the continued-fraction
    expansion of the ratio with exact power comparisons; consecutive
    convergents supply the bracket, and an exact power hit terminates
    with a zero-width answer.  A huge partial quotient is never ground
    out fully: once a lower bound on it already pins the value to
    within tol, that partial bracket is returned instead.
    """
    a_side, b_side = Fraction(value), Fraction(base)
    if a_side < 1 or b_side <= 1 or tol <= 0:
        raise ValueError("log_ratio_bounds requires value >= 1, base > 1, tol > 0")
    if a_side == 1:
        return (ZERO, ZERO)

    # h_{-2}/k_{-2} = 0/1, h_{-1}/k_{-1} = 1/0 seed the convergent recurrence
    p_prev, q_prev, p_cur, q_cur = 0, 1, 1, 0
    while True:
        def narrow_enough(digit_min: int) -> bool:
            return (q_cur > 0
                    and Fraction(1, q_cur * (q_cur * digit_min + q_prev)) <= tol)

        # floor(log a / log b) by doubling then bisection, bailing out as
        # soon as a lower bound on the digit makes the bracket narrow
        digit = None
        if b_side > a_side:
            digit = 0
        else:
            low, power = 1, b_side
            while True:
                if narrow_enough(low):
                    return _partial_bracket(p_prev, q_prev, p_cur, q_cur, low)
                square = power * power
                if square <= a_side:
                    low, power = 2 * low, square
                else:
                    break
            high = 2 * low  # b**low <= a < b**high
            while high - low > 1:
                mid = (low + high) // 2
                if b_side ** mid <= a_side:
                    low = mid
                    if narrow_enough(low):
                        return _partial_bracket(p_prev, q_prev, p_cur, q_cur, low)
                else:
                    high = mid
            digit = low

        p_prev, q_prev, p_cur, q_cur = (
            p_cur,
            q_cur,
            digit * p_cur + p_prev,
            digit * q_cur + q_prev,
        )
        remainder = a_side / b_side ** digit
        if remainder == 1:
            exact = Fraction(p_cur, q_cur)
            return (exact, exact)
        if q_prev > 0 and Fraction(1, q_cur * q_prev) <= tol:
            c1, c2 = Fraction(p_cur, q_cur), Fraction(p_prev, q_prev)
            return (c1, c2) if c1 <= c2 else (c2, c1)
        a_side, b_side = b_side, remainder


def parse_rational(text: str | int | float) -> Fraction:
    """Parse "num/den", decimal, or integer text into an exact Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError("refusing to coerce a float to an exact rational")
    return Fraction(str(text).strip())


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "num/den" ("num" alone when integral)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
