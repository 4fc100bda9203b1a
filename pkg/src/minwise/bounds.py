"""Closed-form size bounds for minwise and rankwise independent families."""

from __future__ import annotations

import math
from decimal import ROUND_CEILING, Context, Decimal
from functools import reduce


def lcm_upto(k: int) -> int:
    """lcm(1, 2, ..., k); lcm_upto(0) == 1."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return reduce(math.lcm, range(1, k + 1), 1)


def subfactorial(m: int) -> int:
    """Number of derangements of m symbols, !m = m! * sum_{i<=m} (-1)^i / i!."""
    if m < 0:
        raise ValueError("m must be non-negative")
    # exact integer form of the alternating sum
    return sum((-1) ** i * (math.factorial(m) // math.factorial(i)) for i in range(m + 1))


def lower_bound(n: int, k: int) -> int:
    """max{n, lcm(1..k)}: no k-restricted minwise independent family is smaller."""
    _check(n, k)
    return max(n, lcm_upto(k))


def upper_bound(n: int, k: int) -> int:
    """Ceiling of n^((1 + 1/ln n) k) * lcm(1..k-1).

    Since n^(1/ln n) = e the expression equals n^k e^k lcm(1..k-1), which is
    evaluated in decimal arithmetic with enough digits and rounded up.  For
    n = 1 the formula is undefined and the trivial size 1 is returned.
    """
    _check(n, k)
    if n == 1:
        return 1
    scale = n**k * lcm_upto(k - 1)
    digits = len(str(scale)) + k + 30
    ctx = Context(prec=digits, rounding=ROUND_CEILING)
    value = ctx.multiply(Decimal(scale), ctx.exp(Decimal(k)))
    return int(value.to_integral_value(rounding=ROUND_CEILING))


def bargachev_bound(n: int, k: int) -> int:
    """Lower bound on the size of a k-rankwise independent family on n symbols.

    E(n, k) = sum_{i=0}^{floor(k/2)} !i C(n, i); for odd k the term
    !ceil(k/2) C(n-1, floor(k/2)) is added.
    """
    _check(n, k)
    half = k // 2
    e = sum(subfactorial(i) * math.comb(n, i) for i in range(half + 1))
    if k % 2:
        e += subfactorial(half + 1) * math.comb(n - 1, half)
    return e


def _check(n: int, k: int) -> None:
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
