"""Generalised binomial coefficients and the exponents g_r(z, n)."""

from __future__ import annotations

import math


def gen_binom(z, k: int) -> complex:
    """binom(z, k) = z (z-1) ... (z-k+1) / k! for any complex ``z``.

    Zero for integer ``0 <= z < k`` and ``(-1)^k binom(k-z-1, k)`` for negative
    integer ``z`` -- both fall out of the falling factorial.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    z = complex(z)
    acc = 1 + 0j
    for j in range(k):
        acc *= z - j
    return acc / math.factorial(k)


def int_binom(n: int, k: int) -> int:
    """Exact binom(n, k) for integer ``n`` of either sign (falling factorial)."""
    if k < 0:
        return 0
    if n >= 0:
        return math.comb(n, k)
    return (-1) ** k * math.comb(k - n - 1, k)


def g_exponent(r: int, z, n: int) -> complex:
    """g_r(z, n) = sum_{m=1}^{r-1} (-1)^(m-1) binom(z, r-m) binom(n+m-2, m-1).

    ``g_1`` is identically zero.
    """
    if r < 1 or n < 1:
        raise ValueError(f"need r >= 1 and n >= 1, got r={r}, n={n}")
    acc = 0j
    for m in range(1, r):
        acc += (-1) ** (m - 1) * gen_binom(z, r - m) * math.comb(n + m - 2, m - 1)
    return acc
