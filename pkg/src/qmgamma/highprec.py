"""Multiprecision reference for log G_r(x+1; q) at real x > -1.

A deliberately plain transcription of the defining product in mpmath, used
as the function side of the finite-difference check on the log-convexity
series.  Nothing here is fast.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp


def _binom(x, k):
    acc = mp.mpf(1)
    for j in range(k):
        acc *= x - j
    return acc / math.factorial(k)


def log_qmg_mp(r: int, x, q, dps: int = 40):
    """log G_r(x+1; q) for real x > -1 and r >= 1, to roughly ``dps`` digits."""
    with mp.workdps(dps + 10):
        x = mp.mpf(x)
        q = mp.mpf(q)
        eps = mp.mpf(10) ** (-dps - 5)
        l1 = mp.log(1 - q)
        total = -_binom(x, r) * l1
        sign = -1 if r % 2 else 1
        bz = [_binom(x, j) for j in range(r + 1)]
        n = 0
        while True:
            n += 1
            ln = mp.log(1 - q**n)
            lz = mp.log(1 - q ** (x + n))
            c = mp.mpf(math.comb(n + r - 2, r - 1))
            g = mp.mpf(0)
            for m in range(1, r):
                g += (-1) ** (m - 1) * bz[r - m] * math.comb(n + m - 2, m - 1)
            term = sign * c * (lz - ln) + g * ln
            total += term
            # polynomial-times-geometric decay; stop well past the requested digits
            if n > 10 and abs(term) * n < eps and q**n * (n + r) ** r < eps:
                break
        return total


def central_stencil(order: int) -> list[tuple[Fraction, Fraction]]:
    """Fourth-order accurate central stencil for the ``order``-th derivative.

    Returns (offset, weight) pairs: f^(p)(x) ~ sum w f(x + o h) / h^p.  Even
    orders use integer offsets, odd orders half-integer ones, with ``p + 3``
    points in both cases.
    """
    p = order
    if p % 2 == 0:
        s = p // 2 + 1
        offsets = [Fraction(i) for i in range(-s, s + 1)]
    else:
        s = (p + 2) // 2
        offsets = [Fraction(2 * i + 1, 2) for i in range(-s - 1, s + 1)]
    npts = len(offsets)
    # moment conditions sum_i w_i o_i^j = p! [j == p], j = 0..npts-1
    a = [[o**j for o in offsets] for j in range(npts)]
    b = [Fraction(math.factorial(p)) if j == p else Fraction(0) for j in range(npts)]
    w = _solve(a, b)
    return list(zip(offsets, w))


def _solve(a, b):
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(i for i in range(col, n) if m[i][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col] / m[col][col]
                m[i] = [u - f * v for u, v in zip(m[i], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def fd_log_derivative(r: int, z: float, q: float, h: float = 1e-2, dps: int = 40) -> float:
    """(r+1)-th central finite difference of log G_r(x+1; q) at x = z, step h."""
    p = r + 1
    with mp.workdps(dps + 10):
        hh = mp.mpf(h)
        acc = mp.mpf(0)
        for off, w in central_stencil(p):
            x = mp.mpf(z) + mp.mpf(off.numerator) / off.denominator * hh
            acc += mp.mpf(w.numerator) / w.denominator * log_qmg_mp(r, x, q, dps)
        return float(acc / hh**p)
