"""The q-multiple gamma functions G_r(z; q).

For Re z >= 0 and r >= 1,

    G_r(z+1; q) = (1-q)^(-binom(z, r))
                  * prod_{n>=1} ((1-q^(z+n)) / (1-q^n))^((-1)^r binom(n+r-2, r-1))
                                * (1-q^n)^(g_r(z, n)),

with G_0(z+1; q) = [z+1].  Everywhere else G_r is reached by running
G_r(z+1) = G_{r-1}(z) G_r(z) backwards from the right half plane.

``log G_r`` is the factorwise principal-log sum of the product above; this is
one fixed continuous branch on the half plane.  Values compared across
different evaluation routes should be compared after exponentiation.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .combinatorics import gen_binom, int_binom
from .errors import BudgetError, DomainError, PoleError
from .qcore import (
    TOL_FLOOR,
    EvalResult,
    Precision,
    QParam,
    _expm1,
    as_qparam,
    log_q_number,
    log_q_number_checked,
    safe_exp,
)

_START_TERMS = 16

_recorder: contextvars.ContextVar[list | None] = contextvars.ContextVar("_recorder", default=None)


@contextlib.contextmanager
def record_products():
    """Collect (r, z, q, tol, max_terms) for every controller-sized product call."""
    log: list = []
    token = _recorder.set(log)
    try:
        yield log
    finally:
        _recorder.reset(token)


@dataclass(frozen=True)
class LogProduct:
    log_sum: complex
    terms_used: int
    tail_bound: float


# ---------------------------------------------------------------- tail bounds

def poly_geometric_tail(j: int, n: int, x: float) -> float:
    """Exact sum_{m>n} binom(m+j-1, j) x^m for 0 <= x < 1.

    Closed form x^(n+1) sum_{i=0}^{j} binom(n+j, j-i) x^i / (1-x)^(i+1),
    i.e. the j-th derivative of the geometric series, shifted past ``n``.
    """
    if x == 0.0:
        return 0.0
    head = x ** (n + 1)
    if head == 0.0:
        return 0.0
    acc = 0.0
    for i in range(j + 1):
        acc += float(math.comb(n + j, j - i)) * x**i / (1.0 - x) ** (i + 1)
    return head * acc


def product_tail_bound(r: int, z, qp: QParam, n: int) -> float:
    """Upper bound on the summed moduli of the log-factors with index > n.

    Each omitted factor satisfies |log(1-w)| <= |w| / (1-|w|), so the tail is
    majorised by

        sum_{m>n} [(1 + q^Re z) binom(m+r-2, r-1) + |g_r(z, m)|] q^m / (1 - q^(n+1))

    with |g_r(z, m)| <= sum_k |binom(z, r-k)| binom(m+k-2, k-1).
    """
    z = complex(z)
    q = qp.q
    acc = (1.0 + q**z.real) * poly_geometric_tail(r - 1, n, q)
    for m in range(1, r):
        acc += abs(gen_binom(z, r - m)) * poly_geometric_tail(m - 1, n, q)
    return acc / (1.0 - q ** (n + 1))


def check_tol(tol: float) -> None:
    """BudgetError for a requested tolerance finer than double precision can certify."""
    if tol < TOL_FLOOR:
        raise BudgetError(f"tolerance {tol!r} is below double-precision resolution")


def _smallest_n(bound: Callable[[int], float], tol: float, max_terms: int, what: str):
    # doubling from 16 to bracket, then bisection; bound is non-increasing in n
    lo, hi = 0, _START_TERMS
    while bound(hi) > tol:
        if hi >= max_terms:
            raise BudgetError(f"{what}: no truncation within {max_terms} terms meets tol={tol!r}")
        lo, hi = hi, min(2 * hi, max_terms)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bound(mid) <= tol:
            hi = mid
        else:
            lo = mid
    return hi, bound(hi)


def truncation_length(r: int, z, qp: QParam, tol: float, max_terms: int = 200_000, floor: bool = True):
    """Smallest N whose product tail bound is <= tol; returns (N, bound).

    ``floor=False`` skips the double-precision tolerance check, for callers
    that have split a user tolerance into many smaller pieces.
    """
    if r < 1:
        raise DomainError("the defining product needs r >= 1")
    z = complex(z)
    if not z.real >= 0:
        raise DomainError(f"the defining product needs Re z >= 0, got {z}")
    if floor:
        check_tol(tol)
    qp = as_qparam(qp)
    return _smallest_n(
        lambda n: product_tail_bound(r, z, qp, n), tol, max_terms, "defining product"
    )


# ---------------------------------------------------------------- products

def _binoms(z: complex, r: int) -> np.ndarray:
    return np.array([gen_binom(z, j) for j in range(r + 1)], dtype=np.complex128)


def log_qmg_product(
    r: int, z, qp: QParam, prec: Precision | None = None, n_terms: int | None = None,
    floor: bool = True,
) -> LogProduct:
    """log G_r(z+1; q) from the defining product, Re z >= 0, r >= 1.

    ``n_terms`` overrides the truncation controller (the reported bound is
    then recomputed for that length).
    """
    qp = as_qparam(qp)
    prec = prec or Precision()
    z = complex(z)
    if n_terms is None:
        n_terms, bound = truncation_length(r, z, qp, prec.tol, prec.max_terms, floor)
        log = _recorder.get()
        if log is not None:
            log.append((r, z, qp.q, prec.tol, prec.max_terms))
    else:
        if r < 1 or not z.real >= 0:
            raise DomainError("the defining product needs r >= 1 and Re z >= 0")
        bound = product_tail_bound(r, z, qp, n_terms)
    bz = _binoms(z, r)
    series = kernels.defining_series(r, -_expm1(z * qp.log_q), qp.log_q, n_terms, bz)
    return LogProduct(-bz[r] * qp.log1mq + complex(series), n_terms, bound)


def _leaf_count(r: int, z: complex, memo: dict) -> int:
    # number of product evaluations in the continuation tree, with multiplicity
    if r == 0:
        return 0
    if z.real > 1.0:
        return 1
    key = (r, z)
    if key not in memo:
        k = int(math.floor(1.0 - z.real)) + 1
        memo[key] = _leaf_count(r, z + k, memo) + sum(_leaf_count(r - 1, z + j, memo) for j in range(k))
    return memo[key]


class _Walk:
    """Shared state of one continuation: memo of visited nodes, work counters."""

    __slots__ = ("qp", "prec", "memo", "terms", "steps", "budget")

    def __init__(self, qp: QParam, prec: Precision):
        self.qp = qp
        self.prec = prec
        self.memo: dict = {}
        self.terms = 0
        self.steps = 0
        self.budget = prec.max_continuation_steps


def _log_qmg(r: int, z: complex, walk: _Walk) -> tuple[complex, float]:
    # (log G_r(z), error bound of that log); bounds of shared nodes add up
    # once per use, which is what the final sum sees
    qp = walk.qp
    if r == 0:
        return log_q_number_checked(qp, z, z), 0.0
    key = (r, z)
    hit = walk.memo.get(key)
    if hit is not None:
        return hit
    if z.real > 1.0:
        lp = log_qmg_product(r, z - 1, qp, walk.prec, floor=False)
        walk.terms += lp.terms_used
        out = (lp.log_sum, lp.tail_bound)
    else:
        k = int(math.floor(1.0 - z.real)) + 1
        walk.steps += k
        if walk.steps > walk.budget:
            raise BudgetError(f"more than {walk.budget} continuation steps required")
        acc, tail = _log_qmg(r, z + k, walk)
        for j in range(k):
            # every singular point enters through a vanishing q-number [w] at
            # the bottom of the recursion, which raises there
            div, tb = _log_qmg(r - 1, z + j, walk)
            acc -= div
            tail += tb
        out = (acc, tail)
    walk.memo[key] = out
    return out


def qmg(r: int, z, qp: QParam, prec: Precision | None = None, floor: bool = True) -> EvalResult:
    """G_r(z; q) anywhere off its singular set.

    Re z > 1 uses the defining product at z - 1.  Otherwise z is shifted right
    by k unit steps and G_r(z) = G_r(z+k) / prod_{j<k} G_{r-1}(z+j), with the
    divisors evaluated recursively down to G_0 = [z].  The tolerance is split
    evenly over every product the continuation uses, so ``tail_bound`` of the
    result stays within ``prec.tol``.
    """
    if r < 0:
        raise DomainError(f"order r must be >= 0, got {r}")
    qp = as_qparam(qp)
    prec = prec or Precision()
    if floor:
        check_tol(prec.tol)
    z = complex(z)
    if r == 0:
        log_val = log_q_number_checked(qp, z, z)
        return EvalResult(safe_exp(log_val), log_val, 0, 0.0, "closed")
    if z.real <= 1.0 and int(math.floor(1.0 - z.real)) + 1 > prec.max_continuation_steps:
        raise BudgetError(f"more than {prec.max_continuation_steps} continuation steps required")
    leaves = _leaf_count(r, z, {})
    sub = Precision(prec.tol / max(1, leaves), prec.max_terms, prec.max_continuation_steps)
    walk = _Walk(qp, sub)
    try:
        log_val, tail = _log_qmg(r, z, walk)
    except PoleError as exc:
        # report the requested point, not the inner divisor that vanished
        raise PoleError(z) from exc
    return EvalResult(
        value=safe_exp(log_val),
        log_value=log_val,
        terms_used=walk.terms,
        tail_bound=tail,
        method="recurrence" if walk.steps else "product",
        continuation_steps=walk.steps,
    )


# ---------------------------------------------------------------- integer points

def log_qmg_integer_closed(r: int, n: int, qp: QParam) -> float:
    """log G_r(N+1; q) = -binom(N, r) log(1-q) + sum_k binom(N-k, r-1) log(1-q^k)."""
    if r < 1 or n < 0:
        raise DomainError(f"need r >= 1 and N >= 0, got r={r}, N={n}")
    qp = as_qparam(qp)
    if n == 0:
        return 0.0
    weights = np.array([float(math.comb(n - k, r - 1)) for k in range(1, n + 1)])
    return -float(math.comb(n, r)) * qp.log1mq + float(kernels.weighted_log1m_qpow(weights, qp.log_q))


def qmg_integer_closed(r: int, n: int, qp: QParam) -> complex:
    """Exact finite product for G_r(N+1; q), N >= 0."""
    return safe_exp(log_qmg_integer_closed(r, n, qp))


def log_integer_value(s: int, n: int, qp: QParam) -> float:
    """log G_s(n; q) for integer n >= 1, including s = 0 (log [n])."""
    if s == 0:
        return log_q_number(qp, n).real
    return log_qmg_integer_closed(s, n - 1, qp)


def log_closed_ratio(s: int, n: int, qp: QParam) -> float:
    """log(G_s(n+1) / G_s(n)) for integer n >= 1.

    The two closed-form products share their factors, so the exponents are
    subtracted exactly (as integers) before any logarithm is weighted.
    """
    qp = as_qparam(qp)
    if s == 0:
        return (log_q_number(qp, n + 1) - log_q_number(qp, n)).real
    # G_s(n+1) uses exponents binom(n-k, s-1), G_s(n) uses binom(n-1-k, s-1)
    weights = np.array(
        [float(int_binom(n - k, s - 1) - (int_binom(n - 1 - k, s - 1) if k < n else 0))
         for k in range(1, n + 1)]
    )
    coeff = math.comb(n, s) - math.comb(n - 1, s)
    return -float(coeff) * qp.log1mq + float(kernels.weighted_log1m_qpow(weights, qp.log_q))


# ---------------------------------------------------------------- Gauss-form truncation

def gauss_tail_bound(r: int, z, qp: QParam, n: int) -> float:
    """Bound on |log(Gauss partial at N) - log G_r(z+1)|.

    Write log G_r(x+1) = P(x) + phi(x) with P a polynomial of degree <= r and
    phi(x) = (-1)^r sum_m binom(m+r-2, r-1) log(1-q^(x+m)).  The partial
    Gauss form at N differs from G_r(z+1) exactly by the Newton interpolation
    error of phi at N, and |phi(x)| <= q^Re x S / (1 - q^(Re x+1)) with
    S = q / (1-q)^r.
    """
    z = complex(z)
    q = qp.q
    x = z.real
    s = q / (1.0 - q) ** r
    newton = sum(abs(gen_binom(z, m)) * (1.0 + q) ** m for m in range(r + 1))
    return q**n * s * (q**x / (1.0 - q ** (n + x + 1)) + newton / (1.0 - q ** (n + 1)))


def gauss_truncation_length(
    r: int, z, qp: QParam, tol: float, max_terms: int = 200_000, floor: bool = True
):
    """Smallest N with gauss_tail_bound(N) <= tol; returns (N, bound)."""
    z = complex(z)
    if r < 1 or not z.real >= 0:
        raise DomainError("the Gauss form needs r >= 1 and Re z >= 0")
    if floor:
        check_tol(tol)
    qp = as_qparam(qp)
    return _smallest_n(lambda n: gauss_tail_bound(r, z, qp, n), tol, max_terms, "Gauss form")


def euler_tail_bound(r: int, z, qp: QParam, n: int) -> float:
    """Bound on the summed moduli of the Euler log-factors with index > N.

    Factor k is the difference of the Gauss errors at k and k-1, and the
    Gauss bound decays at least like q^k, hence the (1+q)/(1-q) multiplier.
    """
    q = qp.q
    return gauss_tail_bound(r, z, qp, n) * (1.0 + q) / (1.0 - q)


# ---------------------------------------------------------------- log-convexity series

def deriv_tail_bound(r: int, z: float, qp: QParam, k: int) -> float:
    """Bound on the omitted part of the (r+1)-th log-derivative series past k.

    Uses j^r <= r! binom(j+r-1, r) and 1 - q^j >= 1 - q^(k+1) for j > k.
    """
    q = qp.q
    x = q ** (z + 1.0)
    pref = (-qp.log_q) ** (r + 1) * math.factorial(r)
    return pref * poly_geometric_tail(r, k, x) / (1.0 - q ** (k + 1)) ** r


def log_qmg_deriv(r: int, z: float, qp: QParam, prec: Precision | None = None) -> float:
    """d^(r+1)/dz^(r+1) log G_r(z+1; q) for real z >= 0.

    The double series (-log q)^(r+1) sum_n sum_k binom(n+r-2, r-1) k^r q^((z+n)k)
    is summed over n in closed form, sum_n binom(n+r-2, r-1) q^(nk) =
    q^k / (1-q^k)^r, leaving a single positive series in k.
    """
    if r < 1:
        raise DomainError(f"order r must be >= 1, got {r}")
    z = float(z)
    if z < 0:
        raise DomainError(f"z must be real and >= 0, got {z}")
    qp = as_qparam(qp)
    prec = prec or Precision()
    check_tol(prec.tol)
    k, _ = _smallest_n(
        lambda m: deriv_tail_bound(r, z, qp, m), prec.tol, prec.max_terms, "derivative series"
    )
    return (-qp.log_q) ** (r + 1) * float(kernels.deriv_series(r, z, qp.log_q, k))
