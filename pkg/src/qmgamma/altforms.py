"""Gauss-type limit and Euler-type product for G_r(z+1; q).

Both are evaluated independently of the defining product: values of G_{r-1}
at shifted non-integer arguments come from ``qmg`` and values at integer
arguments from the exact closed-form products.  They serve as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combinatorics import gen_binom
from .errors import BudgetError, DomainError
from .qcore import EvalResult, Precision, QParam, as_qparam, log_q_number_checked, safe_exp
from .qmultigamma import (
    check_tol,
    euler_tail_bound,
    gauss_tail_bound,
    gauss_truncation_length,
    log_closed_ratio,
    log_integer_value,
    qmg,
)

_EPS = 2.0**-53


@dataclass(frozen=True)
class GaussPartial:
    N: int
    value: complex
    log_value: complex


def _log_shifted(r: int, w: complex, qp: QParam, prec: Precision) -> tuple[complex, float]:
    # log G_r(w) and its truncation bound; r = 0 is the q-number [w]
    if w.imag == 0 and w.real >= 1 and w.real == int(w.real):
        # integer arguments: the exact finite product, no truncation
        return complex(log_integer_value(r, int(w.real), qp)), 0.0
    if r == 0:
        return log_q_number_checked(qp, w, w), 0.0
    res = qmg(r, w, qp, prec, floor=False)
    return res.log_value, res.tail_bound


def log_qmg_gauss(r: int, z, qp: QParam, n: int, prec: Precision | None = None) -> tuple[complex, float]:
    """Log of the partial Gauss form at N and the summed inner truncation bound."""
    qp = as_qparam(qp)
    prec = prec or Precision()
    z = complex(z)
    if r < 1 or n < 1:
        raise DomainError(f"need r >= 1 and N >= 1, got r={r}, N={n}")
    if not z.real >= 0:
        raise DomainError(f"the Gauss form needs Re z >= 0, got {z}")
    acc = 0j
    inner = 0.0
    for k in range(1, n + 1):
        lw, tb = _log_shifted(r - 1, z + k, qp, prec)
        acc += log_integer_value(r - 1, k, qp) - lw
        inner += tb
    for m in range(1, r + 1):
        acc += gen_binom(z, m) * log_integer_value(r - m, n + 1, qp)
    return acc, inner


def qmg_gauss(r: int, z, qp: QParam, n: int, prec: Precision | None = None) -> GaussPartial:
    """Partial Gauss form

        [prod_{k=1}^{N} G_{r-1}(k) / G_{r-1}(z+k)] * prod_{m=1}^{r} G_{r-m}(N+1)^binom(z, m)

    which tends to G_r(z+1; q) as N grows (error bounded by
    ``gauss_tail_bound``).
    """
    log_val, _ = log_qmg_gauss(r, z, qp, n, prec)
    return GaussPartial(N=n, value=safe_exp(log_val), log_value=log_val)


def gauss_evaluate(r: int, z, qp: QParam, prec: Precision | None = None) -> EvalResult:
    """Gauss form at the smallest N whose bound, plus inner bounds, meets ``prec.tol``."""
    qp = as_qparam(qp)
    prec = prec or Precision()
    z = complex(z)
    check_tol(prec.tol)
    n, _ = gauss_truncation_length(r, z, qp, 0.5 * prec.tol, prec.max_terms, floor=False)
    try:
        inner_prec = Precision(0.5 * prec.tol / n, prec.max_terms, prec.max_continuation_steps)
    except DomainError as exc:
        raise BudgetError(str(exc)) from exc
    log_val, inner = log_qmg_gauss(r, z, qp, n, inner_prec)
    return EvalResult(
        value=safe_exp(log_val),
        log_value=log_val,
        terms_used=n,
        tail_bound=gauss_tail_bound(r, z, qp, n) + inner,
        method="gauss",
    )


def _euler_factor(r: int, z: complex, bz: list, k: int, qp: QParam, prec: Precision):
    lw, tb = _log_shifted(r - 1, z + k, qp, prec)
    f = log_integer_value(r - 1, k, qp) - lw
    for m in range(1, r + 1):
        f += bz[m] * log_closed_ratio(r - m, k, qp)
    # magnitude scale of the cancelling parts, for the rounding allowance
    scale = abs(lw) + sum(abs(bz[m]) for m in range(1, r + 1)) + 1.0
    return f, tb, scale


def euler_evaluate(
    r: int, z, qp: QParam, prec: Precision | None = None, n_terms: int | None = None
) -> tuple[EvalResult, float]:
    """Euler product plus a floating-point rounding allowance for its log.

    Each factor is a difference of logarithms of size ~|log G_{r-1}(z+n)|; the
    rounding of those differences is not a truncation effect, so it is
    returned separately from the tail bound.
    """
    qp = as_qparam(qp)
    prec = prec or Precision()
    z = complex(z)
    if r < 1:
        raise DomainError(f"need r >= 1, got {r}")
    if not z.real >= 0:
        raise DomainError(f"the Euler product needs Re z >= 0, got {z}")
    check_tol(prec.tol)
    if n_terms is None:
        n_terms, _ = gauss_truncation_length(
            r, z, qp, 0.5 * prec.tol * (1.0 - qp.q) / (1.0 + qp.q), prec.max_terms, floor=False
        )
    try:
        inner_prec = Precision(0.5 * prec.tol / n_terms, prec.max_terms, prec.max_continuation_steps)
    except DomainError as exc:
        raise BudgetError(str(exc)) from exc
    bz = [gen_binom(z, m) for m in range(r + 1)]
    acc = 0j
    inner = 0.0
    scale = 0.0
    for k in range(1, n_terms + 1):
        f, tb, sc = _euler_factor(r, z, bz, k, qp, inner_prec)
        acc += f
        inner += tb
        scale += sc
    res = EvalResult(
        value=safe_exp(acc),
        log_value=acc,
        terms_used=n_terms,
        tail_bound=euler_tail_bound(r, z, qp, n_terms) + inner,
        method="euler",
        continuation_steps=0,
    )
    return res, 8.0 * _EPS * scale


def qmg_euler(r: int, z, qp: QParam, prec: Precision | None = None, n_terms: int | None = None) -> EvalResult:
    """Euler-type product for G_r(z+1; q), Re z >= 0:

        prod_{n>=1} G_{r-1}(n) / G_{r-1}(z+n) * prod_{m=1}^{r} (G_{r-m}(n+1) / G_{r-m}(n))^binom(z, m).

    Half of ``prec.tol`` goes to the omitted factors, half to the inner
    evaluations of G_{r-1}(z+n).
    """
    return euler_evaluate(r, z, qp, prec, n_terms)[0]
