"""Base q-arithmetic and the q-gamma function.

Complex arguments are plain Python ``complex``.  Products are evaluated as
sums of principal-branch logarithms of the individual factors and exponentiated
once at the end.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Literal

from . import kernels
from .errors import BudgetError, DomainError, PoleError

POLE_THRESHOLD = 1e-13
# q is rejected above this: terms decay like q^n, certified sums get too long
Q_MAX = 1.0 - 1e-6
# a log-domain tolerance below one ulp of 1 cannot be certified in doubles
TOL_FLOOR = 2.0**-52

Method = Literal["product", "gauss", "euler", "recurrence", "closed"]


@dataclass(frozen=True)
class QParam:
    """The base ``q`` together with its cached natural logarithm."""

    q: float
    log_q: float = field(init=False, repr=False)
    log1mq: float = field(init=False, repr=False)

    def __post_init__(self):
        q = float(self.q)
        if not (0.0 < q < 1.0):
            raise DomainError(f"q must lie in (0, 1), got {self.q!r}")
        if q > Q_MAX:
            raise DomainError(f"q must not exceed 1 - 1e-6, got {self.q!r}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "log_q", math.log(q))
        object.__setattr__(self, "log1mq", math.log1p(-q))


@dataclass(frozen=True)
class Precision:
    """Target absolute error on the log of a result, plus work budgets."""

    tol: float = 1e-12
    max_terms: int = 200_000
    max_continuation_steps: int = 1000

    def __post_init__(self):
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")
        if self.max_continuation_steps < 1:
            raise DomainError(
                f"max_continuation_steps must be >= 1, got {self.max_continuation_steps!r}"
            )


@dataclass(frozen=True)
class EvalResult:
    value: complex
    log_value: complex
    terms_used: int
    tail_bound: float
    method: Method
    continuation_steps: int = 0


def safe_exp(w: complex) -> complex:
    """exp(w), with modulus inf (phase kept) instead of OverflowError."""
    w = complex(w)
    try:
        return cmath.exp(w)
    except OverflowError:
        return complex(math.inf * math.cos(w.imag), math.inf * math.sin(w.imag))


def as_qparam(q) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


def q_pow(qp: QParam, z) -> complex:
    """q**z as exp(z log q)."""
    return cmath.exp(complex(z) * qp.log_q)


def _expm1(w: complex) -> complex:
    # exp(w) - 1 without cancellation for small |w|
    a, b = w.real, w.imag
    re = math.expm1(a) * math.cos(b) - 2.0 * math.sin(0.5 * b) ** 2
    im = math.exp(a) * math.sin(b)
    return complex(re, im)


def q_number(qp: QParam, z) -> complex:
    """The q-number [z] = (1 - q^z) / (1 - q)."""
    return -_expm1(complex(z) * qp.log_q) / (1.0 - qp.q)


def principal_log(v) -> complex:
    """log|v| + i arg v with arg in (-pi, pi]."""
    v = complex(v)
    if v == 0:
        raise DomainError("logarithm of zero")
    out = cmath.log(v)
    if out.imag == -math.pi:
        out = complex(out.real, math.pi)
    return out


def log1m(w: complex) -> complex:
    """Principal log(1 - w), accurate for small |w|."""
    w = complex(w)
    mod = 0.5 * math.log1p(-2.0 * w.real + w.real * w.real + w.imag * w.imag)
    return complex(mod, math.atan2(-w.imag, 1.0 - w.real))


def log_q_number(qp: QParam, z) -> complex:
    """Principal log of [z], computed from log(1 - q^z) - log(1 - q)."""
    w = q_pow(qp, z)
    if abs(w) < 1.0:
        return log1m(w) - qp.log1mq
    return principal_log(q_number(qp, z))


# ---------------------------------------------------------------- q-gamma

def _qgamma_tail(qp: QParam, x: float, n: int) -> float:
    # sum_{m>n} |log(1-q^(z+m))| + |log(1-q^m)|, with x = Re z > -1
    q = qp.q
    head = q ** (n + 1) / (1.0 - q)
    return head * (q**x / (1.0 - q ** (x + n + 1)) + 1.0 / (1.0 - q ** (n + 1)))


def _qgamma_length(qp: QParam, x: float, tol: float, max_terms: int) -> tuple[int, float]:
    if tol < TOL_FLOOR:
        raise BudgetError(f"tolerance {tol!r} is below double-precision resolution")
    # first guess from the leading geometric factor, then walk to the minimum
    guess = math.log(tol * (1.0 - qp.q) / (1.0 + qp.q**x)) / qp.log_q
    n = max(1, int(guess))
    while n > 1 and _qgamma_tail(qp, x, n - 1) <= tol:
        n -= 1
    while _qgamma_tail(qp, x, n) > tol:
        n += 1
    if n > max_terms:
        raise BudgetError(f"q-gamma product needs more than {max_terms} terms")
    return n, _qgamma_tail(qp, x, n)


def q_gamma(qp: QParam, z, prec: Precision | None = None, n_terms: int | None = None) -> EvalResult:
    """Gamma(z+1; q) from the infinite product

        (1-q)^(-z) * prod_{n>=1} ((1 - q^(z+n)) / (1 - q^n))^(-1),

    used directly for Re z > -1 and through Gamma(z+1) = [z] Gamma(z)
    otherwise.  ``n_terms`` fixes the truncation length instead.
    """
    qp = as_qparam(qp)
    prec = prec or Precision()
    z = complex(z)
    steps = 0
    shift = 0j
    if z.real <= -1.0:
        steps = int(math.floor(-z.real))
        if steps > prec.max_continuation_steps:
            raise BudgetError(f"{steps} continuation steps exceed the budget")
        shift = -sum((log_q_number_checked(qp, z + j, z + 1) for j in range(1, steps + 1)), 0j)
    w = z + steps
    # Re w > -1, so only the first factor 1 - q^(w+1) can come close to zero
    if abs(_expm1((w + 1) * qp.log_q)) < POLE_THRESHOLD:
        raise PoleError(z + 1)
    if n_terms is None:
        n_terms, bound = _qgamma_length(qp, w.real, prec.tol, prec.max_terms)
    else:
        bound = _qgamma_tail(qp, w.real, n_terms)
    log_val = -w * qp.log1mq + kernels.qgamma_series(-_expm1(w * qp.log_q), qp.log_q, n_terms) + shift
    return EvalResult(
        value=safe_exp(log_val),
        log_value=log_val,
        terms_used=n_terms,
        tail_bound=bound,
        method="recurrence" if steps else "product",
        continuation_steps=steps,
    )


def log_q_number_checked(qp: QParam, z, location) -> complex:
    """log [z], raising PoleError at ``location`` when 1 - q^z vanishes."""
    num = -_expm1(complex(z) * qp.log_q)
    if abs(num) < POLE_THRESHOLD:
        raise PoleError(location)
    return log_q_number(qp, z)


def q_gamma_gauss(qp: QParam, z, n: int) -> complex:
    """Partial Gauss form [1]...[N] / ([z+1]...[z+N]) * [N+1]^z (Re z > -1)."""
    qp = as_qparam(qp)
    z = complex(z)
    acc = 0j
    for k in range(1, n + 1):
        acc += log_q_number(qp, k) - log_q_number_checked(qp, z + k, z + 1)
    acc += z * log_q_number(qp, n + 1)
    return cmath.exp(acc)


def q_gamma_euler(qp: QParam, z, n: int) -> complex:
    """Partial Euler product of ([k+1]/[k])^z ([z+k]/[k])^(-1), k = 1..N."""
    qp = as_qparam(qp)
    z = complex(z)
    acc = 0j
    for k in range(1, n + 1):
        lk = log_q_number(qp, k)
        acc += z * (log_q_number(qp, k + 1) - lk)
        acc -= log_q_number_checked(qp, z + k, z + 1) - lk
    return cmath.exp(acc)
