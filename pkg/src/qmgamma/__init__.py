"""Numerical q-analogues of the multiple gamma functions G_r(z; q), 0 < q < 1."""

from .altforms import GaussPartial, qmg_euler, qmg_gauss
from .combinatorics import g_exponent, gen_binom
from .errors import BudgetError, DomainError, PoleError, QMGError
from .kernels import BACKEND
from .qcore import (
    EvalResult,
    Precision,
    QParam,
    principal_log,
    q_gamma,
    q_number,
    q_pow,
)
from .qmultigamma import (
    LogProduct,
    log_qmg_deriv,
    log_qmg_product,
    qmg,
    qmg_integer_closed,
    truncation_length,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BudgetError",
    "DomainError",
    "EvalResult",
    "GaussPartial",
    "LogProduct",
    "PoleError",
    "Precision",
    "QMGError",
    "QParam",
    "g_exponent",
    "gen_binom",
    "log_qmg_deriv",
    "log_qmg_product",
    "principal_log",
    "q_gamma",
    "q_number",
    "q_pow",
    "qmg",
    "qmg_euler",
    "qmg_gauss",
    "qmg_integer_closed",
    "truncation_length",
]
