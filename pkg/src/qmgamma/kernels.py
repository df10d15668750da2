"""Hot summation loops behind the product evaluators.

Every kernel exists twice: a loop version compiled with numba ``@njit`` and a
vectorised numpy version.  The numba path is used when numba imports cleanly
and ``QMGAMMA_DISABLE_NUMBA`` is unset (or ``0``); otherwise the numpy path is
bound.  Sums are compensated (Neumaier in the loops, ``math.fsum`` in numpy):
the log-sums of high-order products reach 1e4 in magnitude while callers
compare them to a few ulps.

Logarithms of ``1 - w`` go through ``log1m`` rather than ``log(1 - w)``, and a
factor ratio (1 - q^(z+n)) / (1 - q^n) is taken as log(1 + q^n (1 - q^z) / (1 - q^n)):
the factors approach 1 geometrically and the naive forms lose the digits of
``q^n`` once it drops below eps.
"""

import cmath
import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "defining_series",
    "qgamma_series",
    "deriv_series",
    "weighted_log1m_qpow",
    "NUMPY_KERNELS",
    "NUMBA_KERNELS",
    "build_numba_kernels",
]


# ---------------------------------------------------------------- numpy path

def _np_log1m(w):
    # log(1 - w) for complex w with |w| < 1, accurate relative to |w|
    wre = w.real
    wim = w.imag
    mod = 0.5 * np.log1p(-2.0 * wre + wre * wre + wim * wim)
    arg = np.arctan2(-wim, 1.0 - wre)
    return mod + 1j * arg


def _np_rising_binom(n, k):
    # binom(n + k - 1, k) for an integer array n >= 1, as floats
    out = np.ones_like(n, dtype=np.float64)
    for j in range(1, k + 1):
        out *= (n + (j - 1)) / j
    return out


def _np_csum(terms):
    # correctly rounded sum of a complex array, real and imaginary parts apart
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _np_ratio_logs(a, log_q, n):
    # log((1 - q^(z+n)) / (1 - q^n)) = log(1 + q^n a / (1 - q^n)), a = 1 - q^z
    return _np_log1m(-(np.exp(n * log_q) / -np.expm1(n * log_q)) * a)


def np_defining_series(r, a, log_q, n_terms, bz):
    """Partial log-sum of the infinite product defining G_r(z+1; q).

    ``a`` is ``1 - q^z`` and ``bz[j]`` holds ``binom(z, j)`` for ``j = 0..r``.
    The prefactor ``(1-q)^(-binom(z, r))`` is not included.
    """
    if n_terms <= 0:
        return 0j
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    sign = -1.0 if r % 2 else 1.0
    d = _np_ratio_logs(a, log_q, n)
    ln = np.log1p(-np.exp(n * log_q))
    c = _np_rising_binom(n, r - 1)
    g = np.zeros(n_terms, dtype=np.complex128)
    b = np.ones_like(n)
    for m in range(1, r):
        if m > 1:
            b = b * (n + (m - 2)) / (m - 1)
        g += (1.0 if m % 2 else -1.0) * bz[r - m] * b
    return _np_csum(sign * c * d + g * ln)


def np_qgamma_series(a, log_q, n_terms):
    """Partial log-sum of prod_n ((1-q^(z+n))/(1-q^n))^(-1), a = 1 - q^z."""
    if n_terms <= 0:
        return 0j
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    return -_np_csum(_np_ratio_logs(a, log_q, n))


def np_deriv_series(r, z, log_q, n_terms):
    """Partial sum over k of k^r q^((z+1)k) / (1-q^k)^r (real z)."""
    if n_terms <= 0:
        return 0.0
    k = np.arange(1, n_terms + 1, dtype=np.float64)
    num = k**r * np.exp(k * (z + 1.0) * log_q)
    den = (-np.expm1(k * log_q)) ** r
    return math.fsum(num / den)


def np_weighted_log1m_qpow(weights, log_q):
    """sum_j weights[j-1] * log(1 - q^j) over j = 1..len(weights)."""
    if len(weights) == 0:
        return 0.0
    j = np.arange(1, len(weights) + 1, dtype=np.float64)
    return math.fsum(weights * np.log1p(-np.exp(j * log_q)))


NUMPY_KERNELS = {
    "defining_series": np_defining_series,
    "qgamma_series": np_qgamma_series,
    "deriv_series": np_deriv_series,
    "weighted_log1m_qpow": np_weighted_log1m_qpow,
}


# ---------------------------------------------------------------- numba path
# Plain loop bodies; compiled below when numba is wanted.  ``_log1m`` is a
# module global so the compiled kernels pick up the compiled helper.

def _log1m(w):
    wre = w.real
    wim = w.imag
    mod = 0.5 * math.log1p(-2.0 * wre + wre * wre + wim * wim)
    return complex(mod, math.atan2(-wim, 1.0 - wre))


def _ratio_log(a, log_q, n):
    u = math.exp(n * log_q) / -math.expm1(n * log_q)
    return _log1m(-u * a)


def _loop_defining_series(r, a, log_q, n_terms, bz):
    sign = -1.0 if r % 2 else 1.0
    acc = 0j
    comp = 0j
    for i in range(1, n_terms + 1):
        n = float(i)
        d = _ratio_log(a, log_q, n)
        ln = math.log1p(-math.exp(n * log_q))
        c = 1.0
        for j in range(1, r):
            c *= (n + (j - 1)) / j
        g = 0j
        b = 1.0
        for m in range(1, r):
            if m > 1:
                b = b * (n + (m - 2)) / (m - 1)
            if m % 2:
                g += bz[r - m] * b
            else:
                g -= bz[r - m] * b
        term = sign * c * d + g * ln
        # Neumaier compensation, real and imaginary parts separately
        t = acc + term
        cr = (acc.real - t.real) + term.real if abs(acc.real) >= abs(term.real) else (term.real - t.real) + acc.real
        ci = (acc.imag - t.imag) + term.imag if abs(acc.imag) >= abs(term.imag) else (term.imag - t.imag) + acc.imag
        comp += complex(cr, ci)
        acc = t
    return acc + comp


def _loop_qgamma_series(a, log_q, n_terms):
    acc = 0j
    comp = 0j
    for i in range(1, n_terms + 1):
        term = -_ratio_log(a, log_q, float(i))
        t = acc + term
        cr = (acc.real - t.real) + term.real if abs(acc.real) >= abs(term.real) else (term.real - t.real) + acc.real
        ci = (acc.imag - t.imag) + term.imag if abs(acc.imag) >= abs(term.imag) else (term.imag - t.imag) + acc.imag
        comp += complex(cr, ci)
        acc = t
    return acc + comp


def _loop_deriv_series(r, z, log_q, n_terms):
    acc = 0.0
    comp = 0.0
    for i in range(1, n_terms + 1):
        k = float(i)
        term = k**r * math.exp(k * (z + 1.0) * log_q) / (-math.expm1(k * log_q)) ** r
        t = acc + term
        comp += (acc - t) + term if abs(acc) >= abs(term) else (term - t) + acc
        acc = t
    return acc + comp


def _loop_weighted_log1m_qpow(weights, log_q):
    acc = 0.0
    comp = 0.0
    for i in range(len(weights)):
        term = weights[i] * math.log1p(-math.exp((i + 1.0) * log_q))
        t = acc + term
        comp += (acc - t) + term if abs(acc) >= abs(term) else (term - t) + acc
        acc = t
    return acc + comp


def _numba_wanted():
    flag = os.environ.get("QMGAMMA_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


def build_numba_kernels():
    """Compile the loop kernels; raises ImportError without numba."""
    global _log1m, _ratio_log
    from numba import njit

    if not hasattr(_log1m, "py_func"):
        _log1m = njit(cache=True)(_log1m)
        _ratio_log = njit(cache=True)(_ratio_log)
    return {
        "defining_series": njit(cache=True)(_loop_defining_series),
        "qgamma_series": njit(cache=True)(_loop_qgamma_series),
        "deriv_series": njit(cache=True)(_loop_deriv_series),
        "weighted_log1m_qpow": njit(cache=True)(_loop_weighted_log1m_qpow),
    }


NUMBA_KERNELS = None
if _numba_wanted():
    try:
        NUMBA_KERNELS = build_numba_kernels()
    except ImportError:
        NUMBA_KERNELS = None

BACKEND = "numba" if NUMBA_KERNELS is not None else "numpy"
_active = NUMBA_KERNELS if NUMBA_KERNELS is not None else NUMPY_KERNELS

defining_series = _active["defining_series"]
qgamma_series = _active["qgamma_series"]
deriv_series = _active["deriv_series"]
weighted_log1m_qpow = _active["weighted_log1m_qpow"]
