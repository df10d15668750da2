"""Seeded invariant families shared by ``qmgamma check`` and the test suite.

Every family returns a :class:`Residual`: the largest residual observed over
its sample and the threshold it must stay under.  Random samples come from
``numpy.random.default_rng(seed)`` so a seed fixes the whole report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import altforms, highprec, qcore, qmultigamma
from .combinatorics import g_exponent, gen_binom, int_binom
from .qcore import Precision, QParam, q_gamma, q_number
from .qmultigamma import log_qmg_deriv, log_qmg_product, qmg, qmg_integer_closed

FE_QS = (0.2, 0.5, 0.9)
CLOSED_QS = (0.1, 0.5, 0.9)
ALT_QS = (0.3, 0.7)
_EPS = 2.0**-52


@dataclass(frozen=True)
class Residual:
    name: str
    value: float
    threshold: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.value < self.threshold

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag}  {self.name:<32s} max={self.value:.3e}  thr={self.threshold:.0e}  n={self.samples}"


def random_z(rng, count, re=(0.1, 5.0), im=(-3.0, 3.0)) -> list[complex]:
    a = rng.uniform(re[0], re[1], count)
    b = rng.uniform(im[0], im[1], count)
    return [complex(x, y) for x, y in zip(a, b)]


def log_distance(a: complex, b: complex) -> float:
    """|exp(a - b) - 1|: relative distance of exp(a) and exp(b), branch-free."""
    d = complex(a) - complex(b)
    d = complex(d.real, math.remainder(d.imag, 2.0 * math.pi))
    return abs(qcore._expm1(d))


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / abs(a)


# ---------------------------------------------------------------- qcore

def qgamma_functional_equation(seed=0, tol=1e-14, count=200) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count)
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for z in zs:
            lhs = q_gamma(qp, z, prec).log_value
            rhs = qcore.log_q_number(qp, z) + q_gamma(qp, z - 1, prec).log_value
            worst = max(worst, log_distance(lhs, rhs))
    return Residual("qgamma functional equation", worst, 1e-10, count * len(FE_QS))


def qgamma_integer_factorial(seed=0, tol=1e-14, n_max=30) -> Residual:
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        fact = 1.0
        for n in range(1, n_max + 1):
            fact *= q_number(qp, n).real
            worst = max(worst, rel(fact, q_gamma(qp, n, prec).value))
    return Residual("qgamma integer factorial", worst, 1e-12, n_max * len(FE_QS))


def qgamma_three_forms(seed=0, tol=1e-14, count=50) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count)
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for z in zs:
            n, _ = qmultigamma.gauss_truncation_length(1, z, qp, 1e-11)
            ne, _ = qmultigamma.gauss_truncation_length(1, z, qp, 1e-11 * (1 - q) / (1 + q))
            prod = q_gamma(qp, z, prec).value
            gauss = qcore.q_gamma_gauss(qp, z, n)
            euler = qcore.q_gamma_euler(qp, z, ne)
            worst = max(worst, rel(prod, gauss), rel(prod, euler), rel(gauss, euler))
    return Residual("qgamma product/Gauss/Euler", worst, 1e-9, count * len(FE_QS))


def q_number_identity(seed=0, tol=None, count=200) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(0.0, 5.0))
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for z in zs:
            worst = max(worst, abs(q_number(qp, z + 1) - q * q_number(qp, z) - 1.0))
    return Residual("[z+1] - q[z] = 1", worst, 1e-14, count * len(FE_QS))


# ---------------------------------------------------------------- combinatorics

def _scaled(res: complex, *parts) -> float:
    return abs(res) / max(1.0, sum(abs(p) for p in parts))


def g_difference_identity(seed=0, tol=None, count=100) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(-5.0, 5.0))
    worst = 0.0
    for r in range(2, 6):
        for n in range(1, 21):
            for z in zs:
                lhs = g_exponent(r, z, n) - g_exponent(r, z - 1, n)
                rhs = g_exponent(r - 1, z - 1, n) - (-1) ** (r - 1) * int_binom(n + r - 3, r - 2)
                worst = max(worst, _scaled(lhs - rhs, g_exponent(r, z, n), rhs))
    return Residual("g_r difference identity", worst, 1e-12, 4 * 20 * count)


def binomial_sum_identity(seed=0, tol=None, count=100) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(-5.0, 5.0))
    worst = 0.0
    for r in range(2, 6):
        for big_n in range(1, 16):
            for z in zs:
                lhs = sum(gen_binom(z, m) * math.comb(big_n, r - m) for m in range(1, r))
                rhs = sum(
                    gen_binom(z + n - 1, r - 1) - math.comb(n - 1, r - 1) for n in range(1, big_n + 1)
                )
                worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1.0))
    return Residual("binomial sum identity", worst, 1e-12, 4 * 15 * count)


def g_recursion_identity(seed=0, tol=None, count=30) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(-5.0, 5.0))
    worst = 0.0
    for r in range(2, 5):
        for big_n in range(1, 11):
            for n in range(1, 11):
                for z in zs:
                    a = sum(int_binom(big_n - n, r - m) * gen_binom(z, m) for m in range(1, r + 2))
                    b = sum(g_exponent(r, z + k - 1, n) - g_exponent(r, k - 1, n) for k in range(1, big_n + 1))
                    c = g_exponent(r + 1, z, n)
                    worst = max(worst, _scaled(a - b - c, a, b, c))
    return Residual("g_r summation identity", worst, 1e-12, 3 * 100 * count)


def pascal_rule(seed=0, tol=None, count=100) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(-5.0, 5.0))
    worst = 0.0
    for k in range(1, 9):
        for z in zs:
            a = gen_binom(z, k)
            b = gen_binom(z - 1, k) + gen_binom(z - 1, k - 1)
            worst = max(worst, _scaled(a - b, a, b))
    return Residual("Pascal rule", worst, 1e-12, 8 * count)


# ---------------------------------------------------------------- qmultigamma

def functional_equation(seed=0, tol=1e-14, count=100) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count)
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for r in range(1, 5):
            for z in zs:
                lhs = qmg(r, z + 1, qp, prec).log_value
                rhs = qmg(r - 1, z, qp, prec).log_value + qmg(r, z, qp, prec).log_value
                worst = max(worst, log_distance(lhs, rhs))
    return Residual("G_r functional equation", worst, 1e-10, 4 * count * len(FE_QS))


def normalization(seed=0, tol=1e-14) -> Residual:
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        for r in range(0, 6):
            worst = max(worst, abs(qmg(r, 1, q, prec).log_value))
    return Residual("G_r(1) = 1", worst, 1e-12, 6 * len(FE_QS))


def closed_form(seed=0, tol=1e-14) -> Residual:
    prec = Precision(tol)
    worst = 0.0
    for q in CLOSED_QS:
        qp = QParam(q)
        for r in range(1, 5):
            for n in range(1, 21):
                a = qmg(r, n + 1, qp, prec).log_value
                b = qmultigamma.log_qmg_integer_closed(r, n, qp)
                worst = max(worst, log_distance(a, b))
    return Residual("closed form at integers", worst, 1e-11, 4 * 20 * len(CLOSED_QS))


def reduction(seed=0, tol=1e-14, count=100) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count)
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for z in zs:
            worst = max(worst, log_distance(qmg(1, z + 1, qp, prec).log_value, q_gamma(qp, z, prec).log_value))
            worst = max(worst, rel(q_number(qp, z), qmg(0, z, qp, prec).value))
    return Residual("G_1 = q-gamma, G_0 = [z]", worst, 1e-12, 2 * count * len(FE_QS))


def continuation_consistency(seed=0, tol=1e-14, count=50) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(1.05, 5.0))
    prec = Precision(tol)
    worst = 0.0
    for q in FE_QS:
        qp = QParam(q)
        for r in range(1, 5):
            for z in zs:
                direct = qmg(r, z, qp, prec).log_value
                stepped = qmg(r, z + 1, qp, prec).log_value - qmg(r - 1, z, qp, prec).log_value
                worst = max(worst, log_distance(direct, stepped))
    return Residual("one-step continuation", worst, 1e-10, 4 * count * len(FE_QS))


DERIV_ZS = tuple(0.5 * i for i in range(21))


def deriv_positivity(seed=0, tol=1e-14) -> Residual:
    # residual: 1 if any value is <= 0, else 0
    prec = Precision(tol)
    bad = 0.0
    count = 0
    for q in FE_QS:
        qp = QParam(q)
        for r in range(1, 5):
            for z in DERIV_ZS:
                count += 1
                if not log_qmg_deriv(r, z, qp, prec) > 0.0:
                    bad = 1.0
    return Residual("log-convexity series > 0", bad, 0.5, count)


def deriv_finite_difference(seed=0, tol=1e-14, q=0.5, h=1e-2) -> Residual:
    prec = Precision(tol)
    qp = QParam(q)
    worst = 0.0
    for r in range(1, 5):
        for z in DERIV_ZS:
            series = log_qmg_deriv(r, z, qp, prec)
            fd = highprec.fd_log_derivative(r, z, q, h, dps=30)
            worst = max(worst, abs(fd - series) / abs(series))
    return Residual("series vs finite difference", worst, 1e-5, 4 * len(DERIV_ZS))


# ---------------------------------------------------------------- altforms

def three_way(seed=0, tol=1e-14, count=30, euler_tol=None, record=None) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(0.1, 4.0))
    prec = Precision(tol)
    eprec = Precision(euler_tol if euler_tol is not None else tol * 1e4)
    worst = 0.0
    for q in ALT_QS:
        qp = QParam(q)
        for r in range(1, 4):
            for z in zs:
                prod = log_qmg_product(r, z, qp, prec).log_sum
                n, _ = qmultigamma.gauss_truncation_length(r, z, qp, eprec.tol)
                gauss, _ = altforms.log_qmg_gauss(r, z, qp, n, prec)
                euler, allowance = altforms.euler_evaluate(r, z, qp, eprec)
                if record is not None:
                    record.append((r, z, q, eprec, euler, allowance))
                worst = max(
                    worst,
                    log_distance(prod, gauss),
                    log_distance(prod, euler.log_value),
                    log_distance(gauss, euler.log_value),
                )
    return Residual("product/Gauss/Euler agreement", worst, 1e-8, 3 * count * len(ALT_QS))


def gauss_convergence(seed=0, tol=1e-14, count=10) -> Residual:
    # residual: largest ratio defect(2N) / defect(N); must stay below 1
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(0.1, 4.0))
    prec = Precision(tol)
    worst = 0.0
    for q in ALT_QS:
        qp = QParam(q)
        for r in range(1, 4):
            for z in zs:
                exact = log_qmg_product(r, z, qp, prec).log_sum
                defects = []
                for n in (1, 2, 4, 8):
                    g, _ = altforms.log_qmg_gauss(r, z, qp, n, prec)
                    defects.append(log_distance(g, exact))
                for a, b in zip(defects, defects[1:]):
                    worst = max(worst, b / a)
    return Residual("Gauss defect shrinks with 2N", worst, 1.0, 3 * 3 * count * len(ALT_QS))


def telescoping(seed=0, tol=1e-14, count=5, depth=120) -> Residual:
    rng = np.random.default_rng(seed)
    zs = random_z(rng, count, re=(0.1, 4.0))
    qp = QParam(0.5)
    ell = lambda w: qcore.log1m(qcore.q_pow(qp, w))
    worst = 0.0
    for r in (2, 3):
        sign = (-1) ** r
        for z in zs:
            ratio = [0j] + [ell(z + p) - ell(p) for p in range(1, 2 * depth + 1)]
            lhs = 0j
            for k in range(1, depth + 1):
                e = sign * int_binom(k + r - 3, r - 2)
                lhs += e * sum(ratio[n + k - 1] for n in range(1, depth + 1))
            rhs = sum(sign * math.comb(n + r - 2, r - 1) * ratio[n] for n in range(1, 2 * depth + 1))
            worst = max(worst, log_distance(lhs, rhs))
    return Residual("telescoping double product", worst, 1e-8, 2 * count)


# ---------------------------------------------------------------- truncation soundness

def product_doubling_defect(r, z, q, prec) -> tuple[float, float]:
    """(|change in log_sum when N doubles|, tail_bound + rounding allowance)."""
    qp = QParam(q)
    lp = log_qmg_product(r, z, qp, prec, floor=False)
    lp2 = log_qmg_product(r, z, qp, prec, n_terms=2 * lp.terms_used)
    allowance = 8.0 * _EPS * max(1.0, abs(lp.log_sum))
    return abs(lp2.log_sum - lp.log_sum), lp.tail_bound + allowance


def qgamma_doubling_defect(q, z, prec) -> tuple[float, float]:
    qp = QParam(q)
    res = q_gamma(qp, z, prec)
    again = q_gamma(qp, z, prec, n_terms=2 * res.terms_used)
    allowance = 8.0 * _EPS * max(1.0, abs(res.log_value))
    return abs(again.log_value - res.log_value), res.tail_bound + allowance


def _qgamma_points(seed, count=200):
    # the q-gamma evaluations made by the q-gamma and reduction families
    zs = random_z(np.random.default_rng(seed), count)
    pts = [z for z in zs] + [z - 1 for z in zs] + list(range(1, 31))
    pts += random_z(np.random.default_rng(seed), 100)
    return [complex(z) for z in pts]


def truncation_soundness(seed=0, tol=1e-14, suites: Callable | None = None) -> Residual:
    """Re-run every product evaluation made by the suites at twice the length."""
    seen = set()
    calls = []
    euler_calls = []
    with qmultigamma.record_products() as log:
        for fam in (qgamma_functional_equation, functional_equation, normalization, closed_form, reduction):
            fam(seed, tol)
        three_way(seed, tol, record=euler_calls)
        calls.extend(log)
    worst = 0.0
    for r, z, q, ptol, pmax in calls:
        key = (r, z, q, ptol, pmax)
        if key in seen:
            continue
        seen.add(key)
        delta, allowed = product_doubling_defect(r, z, q, Precision(ptol, pmax))
        worst = max(worst, delta / allowed)
    for r, z, q, eprec, euler, allowance in euler_calls:
        again, allowance2 = altforms.euler_evaluate(r, z, q, eprec, n_terms=2 * euler.terms_used)
        delta = abs(again.log_value - euler.log_value)
        worst = max(worst, delta / (euler.tail_bound + allowance + allowance2))
    prec = Precision(tol)
    gamma_pts = _qgamma_points(seed)
    for q in FE_QS:
        for z in gamma_pts:
            delta, allowed = qgamma_doubling_defect(q, z, prec)
            worst = max(worst, delta / allowed)
    # ratio of observed change to reported bound; must not exceed 1
    n = len(seen) + len(euler_calls) + len(gamma_pts) * len(FE_QS)
    return Residual("doubling N within tail bound", worst, 1.0, n)


FAMILIES: dict[str, Callable[..., Residual]] = {
    "qgamma_fe": qgamma_functional_equation,
    "qgamma_factorial": qgamma_integer_factorial,
    "qgamma_forms": qgamma_three_forms,
    "q_number": q_number_identity,
    "g_difference": g_difference_identity,
    "binomial_sum": binomial_sum_identity,
    "g_summation": g_recursion_identity,
    "pascal": pascal_rule,
    "fe": functional_equation,
    "normalization": normalization,
    "closed_form": closed_form,
    "reduction": reduction,
    "continuation": continuation_consistency,
    "positivity": deriv_positivity,
    "finite_difference": deriv_finite_difference,
    "three_way": three_way,
    "gauss_convergence": gauss_convergence,
    "telescoping": telescoping,
    "soundness": truncation_soundness,
}


def run_all(seed: int = 0, tol: float = 1e-14, only=None) -> list[Residual]:
    out = []
    for name, fam in FAMILIES.items():
        if only and name not in only:
            continue
        out.append(fam(seed=seed, tol=tol))
    return out
