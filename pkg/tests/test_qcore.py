import cmath
import math

import pytest

from qmgamma import BudgetError, DomainError, PoleError, Precision, QParam, q_gamma, q_number, q_pow, principal_log
from qmgamma.qcore import log1m, log_q_number, q_gamma_euler, q_gamma_gauss, safe_exp


@pytest.mark.parametrize("q,z,want", [(0.5, 1, 0.5), (0.5, 0, 1.0), (0.25, 0.5, 0.5)])
def test_q_pow_values(q, z, want):
    assert q_pow(QParam(q), z) == pytest.approx(want, abs=1e-15)


@pytest.mark.parametrize("q", [0.1, 0.5, 0.9])
def test_q_number_at_zero_and_one(q):
    qp = QParam(q)
    assert q_number(qp, 1) == pytest.approx(1.0, abs=1e-15)
    assert q_number(qp, 0) == 0


def test_q_number_two():
    assert q_number(QParam(0.5), 2) == pytest.approx(1.5, abs=1e-15)


def test_principal_log_values():
    assert principal_log(1) == 0
    assert principal_log(-1) == pytest.approx(1j * math.pi)
    assert principal_log(-1).imag == math.pi
    # the lower side of the cut is mapped onto the upper one
    assert principal_log(complex(-1.0, -0.0)).imag == math.pi
    assert principal_log(math.e) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        principal_log(0)


def test_log1m_small_argument_accurate():
    w = 1e-17 + 2e-17j
    assert log1m(w) == pytest.approx(-w, rel=1e-12)
    assert log1m(0.3 - 0.2j) == pytest.approx(cmath.log(1 - (0.3 - 0.2j)), rel=1e-15)


def test_log_q_number_matches_direct_log():
    qp = QParam(0.7)
    for z in (0.5, 2 + 1j, -1.5 + 0.25j):
        assert cmath.exp(log_q_number(qp, z)) == pytest.approx(q_number(qp, z), rel=1e-13)


@pytest.mark.parametrize("q", [0.0, 1.0, -0.2, 1.5, 1 - 1e-7])
def test_qparam_rejects_bad_base(q):
    with pytest.raises(DomainError):
        QParam(q)


def test_precision_validates():
    with pytest.raises(DomainError):
        Precision(tol=0)
    with pytest.raises(DomainError):
        Precision(max_terms=0)


@pytest.mark.parametrize("z,want", [(0, 1.0), (1, 1.0), (2, 1.5)])
def test_q_gamma_small_integers(z, want):
    res = q_gamma(QParam(0.5), z)
    assert res.value == pytest.approx(want, abs=1e-12)
    assert res.method == "product"


def test_q_gamma_negative_half_uses_recurrence():
    qp = QParam(0.5)
    res = q_gamma(qp, -2.5)
    assert res.method == "recurrence"
    assert res.continuation_steps == 2
    # Gamma(-1.5) = Gamma(0.5) / ([-1.5][-0.5])
    want = q_gamma(qp, -0.5).value / (q_number(qp, -1.5) * q_number(qp, -0.5))
    assert res.value == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("z", [-1, -2, -5])
def test_q_gamma_poles(z):
    with pytest.raises(PoleError) as err:
        q_gamma(QParam(0.5), z)
    assert err.value.location == z + 1


def test_q_gamma_pole_off_real_axis():
    # q^(z+1) = 1 also on the vertical lattice 2 pi i k / log q
    qp = QParam(0.5)
    z = -1 + 2j * math.pi / qp.log_q
    with pytest.raises(PoleError):
        q_gamma(qp, z)


def test_q_gamma_tail_bound_and_budget():
    res = q_gamma(QParam(0.5), 0.3, Precision(1e-12))
    assert res.tail_bound <= 1e-12
    with pytest.raises(BudgetError):
        q_gamma(QParam(0.5), 0.3, Precision(1e-30))
    with pytest.raises(BudgetError):
        q_gamma(QParam(0.999), 0.3, Precision(1e-12, max_terms=100))


def test_q_gamma_alternate_forms_agree():
    qp = QParam(0.4)
    z = 1.2 + 0.7j
    ref = q_gamma(qp, z).value
    assert q_gamma_gauss(qp, z, 60) == pytest.approx(ref, rel=1e-12)
    assert q_gamma_euler(qp, z, 60) == pytest.approx(ref, rel=1e-12)


def test_safe_exp_overflow_keeps_phase():
    v = safe_exp(complex(1e4, 0.5))
    assert math.isinf(v.real) and math.isinf(v.imag)
    assert v.real > 0 and v.imag > 0
