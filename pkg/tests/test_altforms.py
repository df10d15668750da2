import cmath

import pytest

from qmgamma import DomainError, Precision, QParam, qmg, qmg_euler, qmg_gauss, q_gamma
from qmgamma.altforms import euler_evaluate, gauss_evaluate
from qmgamma.qcore import q_gamma_gauss
from qmgamma.qmultigamma import gauss_tail_bound, log_qmg_product


def test_gauss_r1_is_q_gamma_gauss_form():
    qp = QParam(0.5)
    z = 0.8 + 0.3j
    for n in (1, 5, 20):
        assert qmg_gauss(1, z, qp, n).value == pytest.approx(q_gamma_gauss(qp, z, n), rel=1e-13)


def test_gauss_example_r2_z1():
    assert qmg_gauss(2, 1, QParam(0.5), 64).value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("n", [1, 4, 9])
def test_gauss_at_zero_is_one(r, n):
    assert qmg_gauss(r, 0, QParam(0.6), n).value == 1


def test_gauss_partial_within_its_bound():
    qp = QParam(0.5)
    z = 1.3 + 0.4j
    ref = log_qmg_product(2, z, qp, Precision(1e-14)).log_sum
    for n in (2, 8, 20):
        err = abs(qmg_gauss(2, z, qp, n, Precision(1e-14)).log_value - ref)
        assert err <= gauss_tail_bound(2, z, qp, n) + 1e-12


def test_euler_matches_product():
    qp = QParam(0.5)
    z = 1.3 + 0.4j
    prec = Precision(1e-10)
    e = qmg_euler(2, z, qp, prec)
    p = log_qmg_product(2, z, qp, prec).log_sum
    assert abs(cmath.exp(e.log_value - p) - 1) < 1e-9
    assert e.tail_bound <= 1e-10
    assert e.method == "euler"


def test_euler_at_zero_is_one():
    assert qmg_euler(3, 0, QParam(0.4)).value == 1


def test_gauss_evaluate_certified():
    qp = QParam(0.7)
    z = 2.1 - 0.6j
    g = gauss_evaluate(3, z, qp, Precision(1e-11))
    ref = qmg(3, z + 1, qp, Precision(1e-13)).log_value
    assert g.tail_bound <= 1e-11
    assert abs(cmath.exp(g.log_value - ref) - 1) < 2e-11


def test_euler_allowance_is_small():
    _, allowance = euler_evaluate(2, 1.5, QParam(0.5), Precision(1e-10))
    assert 0 < allowance < 1e-11


@pytest.mark.parametrize("fn", [lambda: qmg_gauss(2, -0.5, QParam(0.5), 4), lambda: qmg_euler(2, -0.5, QParam(0.5)),
                                lambda: qmg_gauss(0, 1.0, QParam(0.5), 4)])
def test_domain_errors(fn):
    with pytest.raises(DomainError):
        fn()
