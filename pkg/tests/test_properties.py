"""Property-based checks of the identities on random arguments."""

import cmath
import math

from hypothesis import given, settings
from hypothesis import strategies as st

from qmgamma import Precision, QParam, g_exponent, gen_binom, q_gamma, q_number, qmg
from qmgamma.invariants import log_distance

qs = st.floats(min_value=0.05, max_value=0.95)
re_part = st.floats(min_value=0.1, max_value=4.0)
im_part = st.floats(min_value=-3.0, max_value=3.0)
zs = st.builds(complex, re_part, im_part)
orders = st.integers(min_value=1, max_value=4)
PREC = Precision(1e-13)


@settings(max_examples=60, deadline=None)
@given(q=qs, z=st.builds(complex, st.floats(-5, 5), im_part))
def test_q_number_shift(q, z):
    qp = QParam(q)
    lhs = q_number(qp, z + 1) - q * q_number(qp, z)
    assert abs(lhs - 1) < 1e-13 * (1 + abs(q_number(qp, z + 1)))


@settings(max_examples=60, deadline=None)
@given(z=zs, k=st.integers(0, 8))
def test_pascal(z, k):
    lhs = gen_binom(z + 1, k + 1)
    rhs = gen_binom(z, k + 1) + gen_binom(z, k)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


@settings(max_examples=60, deadline=None)
@given(z=zs, r=st.integers(2, 6), n=st.integers(1, 30))
def test_g_difference(z, r, n):
    # Pascal's rule applied termwise
    lhs = g_exponent(r, z + 1, n) - g_exponent(r, z, n)
    rhs = g_exponent(r - 1, z, n) + (-1) ** r * math.comb(n + r - 3, r - 2)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs) + abs(rhs))


@settings(max_examples=40, deadline=None)
@given(q=qs, z=zs, r=orders)
def test_functional_equation(q, z, r):
    qp = QParam(q)
    lhs = qmg(r, z + 1, qp, PREC).log_value
    rhs = qmg(r - 1, z, qp, PREC).log_value + qmg(r, z, qp, PREC).log_value
    assert log_distance(lhs, rhs) < 1e-10


@settings(max_examples=40, deadline=None)
@given(q=qs, z=zs)
def test_g1_is_q_gamma(q, z):
    qp = QParam(q)
    assert log_distance(qmg(1, z + 1, qp, PREC).log_value, q_gamma(qp, z, PREC).log_value) < 1e-12


@settings(max_examples=40, deadline=None)
@given(q=qs, z=zs, r=orders)
def test_conjugate_symmetry(q, z, r):
    # real q: G_r(conj z) = conj G_r(z)
    qp = QParam(q)
    a = qmg(r, z, qp, PREC).value
    b = qmg(r, z.conjugate(), qp, PREC).value
    assert abs(a.conjugate() - b) <= 1e-10 * abs(a)


@settings(max_examples=30, deadline=None)
@given(q=qs, z=zs, r=orders, tol=st.sampled_from([1e-6, 1e-9, 1e-12]))
def test_reported_bound_respects_tol(q, z, r, tol):
    res = qmg(r, z, QParam(q), Precision(tol))
    assert res.tail_bound <= tol
    assert cmath.isfinite(res.log_value)
