import math

import pytest

from qmgamma import g_exponent, gen_binom
from qmgamma.combinatorics import int_binom


def test_gen_binom_examples():
    assert gen_binom(3, 2) == 3
    assert gen_binom(2.5 + 1j, 0) == 1
    assert gen_binom(0.5, 2) == pytest.approx(-0.125)


@pytest.mark.parametrize("n", range(8))
@pytest.mark.parametrize("k", range(8))
def test_gen_binom_matches_math_comb(n, k):
    assert gen_binom(n, k) == math.comb(n, k)


def test_gen_binom_rejects_negative_k():
    with pytest.raises(ValueError):
        gen_binom(2.0, -1)


def test_int_binom_negative_upper():
    # binom(-1, k) = (-1)^k
    assert [int_binom(-1, k) for k in range(5)] == [1, -1, 1, -1, 1]
    assert int_binom(5, 7) == 0


def test_g_exponent_examples():
    assert g_exponent(1, 2.7 + 1j, 5) == 0
    assert g_exponent(3, 0, 4) == 0
    for n in range(1, 10):
        z = 1.3 - 0.4j
        assert g_exponent(2, z, n) == pytest.approx(z)
