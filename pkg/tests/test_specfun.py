from fractions import Fraction

import numpy as np
import pytest
from scipy.special import binom as scipy_binom
from scipy.special import eval_genlaguerre

from pctlab import ValidationError
from pctlab.specfun import (
    binomial_real,
    gauss2f1_terminating,
    hulthen_sum,
    kummer_terminating,
    laguerre,
)


def laguerre_series_fraction(n: int, a: Fraction, x: Fraction) -> Fraction:
    """Rational-arithmetic oracle: L_n^a(x) = sum_k (-1)^k C(n+a, n-k) x^k / k!."""
    total = Fraction(0)
    for k in range(n + 1):
        binom = Fraction(1)
        for i in range(n - k):
            binom *= (a + k + 1 + i) / (n - k - i)
        term = (-1) ** k * binom * x**k
        fact = 1
        for i in range(1, k + 1):
            fact *= i
        total += term / fact
    return total


def kummer_sum_fraction(n: int, b: Fraction, x: Fraction) -> Fraction:
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n + 1):
        total += term
        if k < n:
            term = term * (-n + k) / (b + k) * x / (k + 1)
    return total


def gauss_sum_fraction(n: int, b: Fraction, c: Fraction, x: Fraction) -> Fraction:
    total = Fraction(0)
    term = Fraction(1)
    for k in range(n + 1):
        total += term
        if k < n:
            term = term * (-n + k) * (b + k) / ((c + k) * (k + 1)) * x
    return total


def test_laguerre_examples():
    assert laguerre(0, 0.7, 3.2) == 1.0
    assert laguerre(1, 0.5, 2.0) == pytest.approx(-0.5, abs=1e-15)
    # ((a+1)(a+2) - 2(a+2)x + x^2)/2 at a=1/2, x=2 -> -9/8
    assert laguerre(2, 0.5, 2.0) == pytest.approx(-1.125, abs=1e-14)


def test_laguerre_against_rational_oracle():
    for n in range(9):
        for a in (Fraction(0), Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)):
            for x in (Fraction(0), Fraction(1, 4), Fraction(3), Fraction(30)):
                want = float(laguerre_series_fraction(n, a, x))
                got = float(laguerre(n, float(a), float(x)))
                assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_laguerre_against_scipy():
    x = np.linspace(0.0, 30.0, 61)
    for n in range(9):
        for a in (0.0, 0.5, 1.5, 2.37):
            ref = eval_genlaguerre(n, a, x)
            got = laguerre(n, a, x)
            assert np.allclose(got, ref, rtol=1e-11, atol=1e-11)


def test_kummer_examples():
    assert kummer_terminating(0, 3.0, 5.0) == 1.0
    assert kummer_terminating(1, 2.0, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert kummer_terminating(2, 1.0, 2.0) == pytest.approx(-1.0, abs=1e-14)


def test_kummer_against_rational_oracle():
    for n in range(8):
        for b in (Fraction(1, 2), Fraction(2), Fraction(9, 4)):
            for x in (Fraction(1, 3), Fraction(5), Fraction(40)):
                want = float(kummer_sum_fraction(n, b, x))
                got = float(kummer_terminating(n, float(b), float(x)))
                assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_kummer_pole():
    with pytest.raises(ValidationError):
        kummer_terminating(3, -1.0, 1.0)
    # pole beyond termination is fine
    assert kummer_terminating(1, -5.0, 0.0) == 1.0


def test_gauss2f1_examples():
    assert gauss2f1_terminating(0, 7.0, 2.0, 0.3) == 1.0
    assert gauss2f1_terminating(1, 2.0, 1.0, 0.5) == pytest.approx(0.0, abs=1e-15)
    # exact 3-term rational sum: 1 - 1 + 1/5
    assert gauss2f1_terminating(2, 3.0, 1.5, 0.25) == pytest.approx(0.2, abs=1e-14)


def test_gauss2f1_against_rational_oracle():
    for n in range(7):
        for b in (Fraction(3), Fraction(5, 2)):
            for c in (Fraction(3, 2), Fraction(4)):
                for x in (Fraction(1, 4), Fraction(9, 10)):
                    want = float(gauss_sum_fraction(n, b, c, x))
                    got = float(gauss2f1_terminating(n, float(b), float(c), float(x)))
                    assert got == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_gauss2f1_pole():
    with pytest.raises(ValidationError):
        gauss2f1_terminating(2, 1.0, -1.0, 0.5)


def test_binomial_examples():
    assert binomial_real(5.0, 2) == pytest.approx(10.0, abs=1e-13)
    assert binomial_real(2.5, 2) == pytest.approx(1.875, abs=1e-14)
    assert binomial_real(3.0, 0) == 1.0


def test_binomial_against_scipy():
    for a in (0.5, 3.0, 7.25, -1.5):
        for k in range(7):
            assert binomial_real(a, k) == pytest.approx(
                float(scipy_binom(a, k)), rel=1e-12, abs=1e-12
            )


def test_all_kernels_are_one_at_n0():
    for args in ((0, -0.3, 11.0),):
        assert laguerre(*args) == 1.0
    assert kummer_terminating(0, -2.5, 9.0) == 1.0
    assert gauss2f1_terminating(0, -1.0, -2.5, 0.9) == 1.0


def test_laguerre_kummer_identity():
    # L_n^a(x) = C(n+a, n) 1F1(-n; a+1; x)
    x = np.linspace(0.0, 25.0, 40)
    for n in range(7):
        for a in (0.0, 0.5, 1.5, 2.37):
            lhs = laguerre(n, a, x)
            rhs = binomial_real(n + a, n) * kummer_terminating(n, a + 1.0, x)
            assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


def test_hulthen_sum_single_term():
    # n_r = 1 collapses to beta_1 * t
    beta1 = 4.0
    t = np.array([0.0, 0.3, 0.9])
    assert np.allclose(hulthen_sum(1, beta1, t), beta1 * t)


def test_hulthen_sum_two_terms():
    beta2 = 1.5
    t = 0.4
    want = (beta2 + 1.0) * t - (beta2 + 2.0) * (beta2 + 1.0) / 2.0 * t**2
    assert hulthen_sum(2, beta2, t) == pytest.approx(want, rel=1e-13)


def test_hulthen_sum_index_base():
    with pytest.raises(ValidationError):
        hulthen_sum(0, 1.0, 0.5)
