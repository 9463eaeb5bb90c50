from fractions import Fraction

import mpmath
import pytest

from anharmonic.exact import scalar_evalf
from anharmonic.large_order import (
    _inverse_series_product,
    asymptotics_check,
    gamma_moment,
    gamma_moment_quadrature,
    large_order,
    leading_bender_wu,
)


def num(x):
    return scalar_evalf(x, 40)


def test_inverse_series_product_against_direct_value():
    a, b, k = Fraction(1), Fraction(1, 2), 3
    coeffs = _inverse_series_product(a, b, k, 20)
    K = mpmath.mpf(1000)
    with mpmath.workdps(40):
        direct = 1 / ((K - mpmath.mpf(1) / 2) * (K - mpmath.mpf(3) / 2) * (K - mpmath.mpf(5) / 2))
        series = sum(mpmath.mpf(c.numerator) / c.denominator / K ** j for j, c in enumerate(coeffs))
        assert abs(series / direct - 1) < mpmath.mpf(10) ** -25
    assert coeffs[:3] == [0, 0, 0]


@pytest.mark.parametrize("sigma, tau, K", [(Fraction(1, 2), Fraction(1), 5), (Fraction(-1, 2), Fraction(2), 3),
                                           (Fraction(1, 6), Fraction(1, 3), 2)])
def test_gamma_moment_closed_form(sigma, tau, K):
    assert abs(gamma_moment(sigma, tau, "0.4", K) / gamma_moment_quadrature(sigma, tau, "0.4", K) - 1) < 1e-25


def test_quartic_leading_growth():
    lo = large_order(4, 0, 0)
    with mpmath.workdps(40):
        assert abs(num(lo.constant) - mpmath.sqrt(6) / mpmath.pi ** 1.5) < mpmath.mpf(10) ** -30
    assert lo.base == 3 or abs(num(lo.base) - 3) < 1e-30
    assert (lo.gamma_slope, lo.gamma_offset, lo.alternating) == (1, Fraction(1, 2), True)


def test_cubic_base_is_inverse_action():
    lo = large_order(3, 0, 2)
    assert abs(num(lo.base) - mpmath.mpf(15) / 2) < 1e-30
    assert lo.inverse_k[0] == Fraction(-169, 120)


def test_quartic_excited_second_order_sign():
    lo = large_order(4, 1, 2)
    assert lo.inverse_k[1] == Fraction(23341, 10368)


def test_sextic_first_inverse_k_vanishes():
    lo = large_order(6, 0, 2)
    assert num(lo.inverse_k[0]) == 0
    with mpmath.workdps(40):
        assert abs(num(lo.inverse_k[1]) + 165 * mpmath.pi ** 2 / 2048) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize("m, n", [(3, 0), (4, 0), (4, 1), (6, 0)])
def test_corrections_improve_agreement_with_exact_coefficients(m, n):
    K = 30
    errs = [asymptotics_check(m, n, K, j) for j in (0, 2, 4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 5e-4


@pytest.mark.parametrize("m", range(3, 9))
def test_leading_form_matches_transform(m):
    from anharmonic.large_order import dispersion_moments
    from anharmonic.quantization import width_series
    for n in range(3):
        lo = dispersion_moments(width_series(m, n, 0, gt_order=0), 0)
        bw = leading_bender_wu(m, n)
        with mpmath.workdps(40):
            assert abs(num(lo.constant) / num(bw.constant) - 1) < 1e-30
            assert abs(num(lo.base) / num(bw.base) - 1) < 1e-30


def test_leading_form_rejects_bad_degree():
    with pytest.raises(ValueError):
        leading_bender_wu(2, 0)
