from fractions import Fraction

import mpmath
import pytest

from anharmonic.exact import scalar_evalf
from anharmonic.quantization import (
    TruncationError,
    multi_instanton_leading,
    quantization_residual,
    width_series,
    zeta2_consistency,
)


def test_cubic_width_leading_terms():
    w = width_series(3, 0, 3)
    assert [w.coefficient(k) for k in range(4)] == [1, Fraction(-169, 16), Fraction(-44507, 512), Fraction(-86071851, 40960)]
    assert w.prefactor_power == Fraction(-1, 2)
    with mpmath.workdps(30):
        assert abs(scalar_evalf(w.overall_constant, 30) + 1 / mpmath.sqrt(mpmath.pi)) < 1e-25


def test_quartic_width_first_excited():
    w = width_series(4, 1, 2)
    assert [w.coefficient(k) for k in range(3)] == [1, Fraction(-371, 24), Fraction(-3371, 1152)]
    assert w.prefactor_power == Fraction(-3, 2)


def test_width_numeric_matches_series_at_small_coupling():
    w = width_series(4, 0, 4)
    with mpmath.workdps(30):
        # leading factor -(2/sqrt(2 pi)) |g|^(-1/2) exp(-1/(3|g|))
        g = mpmath.mpf("-0.01")
        x = -g
        lead = -2 / mpmath.sqrt(2 * mpmath.pi) / mpmath.sqrt(-g) * mpmath.exp(1 / (3 * g))
        assert abs(w.evalf(g) / lead - (1 - mpmath.mpf(95) / 24 * x - mpmath.mpf(13259) / 1152 * x ** 2)) < 2e-4


def test_fractional_orders_need_gt_order():
    w = width_series(7, 0, 1, gt_order=2)
    assert w.corrections.truncation == 2
    powers = [p for _, p, _ in w.corrections_in_g()]
    assert powers == [0, Fraction(1, 5), Fraction(2, 5)]


def test_trans_series_coefficients():
    terms = {(t.J, t.L): t for t in multi_instanton_leading(4, 0, 3)}
    assert terms[(0, 0)].coefficient == {(0, 0): Fraction(1, 2)}
    assert terms[(1, 0)].coefficient == {(0, 0): Fraction(-1)}
    assert terms[(2, 1)].coefficient == {(0, 0): Fraction(1)}
    assert terms[(2, 0)].coefficient == {(1, 0): Fraction(1)}
    assert terms[(3, 2)].coefficient == {(0, 0): Fraction(-3, 2)}
    assert terms[(3, 1)].coefficient == {(1, 0): Fraction(-3)}
    assert terms[(3, 0)].coefficient == {(2, 0): Fraction(-3, 2), (0, 1): Fraction(-1, 2)}


def test_trans_series_scope():
    with pytest.raises(NotImplementedError):
        multi_instanton_leading(5, 0, 2)


def test_zeta2_value():
    r = zeta2_consistency()
    assert r["pi^2/6"] < 0.01 < 0.1 < r["pi^2/12"]


def test_quantization_residual_at_numeric_resonance():
    from anharmonic.spectral import resonance
    E = resonance(3, 0, 0.01).energy
    res = [abs(quantization_residual(3, 0, E, 0.01, Kmax=K)) for K in (2, 3, 4, 5, 6)]
    assert all(a > b for a, b in zip(res, res[1:]))
    assert res[-1] < 5e-5


def test_quantization_residual_stable_side():
    from anharmonic.riccati import OscillatorSpec, energy_series_direct
    e = energy_series_direct(OscillatorSpec(4), 0, 6).evalf(0.01, None, 30)
    assert abs(quantization_residual(4, 0, e, 0.01, Kmax=6)) < 1e-8


def test_truncation_error_in_large_order():
    from anharmonic.large_order import dispersion_moments
    with pytest.raises(TruncationError):
        dispersion_moments(width_series(3, 0, 2), 5)
