from fractions import Fraction

import mpmath
import pytest

from anharmonic.exact import CouplingSeries, EnergyPolynomial
from anharmonic.riccati import (
    OscillatorSpec,
    b_function,
    b_function_in_g,
    energy_series,
    energy_series_direct,
    riccati_terms,
    symmetric_residue,
)
from anharmonic.validation import residue_quadrature_gap

P = EnergyPolynomial


@pytest.mark.parametrize("m, X, period", [(3, 1, 1), (4, 1, 1), (5, Fraction(1, 3), 3), (6, Fraction(1, 2), 2),
                                          (7, Fraction(1, 5), 5), (8, Fraction(1, 3), 3)])
def test_coupling_exponent(m, X, period):
    spec = OscillatorSpec(m)
    assert spec.coupling_exponent == X
    assert spec.g_period == period


def test_b_order_zero_is_energy():
    for m in range(3, 9):
        assert b_function_in_g(OscillatorSpec(m), 0).series_in_g[0] == P.E()


def test_quartic_first_residue():
    s2 = riccati_terms(OscillatorSpec(4), 2)[2]
    assert s2.residue() == P({0: Fraction(3, 8), 2: Fraction(3, 2)})
    assert symmetric_residue(s2, 2) == s2.residue()


def test_s0_has_no_residue_and_s3_feeds_the_g2_term():
    S = riccati_terms(OscillatorSpec(4), 3)
    assert S[0].residue().is_zero()
    B = b_function_in_g(OscillatorSpec(4), 2).series_in_g
    assert symmetric_residue(S[3], 3) == -B[2]
    assert B[2] == P({1: Fraction(85, 16), 3: Fraction(35, 4)})


@pytest.mark.parametrize("m", range(3, 9))
def test_antisymmetry(m):
    B = b_function(OscillatorSpec(m), 8).series
    for r, poly in B.items():
        for b, c in poly.items():
            assert (r + b) % 2 == 1, (r, b, c)


@pytest.mark.parametrize("m", [3, 4, 6])
def test_back_substitution(m):
    spec = OscillatorSpec(m)
    B = b_function_in_g(spec, 5).series_in_g.truncate(5)
    for n in range(3):
        res = B.substitute_energy(energy_series(spec, n, 5)).simplify()
        assert res.equal_through(CouplingSeries("g", {0: P.constant(Fraction(2 * n + 1, 2))}, 5), 5)


@pytest.mark.parametrize("m", [3, 5, 8])
def test_residue_matches_loop_quadrature(m):
    for K in range(1, 7):
        assert residue_quadrature_gap(m, K) < mpmath.mpf(10) ** -25


def test_direct_and_reverted_series_agree():
    for m in (3, 4, 6):
        spec = OscillatorSpec(m)
        for n in (0, 1):
            assert energy_series_direct(spec, n, 6) == energy_series(spec, n, 6)


def test_quartic_ground_state_series():
    e = energy_series_direct(OscillatorSpec(4), 0, 5)
    assert [e.scalar(k) for k in range(6)] == [Fraction(1, 2), Fraction(3, 4), Fraction(-21, 8), Fraction(333, 16),
                                               Fraction(-30885, 128), Fraction(916731, 256)]


def test_cubic_ground_state_series():
    # E(g) for p^2/2 + q^2/2 + sqrt(g) q^3: only integer powers of g survive
    e = energy_series_direct(OscillatorSpec(3), 0, 3)
    assert [e.scalar(k) for k in range(4)] == [Fraction(1, 2), Fraction(-11, 8), Fraction(-465, 32), Fraction(-39709, 128)]


def test_negative_level_rejected():
    with pytest.raises(ValueError):
        energy_series(OscillatorSpec(4), -1, 3)


def test_large_order_exact_coefficients_are_fast():
    import time
    t = time.perf_counter()
    e = energy_series_direct(OscillatorSpec(4), 0, 40)
    assert time.perf_counter() - t < 30
    # sign alternation of the quartic series
    assert all((e.scalar(k) > 0) == (k % 2 == 1) for k in range(1, 41))
