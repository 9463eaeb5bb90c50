from fractions import Fraction

import mpmath
import pytest

from anharmonic.wkb import (
    ContourDomainError,
    a_function,
    action_quadrature,
    contour_integral_numeric,
    cut_coupling,
    euclidean_action,
    instanton_action,
    instanton_trajectory,
    perturbative_counterterm,
)


def test_exact_actions():
    assert instanton_action(3).action == Fraction(2, 15)
    assert instanton_action(4).action == Fraction(1, 3)


@pytest.mark.parametrize("m", range(3, 9))
def test_action_quadrature(m):
    from anharmonic.exact import scalar_evalf
    assert abs(action_quadrature(m, 30) - scalar_evalf(instanton_action(m).action, 30)) < 1e-12


def test_action_from_trajectory():
    assert abs(euclidean_action(3) - mpmath.mpf(2) / 15) < 1e-12


def test_quartic_trajectory_is_kink_shaped():
    # q(t) = 1/sqrt(1 + cosh(2t)) type profile: maximum at t0, decays at both ends
    top = instanton_trajectory(4, 1, 0)
    assert abs(top - 1 / mpmath.sqrt(2)) < 1e-14
    assert instanton_trajectory(4, 1, 1.0) < top
    assert abs(instanton_trajectory(4, 1, 1.0) - instanton_trajectory(4, 1, -1.0)) < 1e-14


def test_cut_coupling_domain():
    assert cut_coupling(4, -0.01) == mpmath.mpf("0.01")
    assert abs(cut_coupling(6, -0.04) - mpmath.mpf("0.2")) < 1e-20
    with pytest.raises(ContourDomainError):
        cut_coupling(4, 0.01)
    with pytest.raises(ContourDomainError):
        contour_integral_numeric(3, 0.5, -0.01, 4)


def test_derived_a_leading_terms():
    A = a_function(4, "derived", Kmax=2)
    assert A.leading() == Fraction(1, 3)
    assert A.series[1][0] == Fraction(67, 48)
    assert A.series[1][2] == Fraction(17, 4)


@pytest.mark.parametrize("m, g, tol", [(4, -0.005, 1e-11), (6, -0.001, 1e-6)])
def test_contour_minus_counterterm_reproduces_derived_a(m, g, tol):
    T = contour_integral_numeric(m, 0.5, g, 8, dps=20)
    P = perturbative_counterterm(m, 0.5, g, 8, dps=20)
    A = a_function(m, "derived", Kmax=8).evalf(0.5, cut_coupling(m, g))
    assert abs((T - P) / A - 1) < tol


def test_contour_cubic():
    T = contour_integral_numeric(3, 0.5, 0.005, 6, dps=20)
    P = perturbative_counterterm(3, 0.5, 0.005, 6, dps=20)
    A = a_function(3, "derived", Kmax=6).evalf(0.5, cut_coupling(3, 0.005))
    assert abs((T - P) / A - 1) < 1e-7


def test_counterterm_modes():
    wkb = perturbative_counterterm(4, 0.5, -0.01, 4)
    gamma = perturbative_counterterm(4, 0.5, -0.01, 4, mode="gamma")
    refl = perturbative_counterterm(4, 0.5, -0.01, 4, mode="reflection")
    # the Stirling form tracks lnGamma(1/2 + B) up to the truncation
    assert abs(wkb - gamma) < 0.02
    # reflection differs from gamma by ln|2 cos(pi B)|, large near B = 1/2
    assert abs(refl - gamma) > 1
    with pytest.raises(ValueError):
        perturbative_counterterm(4, 0.5, -0.01, 4, mode="bogus")
