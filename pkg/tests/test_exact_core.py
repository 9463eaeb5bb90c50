from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anharmonic.exact import (
    ConstantExpr,
    CouplingSeries,
    EnergyPolynomial,
    NonInvertibleSeriesError,
    QLaurentSeries,
    gamma_rational,
    scalar_evalf,
    series_exp,
    series_log,
    solve_series_equation,
)
from anharmonic.exact.serialization import (
    constant_from_json,
    constant_to_json,
    rational_from_str,
    rational_to_str,
    series_from_json,
    series_to_csv_rows,
    series_to_json,
)

P = EnergyPolynomial
rationals = st.fractions(min_value=-50, max_value=50, max_denominator=60)


def series(coeffs, N=6, var="g"):
    return CouplingSeries(var, {k: P.constant(c) for k, c in enumerate(coeffs) if c}, N)


def sqrt_one_plus(x_coeff, N):
    """Binomial coefficients of sqrt(1 + x_coeff*g) as Fractions."""
    out, c = [], Fraction(1)
    for k in range(N + 1):
        out.append(c * x_coeff ** k)
        c = c * (Fraction(1, 2) - k) / (k + 1)
    return out


def test_rational_strings():
    assert rational_to_str(Fraction(-3, 4)) == "-3/4"
    assert rational_to_str(Fraction(6, 3)) == "2"
    assert rational_from_str(" 10/4 ") == Fraction(5, 2)


@given(rationals)
def test_rational_roundtrip(x):
    assert rational_from_str(rational_to_str(x)) == x


def test_constant_roundtrip_and_simplify():
    c = ConstantExpr.pi(Fraction(1, 2)) * gamma_rational(Fraction(1, 3)) ** 3
    assert constant_from_json(constant_to_json(c)) == c
    assert (ConstantExpr.pi(Fraction(1, 2)) ** 2).simplify() == ConstantExpr.pi(1)
    assert gamma_rational(Fraction(1, 2)) == ConstantExpr.pi(Fraction(1, 2))


def test_constant_numeric_value():
    with mpmath.workdps(30):
        g13 = scalar_evalf(gamma_rational(Fraction(1, 3)), 30)
        assert abs(g13 - mpmath.gamma(mpmath.mpf(1) / 3)) < mpmath.mpf(10) ** -28


def test_solve_series_equation_matches_closed_form():
    # E + g E^2 = 1/2  =>  E = (sqrt(1 + 2g) - 1) / (2g)
    F = CouplingSeries("g", {0: P.E(), 1: P.E(2)}, 8)
    e = solve_series_equation(F, Fraction(1, 2), 8)
    root = sqrt_one_plus(Fraction(2), 9)
    expected = [root[k + 1] / 2 for k in range(9)]
    assert [e.scalar(k) for k in range(9)] == expected
    assert e.scalar(3) == Fraction(-5, 16)
    back = F.substitute_energy(e).simplify()
    assert back.equal_through(CouplingSeries("g", {0: P.constant(Fraction(1, 2))}, 8), 8)


def test_inverse_exp_log():
    s = series([1, 1], 5)
    assert [s.inverse().scalar(k) for k in range(6)] == [1, -1, 1, -1, 1, -1]
    assert [series_exp(series([0, 1], 4)).scalar(k) for k in range(5)] == [1, 1, Fraction(1, 2), Fraction(1, 6), Fraction(1, 24)]
    assert [series_log(s).scalar(k) for k in range(1, 6)] == [1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4), Fraction(1, 5)]


def test_zero_series_is_not_invertible():
    with pytest.raises(NonInvertibleSeriesError):
        series([0, 0], 3).inverse()


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=5), st.lists(rationals, min_size=1, max_size=5))
def test_product_commutes_and_inverts(a, b):
    a[0] = a[0] or Fraction(1)
    A, B = series(a, 4), series(b, 4)
    assert (A * B).simplify() == (B * A).simplify()
    one = (A * A.inverse()).simplify()
    assert [one.scalar(k) for k in range(5)] == [1, 0, 0, 0, 0]


def test_truncation_propagates():
    A, B = series([1, 2], 5), series([3], 2)
    assert (A * B).truncation == 2
    q = QLaurentSeries({-2: P.constant(1), -1: P.E()}, 3)
    sq = q * q
    assert sq.truncation == 1
    assert q.residue() == P.E()


def test_series_json_and_csv():
    s = CouplingSeries("g", {0: P.constant(Fraction(1, 2)), 2: P({0: Fraction(-3, 4), 2: 5})}, 3)
    assert series_from_json(series_to_json(s)) == s
    rows = series_to_csv_rows(s, Fraction(1, 3))
    assert ["g", "2", "3", "2", "5"] in rows
