"""Shipped tables: loading, round-trip, and the known disagreements with the derivation."""

from fractions import Fraction

import mpmath
import pytest

from anharmonic import fixtures
from anharmonic.cut_periods import derived_a_function
from anharmonic.exact import scalar_evalf
from anharmonic.quantization import width_series
from anharmonic.wkb import instanton_action


def num(x):
    return scalar_evalf(x, 40)


def test_fixture_inventory():
    ids = fixtures.fixture_ids()
    assert len(ids) == 37
    for m in range(3, 9):
        for prefix in ("B", "P", "A", "im", "LO"):
            assert f"{prefix}{m}" in ids


@pytest.mark.parametrize("fid", fixtures.fixture_ids())
def test_roundtrip_bit_exact(fid):
    assert fixtures.roundtrip_ok(fid)
    table = fixtures.load(fid)
    assert table.identifier == fid
    assert "printed" in table.provenance


def test_unknown_fixture():
    with pytest.raises(fixtures.FixtureError):
        fixtures.load("A99")


def test_even_degree_sign_conversion():
    # printed A4 in g < 0; the loader returns the cut coupling |g|
    A = fixtures.a_fixture(4)
    assert A.scalar(-1) == Fraction(1, 3)
    assert A[1][0] == Fraction(67, 48)


@pytest.mark.parametrize("m", [3, 4, 5, 6])
def test_printed_a_matches_derivation(m):
    F = fixtures.a_fixture(m)
    D = derived_a_function(m, F.truncation)
    with mpmath.workdps(40):
        for k in range(-1, F.truncation + 1):
            for d in set(dict(F[k].items())) | set(dict(D[k].items())):
                assert abs(num(F[k][d]) - num(D[k][d])) < mpmath.mpf(10) ** -30


def test_a7_leading_term_misprint():
    F, D = fixtures.a_fixture(7), derived_a_function(7, 3)
    with mpmath.workdps(40):
        ratio = num(D.scalar(-1)) / num(F.scalar(-1))
        assert abs(ratio - mpmath.gamma(mpmath.mpf(2) / 5)) < mpmath.mpf(10) ** -30
        assert abs(num(D.scalar(-1)) - num(instanton_action(7).action)) < mpmath.mpf(10) ** -30
        for k in range(0, 4):
            for d in set(dict(F[k].items())) | set(dict(D[k].items())):
                assert abs(num(F[k][d]) - num(D[k][d])) < mpmath.mpf(10) ** -30


def test_a8_energy_degree_shift():
    F, D = fixtures.a_fixture(8), derived_a_function(8, 3)
    assert "note" in fixtures.load("A8").payload
    with mpmath.workdps(40):
        for d in (0, 2):
            assert abs(num(F[2][d]) - num(D[2][d + 1])) < mpmath.mpf(10) ** -30
            assert D[2][d] == 0


def test_im6_cubic_coefficient_disagrees():
    w = width_series(6, 0, 3)
    printed = fixtures.width_fixture(6)["corrections"]
    assert w.corrections.equal_through(printed, 5)
    # Gt = sqrt(-g), so the g^3 term sits at Gt^6 with sign (-1)^3
    assert w.coefficient(6) == Fraction(-287688525, 8192)
    assert printed.scalar(6) == Fraction(-328657111, 24576)


def test_im5_first_correction_off_by_cube_root_of_two():
    w = width_series(5, 0, 1, gt_order=3)
    printed = fixtures.width_fixture(5)["corrections"]
    with mpmath.workdps(40):
        assert abs(num(printed.scalar(1)) / num(w.coefficient(1)) - mpmath.cbrt(2)) < mpmath.mpf(10) ** -30
        for k in (2, 3):
            assert abs(num(printed.scalar(k)) - num(w.coefficient(k))) < mpmath.mpf(10) ** -25
        # the square of the derived first coefficient is the Gamma^6 piece of the second
        exponent = fixtures.width_fixture(5)["exponent"]["constant"]
        assert abs(-num(exponent) / num(instanton_action(5).action) - 1) > 0.5


def test_im7_second_correction_misprint():
    w = width_series(7, 0, 1, gt_order=2)
    printed = fixtures.width_fixture(7)["corrections"]
    with mpmath.workdps(40):
        k1 = num(w.coefficient(1))
        assert abs(num(printed.scalar(1)) - k1) < mpmath.mpf(10) ** -30
        assert abs(num(printed.scalar(2)) - num(w.coefficient(2))) > 1e-3


def test_strong_coupling_fixture():
    f = fixtures.strong_coupling_fixture(4)
    assert f["moduli"][0] == Fraction("0.66798626")
    assert f["phase_over_pi"] == Fraction(-1, 3)
