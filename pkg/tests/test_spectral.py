import math

import mpmath
import numpy as np
import pytest

from anharmonic import spectral as S
from anharmonic.fixtures import strong_coupling_fixture


def hermite_coefficients(n_max):
    """Integer coefficients of the physicists' Hermite polynomials."""
    H = [[1], [0, 2]]
    for n in range(1, n_max):
        nxt = [0] * (n + 2)
        for k, c in enumerate(H[n]):
            nxt[k + 1] += 2 * c
        for k, c in enumerate(H[n - 1]):
            nxt[k] -= 2 * n * c
        H.append(nxt)
    return H[:n_max + 1]


def moment_oracle(power, D, dps=30):
    """<i|q^power|j> from exact Gaussian moments int x^k exp(-x^2) dx = Gamma((k+1)/2)."""
    H = hermite_coefficients(D - 1)
    with mpmath.workdps(dps):
        mom = [mpmath.gamma(mpmath.mpf(k + 1) / 2) if k % 2 == 0 else 0 for k in range(2 * D + power + 2)]
        out = np.zeros((D, D))
        for i in range(D):
            for j in range(i, D):
                if (i + j + power) % 2:
                    continue
                s = sum(a * b * mom[ka + kb + power] for ka, a in enumerate(H[i]) if a
                        for kb, b in enumerate(H[j]) if b)
                v = s / mpmath.sqrt(2 ** (i + j) * mpmath.factorial(i) * mpmath.factorial(j) * mpmath.pi)
                out[i, j] = out[j, i] = float(v)
    return out


@pytest.mark.parametrize("power", [1, 2, 3, 4, 6, 8])
def test_ho_matrix_against_moment_oracle(power):
    D = 40
    oracle = moment_oracle(power, D)
    M = S.ho_matrix(power, D).to_numpy().real
    scale = np.maximum(1, np.abs(oracle))
    # q^8 accumulates rounding over eight banded products
    assert np.max(np.abs(M - oracle) / scale) < 1e-11


def test_ho_matrix_frequency_scaling():
    a = S.ho_matrix(3, 20, omega=4).to_numpy()
    b = S.ho_matrix(3, 20).to_numpy()
    assert np.allclose(a, b / 8)


def test_ho_matrix_extended_tier():
    M = S.ho_matrix(4, 12, tier="extended", dps=40)
    with mpmath.workdps(40):
        assert abs(M[(0, 0)] - mpmath.mpf(3) / 4) < mpmath.mpf(10) ** -35


def test_eigen_diagonal_and_rotation():
    assert sorted(S.eigen_complex(np.diag([3.0, -1.0, 2.0])).real) == pytest.approx([-1, 2, 3])
    ev = S.eigen_complex([[0, 1], [-1, 0]])
    assert sorted(ev.imag) == pytest.approx([-1, 1])
    assert np.allclose(ev.real, 0)


def test_eigen_random_trace_identities():
    rng = np.random.default_rng(7)
    A = rng.standard_normal((30, 30)) + 1j * rng.standard_normal((30, 30))
    ev = S.eigen_complex(A)
    for k in range(1, 5):
        tr = np.trace(np.linalg.matrix_power(A, k))
        assert abs(np.sum(ev ** k) - tr) < 1e-10 * max(1, abs(tr))
    lap = S.eigen_complex(A, method="lapack")
    for e in ev:
        assert np.min(np.abs(lap - e)) < 1e-10


def test_eigen_rejects_nan():
    with pytest.raises(ValueError):
        S.eigen_complex([[np.nan, 0], [0, 1]])


def test_iteration_cap_raises():
    rng = np.random.default_rng(1)
    A = rng.standard_normal((12, 12))
    with pytest.raises(S.ConvergenceError):
        S._hqr(S._hessenberg(A), max_sweeps_per_eig=0)


def test_backward_error_of_resonance_matrix():
    H = S.rotated_hamiltonian(3, math.sqrt(0.05), S.resonance_angle(3), 40)
    ev = S.eigen_complex(H)
    near = sorted(ev, key=lambda e: abs(e - 0.5))[:3]
    assert max(S.backward_errors(H, near)) < 1e-12


def test_harmonic_limit():
    H = S.rotated_hamiltonian(4, 0.0, 0.3, 30)
    ev = sorted(S.eigen_complex(H), key=lambda e: e.real)
    assert np.allclose(ev[:5], [0.5, 1.5, 2.5, 3.5, 4.5], atol=1e-10)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_strong_coupling_double(m):
    f = strong_coupling_fixture(m)
    res = S.rotated_strong_coupling_levels(m, 3, D=160, tier="double")
    phase = math.pi * float(f["phase_over_pi"])
    for e, mod in zip(res.levels, f["moduli"]):
        assert abs(abs(e) - float(mod)) < 1e-8
        assert abs(np.angle(e) - phase) < 1e-8


def test_strong_coupling_refinement_agrees():
    d = S.rotated_strong_coupling_levels(4, 2, D=120, tier="double")
    x = S.rotated_strong_coupling_levels(4, 2, D=120, tier="extended", dps=30)
    for a, b in zip(d.levels, x.levels):
        assert abs(complex(b) - a) < 1e-11


def test_strong_coupling_convergence_error():
    with pytest.raises(S.ConvergenceError):
        S.rotated_strong_coupling_levels(7, 3, D=40, omega=2)


def test_strong_coupling_dimension_cap():
    with pytest.raises(ValueError):
        S.rotated_strong_coupling_levels(3, 1, D=800)


def test_resonance_and_antiresonance():
    plus = S.resonance(4, 0, -0.05)
    minus = S.resonance(4, 0, -0.05, side="-")
    assert plus.energy.imag < 0
    assert abs(plus.energy - minus.energy.conjugate()) < 1e-10
    assert abs(plus.energy - (0.45033645204592 - 0.00334664043776j)) < 1e-12


def test_resonance_wrong_side():
    with pytest.raises(ValueError):
        S.resonance(3, 0, -0.01)
    with pytest.raises(ValueError):
        S.resonance(4, 0, 0.01)


def test_tracking_ambiguity():
    with pytest.raises(S.TrackingError):
        S._select(np.array([1.0 + 0j, 2.0 + 0j, 5.0]), 1.5 + 0j, "test level")


def test_resonance_matches_width_at_weak_coupling():
    from anharmonic.quantization import width_series
    # Im E ~ 2e-11 here, below double-precision resolution of the full matrix
    g = 0.005
    r = S.resonance(3, 0, g, tier="extended", dps=30)
    with mpmath.workdps(30):
        assert abs(r.energy.imag / width_series(3, 0, 5).evalf(g) - 1) < 1e-3


def test_dispersion_order_zero_is_trivial():
    assert S.dispersion_quadrature(3, 1, 0) == 1.5


def test_dispersion_first_coefficients():
    assert abs(S.dispersion_quadrature(3, 0, 1) / -1.375 - 1) < 1e-2
    assert abs(S.dispersion_quadrature(4, 0, 1) / 0.75 - 1) < 1e-2


def test_fig2_rows():
    rows = S.fig2_data([0.005, 0.01])
    assert [r[0] for r in rows] == [0.005, 0.01]
    for g, num, lead, s4 in rows:
        assert num < 0 and lead < 0 and s4 < 0
    # at small coupling the four-term series is already close
    assert abs(rows[0][1] / rows[0][3] - 1) < 2e-3


def test_default_tier_env(monkeypatch):
    monkeypatch.setenv("ANHARMONIC_PRECISION", "extended")
    assert S.default_tier() == "extended"
    monkeypatch.setenv("ANHARMONIC_PRECISION", "quad")
    with pytest.raises(ValueError):
        S.default_tier()
