"""Instantons and the WKB side of the unstable-coupling problem.

Conventions.  The cut coupling ``Gt`` is positive on the unstable side:
``Gt = (-g)^X`` for even and ``g^X`` for odd degree, where ``X`` is the
coupling exponent of :class:`~anharmonic.riccati.OscillatorSpec`.  The
A-function is stored as a series in ``Gt`` with leading term ``action/Gt``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath

from .cut_periods import _stirling_coefficient, derived_a_function
from .exact import ConstantExpr, CouplingSeries, EnergyPolynomial, gamma_rational, scalar_evalf
from .exact.constants import Scalar
from .riccati import OscillatorSpec, b_function
from .wkb_ring import WkbApproximant, wkb_terms

__all__ = [
    "AFunction", "ContourDomainError", "FitFailureError", "InstantonData",
    "PoleProximityError", "PrecisionError", "WkbApproximant", "a_function",
    "b_cut_value", "contour_integral_numeric", "cut_coupling", "euclidean_action",
    "instanton_action", "instanton_trajectory", "perturbative_counterterm", "wkb_terms",
]


class ContourDomainError(ValueError):
    """Turning points are not well separated, or the coupling is on the stable side."""


class PrecisionError(ArithmeticError):
    """A numeric refinement did not converge."""


class PoleProximityError(ArithmeticError):
    """The Gamma function in the counterterm is evaluated too close to a pole."""


class FitFailureError(ArithmeticError):
    """Least-squares residual of the numeric A-function fit is too large."""


@dataclass(frozen=True)
class InstantonData:
    degree: int
    action: Scalar
    fluctuation_constant: Scalar
    turning_point: Scalar


def instanton_action(m: int) -> InstantonData:
    """Action ``2^(2/(m-2)) B(m/(m-2), m/(m-2))`` and related constants."""
    if m < 3:
        raise ValueError("degree must be at least 3")
    d = m - 2
    x = Fraction(m, d)
    beta = (gamma_rational(x) * gamma_rational(x) / gamma_rational(2 * x)).simplify()
    two = ConstantExpr.radical(2, Fraction(2, d)).simplify()
    action = (two * beta).simplify() if isinstance(beta, ConstantExpr) else two * beta
    if isinstance(action, ConstantExpr):
        action = action.simplify()
    return InstantonData(
        degree=m,
        action=action,
        fluctuation_constant=two,
        turning_point=ConstantExpr.radical(2, Fraction(-1, d)).simplify(),
    )


def action_quadrature(m: int, dps: int = 30):
    """Numeric ``int_0^{q*} 2 sqrt(2 W) dq`` with ``W = q^2/2 - q^m``."""
    with mpmath.workdps(dps + 10):
        qs = mpmath.mpf(2) ** (mpmath.mpf(-1) / (m - 2))
        val = mpmath.quad(lambda q: 2 * q * mpmath.sqrt(max(0, 1 - 2 * q ** (m - 2))), [0, qs / 2, qs])
    return +val


def instanton_trajectory(m: int, sign: int, t, t0=0):
    """``sign * (1 + cosh((m-2)(t-t0)))^(-1/(m-2))``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    t = mpmath.mpf(t)
    return sign * (1 + mpmath.cosh((m - 2) * (t - t0))) ** (mpmath.mpf(-1) / (m - 2))


def euclidean_action(m: int, t_max: float = 40, dps: int = 30):
    """Time integral of ``q'^2/2 + q^2/2 - q^m`` along the instanton path."""
    with mpmath.workdps(dps + 10):
        def lagrangian(t):
            q = instanton_trajectory(m, 1, t)
            dq = mpmath.diff(lambda s: instanton_trajectory(m, 1, s), t)
            return dq ** 2 / 2 + q ** 2 / 2 - q ** m
        pts = mpmath.linspace(-t_max, t_max, 41)
        val = mpmath.quad(lagrangian, pts)
    return +val


# -- cut coupling helpers ------------------------------------------------


def cut_coupling(m: int, g) -> mpmath.mpf:
    """``Gt`` for a coupling on the unstable side; raises otherwise."""
    spec = OscillatorSpec(m)
    g = mpmath.mpf(g)
    if spec.is_even and g >= 0:
        raise ContourDomainError("even degree needs g < 0 for a cut")
    if not spec.is_even and g <= 0:
        raise ContourDomainError("odd degree needs g > 0 for a cut")
    X = spec.coupling_exponent
    return abs(g) ** (mpmath.mpf(X.numerator) / X.denominator)


def _two_c(m: int):
    return mpmath.mpf(2) ** (mpmath.mpf(m) / (m - 2))


# -- numeric contour ------------------------------------------------------


def _turning_points(m: int, u):
    """The two real roots of ``q^2 - 2q^m - 2u`` bounding the classically allowed cut."""
    coeffs = [0] * (m + 1)
    coeffs[0] = -2
    coeffs[m - 2] = 1
    coeffs[m] = -2 * u
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=60)
    real_pos = sorted(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-mpmath.mp.dps // 2) and mpmath.re(r) > 0)
    if len(real_pos) < 2:
        raise ContourDomainError("turning points have merged; |Gt E| is too large")
    q1, q2 = real_pos[0], real_pos[1]
    others = [r for r in roots if abs(r - q1) > 1e-20 and abs(r - q2) > 1e-20]
    return q1, q2, others


def contour_integral_numeric(m: int, E, g, Kmax: int, dps: int = 30, tol=None,
                             parts: bool = False):
    """``(1/Gt) * clockwise loop integral of sum_{K even <= Kmax} Gt^K S_K``.

    The loop is an ellipse with foci at the two turning points, mapped from
    a circle by ``q = c + (h/2)(z + 1/z)``.  On it
    ``w = -i (h/2)(z - 1/z) sqrt(-H(q))`` with ``H = w^2 / ((q-q1)(q-q2))``,
    which is smooth and gives ``w > 0`` just above the cut.  The integrand is
    periodic and analytic in the angle, so the trapezoidal rule converges
    geometrically; the node count is doubled until two estimates agree.

    With ``parts=True`` a dict ``{K: contribution}`` over all ``K <= Kmax``
    (odd ones included) is returned instead of the sum.
    """
    with mpmath.workdps(dps + 15):
        Gt = cut_coupling(m, g)
        E = mpmath.mpf(E)
        u = Gt * E
        q1, q2, others = _turning_points(m, u)
        if q2 - q1 < mpmath.mpf("1e-6"):
            raise ContourDomainError("turning points are too close")
        c0 = (q1 + q2) / 2
        h = (q2 - q1) / 2

        def zeta_of(q):
            x = (q - c0) / (h / 2)
            z = (x + mpmath.sqrt(x * x - 4)) / 2
            return z if abs(z) >= 1 else 1 / z

        rho_max = min((abs(zeta_of(r)) for r in others), default=mpmath.mpf(4))
        rho = mpmath.sqrt(rho_max)
        if rho < 1 + mpmath.mpf("1e-8"):
            raise ContourDomainError("other roots approach the cut")
        S = wkb_terms(m, Kmax)
        Ks = list(range(0, Kmax + 1)) if parts else list(range(0, Kmax + 1, 2))
        tol = tol if tol is not None else mpmath.mpf(10) ** (-(dps - 5))

        def H(q):
            return (q * q - 2 * q ** m - 2 * u) / ((q - q1) * (q - q2))

        def samples(N):
            out = {K: mpmath.mpc(0) for K in Ks}
            prev = None
            for j in range(N):
                phi = 2 * mpmath.pi * j / N
                z = rho * mpmath.expj(phi)
                q = c0 + (h / 2) * (z + 1 / z)
                root = mpmath.sqrt(-H(q))
                if prev is not None and abs(root - prev) > abs(root + prev):
                    root = -root
                prev = root
                w = -1j * (h / 2) * (z - 1 / z) * root
                dq = (h / 2) * (1 - 1 / (z * z)) * 1j * z  # dq/dphi
                for K in Ks:
                    out[K] += S[K].evaluate(q, w) * dq
            return {K: -v * 2 * mpmath.pi / N for K, v in out.items()}

        N = 64
        cur = samples(N)
        while True:
            N *= 2
            nxt = samples(N)
            err = max(abs(nxt[K] - cur[K]) * Gt ** (K - 1) for K in Ks)
            cur = nxt
            if err < tol * max(1, abs(cur[0] / Gt)):
                break
            if N > 2 ** 15:
                raise PrecisionError(f"contour quadrature did not converge (last change {err})")
        contributions = {K: cur[K] * Gt ** (K - 1) for K in Ks}
        if parts:
            return {K: +v for K, v in contributions.items()}
        total = sum(contributions.values())
        if abs(mpmath.im(total)) > mpmath.mpf(10) ** (-(dps - 8)) * max(1, abs(total)):
            raise PrecisionError("contour integral has a spurious imaginary part")
        return +mpmath.re(total)


# -- counterterm ----------------------------------------------------------


def _graded_b(m: int, order: int) -> Dict[int, Dict[int, Scalar]]:
    """``Gt*B = sum_k Gt^k beta_k(u)``: map k -> {u power: coefficient}."""
    spec = OscillatorSpec(m)
    Bt = b_function(spec, order + spec.g_period).in_cut_coupling().truncate(order)
    out: Dict[int, Dict[int, Scalar]] = {}
    for r, poly in Bt.items():
        for b, c in poly.items():
            out.setdefault(r + 1 - b, {})[b] = c
    return out


def b_cut_value(m: int, E, g, order: int, dps: int = 30):
    """Truncated ``B(E, Gt)`` evaluated numerically at an unstable coupling."""
    spec = OscillatorSpec(m)
    with mpmath.workdps(dps + 10):
        Gt = cut_coupling(m, g)
        Bt = b_function(spec, order + spec.g_period).in_cut_coupling().truncate(order)
        return +Bt.evalf(Gt, E, dps + 10)


def _series_compose_graded(f_derivs, delta: List, K: int):
    """Taylor-compose ``f(x0 + delta(eps))`` in eps through eps^K numerically.

    ``f_derivs(n)`` is the n-th derivative at the base point; ``delta[k]`` the eps^k
    coefficient of the shift (``delta[0] = 0``).
    """
    result = [mpmath.mpf(0)] * (K + 1)
    power = [mpmath.mpf(1)] + [mpmath.mpf(0)] * K  # delta^n
    fact = mpmath.mpf(1)
    for n in range(0, K + 1):
        if n:
            new = [mpmath.mpf(0)] * (K + 1)
            for i, a in enumerate(power):
                if a:
                    for j in range(1, K + 1 - i):
                        new[i + j] += a * delta[j]
            power = new
            fact *= n
        if not any(power):
            break
        for k in range(K + 1):
            result[k] += f_derivs(n) * power[k] / fact
    return result


def perturbative_counterterm(m: int, E, g, Kmax: int, mode: str = "wkb",
                             b_order: Optional[int] = None, dps: int = 30):
    """Perturbative counterterm ``P`` subtracted from the cut integral.

    ``mode``:

    ``"wkb"``
        ``P = B ln(Gt B / 2C) - B + sum_j c_j B^(1-2j)`` (Stirling form of
        ``ln Gamma(1/2 + B)``) with every piece graded like the WKB sum, so
        that ``contour_integral_numeric(..., Kmax) - P`` is exactly the part
        of the A-function of grade ``<= Kmax``.  The grade of ``Gt^r E^b``
        is ``r + 1 - b``.
    ``"gamma"``
        ``ln Gamma(1/2 + B) - ln(2 pi)/2 + B ln(Gt/2C)`` with truncated B.
    ``"reflection"``
        ``ln(2 pi)/2 - ln Gamma(1/2 - B) + B ln(Gt/2C)`` (real part), which
        differs from ``"gamma"`` by ``ln|2 cos(pi B)|``.
    """
    with mpmath.workdps(dps + 15):
        Gt = cut_coupling(m, g)
        E = mpmath.mpf(E)
        u = Gt * E
        two_c = _two_c(m)
        if mode in ("gamma", "reflection"):
            order = b_order if b_order is not None else Kmax
            B = b_cut_value(m, E, g, order, dps + 10)
            if mode == "gamma":
                arg = mpmath.mpf(1) / 2 + B
                sign = 1
            else:
                arg = mpmath.mpf(1) / 2 - B
                sign = -1
            nearest = mpmath.nint(arg)
            if nearest <= 0 and abs(arg - nearest) < mpmath.mpf("1e-6"):
                raise PoleProximityError(f"Gamma argument {arg} is near a pole")
            lg = mpmath.re(mpmath.loggamma(arg))
            return +(sign * lg - sign * mpmath.log(2 * mpmath.pi) / 2 + B * mpmath.log(Gt / two_c))
        if mode != "wkb":
            raise ValueError(f"unknown counterterm mode {mode!r}")
        order = b_order if b_order is not None else Kmax + 24
        graded = _graded_b(m, order)
        beta = [mpmath.mpf(0)] * (Kmax + 1)
        for k in range(0, Kmax + 1):
            for b, c in graded.get(k, {}).items():
                beta[k] += scalar_evalf(c, dps + 15) * u ** b
            beta[k] *= Gt ** k
        x0 = beta[0]  # grade zero: u + O(u^2)
        delta = [mpmath.mpf(0)] + beta[1:]

        def f_der(n):  # f(x) = x ln(x/2C) - x
            if n == 0:
                return x0 * mpmath.log(x0 / two_c) - x0
            if n == 1:
                return mpmath.log(x0 / two_c)
            return (-1) ** n * mpmath.factorial(n - 2) * x0 ** (1 - n)

        total = _series_compose_graded(f_der, delta, Kmax)
        for j in range(1, Kmax // 2 + 1):
            cj = _stirling_coefficient(j)
            cj = mpmath.mpf(cj.numerator) / cj.denominator
            s = 1 - 2 * j

            def p_der(n, s=s):  # d^n/dx^n x^s
                return mpmath.ff(s, n) * x0 ** (s - n)

            piece = _series_compose_graded(p_der, delta, Kmax - 2 * j)
            for k, v in enumerate(piece):
                total[k + 2 * j] += cj * Gt ** (2 * j) * v
        return +(sum(total) / Gt)


# -- A-function -------------------------------------------------------------


@dataclass
class AFunction:
    """A-function as a series in the cut coupling ``Gt`` (minimum order -1)."""

    degree: int
    series: CouplingSeries
    source: str
    residuals: Dict[Tuple[int, int], float] = field(default_factory=dict)

    def evalf(self, E, Gt, dps: int = 30):
        return self.series.evalf(Gt, E, dps)

    def leading(self) -> Scalar:
        return self.series.scalar(-1)


def _fit_basis(m: int, r_max: int, Kmax: int) -> List[Tuple[int, int]]:
    basis = [(-1, 0)]
    for r in range(0, r_max + 1):
        for b in range(0, r + 2):
            k = r + 1 - b
            if (r + b) % 2 == 1 and k % 2 == 0 and k <= Kmax:
                basis.append((r, b))
    return basis


def numeric_fit(m: int, r_max: int = 4, Kmax: int = 8, energies: Sequence = (0.5, 1.5, 2.5),
                couplings: Optional[Sequence] = None, dps: int = 30,
                residual_limit: float = 1e-6) -> AFunction:
    """Least-squares fit of ``T - P`` on a grid to ``sum c_(r,b) Gt^r E^b``.

    ``couplings`` are values of ``Gt``.  Only monomials allowed by the grading
    and parity selection rules enter the basis.
    """
    spec = OscillatorSpec(m)
    if couplings is None:
        couplings = [mpmath.mpf("0.004") * mpmath.mpf(2) ** (-mpmath.mpf(i) / 2.3333) for i in range(8)]
    basis = _fit_basis(m, r_max, Kmax)
    rows, rhs = [], []
    with mpmath.workdps(dps + 10):
        for E in energies:
            for Gt in couplings:
                Gt = mpmath.mpf(Gt)
                X = spec.coupling_exponent
                g = Gt ** (mpmath.mpf(X.denominator) / X.numerator)
                if spec.is_even:
                    g = -g
                val = contour_integral_numeric(m, E, g, Kmax, dps) - perturbative_counterterm(m, E, g, Kmax, dps=dps)
                rows.append([Gt ** r * mpmath.mpf(E) ** b for r, b in basis])
                rhs.append(val)
        M = mpmath.matrix(rows)
        y = mpmath.matrix(rhs)
        sol, res = mpmath.qr_solve(M, y)
        scale = max(abs(v) for v in rhs)
        if res > residual_limit * scale:
            raise FitFailureError(f"fit residual {res} exceeds tolerance")
    coeffs: Dict[int, Dict[int, Scalar]] = {}
    residuals = {}
    for (r, b), c in zip(basis, sol):
        coeffs.setdefault(r, {})[b] = Fraction(str(mpmath.nstr(c, 25)))
        residuals[(r, b)] = float(res)
    series = CouplingSeries("Gt", {r: EnergyPolynomial(v) for r, v in coeffs.items()}, r_max)
    return AFunction(m, series, "numeric-fit", residuals)


def a_function(m: int, source: str = "derived", Kmax: Optional[int] = None, **kwargs) -> AFunction:
    """A-function of degree ``m`` through ``Gt^Kmax``.

    ``source``: ``"fixture"`` (printed tables), ``"derived"`` (exact cut-period
    expansion) or ``"numeric-fit"`` (least squares on the numeric contour).
    """
    if m < 3:
        raise ValueError("degree must be at least 3")
    if source == "fixture":
        from .fixtures import a_fixture
        s = a_fixture(m)
        if Kmax is not None:
            if Kmax > s.truncation:
                raise ValueError(f"fixture for m={m} only reaches Gt^{s.truncation}")
            s = s.truncate(Kmax)
        return AFunction(m, s, "fixture")
    if source == "derived":
        return AFunction(m, derived_a_function(m, 4 if Kmax is None else Kmax), "derived")
    if source == "numeric-fit":
        return numeric_fit(m, r_max=4 if Kmax is None else Kmax, **kwargs)
    raise ValueError(f"unknown A-function source {source!r}")
