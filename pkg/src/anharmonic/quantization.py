"""Generalized quantization conditions in the unstable regime.

With ``Gt`` the positive cut coupling, the conditions read

    1/Gamma(1/2 - B) = norm * (-2C/Gt)^B * exp(-A),

``norm = 1/sqrt(2 pi)`` for even and ``1/sqrt(8 pi)`` for odd degree.  The
branch ``(-x)^B = x^B exp(i pi B)`` puts the resonance below the real axis.
Linearizing about the perturbative root ``e(Gt)`` gives the one-instanton
width; the leading multi-instanton sectors follow from expanding the
reciprocal Gamma function about its zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Tuple

import mpmath

from .cut_periods import derived_a_function
from .exact import ConstantExpr, CouplingSeries, EnergyPolynomial, scalar_evalf, series_exp
from .exact.constants import Scalar, scalar_simplify
from .riccati import OscillatorSpec, b_function, b_function_in_g, energy_series
from .wkb import PoleProximityError, cut_coupling, instanton_action


class TruncationError(ValueError):
    """Requested order exceeds what the available series support."""

    def __init__(self, message: str, max_order: int):
        super().__init__(f"{message} (max attainable order {max_order})")
        self.max_order = max_order


class QuantizationConsistencyError(ArithmeticError):
    """The perturbative root does not satisfy B(e, Gt) = n + 1/2."""


def _simp(x: Scalar) -> Scalar:
    return scalar_simplify(x) if isinstance(x, ConstantExpr) else x


@dataclass(frozen=True)
class QuantizationCondition:
    spec: OscillatorSpec
    regime: str  # "stable" or "unstable"

    @property
    def prefactor_norm(self) -> ConstantExpr:
        return ConstantExpr.from_powers(1, {"2": Fraction(-1, 2) if self.spec.is_even else Fraction(-3, 2),
                                            "pi": Fraction(-1, 2)})

    @property
    def two_c(self) -> ConstantExpr:
        m = self.spec.degree
        return ConstantExpr.radical(2, Fraction(m, m - 2))


def cut_series_in_gt(spec: OscillatorSpec, s_in_g: CouplingSeries) -> CouplingSeries:
    """Re-express an integer-power series in g through the cut coupling."""
    p = spec.g_period
    sign = -1 if spec.is_even else 1
    coeffs = {k * p: v * (sign ** k) for k, v in s_in_g.items()}
    return CouplingSeries("Gt", coeffs, s_in_g.truncation * p + p - 1)


def energy_in_cut_coupling(spec: OscillatorSpec, n: int, order: int) -> CouplingSeries:
    p = spec.g_period
    e = energy_series(spec, n, order // p)
    return cut_series_in_gt(spec, e).truncate(order)


def b_in_cut_coupling(spec: OscillatorSpec, order: int) -> CouplingSeries:
    if spec.is_even:
        return b_function_in_g(spec, order // spec.g_period).in_cut_coupling().truncate(order)
    return b_function(spec, order).in_cut_coupling().truncate(order)


@dataclass(frozen=True)
class WidthSeries:
    """``Im E = C * Gt^power * exp(-action/Gt) * corrections(Gt)``."""

    degree: int
    level: int
    action: Scalar
    prefactor_power: Fraction
    overall_constant: Scalar
    corrections: CouplingSeries
    a_source: str

    def coefficient(self, k: int) -> Scalar:
        return self.corrections.scalar(k)

    def corrections_in_g(self) -> List[Tuple[str, Fraction, Scalar]]:
        """Corrections as ``(base, power, coefficient)`` in the printed variable.

        Odd degree uses ``g``; even degree uses ``g`` for integer powers and
        ``-g`` otherwise.
        """
        spec = OscillatorSpec(self.degree)
        X = spec.coupling_exponent
        out = []
        for k, poly in self.corrections.items():
            c = poly.constant_term()
            power = k * X
            if spec.is_even and power.denominator == 1:
                out.append(("g", power, _simp(c * (-1 if int(power) % 2 else 1))))
            else:
                out.append(("-g" if spec.is_even else "g", power, c))
        return out

    def evalf(self, g, dps: int = 30):
        """Numeric imaginary part at a coupling on the unstable side."""
        with mpmath.workdps(dps + 10):
            Gt = cut_coupling(self.degree, g)
            val = (scalar_evalf(self.overall_constant, dps + 10)
                   * Gt ** (mpmath.mpf(self.prefactor_power.numerator) / self.prefactor_power.denominator)
                   * mpmath.exp(-scalar_evalf(self.action, dps + 10) / Gt)
                   * self.corrections.evalf(Gt, None, dps + 10))
        return +val


def _gt_order_for(spec: OscillatorSpec, Kmax: int, gt_order: Optional[int]) -> int:
    if gt_order is not None:
        return gt_order
    return Kmax * spec.g_period


def width_series(m: int, n: int, Kmax: int, gt_order: Optional[int] = None,
                 a_source: str = "derived") -> WidthSeries:
    """One-instanton width of level n through ``g^Kmax``.

    ``gt_order`` overrides the order in the cut coupling (needed for
    fractional powers of g).  ``a_source`` selects the A-function: the exact
    derivation (default) or the printed table.
    """
    if n < 0:
        raise ValueError("level must be non-negative")
    spec = OscillatorSpec(m)
    N = _gt_order_for(spec, Kmax, gt_order)
    if N < 0:
        raise ValueError("order must be non-negative")
    if a_source == "derived":
        A = derived_a_function(m, N)
    elif a_source == "fixture":
        from .fixtures import a_fixture
        A = a_fixture(m)
        if A.truncation < N:
            raise TruncationError(f"printed A-function for m={m} is too short", A.truncation)
        A = A.truncate(N)
    else:
        raise ValueError(f"unknown A-function source {a_source!r}")
    action = instanton_action(m).action
    if abs(scalar_evalf(A.scalar(-1) - action, 40)) > mpmath.mpf(10) ** -35:
        raise QuantizationConsistencyError("leading A term differs from the instanton action")
    A_reg = CouplingSeries("Gt", {k: v for k, v in A.items() if k >= 0}, N)
    if not A_reg[0].is_zero():
        raise QuantizationConsistencyError("A-function has an order-zero term")

    e = energy_in_cut_coupling(spec, n, N)
    B = b_in_cut_coupling(spec, N)
    on_shell = B.substitute_energy(e)
    target = CouplingSeries("Gt", {0: Fraction(2 * n + 1, 2)}, N)
    if on_shell.simplify() != target:
        raise QuantizationConsistencyError("B(e, Gt) != n + 1/2")

    a_on_shell = A_reg.substitute_energy(e).simplify()
    slope = B.derivative_E().substitute_energy(e)
    corr = (series_exp(-a_on_shell) / slope).simplify()
    c0 = corr.scalar(0)
    corr = corr.map_coefficients(lambda p: (p * (1 / c0 if isinstance(c0, ConstantExpr) else Fraction(1) / c0)).simplify())

    q = QuantizationCondition(spec, "unstable")
    half = Fraction(2 * n + 1, 2)
    const = -(q.prefactor_norm * q.two_c ** half) * Fraction(1, factorial(n)) * c0
    return WidthSeries(m, n, action, -half, _simp(const), corr, a_source)


# -- multi-instanton sectors ------------------------------------------------

# A coefficient is a polynomial in (Lambda, gamma_E, zeta(2)) stored as
# {(l, a, b): rational}; Lambda = ln(-2C/Gt).
Poly3 = Dict[Tuple[int, int, int], Fraction]

ZETA2_CANDIDATES = {"pi^2/6": mpmath.pi ** 2 / 6, "pi^2/12": mpmath.pi ** 2 / 12}


def _p_mul(a: Poly3, b: Poly3) -> Poly3:
    out: Poly3 = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = (ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2])
            out[k] = out.get(k, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


def _p_add(a: Poly3, b: Poly3, s=1) -> Poly3:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + s * v
    return {k: v for k, v in out.items() if v}


def _eps_series_mul(x: List[Poly3], y: List[Poly3], J: int) -> List[Poly3]:
    out: List[Poly3] = [{} for _ in range(J + 1)]
    for i, a in enumerate(x):
        for j, b in enumerate(y):
            if i + j <= J and a and b:
                out[i + j] = _p_add(out[i + j], _p_mul(a, b))
    return out


@dataclass(frozen=True)
class TransSeriesTerm:
    """``Xi_{J,L,K}`` with the constant given as a polynomial in gamma_E and zeta(2)."""

    J: int
    L: int
    K: int
    coefficient: Dict[Tuple[int, int], Fraction]  # (gamma power, zeta(2) power) -> rational

    def evalf(self, zeta2: str = "pi^2/6", dps: int = 40):
        with mpmath.workdps(dps + 10):
            z = ZETA2_CANDIDATES[zeta2] if zeta2 in ZETA2_CANDIDATES else mpmath.mpf(zeta2)
            return +sum(c * mpmath.euler ** a * z ** b for (a, b), c in self.coefficient.items())

    def __str__(self):
        parts = []
        for (a, b), c in sorted(self.coefficient.items()):
            sym = "*".join(s for s in (f"gamma_E^{a}" if a > 1 else "gamma_E" if a else "",
                                       f"zeta(2)^{b}" if b > 1 else "zeta(2)" if b else "") if s)
            parts.append(f"{c}" + (f"*{sym}" if sym else ""))
        return " + ".join(parts) or "0"


def multi_instanton_leading(m: int, n: int, Jmax: int) -> List[TransSeriesTerm]:
    """K = 0 coefficients of sectors J = 0..Jmax for the ground state.

    The energy is ``sum_J eps^J sum_L Lambda^L Xi_{J,L,0}`` with
    ``eps = i norm (2C/Gt)^(1/2) exp(-Action/Gt)``.  At K = 0 the condition
    becomes ``-x / Gamma(1 - x) = eps exp(Lambda x)`` for ``x = E - 1/2``, with
    ``1/Gamma(1 - x) = exp(-gamma x - zeta(2) x^2 / 2 - ...)``; it is solved
    by fixed-point iteration in powers of eps.
    """
    if m not in (3, 4) or n != 0 or not 0 <= Jmax <= 3:
        raise NotImplementedError("multi-instanton sectors are available for m in {3, 4}, n = 0, J <= 3")
    one = {(0, 0, 0): Fraction(1)}
    # y = -x solves y * exp((Lambda + gamma) y - zeta(2) y^2 / 2) = eps
    h: Poly3 = {(1, 0, 0): Fraction(1), (0, 1, 0): Fraction(1)}
    y: List[Poly3] = [{}, one] + [{} for _ in range(Jmax - 1)]
    for _ in range(Jmax):
        # f = exp(h y - zeta y^2 / 2) truncated at eps^Jmax
        y2 = _eps_series_mul(y, y, Jmax)
        arg = [_p_add(_p_mul(h, a), _p_mul({(0, 0, 1): Fraction(-1, 2)}, b)) for a, b in zip(y, y2)]
        f: List[Poly3] = [one] + [{} for _ in range(Jmax)]
        term: List[Poly3] = [one] + [{} for _ in range(Jmax)]
        for k in range(1, Jmax + 1):
            term = [{kk: v / k for kk, v in t.items()} for t in _eps_series_mul(term, arg, Jmax)]
            f = [_p_add(a, b) for a, b in zip(f, term)]
        # y = eps / f
        inv: List[Poly3] = [one] + [{} for _ in range(Jmax)]
        for k in range(1, Jmax + 1):
            acc: Poly3 = {}
            for j in range(1, k + 1):
                acc = _p_add(acc, _p_mul(f[j], inv[k - j]), -1)
            inv[k] = acc
        y = [{}] + inv[:Jmax]
    terms = [TransSeriesTerm(0, 0, 0, {(0, 0): Fraction(1, 2)})]
    for J in range(1, Jmax + 1):
        by_l: Dict[int, Dict[Tuple[int, int], Fraction]] = {}
        for (l, a, b), v in y[J].items():
            by_l.setdefault(l, {})[(a, b)] = -v
        for L in sorted(by_l):
            terms.append(TransSeriesTerm(J, L, 0, by_l[L]))
    return terms


def zeta2_consistency(Jmax: int = 3, dps: int = 60) -> Dict[str, float]:
    """Residual of the J = 3 coefficient for each candidate value of zeta(2).

    Solves ``-x / Gamma(1 - x) = eps exp(Lambda x)`` numerically at small eps
    and compares with the truncated trans-series; the consistent candidate
    leaves a residual of order eps^4.
    """
    terms = multi_instanton_leading(4, 0, Jmax)
    out = {}
    with mpmath.workdps(dps):
        lam = mpmath.mpf("1.7")
        eps = mpmath.mpf("1e-4")
        x = mpmath.findroot(lambda x: -x * mpmath.rgamma(1 - x) - eps * mpmath.exp(lam * x), -eps)
        for name in ZETA2_CANDIDATES:
            approx = sum(eps ** t.J * lam ** t.L * t.evalf(name, dps) for t in terms) - mpmath.mpf(1) / 2
            out[name] = float(abs(x - approx) / eps ** 3)
    return out


def quantization_residual(m: int, n: int, E, g, Kmax: int = 4, dps: int = 30):
    """LHS - RHS of the applicable quantization condition at complex E.

    ``Kmax`` is the order in g of the truncated B and A series.  On the stable
    side only ``1/Gamma(1/2 - B)`` is returned.
    """
    spec = OscillatorSpec(m)
    B = b_function_in_g(spec, Kmax).series_in_g.truncate(Kmax)
    with mpmath.workdps(dps + 10):
        g = mpmath.mpf(g)
        E = mpmath.mpmathify(E)
        stable = (g > 0) if spec.is_even else (g < 0)
        bval = B.evalf(g, E, dps + 10)
        pole = mpmath.mpf(1) / 2 - bval
        if abs(pole - mpmath.nint(mpmath.re(pole))) < mpmath.mpf("1e-300") and mpmath.re(pole) <= 0:
            raise PoleProximityError("1/2 - B sits on a Gamma pole")
        lhs = mpmath.rgamma(pole)
        if stable:
            return lhs
        A = derived_a_function(m, Kmax * spec.g_period)
        q = QuantizationCondition(spec, "unstable")
        Gt = cut_coupling(m, g)
        aval = A.evalf(Gt, E, dps + 10)
        rhs = (scalar_evalf(q.prefactor_norm, dps + 10)
               * mpmath.exp(bval * (mpmath.log(scalar_evalf(q.two_c, dps + 10) / Gt) + 1j * mpmath.pi))
               * mpmath.exp(-aval))
        return lhs - rhs
