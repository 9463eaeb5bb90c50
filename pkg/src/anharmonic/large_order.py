"""Large-order asymptotics of perturbative coefficients from decay widths.

The dispersion relation turns a width term ``c Gt^(k - n - 1/2) exp(-A/Gt)``
with ``Gt = |g|^X`` into a Gamma moment,

    int_0^oo s^(-K-1+sigma) exp(-A s^(-tau)) ds = A^((sigma-K)/tau) Gamma((K-sigma)/tau) / tau,

so the coefficient of ``g^K`` grows as ``const * base^K * Gamma(aK + b)``
with ``a = 1/X``, ``b = n + 1/2`` and ``base = A^(-a)``.  Subleading width
terms shift the Gamma argument by ``-k``; the ratios
``Gamma(aK + b - k)/Gamma(aK + b)`` are expanded in ``1/K`` exactly.
Odd degree: ``E_K = (1/pi) int_0^oo Im E(s) s^(-K-1) ds``.  Even degree:
``E_K = (-1)^K (1/pi) int_0^oo Im E(-s) s^(-K-1) ds``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List

import mpmath

from .exact import ConstantExpr, gamma_rational, scalar_evalf
from .exact.constants import Scalar, scalar_simplify
from .quantization import TruncationError, WidthSeries, width_series
from .riccati import OscillatorSpec, energy_series_direct


def _simp(x: Scalar) -> Scalar:
    return scalar_simplify(x) if isinstance(x, ConstantExpr) else x


@dataclass(frozen=True)
class LargeOrderExpansion:
    """``E_K ~ sign(K) * constant * base^K * Gamma(aK + b) * (1 + sum_j c_j K^-j)``.

    ``sign(K) = (-1)^(K+1)`` when ``alternating``, else 1.
    """

    degree: int
    level: int
    constant: Scalar
    base: Scalar
    gamma_slope: Fraction
    gamma_offset: Fraction
    alternating: bool
    inverse_k: List[Scalar]

    def evalf(self, K: int, order: int | None = None, dps: int = 40):
        """Asymptotic value at order K using ``order`` 1/K corrections (all by default)."""
        corr = self.inverse_k if order is None else self.inverse_k[:order]
        with mpmath.workdps(dps + 10):
            K = mpmath.mpf(K)
            s = 1 + sum(scalar_evalf(c, dps + 10) / K ** (j + 1) for j, c in enumerate(corr))
            arg = self.gamma_slope * K + self.gamma_offset
            val = (scalar_evalf(self.constant, dps + 10) * scalar_evalf(self.base, dps + 10) ** K
                   * mpmath.gamma(mpmath.mpf(arg.numerator) / arg.denominator if isinstance(arg, Fraction) else arg) * s)
            if self.alternating and int(K + 1) % 2:
                val = -val
        return +val


def gamma_moment(sigma: Fraction, tau: Fraction, action, K: int, dps: int = 40):
    """Closed form of ``int_0^oo s^(-K-1+sigma) exp(-action s^(-tau)) ds``."""
    with mpmath.workdps(dps + 10):
        sig = mpmath.mpf(sigma.numerator) / sigma.denominator
        ta = mpmath.mpf(tau.numerator) / tau.denominator
        a = mpmath.mpmathify(action)
        val = a ** ((sig - K) / ta) * mpmath.gamma((K - sig) / ta) / ta
    return +val


def gamma_moment_quadrature(sigma: Fraction, tau: Fraction, action, K: int, dps: int = 40):
    """The same integral by quadrature, in the variable ``t = action s^(-tau)``."""
    with mpmath.workdps(dps + 10):
        sig = mpmath.mpf(sigma.numerator) / sigma.denominator
        ta = mpmath.mpf(tau.numerator) / tau.denominator
        a = mpmath.mpmathify(action)

        def integrand(s):
            return s ** (-K - 1 + sig) * mpmath.exp(-a * s ** (-ta))
        peak = (a * ta / (K - sig)) ** (1 / ta)
        val = mpmath.quad(integrand, [0, peak / 4, peak, 4 * peak, 64 * peak, mpmath.inf])
    return +val


def _inverse_series_product(a: Fraction, b: Fraction, k: int, order: int) -> List[Fraction]:
    """``prod_{i=1..k} 1/(aK + b - i)`` as coefficients of ``K^-j``, j = 0..order."""
    out = [Fraction(0)] * (order + 1)
    if k > order:
        return out
    series = [Fraction(1)] + [Fraction(0)] * order  # in x = 1/K
    for i in range(1, k + 1):
        # 1/(aK + b - i) = (x/a) * sum_j (-(b - i)/a)^j x^j
        r = -(b - i) / a
        factor = [Fraction(0)] + [r ** (j - 1) / a for j in range(1, order + 1)]
        new = [Fraction(0)] * (order + 1)
        for p, v in enumerate(series):
            if v:
                for q, w in enumerate(factor):
                    if p + q <= order and w:
                        new[p + q] += v * w
        series = new
    return series


def dispersion_moments(width: WidthSeries, Kmax: int) -> LargeOrderExpansion:
    """Large-order form with ``Kmax`` inverse-K corrections from a width series."""
    m, n = width.degree, width.level
    spec = OscillatorSpec(m)
    N = width.corrections.truncation
    if Kmax > N:
        raise TruncationError(f"width series reaches Gt^{N}", N)
    X = spec.coupling_exponent
    a = 1 / X
    b = Fraction(2 * n + 1, 2)
    action = width.action
    # sum_k c_k A^k Gamma(aK + b - k)/Gamma(aK + b)
    corr: List[Scalar] = [Fraction(0)] * (Kmax + 1)
    for k, poly in width.corrections.items():
        if k > Kmax:
            continue
        ck = poly.constant_term() * (action ** k if k else 1)
        for j, v in enumerate(_inverse_series_product(a, b, k, Kmax)):
            if v:
                corr[j] = _simp(corr[j] + ck * v)
    if corr[0] != 1:
        raise ArithmeticError("leading moment is not normalized")
    # prefactor: (a / pi) * C * A^(-b); even degree picks up -(-1)^(K+1)
    inv_action_b = ConstantExpr.coerce(action) ** (-b)
    const = _simp(ConstantExpr.pi(-1) * a * width.overall_constant * inv_action_b)
    if spec.is_even:
        const = _simp(-const)
    base = ConstantExpr.coerce(action) ** (-a)
    return LargeOrderExpansion(m, n, const, _simp(base), a, b, spec.is_even, corr[1:])


def leading_bender_wu(m: int, n: int) -> LargeOrderExpansion:
    """Closed-form leading growth with the Beta-function base.

    Even N: ``(-1)^(K+1) (N-2) / (pi^(3/2) n! 2^(K+1-n)) Gamma((N-2)K/2 + n + 1/2)
    Beta^(-(N-2)K/2 - n - 1/2)``; odd M: ``-(M-2) / (pi^(3/2) n! 2^(2K+1-n))
    Gamma((M-2)K + n + 1/2) Beta^(-(M-2)K - n - 1/2)``, with
    ``Beta = B(m/(m-2), m/(m-2))``.
    """
    if m < 3 or n < 0:
        raise ValueError("need m >= 3 and n >= 0")
    spec = OscillatorSpec(m)
    x = Fraction(m, m - 2)
    beta = (gamma_rational(x) * gamma_rational(x) / gamma_rational(2 * x)).simplify()
    beta = ConstantExpr.coerce(beta)
    b = Fraction(2 * n + 1, 2)
    if spec.is_even:
        a = Fraction(m - 2, 2)
        const = ConstantExpr.from_powers(Fraction(m - 2, factorial(n)), {"pi": Fraction(-3, 2), "2": n - 1}) * beta ** (-b)
        base = ConstantExpr.from_powers(Fraction(1, 2), {}) * beta ** (-a)
        return LargeOrderExpansion(m, n, _simp(const), _simp(base), a, b, True, [])
    a = Fraction(m - 2)
    const = ConstantExpr.from_powers(Fraction(-(m - 2), factorial(n)), {"pi": Fraction(-3, 2), "2": n - 1}) * beta ** (-b)
    base = ConstantExpr.from_powers(Fraction(1, 4), {}) * beta ** (-a)
    return LargeOrderExpansion(m, n, _simp(const), _simp(base), a, b, False, [])


def large_order(m: int, n: int, inverse_k_order: int, gt_order: int | None = None) -> LargeOrderExpansion:
    """Width series through the needed order, then its moment transform."""
    spec = OscillatorSpec(m)
    N = inverse_k_order if gt_order is None else gt_order
    Kg = -(-N // spec.g_period)
    w = width_series(m, n, Kg, gt_order=N)
    return dispersion_moments(w, inverse_k_order)


def asymptotics_check(m: int, n: int, K: int, inverse_k_order: int = 0, dps: int = 40):
    """``|exact / asymptotic - 1|`` at order K with the given 1/K corrections."""
    exact = energy_series_direct(OscillatorSpec(m), n, K).scalar(K)
    lo = large_order(m, n, inverse_k_order)
    with mpmath.workdps(dps + 10):
        val = abs(mpmath.mpf(exact.numerator) / exact.denominator / lo.evalf(K, dps=dps + 10) - 1)
    return +val
