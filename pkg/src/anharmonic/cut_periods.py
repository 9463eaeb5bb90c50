"""Exact small-``u`` expansion of the cut periods and the derived A-function.

For the clockwise loop around the cut ``[q1, q2]`` of
``w = (q^2 - 2 q^m - 2u)^(1/2)`` we need

    J(a, p; u) = \\oint q^a w^p dq = sum_n u^n (alpha_n + beta_n * ell),
    ell = ln(u / (2C)),  2C = 2^(m/(m-2)),

for odd ``p``.  The expansion is obtained by splitting the integral into an
outer region (``q`` of order one, expand in ``u``) and an inner region
(``q ~ sqrt(2u)``, expand in the ``q^m`` term), each regularized
analytically with a factor ``q^s``.  Both pieces are Beta functions; their
``1/s`` poles cancel pairwise and leave the logarithm.  The barrier-side
turning point contributes only scaleless integrals.

Combining the periods with the WKB approximants gives the exact
``T(E, Gt) = (1/Gt) \\oint sum_{K even} Gt^K S_K``; subtracting the
perturbative counterterm built from ``B`` leaves ``A(E, Gt)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

import mpmath

from .exact import ConstantExpr, CouplingSeries, EnergyPolynomial, series_log, series_pow
from .exact.constants import Scalar, gamma_rational, scalar_simplify
from .riccati import OscillatorSpec, b_function
from .wkb_ring import wkb_terms

Expansion = Dict[int, Tuple[Scalar, Scalar]]  # n -> (alpha_n, beta_n)


class ExpansionConsistencyError(ArithmeticError):
    """Pole cancellation or log cancellation failed in the cut expansion."""


@lru_cache(maxsize=None)
def _binom(nu: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (nu - i) / (i + 1)
    return out


@lru_cache(maxsize=None)
def _harmonic(n: int) -> Fraction:
    return sum((Fraction(1, r) for r in range(1, n + 1)), Fraction(0))


@lru_cache(maxsize=None)
def _digamma_half_part(h: Fraction) -> Fraction:
    """Rational part D of psi(h) = -gamma - 2 ln 2 + D for half-integer h."""
    if h.denominator != 2:
        raise ValueError("expected a half-integer")
    k = abs(h - Fraction(1, 2))
    return sum((Fraction(2, 2 * r - 1) for r in range(1, int(k) + 1)), Fraction(0))


def _is_pole(x: Fraction) -> bool:
    return x <= 0 and x.denominator == 1


def _rgamma(x: Fraction) -> Scalar:
    """1/Gamma(x) exactly (zero at the poles)."""
    if _is_pole(x):
        return Fraction(0)
    return gamma_rational(x).inverse().simplify()


def _gamma(x: Fraction) -> Scalar:
    return gamma_rational(x).simplify()


def _mul(*xs) -> Scalar:
    out: Scalar = Fraction(1)
    for x in xs:
        out = out * x
    return scalar_simplify(out) if isinstance(out, ConstantExpr) else out


def _two_power(e: Fraction) -> Scalar:
    if e.denominator == 1:
        return Fraction(2) ** int(e)
    return ConstantExpr.radical(2, e)


@lru_cache(maxsize=None)
def period_expansion(m: int, a: int, p: int, n_max: int) -> Tuple[Tuple[int, Scalar, Scalar], ...]:
    """Coefficients ``(n, alpha_n, beta_n)`` of J(a, p; u) for n <= n_max.

    Negative powers of u (from the inner region) are included.
    """
    if p % 2 == 0:
        raise ValueError("only odd powers of w have a cut")
    nu = Fraction(p, 2)
    d = m - 2
    out: Dict[int, list] = {}

    def add(n, alpha, beta):
        cur = out.setdefault(n, [Fraction(0), Fraction(0)])
        cur[0] = cur[0] + alpha
        cur[1] = cur[1] + beta

    # inner region: powers n_i = (p + d i + a + 1)/2
    inner_poles: Dict[int, Tuple[int, Scalar, Fraction]] = {}
    i = 0
    while True:
        n2 = p + d * i + a + 1
        if Fraction(n2, 2) > n_max:
            break
        X = Fraction(-n2, 2)
        Y = nu - i + 1
        XY = Fraction(1 - a - m * i, 2)
        pref = _binom(nu, i) * (-2) ** i
        if n2 % 2:
            if not _is_pole(XY):
                raise ExpansionConsistencyError("unexpected half-integer power of u")
        elif _is_pole(X):
            n = -X.numerator
            K_i = _mul(pref, Fraction(2) ** n, Fraction((-1) ** n, _factorial(n)),
                       _gamma(Y), _rgamma(XY))
            inner_poles[n] = (i, K_i, XY)
        else:
            n = n2 // 2
            val = _mul(pref, _two_power(Fraction(n)), _gamma(X), _gamma(Y), _rgamma(XY))
            add(n, val, Fraction(0))
        i += 1

    # outer region: u^j
    for j in range(0, n_max + 1):
        Y = nu - j + 1
        x = Fraction(a + p - 2 * j + 1, d)
        pref = 2 * _binom(nu, j) * (-2) ** j * Fraction(1, d)
        if _is_pole(x):
            l = -x.numerator
            h = x + Y
            K_o = _mul(pref, Fraction(2) ** l, Fraction((-1) ** l, _factorial(l)),
                       _gamma(Y), _rgamma(h))
            if j not in inner_poles:
                raise ExpansionConsistencyError(f"outer pole at u^{j} without inner partner")
            i, K_i, hp = inner_poles.pop(j)
            if i != l:
                raise ExpansionConsistencyError("pole partners have mismatched indices")
            if (K_o * d - 2 * K_i) != 0:
                raise ExpansionConsistencyError(f"1/s poles do not cancel at u^{j}")
            alpha = K_o * (_harmonic(l) - _digamma_half_part(h)) + K_i * (
                _harmonic(j) - _digamma_half_part(hp))
            add(j, alpha, -K_i)
        else:
            if _is_pole(x + Y):
                continue
            val = _mul(pref, _two_power(-x), _gamma(x), _gamma(Y), _rgamma(x + Y))
            add(j, val, Fraction(0))
    if inner_poles:
        raise ExpansionConsistencyError("inner pole without outer partner")
    result = []
    for n in sorted(out):
        al, be = out[n]
        al = scalar_simplify(al) if isinstance(al, ConstantExpr) else al
        be = scalar_simplify(be) if isinstance(be, ConstantExpr) else be
        if al or be:
            result.append((n, al, be))
    return tuple(result)


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def period_expansion_evalf(m: int, a: int, p: int, n_max: int, u, dps: int = 40):
    """Numeric value of the truncated expansion at a given u (for checks)."""
    from .exact import scalar_evalf
    with mpmath.workdps(dps + 10):
        u = mpmath.mpf(u)
        ell = mpmath.log(u) - Fraction(m, m - 2) * mpmath.log(2)
        total = mpmath.mpf(0)
        for n, al, be in period_expansion(m, a, p, n_max):
            total += u ** n * (scalar_evalf(al, dps + 10) + scalar_evalf(be, dps + 10) * ell)
    return total


class BivariateLog:
    """``F(E, Gt) = N(E, Gt) + ell * L(E, Gt)`` with ell = ln(Gt E / (2C)).

    Both parts are stored as ``{(order, Edegree): scalar}``.
    """

    def __init__(self):
        self.plain: Dict[Tuple[int, int], Scalar] = {}
        self.log: Dict[Tuple[int, int], Scalar] = {}

    def add(self, key, plain=0, log=0):
        if plain:
            self.plain[key] = self.plain.get(key, Fraction(0)) + plain
        if log:
            self.log[key] = self.log.get(key, Fraction(0)) + log


@lru_cache(maxsize=16)
def cut_integral_expansion(m: int, order: int, negative_energy: bool = False) -> BivariateLog:
    """Exact T(E, Gt) for the monomials Gt^r E^b with r <= order.

    Only ``b >= 0`` is kept unless ``negative_energy`` is set; inverse powers
    of E come from the inner-region terms and cancel in T - P.
    """
    kmax = order + 1
    S = wkb_terms(m, kmax)
    T = BivariateLog()
    for k in range(0, kmax + 1, 2):
        n_max = order + 1 - k
        if n_max < 0:
            continue
        for a, p, c in S[k].monomials():
            for n, al, be in period_expansion(m, a, p, n_max):
                if n < 0 and not negative_energy:
                    continue
                if k - 1 + n > order:
                    continue
                key = (k - 1 + n, n)
                T.add(key, c * al, c * be)
    return T


def _stirling_coefficient(j: int) -> Fraction:
    """c_j in lnGamma(1/2 + z) ~ z ln z - z + ln(2 pi)/2 + sum_j c_j z^(1-2j)."""
    num, den = mpmath.bernfrac(2 * j)
    B2j = Fraction(int(num), int(den))
    return (Fraction(2) ** (1 - 2 * j) - 1) * B2j / (2 * j * (2 * j - 1))


def counterterm_expansion(m: int, order: int) -> BivariateLog:
    """P(E, Gt) = B ell + B ln(B/E) - B + sum_j c_j B^(1-2j) through Gt^order.

    This is lnGamma(1/2 + B) - ln(2 pi)/2 + B ln(Gt/(2C)) with the Gamma
    function replaced by its Stirling series, so it carries no spurious
    trigonometric factor.
    """
    spec = OscillatorSpec(m)
    p = spec.g_period
    Bfun = b_function(spec, order * p + p)
    B = Bfun.in_cut_coupling().truncate(order)
    P = BivariateLog()
    for r, poly in B.items():
        for b, c in poly.items():
            P.add((r, b), -c, c)
    ratio = B.map_coefficients(lambda q: q.shift(-1))  # B/E = 1 + rho
    L = series_log(ratio)
    for r, poly in (B * L).items():
        for b, c in poly.items():
            P.add((r, b), c)
    jmax = order // 2 + 1
    for j in range(1, jmax + 1):
        cj = _stirling_coefficient(j)
        powered = series_pow(ratio, 1 - 2 * j)
        for r, poly in powered.items():
            for b, c in poly.items():
                P.add((r, b + 1 - 2 * j), cj * c)
    return P


@lru_cache(maxsize=16)
def derived_a_function(m: int, order: int) -> CouplingSeries:
    """A(E, Gt) = T - P through Gt^order, exact.

    Only monomials with non-negative E-degree are formed; their log parts
    must cancel, which is asserted.
    """
    T = cut_integral_expansion(m, order)
    P = counterterm_expansion(m, order)
    coeffs: Dict[int, Dict[int, Scalar]] = {}
    keys = set(T.plain) | set(T.log) | {k for k in P.plain if k[1] >= 0} | {k for k in P.log if k[1] >= 0}
    for (r, b) in keys:
        if b < 0 or r > order:
            continue
        lg = T.log.get((r, b), 0) - P.log.get((r, b), 0)
        lg = scalar_simplify(lg) if isinstance(lg, ConstantExpr) else lg
        if lg:
            raise ExpansionConsistencyError(f"log term survives at Gt^{r} E^{b}: {lg}")
        val = T.plain.get((r, b), 0) - P.plain.get((r, b), 0)
        val = scalar_simplify(val) if isinstance(val, ConstantExpr) else val
        if val:
            coeffs.setdefault(r, {})[b] = val
    return CouplingSeries("Gt", {r: EnergyPolynomial(v) for r, v in coeffs.items()}, order)
