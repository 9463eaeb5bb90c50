"""Perturbative quantization function from the Riccati recursion.

In the scaled coordinate the logarithmic derivative ``s = -G psi'/psi``
obeys ``G s' - s^2 + u^2 - 2 G E = 0`` with ``u(q) = q (1 + 2 q^(m-2))^(1/2)``.
Expanding ``s = sum_K G^K s_K`` gives

    s_0 = u,   s_1 = (u' - 2E) / (2u),
    s_K = (s'_(K-1) - sum_{l=1}^{K-1} s_(K-l) s_l) / (2u).

The residue at the origin of the part of ``s`` that is even under
``(E, G) -> (-E, -G)`` yields

    B(m, E, G) = -(1/G) sum_K G^K Res[s_K]_sym,

and ``B(m, E, G) = n + 1/2`` generates the Rayleigh-Schroedinger series of
level ``n``.  The coupling map is ``G = g^X`` with ``X = 2/(m-2)`` for even
and ``1/(m-2)`` for odd degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List

import gmpy2
from gmpy2 import mpq

from .exact import CouplingSeries, EnergyPolynomial, QLaurentSeries, solve_series_equation

QDict = Dict[int, List]  # q-order -> coefficient list indexed by E-degree


class RiccatiConsistencyError(ArithmeticError):
    """A coefficient below the asserted pole order did not vanish."""


@dataclass(frozen=True)
class OscillatorSpec:
    degree: int

    def __post_init__(self):
        if self.degree < 3:
            raise ValueError("the perturbation degree must be at least 3")

    @property
    def parity_class(self) -> str:
        return "even" if self.degree % 2 == 0 else "odd"

    @property
    def is_even(self) -> bool:
        return self.degree % 2 == 0

    @property
    def coupling_exponent(self) -> Fraction:
        """X(m) with G = g^X."""
        m = self.degree
        return Fraction(2, m - 2) if self.is_even else Fraction(1, m - 2)

    @property
    def g_period(self) -> int:
        """Number of G-orders per power of g (the inverse of X)."""
        m = self.degree
        return (m - 2) // 2 if self.is_even else m - 2


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@lru_cache(maxsize=None)
def _binom_half(k: int, r: Fraction = Fraction(1, 2)) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= (r - i) / (i + 1)
    return out


def _u_series(m: int, top: int, power: Fraction) -> Dict[int, mpq]:
    """q * (1 + 2 q^(m-2))^power as {order: coeff}, through q^top (power=1/2),
    or q^-1 * (1 + 2q^(m-2))^power through q^top when power=-1/2."""
    shift = 1 if power > 0 else -1
    out = {}
    j = 0
    while shift + j * (m - 2) <= top:
        out[shift + j * (m - 2)] = mpq(_binom_half(j, power).numerator * 2**j,
                                       _binom_half(j, power).denominator)
        j += 1
    return out


def potential_u(spec: OscillatorSpec, q_order: int) -> QLaurentSeries:
    """u(q) = q (1 + 2 q^(m-2))^(1/2) through q^q_order."""
    if q_order < 1:
        raise ValueError("q_order must be at least 1")
    coeffs = {k: _to_fraction(v) for k, v in _u_series(spec.degree, q_order, Fraction(1, 2)).items()}
    return QLaurentSeries(coeffs, q_order)


# --- internal dense arithmetic on {q-order: [E-coefficients]} --------------

def _padd(a: List, b: List, sign=1) -> List:
    if len(a) < len(b):
        a = a + [mpq(0)] * (len(b) - len(a))
    else:
        a = list(a)
    for i, c in enumerate(b):
        if c:
            a[i] = a[i] + c if sign > 0 else a[i] - c
    return a


def _pmul(a: List, b: List) -> List:
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _qmul(a: QDict, b: QDict, top: int) -> QDict:
    out: QDict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = ka + kb
            if k <= top:
                prod = _pmul(va, vb)
                out[k] = _padd(out[k], prod) if k in out else prod
    return out


def _qscale(a: Dict[int, mpq], b: QDict, top: int) -> QDict:
    out: QDict = {}
    for ka, x in a.items():
        for kb, vb in b.items():
            k = ka + kb
            if k <= top:
                prod = [x * y for y in vb]
                out[k] = _padd(out[k], prod) if k in out else prod
    return out


def _trim(a: QDict) -> QDict:
    out = {}
    for k, v in a.items():
        while v and not v[-1]:
            v = v[:-1]
        if v:
            out[k] = v
    return out


def _riccati_raw(m: int, kmax: int) -> List[QDict]:
    """s_0..s_kmax with s_K exact through q^(2(kmax-K)-1) (s_0 through one more)."""
    top = lambda K: 2 * (kmax - K) - 1
    u = _u_series(m, top(0) + 2, Fraction(1, 2))
    inv2u = {k: v / 2 for k, v in _u_series(m, top(1) + 1 + 1, Fraction(-1, 2)).items()}
    s: List[QDict] = [{k: [v] for k, v in u.items()}]
    for K in range(1, kmax + 1):
        t = top(K)
        bracket: QDict = {}
        for k, v in s[K - 1].items():
            if k and k - 1 <= t + 1:
                bracket[k - 1] = [c * k for c in v]
        if K == 1:
            bracket[0] = _padd(bracket.get(0, [mpq(0)]), [mpq(0), mpq(-2)])
        for l in range(1, (K - 1) // 2 + 1):
            prod = _qmul(s[K - l], s[l], t + 1)
            for k, v in prod.items():
                v2 = [2 * c for c in v]
                bracket[k] = _padd(bracket[k], v2, -1) if k in bracket else [-c for c in v2]
        if K % 2 == 0 and K >= 2:
            prod = _qmul(s[K // 2], s[K // 2], t + 1)
            for k, v in prod.items():
                bracket[k] = _padd(bracket[k], v, -1) if k in bracket else [-c for c in v]
        sk = _trim(_qscale(inv2u, _trim(bracket), t))
        low = min(sk) if sk else 0
        if low < -(2 * K - 1):
            raise RiccatiConsistencyError(f"s_{K} has a pole of order {-low} > {2 * K - 1}")
        s.append(sk)
    return s


def _to_qseries(a: QDict, trunc: int) -> QLaurentSeries:
    return QLaurentSeries({k: EnergyPolynomial({d: _to_fraction(c) for d, c in enumerate(v)})
                           for k, v in a.items()}, trunc)


def riccati_terms(spec: OscillatorSpec, Kmax: int) -> List[QLaurentSeries]:
    """Approximants s_0 .. s_Kmax as q-Laurent series.

    s_K is exact through q^(2(Kmax-K)-1), which is what the residues and all
    products entering s_Kmax require.
    """
    if Kmax < 0:
        raise ValueError("Kmax must be non-negative")
    raw = _riccati_raw(spec.degree, Kmax)
    return [_to_qseries(sk, 2 * (Kmax - K) - 1 if K else 2 * Kmax + 1) for K, sk in enumerate(raw)]


def symmetric_residue(sK: QLaurentSeries, K: int) -> EnergyPolynomial:
    """Residue of the (E, G)-even part of G^K s_K: keep E^j with K + j even."""
    return sK.residue().filter_degrees(lambda j: (K + j) % 2 == 0)


@dataclass(frozen=True)
class BFunction:
    spec: OscillatorSpec
    series: CouplingSeries       # in G
    series_in_g: CouplingSeries  # in g

    def in_cut_coupling(self) -> CouplingSeries:
        """B as a series in the positive cut coupling Gt.

        Odd m: Gt = G.  Even m: g = -Gt^(1/X), so a g^k term picks up (-1)^k.
        """
        p = self.spec.g_period
        if not self.spec.is_even:
            return CouplingSeries("Gt", self.series.coefficients, self.series.truncation)
        coeffs = {k * p: v * (-1) ** k for k, v in self.series_in_g.items()}
        return CouplingSeries("Gt", coeffs, self.series_in_g.truncation * p + p - 1)


@lru_cache(maxsize=32)
def _b_cached(m: int, Kmax: int) -> BFunction:
    spec = OscillatorSpec(m)
    raw = _riccati_raw(m, Kmax + 1)
    coeffs: Dict[int, EnergyPolynomial] = {}
    for K in range(1, Kmax + 2):
        res = raw[K].get(-1, [])
        full = EnergyPolynomial({d: _to_fraction(c) for d, c in enumerate(res)})
        sym = full.filter_degrees(lambda j: (K + j) % 2 == 0)
        anti = full.filter_degrees(lambda j: (K + j) % 2 == 1)
        expected_anti = EnergyPolynomial.constant(Fraction(1, 2)) if K == 1 else EnergyPolynomial()
        if anti != expected_anti:
            raise RiccatiConsistencyError(f"odd-parity residue of s_{K} is not the constant 1/2 term")
        coeffs[K - 1] = -sym
    series = CouplingSeries("G", coeffs, Kmax)
    p = spec.g_period
    for k, v in series.items():
        if k % p:
            raise RiccatiConsistencyError(f"B has a G^{k} term that is not an integer power of g")
    in_g = CouplingSeries("g", {k // p: v for k, v in series.items()}, Kmax // p)
    return BFunction(spec, series, in_g)


def b_function(spec: OscillatorSpec, Kmax: int) -> BFunction:
    """B(m, E, G) through G^Kmax (and through g^(Kmax // period) in g)."""
    if Kmax < 0:
        raise ValueError("Kmax must be non-negative")
    return _b_cached(spec.degree, Kmax)


def b_function_in_g(spec: OscillatorSpec, g_order: int) -> BFunction:
    """B through g^g_order."""
    p = spec.g_period
    return b_function(spec, g_order * p + p - 1)


def energy_series(spec: OscillatorSpec, n: int, Kmax: int) -> CouplingSeries:
    """Rayleigh-Schroedinger series of level n in g through g^Kmax."""
    if n < 0:
        raise ValueError("level must be non-negative")
    B = b_function_in_g(spec, Kmax).series_in_g
    return solve_series_equation(B, Fraction(2 * n + 1, 2), Kmax)


def energy_series_direct(spec: OscillatorSpec, n: int, Kmax: int) -> CouplingSeries:
    """Level-n series from the full Riccati recursion with numeric energies.

    The unknown energy enters s_K only through -E_(K-1)/u, whose residue is
    -E_(K-1); requiring the total residue condition order by order fixes the
    coefficients one at a time.  This avoids symbolic E and reaches the high
    orders used by the large-order checks.
    """
    m = spec.degree
    p = spec.g_period
    kG = Kmax * p + 1  # need s_K up to K = kG
    top = lambda K: 2 * (kG - K) - 1
    u = _u_series(m, top(0) + 2, Fraction(1, 2))
    inv2u = {k: v / 2 for k, v in _u_series(m, top(1) + 2, Fraction(-1, 2)).items()}
    s: List[Dict[int, mpq]] = [dict(u)]
    energies: List[mpq] = []
    for K in range(1, kG + 1):
        t = top(K)
        bracket: Dict[int, mpq] = {}
        for k, v in s[K - 1].items():
            if k and k - 1 <= t + 1:
                bracket[k - 1] = bracket.get(k - 1, mpq(0)) + v * k
        for l in range(1, K):
            for ka, va in s[K - l].items():
                for kb, vb in s[l].items():
                    if ka + kb <= t + 1:
                        bracket[ka + kb] = bracket.get(ka + kb, mpq(0)) - va * vb
        sk: Dict[int, mpq] = {}
        for ka, x in inv2u.items():
            for kb, y in bracket.items():
                if ka + kb <= t and y:
                    sk[ka + kb] = sk.get(ka + kb, mpq(0)) + x * y
        res = sk.get(-1, mpq(0))
        if K == 1:
            eK = res + n  # Res s_1 = 1/2 - E_0 = -n
        else:
            eK = res
        energies.append(eK)
        # add the -E_(K-1)/u contribution: inv2u * (-2 E_(K-1))
        for ka, x in inv2u.items():
            if ka <= t:
                sk[ka] = sk.get(ka, mpq(0)) - 2 * eK * x
        s.append(sk)
    coeffs = {}
    for j, e in enumerate(energies):
        if e and j % p:
            raise RiccatiConsistencyError("energy has a fractional power of g")
        if j % p == 0 and j // p <= Kmax:
            coeffs[j // p] = _to_fraction(e)
    return CouplingSeries("g", coeffs, Kmax)
