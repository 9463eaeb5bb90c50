"""WKB approximants in the cut regime as elements of a polynomial ring in q
extended by powers of w, where ``w**2 = q**2 - 2 q**m - 2 Gt E``.

The recursion ``Gt S' - S^2 + w^2 = 0`` gives

    S_0 = w,  S_1 = S_0' / (2 S_0),
    S_K = (S'_(K-1) - sum_{l=1}^{K-1} S_(K-l) S_l) / (2 S_0).

Because ``d(w^2)/dq = 2q - 2m q^(m-1)`` does not involve ``Gt E``, every
approximant is a finite sum ``sum_p P_p(q) w^p`` with rational polynomial
coefficients; the energy only enters through ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

import mpmath

Poly = Tuple[Fraction, ...]  # coefficients by q-degree


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += sign * c
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def _pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def _pscale(a: Poly, c) -> Poly:
    if not c:
        return ()
    return tuple(x * c for x in a)


def _pderiv(a: Poly) -> Poly:
    return tuple(Fraction(i) * c for i, c in enumerate(a))[1:]


@dataclass(frozen=True)
class WkbApproximant:
    """``S_K = sum_p terms[p](q) * w**p`` for the degree-m cut problem."""

    degree: int
    index: int
    terms: Tuple[Tuple[int, Poly], ...]

    def as_dict(self) -> Dict[int, Poly]:
        return dict(self.terms)

    def monomials(self):
        """Yield ``(a, p, c)`` for each term ``c q^a w^p``."""
        for p, poly in self.terms:
            for a, c in enumerate(poly):
                if c:
                    yield a, p, c

    def evaluate(self, q, w):
        """Numeric value at a point, given the branch value ``w``."""
        total = 0
        for p, poly in self.terms:
            acc = 0
            for c in reversed(poly):
                acc = acc * q + mpmath.mpf(c.numerator) / c.denominator
            total += acc * w ** p
        return total


def _ring_deriv(x: Dict[int, Poly], m: int) -> Dict[int, Poly]:
    """d/dq of sum_p P_p w^p, using dw/dq = (q - m q^(m-1)) / w."""
    half_dw2 = [Fraction(0)] * m
    half_dw2[1] = Fraction(1)
    half_dw2[m - 1] = Fraction(-m)
    half_dw2 = tuple(half_dw2)
    out: Dict[int, Poly] = {}
    for p, poly in x.items():
        d = _pderiv(poly)
        if d:
            out[p] = _padd(out.get(p, ()), d)
        if p:
            extra = _pscale(_pmul(poly, half_dw2), p)
            out[p - 2] = _padd(out.get(p - 2, ()), extra)
    return {p: v for p, v in out.items() if v}


def _ring_mul(x: Dict[int, Poly], y: Dict[int, Poly]) -> Dict[int, Poly]:
    out: Dict[int, Poly] = {}
    for p, a in x.items():
        for r, b in y.items():
            out[p + r] = _padd(out.get(p + r, ()), _pmul(a, b))
    return {p: v for p, v in out.items() if v}


@lru_cache(maxsize=16)
def _wkb_cached(m: int, kmax: int) -> Tuple[WkbApproximant, ...]:
    S: List[Dict[int, Poly]] = [{1: (Fraction(1),)}]
    for K in range(1, kmax + 1):
        bracket = _ring_deriv(S[K - 1], m)
        for l in range(1, K):
            for p, v in _ring_mul(S[K - l], S[l]).items():
                bracket[p] = _padd(bracket.get(p, ()), v, -1)
        # divide by 2 S_0 = 2w
        S.append({p - 1: _pscale(v, Fraction(1, 2)) for p, v in bracket.items() if v})
    return tuple(WkbApproximant(m, K, tuple(sorted(s.items()))) for K, s in enumerate(S))


def wkb_terms(m: int, Kmax: int) -> List[WkbApproximant]:
    """S_0 .. S_Kmax for the degree-m cut problem."""
    if m < 3:
        raise ValueError("degree must be at least 3")
    if Kmax < 0:
        raise ValueError("Kmax must be non-negative")
    return list(_wkb_cached(m, Kmax))
