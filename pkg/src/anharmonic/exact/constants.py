"""Exact symbolic constants: rational combinations of monomials in a fixed
set of transcendental generators.

A :class:`ConstantExpr` is a finite sum ``sum_i c_i * M_i`` where each
``c_i`` is a :class:`fractions.Fraction` and each ``M_i`` is a product of
generator powers with rational exponents.  Generators are

* ``pi``
* prime radicals ``p`` (written as the prime itself, e.g. ``"2"``), whose
  exponents are kept in ``[0, 1)`` with integer parts folded into the
  rational coefficient,
* ``G(a/b)`` for reduced fractions in ``(0, 1)`` other than 1/2 (Gamma at
  that point),
* ``sqrt5+1`` (the quantity ``sqrt(5) + 1``),
* ``euler_gamma`` and ``zeta(2)``.

Monomials are stored as sorted tuples, so structurally equal expressions
compare and hash equal.  No relations between generators (reflection or
duplication formulas) are applied; equality across such relations is a
numeric question, see :meth:`ConstantExpr.evalf`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Tuple, Union

import mpmath

Monomial = Tuple[Tuple[str, Fraction], ...]
Scalar = Union[int, Fraction, "ConstantExpr"]

_GAMMA_POINTS = ("G(1/3)", "G(2/3)", "G(1/5)", "G(2/5)", "G(3/5)", "G(4/5)")
_NAMED_ORDER = {"pi": 0, **{g: 10 + i for i, g in enumerate(_GAMMA_POINTS)},
                "sqrt5+1": 30, "euler_gamma": 40, "zeta(2)": 41}


def _generator_key(name: str) -> Tuple[int, int, str]:
    if name.isdigit():
        return (1, int(name), name)
    if name.startswith("G(") and name not in _NAMED_ORDER:
        num, den = name[2:-1].split("/")
        return (2, 20, f"{int(den):04d}/{int(num):04d}")
    try:
        return (2, _NAMED_ORDER[name], name)
    except KeyError:
        raise ValueError(f"unknown generator {name!r}") from None


def is_prime_generator(name: str) -> bool:
    return name.isdigit()


def _factor_small(n: int) -> Dict[int, int]:
    """Trial-division factorization; the integers met here are small."""
    if n <= 0:
        raise ValueError("factorization needs a positive integer")
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
        if p > 10**6:
            raise ValueError("integer too large for radical normalization")
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _normalize(coeff: Fraction, powers: Mapping[str, Fraction]) -> Tuple[Fraction, Monomial]:
    """Fold integer parts of prime-radical exponents into the coefficient."""
    kept = {}
    for name, e in powers.items():
        e = Fraction(e)
        if e == 0:
            continue
        if is_prime_generator(name):
            p = int(name)
            whole = e.numerator // e.denominator
            frac = e - whole
            if whole > 0:
                coeff *= p ** whole
            elif whole < 0:
                coeff /= p ** (-whole)
            if frac:
                kept[name] = frac
        else:
            kept[name] = e
    mono = tuple(sorted(kept.items(), key=lambda kv: _generator_key(kv[0])))
    return coeff, mono


def _mono_mul(a: Monomial, b: Monomial) -> Tuple[Fraction, Monomial]:
    if not a:
        return Fraction(1), b
    if not b:
        return Fraction(1), a
    powers: Dict[str, Fraction] = dict(a)
    for name, e in b:
        powers[name] = powers.get(name, Fraction(0)) + e
    return _normalize(Fraction(1), powers)


_mono_mul_cached = lru_cache(maxsize=65536)(_mono_mul)


class ConstantExpr:
    """Immutable exact constant: a sum of rational multiples of monomials."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c:
                clean[mono] = Fraction(c)
        self._terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def rational(cls, value) -> "ConstantExpr":
        return cls({(): Fraction(value)})

    @classmethod
    def monomial(cls, coeff=1, **_unused) -> "ConstantExpr":
        return cls.rational(coeff)

    @classmethod
    def from_powers(cls, coeff, powers: Mapping[str, object]) -> "ConstantExpr":
        c, mono = _normalize(Fraction(coeff), {k: Fraction(v) for k, v in powers.items()})
        return cls({mono: c})

    @classmethod
    def pi(cls, exponent=1) -> "ConstantExpr":
        return cls.from_powers(1, {"pi": exponent})

    @classmethod
    def radical(cls, base: int, exponent) -> "ConstantExpr":
        """``base**exponent`` for a positive integer base, split over primes."""
        powers: Dict[str, Fraction] = {}
        for p, k in _factor_small(base).items():
            powers[str(p)] = Fraction(exponent) * k
        return cls.from_powers(1, powers)

    @classmethod
    def coerce(cls, value: Scalar) -> "ConstantExpr":
        if isinstance(value, ConstantExpr):
            return value
        return cls.rational(value)

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m == () for m in self._terms)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get((), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def simplify(self) -> Scalar:
        """Return a Fraction when the value is rational, else ``self``."""
        return self.as_rational() if self.is_rational() else self

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self
            other = ConstantExpr.rational(other)
        elif not isinstance(other, ConstantExpr):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return ConstantExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ConstantExpr({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, ConstantExpr)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ConstantExpr()
            return ConstantExpr({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, ConstantExpr):
            return NotImplemented
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                k, m = _mono_mul_cached(ma, mb)
                out[m] = out.get(m, Fraction(0)) + ca * cb * k
        return ConstantExpr(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, ConstantExpr):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return ConstantExpr.coerce(other) * self.inverse()

    def inverse(self) -> "ConstantExpr":
        if len(self._terms) != 1:
            raise ZeroDivisionError("only single-monomial constants are invertible exactly")
        return self ** -1

    def __pow__(self, exponent):
        exponent = Fraction(exponent)
        if exponent.denominator == 1 and exponent >= 0:
            result = ConstantExpr.rational(1)
            base = self
            k = int(exponent)
            while k:
                if k & 1:
                    result = result * base
                base = base * base
                k >>= 1
            return result
        if len(self._terms) != 1:
            raise ValueError("rational or negative powers need a single monomial")
        (mono, c), = self._terms.items()
        if c < 0:
            if exponent.denominator != 1:
                raise ValueError("fractional power of a negative constant")
            sign = -1 if exponent.numerator % 2 else 1
            c = -c
        else:
            sign = 1
        powers: Dict[str, Fraction] = {name: e * exponent for name, e in mono}
        coeff = Fraction(sign)
        if exponent.denominator == 1:
            coeff *= c ** int(exponent)
        else:
            for p, k in _factor_small(c.numerator).items() if c.numerator != 1 else ():
                powers[str(p)] = powers.get(str(p), Fraction(0)) + k * exponent
            for p, k in _factor_small(c.denominator).items() if c.denominator != 1 else ():
                powers[str(p)] = powers.get(str(p), Fraction(0)) - k * exponent
        k2, m2 = _normalize(coeff, powers)
        return ConstantExpr({m2: k2})

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ConstantExpr.rational(other)
        if not isinstance(other, ConstantExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # numerics -----------------------------------------------------------
    def evalf(self, dps: int = 50):
        """Numeric value as an mpmath number at ``dps`` decimal digits."""
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(0)
            for mono, c in self._terms.items():
                v = mpmath.mpf(c.numerator) / c.denominator
                for name, e in mono:
                    v *= generator_value(name, dps + 10) ** (mpmath.mpf(e.numerator) / e.denominator)
                total += v
        return +total

    def __float__(self):
        return float(self.evalf(20))

    # display ------------------------------------------------------------
    def __repr__(self):
        return f"ConstantExpr({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for mono, c in sorted(self._terms.items(), key=lambda kv: _mono_sort_key(kv[0])):
            factors = [] if c == 1 and mono else [str(c) if c.denominator == 1 else f"({c})"]
            if c == -1 and mono:
                factors = ["-1"]
            for name, e in mono:
                factors.append(name if e == 1 else f"{name}^({e})")
            parts.append("*".join(factors))
        return " + ".join(parts)


def _mono_sort_key(mono: Monomial):
    return tuple((_generator_key(n), e) for n, e in mono)


@lru_cache(maxsize=None)
def _generator_value_cached(name: str, dps: int):
    with mpmath.workdps(dps):
        if name == "pi":
            return +mpmath.pi
        if name.isdigit():
            return mpmath.mpf(int(name))
        if name.startswith("G("):
            p, q = name[2:-1].split("/")
            return mpmath.gamma(mpmath.mpf(int(p)) / int(q))
        if name == "sqrt5+1":
            return mpmath.sqrt(5) + 1
        if name == "euler_gamma":
            return +mpmath.euler
        if name == "zeta(2)":
            return mpmath.zeta(2)
    raise ValueError(f"unknown generator {name!r}")


def generator_value(name: str, dps: int):
    return _generator_value_cached(name, dps)


def to_constant(x: Scalar) -> ConstantExpr:
    return ConstantExpr.coerce(x)


def scalar_simplify(x: Scalar) -> Scalar:
    if isinstance(x, ConstantExpr):
        return x.simplify()
    return Fraction(x)


def scalar_evalf(x: Scalar, dps: int = 50):
    if isinstance(x, ConstantExpr):
        return x.evalf(dps)
    x = Fraction(x)
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


def gamma_rational(x) -> ConstantExpr:
    """Exact Gamma at a rational point.

    The argument is shifted into ``(0, 1]`` with ``Gamma(x+1) = x Gamma(x)``;
    ``Gamma(1/2)`` becomes ``pi^(1/2)``.
    """
    x = Fraction(x)
    if x <= 0 and x.denominator == 1:
        raise ValueError(f"Gamma has a pole at {x}")
    base = x - (x.numerator // x.denominator)
    if base == 0:
        base = Fraction(1)
    factor = Fraction(1)
    y = base
    while y < x:
        factor *= y
        y += 1
    while y > x:
        y -= 1
        factor /= y
    if base == 1:
        return ConstantExpr.rational(factor)
    if base == Fraction(1, 2):
        return ConstantExpr.from_powers(factor, {"pi": Fraction(1, 2)})
    return ConstantExpr.from_powers(factor, {f"G({base.numerator}/{base.denominator})": 1})


def gamma_ratio(a, b) -> Scalar:
    """``Gamma(a)/Gamma(b)`` exactly; rational whenever ``a - b`` is an integer."""
    a, b = Fraction(a), Fraction(b)
    if (a - b).denominator == 1:
        if b <= 0 and b.denominator == 1:
            raise ValueError("Gamma pole in denominator")
        r = Fraction(1)
        y = b
        while y < a:
            r *= y
            y += 1
        while y > a:
            y -= 1
            r /= y
        return r
    return (gamma_rational(a) / gamma_rational(b)).simplify()


def sum_scalars(values: Iterable[Scalar]) -> Scalar:
    total: Scalar = Fraction(0)
    for v in values:
        total = total + v
    return scalar_simplify(total) if isinstance(total, ConstantExpr) else total
