"""Truncated Laurent series with energy-polynomial coefficients.

Every series records the order through which it is exact
(``truncation``).  Arithmetic propagates that bound: a product is only
claimed through ``min(ta + vb, tb + va)`` where ``v`` is the valuation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Tuple

from .constants import ConstantExpr, Scalar
from .polynomial import EnergyPolynomial


class NonInvertibleSeriesError(ArithmeticError):
    """The leading coefficient of a divisor is not an invertible constant."""


class SeriesDomainError(ValueError):
    """A transcendental function was applied outside its formal domain."""


def _as_poly(c) -> EnergyPolynomial:
    return c if isinstance(c, EnergyPolynomial) else EnergyPolynomial.constant(c)


class LaurentSeries:
    """Truncated Laurent series ``sum_k c_k x^k`` in a tagged variable."""

    __slots__ = ("variable", "_c", "truncation")

    def __init__(self, variable: str, coefficients: Mapping[int, object], truncation: int):
        self.variable = variable
        self.truncation = int(truncation)
        clean: Dict[int, EnergyPolynomial] = {}
        for k, c in coefficients.items():
            if k > self.truncation:
                continue
            p = _as_poly(c)
            if not p.is_zero():
                clean[int(k)] = p
        self._c = clean

    def _new(self, coefficients, truncation):
        return type(self)(self.variable, coefficients, truncation)

    # inspection ---------------------------------------------------------
    @property
    def coefficients(self) -> Dict[int, EnergyPolynomial]:
        return dict(self._c)

    def __getitem__(self, k: int) -> EnergyPolynomial:
        if k > self.truncation:
            raise IndexError(f"order {k} exceeds truncation {self.truncation}")
        return self._c.get(k, EnergyPolynomial())

    def scalar(self, k: int) -> Scalar:
        """Coefficient of order ``k`` as a scalar (must be E-independent)."""
        p = self[k]
        if not p.is_constant():
            raise ValueError(f"order {k} coefficient depends on E")
        return p.constant_term()

    def items(self) -> Iterator[Tuple[int, EnergyPolynomial]]:
        return iter(sorted(self._c.items()))

    @property
    def valuation(self) -> int:
        return min(self._c) if self._c else self.truncation + 1

    @property
    def min_order(self) -> int:
        return self.valuation

    def is_zero(self) -> bool:
        return not self._c

    def residue(self) -> EnergyPolynomial:
        return self._c.get(-1, EnergyPolynomial())

    def truncate(self, order: int):
        return self._new(self._c, min(order, self.truncation))

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError("series arithmetic needs two series")
        if other.variable != self.variable:
            raise ValueError(f"variable mismatch: {self.variable} vs {other.variable}")

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            return self + self._new({0: _as_poly(other)}, self.truncation)
        self._check(other)
        t = min(self.truncation, other.truncation)
        out = {k: v for k, v in self._c.items() if k <= t}
        for k, v in other._c.items():
            if k <= t:
                out[k] = out[k] + v if k in out else v
        return self._new(out, t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -v for k, v in self._c.items()}, self.truncation)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self._new({k: v * other for k, v in self._c.items()}, self.truncation)
        self._check(other)
        t = min(self.truncation + other.valuation, other.truncation + self.valuation)
        out: Dict[int, EnergyPolynomial] = {}
        for ka, va in self._c.items():
            for kb, vb in other._c.items():
                k = ka + kb
                if k <= t:
                    out[k] = out[k] + va * vb if k in out else va * vb
        return self._new(out, t)

    __rmul__ = __mul__

    def shift(self, k: int):
        """Multiply by ``x**k``."""
        return self._new({o + k: v for o, v in self._c.items()}, self.truncation + k)

    def inverse(self):
        """Multiplicative inverse by Newton iteration with order doubling."""
        v = self.valuation
        if v > self.truncation:
            raise NonInvertibleSeriesError("series is zero to its truncation order")
        lead = self._c[v]
        if not lead.is_constant():
            raise NonInvertibleSeriesError("leading coefficient depends on E")
        c = lead.constant_term()
        if isinstance(c, ConstantExpr) and not c.is_monomial():
            raise NonInvertibleSeriesError("leading constant is not a single monomial")
        unit = self.shift(-v)
        target = unit.truncation
        y = self._new({0: 1 / c}, 0)
        prec = 0
        while prec < target:
            prec = min(2 * prec + 1, target)
            u = unit.truncate(prec)
            y = y._new(y._c, prec)
            y = (y * (2 - u * y)).truncate(prec)
        return y.shift(-v)

    def __truediv__(self, other):
        if not isinstance(other, LaurentSeries):
            return self * (1 / other if not isinstance(other, ConstantExpr) else other.inverse())
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("use series_transcendental for non-integer powers")
        result = self._new({0: 1}, self.truncation - self.valuation if self._c else self.truncation)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # energy operations --------------------------------------------------
    def map_coefficients(self, fn: Callable[[EnergyPolynomial], EnergyPolynomial]):
        return self._new({k: fn(v) for k, v in self._c.items()}, self.truncation)

    def derivative_E(self):
        return self.map_coefficients(lambda p: p.derivative())

    def derivative(self):
        """Derivative with respect to the series variable."""
        return self._new({k - 1: v * k for k, v in self._c.items() if k}, self.truncation - 1)

    def substitute_energy(self, e: "LaurentSeries"):
        """Compose ``sum_k x^k P_k(E)`` with ``E = e(x)``.

        ``e`` must have non-negative valuation and scalar coefficients.
        """
        self._check(e)
        if e.valuation < 0:
            raise SeriesDomainError("energy series must not have a pole")
        t = self.truncation
        for k, p in self._c.items():
            t = min(t, k + e.truncation) if p.degree > 0 else t
        max_deg = max((p.degree for p in self._c.values()), default=0)
        min_k = self.valuation
        powers = [self._new({0: 1}, t - min_k)]
        for _ in range(max_deg):
            powers.append((powers[-1] * e).truncate(t - min_k))
        out: Dict[int, EnergyPolynomial] = {}
        for k, p in self._c.items():
            for d, c in p.items():
                if d < 0:
                    raise SeriesDomainError("negative energy powers cannot be composed")
                for o, v in powers[d]._c.items():
                    if k + o <= t:
                        term = v * c
                        out[k + o] = out[k + o] + term if k + o in out else term
        return self._new(out, t)

    def evalf(self, x, E=None, dps: int = 50):
        import mpmath
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(0)
            x = mpmath.mpmathify(x)
            for k, p in self._c.items():
                total += p.evalf(E if E is not None else 0, dps + 10) * x ** k
        return total

    def simplify(self):
        return self.map_coefficients(lambda p: p.simplify())

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.variable == other.variable and self.truncation == other.truncation
                and self.simplify()._c == other.simplify()._c)

    def equal_through(self, other: "LaurentSeries", order: int) -> bool:
        if order > min(self.truncation, other.truncation):
            return False
        lo = min(self.valuation, other.valuation)
        return all(self[k] == other[k] for k in range(lo, order + 1))

    def __repr__(self):
        body = " + ".join(f"[{v}]*{self.variable}^{k}" for k, v in self.items()) or "0"
        return f"{type(self).__name__}({body} + O({self.variable}^{self.truncation + 1}))"


class CouplingSeries(LaurentSeries):
    """Series in a coupling variable (``g``, ``G`` or the cut coupling ``Gt``)."""

    __slots__ = ()


class QLaurentSeries(LaurentSeries):
    """Series in the coordinate ``q``; the residue is the ``q**-1`` coefficient."""

    __slots__ = ()

    def __init__(self, coefficients: Mapping[int, object], truncation: int, variable: str = "q"):
        super().__init__(variable, coefficients, truncation)

    def _new(self, coefficients, truncation):
        return QLaurentSeries(coefficients, truncation, self.variable)


def series_arith(a: LaurentSeries, b: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def series_exp(a: LaurentSeries) -> LaurentSeries:
    if a.valuation < 1:
        raise SeriesDomainError("exp needs a series without constant or pole part")
    t = a.truncation
    c: List[EnergyPolynomial] = [EnergyPolynomial.constant(1)]
    for k in range(1, t + 1):
        acc = EnergyPolynomial()
        for j in range(1, k + 1):
            aj = a._c.get(j)
            if aj is not None and not c[k - j].is_zero():
                acc = acc + aj * c[k - j] * j
        c.append(acc * Fraction(1, k))
    return a._new(dict(enumerate(c)), t)


def series_log(a: LaurentSeries) -> LaurentSeries:
    if a.valuation != 0 or a[0] != EnergyPolynomial.constant(1):
        raise SeriesDomainError("log needs leading term exactly 1 (log of other constants is not exact)")
    t = a.truncation
    L: List[EnergyPolynomial] = [EnergyPolynomial()]
    for k in range(1, t + 1):
        acc = a[k] * k
        for j in range(1, k):
            if not L[j].is_zero():
                acc = acc - L[j] * a[k - j] * j
        L.append(acc * Fraction(1, k))
    return a._new(dict(enumerate(L)), t)


def series_pow(a: LaurentSeries, r) -> LaurentSeries:
    """``a**r`` for a rational ``r`` and positive rational leading constant."""
    r = Fraction(r)
    if a.valuation != 0 or not a[0].is_constant():
        raise SeriesDomainError("pow needs a constant leading term at order 0")
    a0 = a[0].constant_term()
    if isinstance(a0, ConstantExpr):
        a0 = a0.as_rational()
    if a0 <= 0:
        raise SeriesDomainError("pow needs a positive leading constant")
    t = a.truncation
    p0 = Fraction(a0) ** int(r) if r.denominator == 1 else ConstantExpr.rational(a0) ** r
    P: List[EnergyPolynomial] = [EnergyPolynomial.constant(p0)]
    inv = Fraction(1) / a0
    for k in range(1, t + 1):
        acc = EnergyPolynomial()
        for j in range(1, k + 1):
            aj = a._c.get(j)
            if aj is not None:
                acc = acc + aj * P[k - j] * ((r + 1) * j - k)
        P.append(acc * (inv / k))
    return a._new(dict(enumerate(P)), t)


def series_transcendental(a: LaurentSeries, fn: str, r=None) -> LaurentSeries:
    if fn == "exp":
        return series_exp(a)
    if fn == "log":
        return series_log(a)
    if fn == "pow":
        return series_pow(a, r)
    raise ValueError(f"unknown function {fn!r}")


class NonInvertibleLinearizationError(ArithmeticError):
    """dF/dE vanishes at order zero, so Newton's method cannot start."""


def solve_series_equation(F: LaurentSeries, target, Kmax: int) -> LaurentSeries:
    """Solve ``F(e(x), x) = target`` for the series ``e`` through ``x**Kmax``.

    ``F`` is a series in ``x`` with E-polynomial coefficients and
    ``F(E, 0) = E``.  Newton's method doubles the number of correct orders at
    every step.  The result is back-substituted before returning.
    """
    target = Fraction(target)
    if F.truncation < Kmax:
        raise ValueError(f"F is only known through order {F.truncation} < {Kmax}")
    F = F.truncate(Kmax)
    dF = F.derivative_E()
    d0 = dF[0]
    zero_check = d0.evalf(target) if not d0.is_zero() else 0
    if d0.is_zero() or zero_check == 0:
        raise NonInvertibleLinearizationError("dF/dE vanishes at order zero")
    e = F._new({0: target}, 0)
    prec = 0
    while prec < Kmax:
        prec = min(2 * prec + 1, Kmax)
        e = e._new(e._c, prec)
        residual = F.truncate(prec).substitute_energy(e) - target
        slope = dF.truncate(prec).substitute_energy(e)
        e = (e - residual / slope).truncate(prec)
    check = F.substitute_energy(e) - target
    if not all(check[k].is_zero() for k in range(0, Kmax + 1)):
        raise ArithmeticError("back-substitution failed")
    return e
