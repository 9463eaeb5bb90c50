"""Polynomials in the energy symbol E with exact coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

import mpmath

from .constants import ConstantExpr, Scalar, scalar_evalf, scalar_simplify


def _is_zero(c: Scalar) -> bool:
    return not c


class EnergyPolynomial:
    """Immutable map ``degree -> coefficient`` for a polynomial in E.

    Degrees are integers.  The public tables only ever contain non-negative
    degrees, but intermediate counterterm algebra needs Laurent polynomials,
    so negative degrees are allowed and reported by :attr:`is_laurent`.
    """

    __slots__ = ("_c",)

    def __init__(self, coefficients: Mapping[int, Scalar] | None = None):
        clean: Dict[int, Scalar] = {}
        for d, c in (coefficients or {}).items():
            if not _is_zero(c):
                clean[int(d)] = c if isinstance(c, ConstantExpr) else Fraction(c)
        self._c = clean

    @classmethod
    def constant(cls, c: Scalar) -> "EnergyPolynomial":
        return cls({0: c})

    @classmethod
    def E(cls, power: int = 1) -> "EnergyPolynomial":
        return cls({power: Fraction(1)})

    # inspection ---------------------------------------------------------
    @property
    def coefficients(self) -> Dict[int, Scalar]:
        return dict(self._c)

    def items(self) -> Iterator[Tuple[int, Scalar]]:
        return iter(sorted(self._c.items()))

    def __getitem__(self, degree: int) -> Scalar:
        return self._c.get(degree, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    @property
    def degree(self) -> int:
        return max(self._c) if self._c else -1

    @property
    def low_degree(self) -> int:
        return min(self._c) if self._c else 0

    @property
    def is_laurent(self) -> bool:
        return any(d < 0 for d in self._c)

    @property
    def parity(self) -> str:
        if not self._c:
            return "even"
        kinds = {d % 2 for d in self._c}
        if kinds == {0}:
            return "even"
        if kinds == {1}:
            return "odd"
        return "mixed"

    def is_constant(self) -> bool:
        return set(self._c) <= {0}

    def constant_term(self) -> Scalar:
        return self._c.get(0, Fraction(0))

    def is_rational(self) -> bool:
        return all(not isinstance(c, ConstantExpr) or c.is_rational() for c in self._c.values())

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, EnergyPolynomial):
            other = EnergyPolynomial.constant(other)
        out = dict(self._c)
        for d, c in other._c.items():
            out[d] = out.get(d, 0) + c
        return EnergyPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return EnergyPolynomial({d: -c for d, c in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, EnergyPolynomial):
            if _is_zero(other):
                return EnergyPolynomial()
            return EnergyPolynomial({d: c * other for d, c in self._c.items()})
        out: Dict[int, Scalar] = {}
        for da, ca in self._c.items():
            for db, cb in other._c.items():
                out[da + db] = out.get(da + db, 0) + ca * cb
        return EnergyPolynomial(out)

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "EnergyPolynomial":
        return self * c

    def shift(self, k: int) -> "EnergyPolynomial":
        """Multiply by ``E**k``."""
        return EnergyPolynomial({d + k: c for d, c in self._c.items()})

    def derivative(self) -> "EnergyPolynomial":
        return EnergyPolynomial({d - 1: c * d for d, c in self._c.items() if d})

    def filter_degrees(self, keep) -> "EnergyPolynomial":
        return EnergyPolynomial({d: c for d, c in self._c.items() if keep(d)})

    def simplify(self) -> "EnergyPolynomial":
        return EnergyPolynomial({d: scalar_simplify(c) for d, c in self._c.items()})

    # evaluation ---------------------------------------------------------
    def evalf(self, E, dps: int = 50):
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(0)
            for d, c in self._c.items():
                total += scalar_evalf(c, dps + 10) * mpmath.mpmathify(E) ** d
        return total

    def __eq__(self, other):
        if not isinstance(other, EnergyPolynomial):
            other = EnergyPolynomial.constant(other)
        a = {d: scalar_simplify(c) for d, c in self._c.items()}
        b = {d: scalar_simplify(c) for d, c in other._c.items()}
        return a == b

    def __hash__(self):
        return hash(frozenset((d, scalar_simplify(c)) for d, c in self._c.items()))

    def __repr__(self):
        return f"EnergyPolynomial({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for d, c in sorted(self._c.items()):
            cs = str(c) if not isinstance(c, ConstantExpr) or c.is_monomial() else f"({c})"
            parts.append(cs if d == 0 else f"{cs}*E" if d == 1 else f"{cs}*E^{d}")
        return " + ".join(parts)
