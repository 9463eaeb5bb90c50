"""Extended-precision real and complex values with recorded precision."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import mpmath

DEFAULT_DPS = 50


@dataclass(frozen=True)
class BigReal:
    """An mpmath value together with the decimal precision it was computed at.

    mpmath rounds to nearest, so only the digit count needs recording.
    """

    value: Union[mpmath.mpf, mpmath.mpc]
    dps: int = DEFAULT_DPS

    @classmethod
    def of(cls, x, dps: int = DEFAULT_DPS) -> "BigReal":
        with mpmath.workdps(dps):
            return cls(mpmath.mpmathify(x), dps)

    @property
    def real(self):
        return mpmath.re(self.value)

    @property
    def imag(self):
        return mpmath.im(self.value)

    def __float__(self):
        return float(mpmath.re(self.value))

    def __complex__(self):
        return complex(self.value)

    def __str__(self):
        return mpmath.nstr(self.value, self.dps)


def to_mp(x):
    """Convert Fractions, ints, floats or strings to mpmath numbers."""
    from fractions import Fraction

    if isinstance(x, BigReal):
        return x.value
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)
