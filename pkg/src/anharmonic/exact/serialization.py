"""JSON and CSV renderings of exact objects.

Rationals are ``"p/q"`` strings (``"p"`` when integral); constants are lists
of ``{"coefficient", "monomial"}`` records; series are
``{variable, minOrder, truncationOrder, coefficients: {order: {Edegree: constant}}}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List

from .constants import ConstantExpr, Scalar
from .polynomial import EnergyPolynomial
from .series import CouplingSeries, LaurentSeries, QLaurentSeries


def rational_to_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def constant_to_json(c: Scalar) -> Any:
    if not isinstance(c, ConstantExpr):
        return rational_to_str(c)
    if c.is_rational():
        return rational_to_str(c.as_rational())
    records = []
    for mono, coeff in sorted(c.terms.items(), key=lambda kv: str(kv[0])):
        records.append({"coefficient": rational_to_str(coeff),
                        "monomial": {name: rational_to_str(e) for name, e in mono}})
    return records


def constant_from_json(obj: Any) -> Scalar:
    if isinstance(obj, (str, int)):
        return Fraction(obj)
    total = ConstantExpr()
    for rec in obj:
        total = total + ConstantExpr.from_powers(
            Fraction(rec["coefficient"]),
            {k: Fraction(v) for k, v in rec.get("monomial", {}).items()})
    return total.simplify()


def polynomial_to_json(p: EnergyPolynomial) -> Dict[str, Any]:
    return {str(d): constant_to_json(c) for d, c in p.items()}


def polynomial_from_json(obj: Dict[str, Any]) -> EnergyPolynomial:
    return EnergyPolynomial({int(d): constant_from_json(c) for d, c in obj.items()})


def series_to_json(s: LaurentSeries) -> Dict[str, Any]:
    return {
        "variable": s.variable,
        "minOrder": s.valuation if not s.is_zero() else 0,
        "truncationOrder": s.truncation,
        "coefficients": {str(k): polynomial_to_json(v) for k, v in s.items()},
    }


def series_from_json(obj: Dict[str, Any]) -> LaurentSeries:
    coeffs = {int(k): polynomial_from_json(v) for k, v in obj["coefficients"].items()}
    if obj["variable"] == "q":
        return QLaurentSeries(coeffs, int(obj["truncationOrder"]))
    return CouplingSeries(obj["variable"], coeffs, int(obj["truncationOrder"]))


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def series_to_csv_rows(s: LaurentSeries, order_scale: Fraction = Fraction(1),
                       variable: str | None = None) -> List[List[str]]:
    """Rows ``(variable, order_numerator, order_denominator, E_degree, value)``.

    ``order_scale`` converts series orders to powers of the printed variable,
    e.g. ``1/3`` when a series in ``g**(1/3)`` is reported in powers of ``g``.
    """
    rows = []
    for k, p in s.items():
        o = Fraction(k) * order_scale
        for d, c in p.items():
            value = constant_to_json(c)
            if not isinstance(value, str):
                value = json.dumps(value, sort_keys=True, separators=(",", ":"))
            rows.append([variable or s.variable, str(o.numerator), str(o.denominator), str(d), value])
    return rows
