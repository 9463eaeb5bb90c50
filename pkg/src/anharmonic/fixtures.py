"""Loaders for the printed coefficient tables shipped as JSON under ``data/``.

Every fixture stores its terms in the printed variable (``g`` or ``-g``, with
rational powers).  The loaders convert them to the positive cut coupling
``Gt`` or, for integer-power tables, keep them as series in ``g``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Dict, List

from .exact import ConstantExpr, CouplingSeries, EnergyPolynomial
from .exact.constants import Scalar, scalar_simplify
from .exact.serialization import constant_from_json, constant_to_json, dumps
from .riccati import OscillatorSpec


class FixtureError(LookupError):
    """Unknown fixture or a fixture that does not fit the requested variable."""


@dataclass(frozen=True)
class FixtureTable:
    identifier: str
    degree: int
    level: int | None
    kind: str
    provenance: str
    payload: Dict[str, Any]


def fixture_ids() -> List[str]:
    root = resources.files("anharmonic") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


@lru_cache(maxsize=None)
def _raw(fid: str) -> str:
    path = resources.files("anharmonic") / "data" / f"{fid}.json"
    if not path.is_file():
        raise FixtureError(f"no fixture named {fid!r}")
    return path.read_text()


def load(fid: str) -> FixtureTable:
    obj = json.loads(_raw(fid))
    return FixtureTable(obj["id"], obj["degree"], obj.get("level"), obj["kind"],
                        obj["provenance"], obj)


def roundtrip_ok(fid: str) -> bool:
    """Parse every constant and re-render the file; the text must not change."""
    obj = json.loads(_raw(fid))

    def walk(x):
        if isinstance(x, dict):
            return {k: walk(v) for k, v in x.items()}
        if isinstance(x, list) and x and isinstance(x[0], dict) and "coefficient" in x[0]:
            return constant_to_json(constant_from_json(x))
        if isinstance(x, list):
            return [walk(v) for v in x]
        return x

    return dumps(walk(obj)) + "\n" == _raw(fid)


def _simp(x: Scalar) -> Scalar:
    return scalar_simplify(x) if isinstance(x, ConstantExpr) else x


def _gt_order(m: int, base: str, power: Fraction) -> tuple[int, int]:
    """(Gt order, sign) for ``base**power``."""
    X = OscillatorSpec(m).coupling_exponent
    order = power / X
    if order.denominator != 1:
        raise FixtureError(f"{base}^{power} is not an integer power of Gt for m={m}")
    sign = 1
    if m % 2 == 0 and base == "g":
        if power.denominator != 1:
            raise FixtureError("fractional power of negative g")
        sign = -1 if int(power) % 2 else 1
    return int(order), sign


def terms_in_cut_coupling(m: int, terms, truncation=None) -> CouplingSeries:
    coeffs: Dict[int, Dict[int, Scalar]] = {}
    for t in terms:
        k, sign = _gt_order(m, t["base"], Fraction(t["power"]))
        slot = coeffs.setdefault(k, {})
        for d, c in t["coefficients"].items():
            slot[int(d)] = _simp(slot.get(int(d), Fraction(0)) + sign * constant_from_json(c))
    top = max(coeffs)
    if truncation is not None:
        top = _gt_order(m, truncation["base"], Fraction(truncation["power"]))[0]
    return CouplingSeries("Gt", {k: EnergyPolynomial(v) for k, v in coeffs.items()}, top)


def terms_in_g(terms, truncation) -> CouplingSeries:
    coeffs: Dict[int, Dict[int, Scalar]] = {}
    for t in terms:
        p = Fraction(t["power"])
        if p.denominator != 1 or t["base"] != "g":
            raise FixtureError("table is not an integer-power series in g")
        for d, c in t["coefficients"].items():
            coeffs.setdefault(int(p), {})[int(d)] = constant_from_json(c)
    return CouplingSeries("g", {k: EnergyPolynomial(v) for k, v in coeffs.items()},
                          int(Fraction(truncation["power"])))


def a_fixture(m: int) -> CouplingSeries:
    """Printed A-function of degree m as a series in Gt."""
    f = load(f"A{m}").payload
    return terms_in_cut_coupling(m, f["terms"], f["truncation"])


def b_fixture(m: int) -> CouplingSeries:
    """Printed B-function of degree m as a series in g."""
    f = load(f"B{m}").payload
    return terms_in_g(f["terms"], f["truncation"])


def energy_fixture(m: int) -> CouplingSeries:
    """Printed ground-state perturbation series of degree m in g."""
    f = load(f"P{m}").payload
    return terms_in_g(f["terms"], f["truncation"])


def width_fixture_id(m: int, n: int) -> str:
    return f"im{m}" if n == 0 else f"im{m}level{n}"


def width_fixture(m: int, n: int = 0) -> Dict[str, Any]:
    """Printed width: prefactor, exponent and correction series in Gt."""
    f = load(width_fixture_id(m, n)).payload
    out = {}
    for key in ("prefactor", "exponent"):
        d = f[key]
        out[key] = {"constant": constant_from_json(d["constant"]), "base": d["base"],
                    "power": Fraction(d["power"])}
    out["corrections"] = terms_in_cut_coupling(m, f["terms"], f["truncation"])
    return out


def large_order_fixture(m: int, n: int = 0) -> Dict[str, Any]:
    f = load(f"LO{m}" if n == 0 else f"LO{m}level{n}").payload
    return {
        "constant": constant_from_json(f["constant"]),
        "base": constant_from_json(f["base"]),
        "gamma_slope": Fraction(f["gamma_slope"]),
        "gamma_offset": Fraction(f["gamma_offset"]),
        "alternating": f["alternating"],
        "inverse_k": [constant_from_json(c) for c in f["inverse_k"]],
    }


def strong_coupling_fixture(m: int) -> Dict[str, Any]:
    f = load(f"strong{m}").payload
    return {"moduli": [Fraction(v) for v in f["moduli"]],
            "phase_over_pi": Fraction(f["phase_over_pi"]), "digits": f["digits"]}
