"""Command-line front end.

Exit codes: 0 success, 1 failed validation, 2 usage or domain error,
3 numeric failure.  The default precision tier of the spectral commands is
read from ``ANHARMONIC_PRECISION`` (``double`` or ``extended``).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Any, Dict, List, Optional, Sequence

from .exact.serialization import constant_to_json, dumps, rational_to_str, series_to_csv_rows, series_to_json
from .riccati import OscillatorSpec


def _csv(rows: List[List[str]], header: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


SERIES_HEADER = ("variable", "order_numerator", "order_denominator", "E_degree", "value")


def _value(c) -> str:
    v = constant_to_json(c)
    return v if isinstance(v, str) else dumps(v).replace("\n", "").replace("  ", "")


def _emit_series(series, fmt: str, extra: Optional[Dict[str, Any]] = None) -> str:
    if fmt == "csv":
        return _csv(series_to_csv_rows(series), SERIES_HEADER)
    obj = series_to_json(series)
    if extra:
        obj.update(extra)
    return dumps(obj) + "\n"


# -- subcommands -----------------------------------------------------------------


def cmd_bfunc(a) -> str:
    from .riccati import b_function_in_g
    B = b_function_in_g(OscillatorSpec(a.degree), a.order).series_in_g.truncate(a.order)
    return _emit_series(B, a.format, {"degree": a.degree})


def cmd_energy_series(a) -> str:
    from .riccati import energy_series_direct
    s = energy_series_direct(OscillatorSpec(a.degree), a.level, a.order)
    return _emit_series(s, a.format, {"degree": a.degree, "level": a.level})


def cmd_afunc(a) -> str:
    from .wkb import a_function
    A = a_function(a.degree, source=a.source, Kmax=a.order)
    return _emit_series(A.series, a.format, {"degree": a.degree, "source": A.source})


def cmd_width_series(a) -> str:
    from .quantization import width_series
    spec = OscillatorSpec(a.degree)
    w = width_series(a.degree, a.level, a.order, gt_order=a.gt_order, a_source=a.a_source)
    terms = w.corrections_in_g()
    if a.format == "csv":
        rows = [[base, str(p.numerator), str(p.denominator), "0", _value(c)] for base, p, c in terms]
        return _csv(rows, SERIES_HEADER)
    X = spec.coupling_exponent
    obj = {
        "degree": a.degree, "level": a.level, "a_source": w.a_source,
        "cut_coupling": f"|g|^{rational_to_str(X)}",
        "prefactor": {"constant": constant_to_json(w.overall_constant),
                      "cut_coupling_power": rational_to_str(w.prefactor_power)},
        "action": constant_to_json(w.action),
        "corrections": [{"base": base, "power": rational_to_str(p), "value": constant_to_json(c)}
                        for base, p, c in terms],
    }
    return dumps(obj) + "\n"


def cmd_transseries(a) -> str:
    from .quantization import multi_instanton_leading
    terms = multi_instanton_leading(a.degree, a.level, a.instantons)
    if a.format == "csv":
        rows = [[str(t.J), str(t.L), str(t.K), str(t), f"{float(t.evalf(a.zeta2)):.15g}"] for t in terms]
        return _csv(rows, ("J", "L", "K", "coefficient", "value"))
    return dumps({"degree": a.degree, "level": a.level, "zeta2": a.zeta2, "terms": [
        {"J": t.J, "L": t.L, "K": t.K, "coefficient": str(t), "value": f"{float(t.evalf(a.zeta2)):.15g}"}
        for t in terms]}) + "\n"


def cmd_large_order(a) -> str:
    from .large_order import large_order
    lo = large_order(a.degree, a.level, a.order)
    obj = {"degree": a.degree, "level": a.level, "constant": constant_to_json(lo.constant),
           "base": constant_to_json(lo.base), "gamma_slope": rational_to_str(lo.gamma_slope),
           "gamma_offset": rational_to_str(lo.gamma_offset), "alternating": lo.alternating,
           "inverse_k": [constant_to_json(c) for c in lo.inverse_k]}
    if a.format == "csv":
        rows = [["1/K", str(j), "1", "0", _value(c)] for j, c in enumerate(lo.inverse_k, start=1)]
        return _csv(rows, SERIES_HEADER)
    return dumps(obj) + "\n"


def cmd_resonance(a) -> str:
    from .spectral import default_tier, resonance
    tier = a.precision or default_tier()
    r = resonance(a.degree, a.level, a.coupling, D=a.dim, side=a.side, tier=tier)
    if tier == "extended":
        import mpmath
        re, im = mpmath.nstr(r.energy.real, 25), mpmath.nstr(r.energy.imag, 25)
    else:
        re, im = repr(r.energy.real), repr(r.energy.imag)
    row = {"degree": a.degree, "level": a.level, "coupling": a.coupling, "side": a.side,
           "re": re, "im": im, "dimension": r.dimension, "convergence": f"{r.convergence:.3e}",
           "theta": repr(r.theta), "precision": tier}
    if a.format == "csv":
        return _csv([[str(v) for v in row.values()]], tuple(row))
    return dumps(row) + "\n"


def cmd_strong_coupling(a) -> str:
    import mpmath
    from .spectral import default_tier, rotated_strong_coupling_levels
    tier = a.precision or default_tier()
    res = rotated_strong_coupling_levels(a.degree, a.levels, D=a.dim, tier=tier)
    rows = []
    for k, (e, est) in enumerate(zip(res.levels, res.convergence)):
        e = mpmath.mpc(e)
        rows.append({"index": k, "modulus": mpmath.nstr(abs(e), 15),
                     "phase_over_pi": mpmath.nstr(mpmath.arg(e) / mpmath.pi, 15),
                     "convergence": f"{est:.3e}"})
    if a.format == "csv":
        return _csv([[str(v) for v in r.values()] for r in rows], tuple(rows[0]))
    return dumps({"degree": a.degree, "dimension": res.dimension, "precision": tier, "levels": rows}) + "\n"


def cmd_dispersion_check(a) -> str:
    from .riccati import energy_series_direct
    from .spectral import dispersion_quadrature
    v = dispersion_quadrature(a.degree, a.level, a.order)
    exact = energy_series_direct(OscillatorSpec(a.degree), a.level, a.order).scalar(a.order)
    rel = abs(v / float(exact) - 1) if exact else abs(v)
    row = {"degree": a.degree, "level": a.level, "order": a.order, "quadrature": repr(v),
           "exact": rational_to_str(exact), "relative_error": f"{rel:.3e}"}
    if a.format == "csv":
        return _csv([[str(x) for x in row.values()]], tuple(row))
    return dumps(row) + "\n"


def cmd_fig2_data(a) -> str:
    from .spectral import fig2_data
    gs = [float(x) for x in a.couplings.split(",")] if a.couplings else None
    rows = fig2_data(gs)
    return _csv([[repr(x) for x in r] for r in rows], ("g", "Im_numeric", "Im_leading", "Im_series4"))


def cmd_validate(a) -> str:
    from .validation import validate
    crit = [int(x) for x in a.criteria.split(",")] if a.criteria else None
    report = validate(a.scope, crit)
    a._report_ok = report.ok
    return (report.to_json() + "\n") if a.format == "json" else (report.to_text() + "\n")


# -- parser -------------------------------------------------------------------


def _positive_degree(s: str) -> int:
    m = int(s)
    if m < 3:
        raise argparse.ArgumentTypeError("degree must be at least 3")
    return m


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anharmonic", description="Perturbative and resonant spectra of anharmonic oscillators.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, degree=True, level=False, order=False, fmt=("json", "csv")):
        sp = sub.add_parser(name, help=help_text)
        if degree:
            sp.add_argument("--degree", type=_positive_degree, required=True)
        if level:
            sp.add_argument("--level", type=int, default=0)
        if order:
            sp.add_argument("--order", type=int, required=True)
        sp.add_argument("--format", choices=fmt, default=fmt[0])
        sp.set_defaults(func=fn)
        return sp

    add("bfunc", cmd_bfunc, "B-function through g^order", order=True)
    add("energy-series", cmd_energy_series, "Rayleigh-Schroedinger series of a level", level=True, order=True)
    sp = add("afunc", cmd_afunc, "A-function through Gt^order", order=True)
    sp.add_argument("--source", choices=("derived", "fixture", "numeric-fit"), default="derived")
    sp = add("width-series", cmd_width_series, "one-instanton width corrections", level=True, order=True)
    sp.add_argument("--gt-order", type=int, default=None, help="order in the cut coupling (fractional powers of g)")
    sp.add_argument("--a-source", choices=("derived", "fixture"), default="derived")
    sp = add("transseries", cmd_transseries, "multi-instanton K = 0 coefficients", level=True)
    sp.add_argument("--instantons", type=int, default=3)
    sp.add_argument("--zeta2", choices=("pi^2/6", "pi^2/12"), default="pi^2/6")
    add("large-order", cmd_large_order, "large-order growth with 1/K corrections", level=True, order=True)
    sp = add("resonance", cmd_resonance, "complex-scaled resonance energy", level=True)
    sp.add_argument("--coupling", type=float, required=True)
    sp.add_argument("--precision", choices=("double", "extended"), default=None)
    sp.add_argument("--dim", type=int, default=None)
    sp.add_argument("--side", choices=("+", "-"), default="+")
    sp = add("strong-coupling", cmd_strong_coupling, "strong-coupling resonance levels")
    sp.add_argument("--levels", type=int, default=3)
    sp.add_argument("--dim", type=int, default=160)
    sp.add_argument("--precision", choices=("double", "extended"), default=None)
    add("dispersion-check", cmd_dispersion_check, "perturbative coefficient from the dispersion integral",
        level=True, order=True)
    sp = add("fig2-data", cmd_fig2_data, "first cubic excited-state width: numeric vs series", degree=False, fmt=("csv",))
    sp.add_argument("--couplings", default=None, help="comma-separated couplings")
    sp = add("validate", cmd_validate, "run acceptance checks", degree=False, fmt=("text", "json"))
    sp.add_argument("--scope", default="all")
    sp.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    return p


def run_command(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        text = args.func(args)
    except NotImplementedError as e:
        print(f"error: {e}", file=err)
        return 2
    except ArithmeticError as e:
        print(f"numeric failure: {type(e).__name__}: {e}", file=err)
        return 3
    except (ValueError, LookupError) as e:
        print(f"error: {e}", file=err)
        return 2
    out.write(text)
    if getattr(args, "_report_ok", True) is False:
        return 1
    return 0


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
