"""Acceptance suite: every criterion at its stated tolerance.

Each test prints one ``criterion N: PASS|FAIL`` line.  Criteria that fail
because a printed reference value disagrees with the independently derived
one, or because the stated tolerance is unattainable, are marked
``xfail(strict=True)`` so that an unexpected pass is also reported.  The
exact set of failing checks is pinned by ``test_failing_checks_are_exactly_the_documented_ones``.

Run as a script for a plain report: ``python3 tests/test_acceptance.py``.
"""

from functools import lru_cache

import pytest

from anharmonic.validation import CRITERIA


KNOWN_FAILURES = {
    3: {"width m=6 n=0 through g^3": "printed sextic width term at g^3 disagrees with the derived value"},
    4: {
        "width m=5 through g^1": "printed quintic g^(1/3) coefficient is off by a factor 2^(1/3)",
        "width m=5 exponent": "printed quintic exponent uses Gamma(1/3)^3 where the action gives 3 Gamma(2/3)^3",
        "width m=7 through g^(2/5)": "printed septic g^(2/5) coefficient carries a stray (sqrt5+1)^(1/2) factor",
        "width m=7 exponent": "printed septic exponent lacks a factor Gamma(2/5)",
    },
    5: {
        "LO3 through K^-11": "printed cubic large-order terms at K^-10 and K^-11 disagree with the derived ones",
        "LO4 level 1 through K^-11": "printed quartic excited-level large-order term at K^-2 disagrees",
    },
    8: {"T - P vs printed A4 at g=-0.02": "omitted g^5 term of A4 alone contributes about 5e-6 at this coupling"},
    10: {"g=0.01: numeric vs four-term series": "terms g^4 to g^10 share one sign and sum to about 7%"},
}


@lru_cache(maxsize=None)
def run_criterion(i):
    return tuple(CRITERIA[i]())


def _line(i, checks):
    bad = [c for c in checks if not c.passed]
    status = "PASS" if not bad else "FAIL"
    detail = "; ".join(f"{c.name}: {c.measured} (tol {c.tolerance})" for c in bad)
    return f"criterion {i}: {status} ({len(checks) - len(bad)}/{len(checks)} checks)" + (f" {detail}" if detail else "")


def _params():
    for i in sorted(CRITERIA):
        if i in KNOWN_FAILURES:
            reason = "; ".join(KNOWN_FAILURES[i].values())
            yield pytest.param(i, marks=pytest.mark.xfail(strict=True, reason=reason), id=f"criterion_{i}")
        else:
            yield pytest.param(i, id=f"criterion_{i}")


@pytest.mark.parametrize("i", list(_params()))
def test_criterion(i, capsys):
    checks = run_criterion(i)
    with capsys.disabled():
        print("\n" + _line(i, checks))
    assert checks
    assert all(c.passed for c in checks), _line(i, checks)


def test_failing_checks_are_exactly_the_documented_ones():
    failing = {(i, c.name) for i in CRITERIA for c in run_criterion(i) if not c.passed}
    documented = {(i, name) for i, names in KNOWN_FAILURES.items() for name in names}
    assert failing == documented


if __name__ == "__main__":
    for i in sorted(CRITERIA):
        print(_line(i, run_criterion(i)), flush=True)
