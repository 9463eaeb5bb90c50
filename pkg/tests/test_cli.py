import csv
import io
import json
from importlib import resources

import jsonschema
import pytest

from anharmonic.cli import SERIES_HEADER, run_command


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def schema(name):
    return json.loads(resources.files("anharmonic.schema").joinpath(name).read_text())


def csv_values(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == SERIES_HEADER
    return [r[-1] for r in rows[1:]]


def test_energy_series_quartic_example():
    code, out, _ = run("energy-series", "--degree", "4", "--level", "0", "--order", "5", "--format", "csv")
    assert code == 0
    assert csv_values(out) == ["1/2", "3/4", "-21/8", "333/16", "-30885/128", "916731/256"]


def test_energy_series_json_matches_schema():
    code, out, _ = run("energy-series", "--degree", "3", "--order", "4")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, schema("series.schema.json"))
    assert obj["coefficients"]["1"]["0"] == "-11/8"


def test_width_series_sextic_derived():
    # the last value is the re-derived one; the printed table disagrees at this order
    code, out, _ = run("width-series", "--degree", "6", "--level", "0", "--order", "3", "--format", "csv")
    assert code == 0
    assert csv_values(out) == ["1", "165/16", "-174241/512", "287688525/8192"]


def test_width_series_from_short_fixture_is_usage_error():
    code, out, err = run("width-series", "--degree", "6", "--order", "3", "--a-source", "fixture")
    assert code == 2
    assert out == ""
    assert "too short" in err


def test_bfunc_order_zero_is_energy():
    code, out, _ = run("bfunc", "--degree", "4", "--order", "0", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[1] == ["g", "0", "1", "1", "1"]
    code, out, _ = run("bfunc", "--degree", "4", "--order", "2")
    jsonschema.validate(json.loads(out), schema("series.schema.json"))


def test_output_is_deterministic():
    argv = ("transseries", "--degree", "3", "--instantons", "2")
    assert run(*argv) == run(*argv)
    argv = ("resonance", "--degree", "3", "--coupling", "0.1")
    assert run(*argv) == run(*argv)


def test_unknown_flag_is_usage_error():
    code, out, err = run("bfunc", "--degree", "4", "--order", "0", "--bogus")
    assert code == 2
    assert out == ""
    assert "unrecognized" in err or err == ""


def test_missing_subcommand_and_bad_degree():
    assert run()[0] == 2
    assert run("bfunc", "--degree", "2", "--order", "1")[0] == 2


def test_stable_side_coupling_is_domain_error():
    code, _, err = run("resonance", "--degree", "4", "--coupling", "0.1")
    assert code == 2
    assert "unstable side" in err


def test_unconverged_strong_coupling_exits_3():
    code, out, err = run("strong-coupling", "--degree", "3", "--dim", "12")
    assert code == 3
    assert out == ""
    assert "ConvergenceError" in err


def test_resonance_conjugate_side():
    _, plus, _ = run("resonance", "--degree", "3", "--coupling", "0.1")
    _, minus, _ = run("resonance", "--degree", "3", "--coupling", "0.1", "--side", "-")
    p, q = json.loads(plus), json.loads(minus)
    assert float(p["re"]) == pytest.approx(float(q["re"]), abs=1e-12)
    assert float(p["im"]) == pytest.approx(-float(q["im"]), abs=1e-12)


def test_large_order_json():
    code, out, _ = run("large-order", "--degree", "4", "--order", "2")
    assert code == 0
    obj = json.loads(out)
    assert obj["alternating"] is True
    assert obj["inverse_k"][0] == "-95/72"


def test_fig2_data_csv():
    code, out, _ = run("fig2-data", "--couplings", "0.05")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["g", "Im_numeric", "Im_leading", "Im_series4"]
    assert len(rows) == 2 and float(rows[1][1]) < 0


def test_validate_report_json_and_text_agree():
    code, out, _ = run("validate", "--criteria", "1,2", "--format", "json")
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, schema("validation-report.schema.json"))
    assert obj["ok"] and len(obj["checks"]) == 12
    _, text, _ = run("validate", "--criteria", "1,2")
    for c in obj["checks"]:
        assert c["name"] in text


def test_validate_failure_exits_1_and_still_reports():
    code, out, _ = run("validate", "--criteria", "3", "--format", "json")
    assert code == 1
    obj = json.loads(out)
    assert not obj["ok"]
    assert any(c["status"] == "fail" for c in obj["checks"])
