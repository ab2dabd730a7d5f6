import contextlib
import io
import json
import subprocess
import sys

import pytest

from twotoone.cli import DEFAULT_SEED, run
from twotoone.gf_core import parse_field


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stderr(err):
        code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, err = call(*argv, "--format", "json")
    return code, json.loads(out), err


# verify / census / walsh -------------------------------------------------------------

def test_verify_positive():
    code, row, _ = call_json("verify-2to1", "--field", "gf:p=2,n=3", "--poly", "x^2+x")
    assert code == 0
    assert row["two_to_one"] is True and row["census"] == {"0": 4, "2": 4}


def test_verify_negative_has_witness():
    code, row, _ = call_json("verify-2to1", "--field", "gf:p=2,n=2", "--poly", "x^3")
    assert code == 1
    assert row["two_to_one"] is False
    assert len(row["witness"]["fiber"]) == 3


def test_census_odd_field():
    code, row, _ = call_json("census", "--field", "gf:p=5,n=1", "--poly", "x^2")
    assert code == 0
    assert row["census"] == {"0": 2, "1": 1, "2": 2} and row["image_size"] == 3


def test_walsh_test():
    code, row, _ = call_json("walsh-test", "--field", "gf:p=2,n=3", "--poly", "x")
    assert code == 0 and row["statistic"] == 8 and row["two_to_one"] is False
    for method in ("direct", "transform"):
        code, row, _ = call_json("walsh-test", "--field", "gf:p=2,n=4", "--poly", "x^2+x",
                                 "--method", method)
        assert row["statistic"] == 0


def test_walsh_odd_characteristic_is_usage_error():
    code, _, err = call("walsh-test", "--field", "gf:p=3,n=2", "--poly", "x^2")
    assert code == 2 and "error" in err


# usage errors --------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["verify-2to1", "--poly", "x^2"],
    ["verify-2to1", "--field", "gf:p=4,n=1", "--poly", "x"],
    ["verify-2to1", "--field", "gf:p=2,n=3", "--poly", "x^^2"],
    ["catalog", "build", "nosuch"],
    ["construct", "cyclotomic", "--field", "gf:p=3,n=2", "--params", "{not json"],
    ["construct", "cyclotomic", "--field", "gf:p=3,n=2", "--params", "{}"],
    ["apps", "bent", "--n", "4"],
    ["count-n", "3", "--format", "xml"],
])
def test_usage_errors_exit_2(argv):
    assert call(*argv)[0] == 2


# constructions ----------------------------------------------------------------------------

def test_construct_certified():
    code, obj, _ = call_json("construct", "cyclotomic", "--field", "gf:p=3,n=2",
                             "--params", '{"r": 2, "d": 1, "h": "1"}')
    assert code == 0
    assert obj["certificate"]["certified"] is True
    F9 = parse_field("gf:p=3,n=2")
    assert obj["map"]["values"] == [int(v) for v in F9.pow(F9.elements(), 2)]


def test_construct_hypothesis_failure_exit_3():
    code, out, err = call("construct", "cyclotomic", "--field", "gf:p=3,n=2",
                          "--params", '{"r": 3, "d": 1, "h": "1"}')
    assert code == 3
    assert err.strip() == "hypothesis failed: gcd=2"
    code, obj, _ = call_json("construct", "cyclotomic", "--field", "gf:p=3,n=2",
                             "--params", '{"r": 3, "d": 1, "h": "1"}', "--no-strict")
    assert code == 0 and obj["certificate"]["certified"] is False


def test_construct_translator_and_piecewise():
    code, obj, _ = call_json("construct", "translator", "--field", "gf:p=2,n=3",
                             "--params", '{"F": "x", "G": "x", "gamma": 1}')
    assert code == 0 and obj["certificate"]["census"]["histogram"] == {"0": 4, "2": 4}
    code, obj, _ = call_json("construct", "piecewise", "--field", "gf:p=2,n=3",
                             "--params", '{"G": [0,1,2,3,4,5,6,7], "gamma": 1}')
    assert code == 0 and obj["certificate"]["census_two_to_one"] is True
    code, _, err = call("construct", "translator", "--field", "gf:p=2,n=3",
                        "--params", '{"F": "x", "G": "x", "gamma": 2}')
    assert code == 3 and "linear structure" in err


def test_construct_field_gen():
    # over GF(4), x^2 + x is the trace to GF(2)
    code, obj, _ = call_json("construct", "field-gen", "--field", "gf:p=2,n=2",
                             "--params", json.dumps({"h": "1", "phi": "x^2+x", "psi": "x^2+x",
                                                     "psi_bar": "x^2+x", "g": "2x", "q": 2}))
    assert code == 0 and obj["certificate"]["certified"] is True


# catalog ----------------------------------------------------------------------------------

def test_catalog_list():
    code, rows, _ = call_json("catalog", "list")
    assert code == 0
    names = {r["family"] for r in rows}
    assert {"maschietti", "dickson", "trace_power_sum"} <= names


def test_catalog_build_and_sweep():
    code, obj, _ = call_json("catalog", "build", "maschietti", "--params", '{"case": "segre", "m": 5}')
    assert code == 0 and obj["certificate"]["certified"] is True
    code, out, _ = call("catalog", "sweep", "mcm", "--max-q", "32", "--format", "tsv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "params\tpredicate\tcensus"
    assert all(l.endswith("true\ttrue") for l in lines[1:])
    code, _, err = call("catalog", "build", "monomial", "--params", '{"d": 3, "p": 11, "n": 1}')
    assert code == 3 and "gcd=2" in err


# classify / count / repro ----------------------------------------------------------------

def test_classify():
    code, row, _ = call_json("classify", "--field", "gf:p=2,n=3", "--poly", "x^4+x")
    assert code == 0 and row["two_to_one"] is True
    code, row, _ = call_json("classify", "--field", "gf:p=5,n=1", "--poly", "2x^3+x^2", "--normalize")
    assert code == 0 and "two_to_one" in row
    assert call("classify", "--field", "gf:p=5,n=1", "--poly", "2x^3+x^2")[0] == 2


def test_count_n():
    code, row, _ = call_json("count-n", "3")
    assert code == 0 and row["count"] == "176400" and row["ratio"] == "4.38"
    code, row, _ = call_json("count-n", "40")
    assert code == 0 and float(row["log2_count"]) > 0


def test_repro_ratio_table_pretty():
    code, out, _ = call("repro", "ratio-table")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["n", "ratio"]
    ratios = [l.split()[1] for l in lines[1:]]
    assert ratios == ["1.00", "1.50", "4.38", "50.3", "9.17e3", "4.27e8", "1.30e18", "1.70e37"]


def test_repro_f5_cubics():
    code, rows, _ = call_json("repro", "f5-cubics")
    assert code == 0 and len(rows) == 10


def test_repro_walsh_corpus_is_deterministic():
    a = call("repro", "walsh-corpus", "--count", "3", "--format", "tsv")
    b = call("repro", "walsh-corpus", "--count", "3", "--format", "tsv", "--seed", str(DEFAULT_SEED))
    assert a == b and a[0] == 0
    rows = a[1].splitlines()[1:]
    assert all(r.split("\t")[2] == "0" for r in rows)


# apps ----------------------------------------------------------------------------------------

def test_apps_commands():
    # Tr(xy) over GF(4)^2
    from twotoone.applications import _grid, BooleanTable
    K, xs, ys = _grid(2)
    hexs = BooleanTable(4, K.abs_trace(K.mul(xs, ys))).to_hex()
    code, row, _ = call_json("apps", "bent", "--n", "4", "--hex", hexs)
    assert code == 0 and row["bent"] is True
    code, row, _ = call_json("apps", "semibent", "--n", "4", "--hex", hexs)
    assert row["semibent"] is False
    code, row, _ = call_json("apps", "planar", "--field", "gf:p=3,n=2", "--poly", "x^2")
    assert row["planar"] and row["image_size"] == 5 and row["image_check"]
    code, row, _ = call_json("apps", "perm-lift", "--field", "gf:p=2,n=3", "--poly", "x^2+x")
    assert sorted(row["permutation"]) == list(range(8))
    assert call("apps", "perm-lift", "--field", "gf:p=2,n=3", "--poly", "x")[0] == 2
    assert call("apps", "bent", "--n", "3", "--hex", "00")[0] == 2


# determinism and entry points ----------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["json", "tsv", "pretty"])
def test_output_is_byte_identical(fmt):
    argv = ["catalog", "sweep", "maschietti", "--max-q", "32", "--format", fmt]
    assert call(*argv) == call(*argv)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "twotoone", "verify-2to1", "--field", "gf:p=2,n=3",
                        "--poly", "x^2+x", "--format", "json"], capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["two_to_one"] is True
