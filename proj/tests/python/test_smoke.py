import json
import os
import pathlib

import pytest

import effsum

FIXTURES = pathlib.Path(os.environ.get("EFFSUM_FIXTURES", pathlib.Path(__file__).resolve().parents[2] / "fixtures"))


def fixture(name):
    return str(FIXTURES / name / "instance.json")


def test_verdict_yu_ehrgott():
    r = effsum.verdict(fixture("yu_ehrgott_orthant"))
    assert r["rule"] == "T2"
    assert r["direction"] == "Holds"
    assert r["consistent"]


def test_verdict_matches_golden():
    r = effsum.verdict(fixture("example7_incomparable"))
    golden = json.loads((FIXTURES / "example7_incomparable" / "report.golden").read_text())
    assert r == golden


def test_dict_instance():
    inst = {
        "group": {"kind": "intvec", "dimension": 2},
        "relation": {"kind": "product_order"},
        "A": [[0, 0]],
        "B": [[1, 1]],
    }
    r = effsum.verdict(inst)
    assert r["rule"] == "T4"
    assert r["direction"] == "Fails"


def test_efficient_sum():
    e = effsum.efficient(fixture("example7_incomparable"), "sum")
    assert [-2, 1] in e["efficient"]


def test_audit_powerset():
    statuses = {s["property"]: s["outcome"] for s in effsum.audit(fixture("truncated_powerset"))}
    assert statuses["P3"] == "Violated"
    assert statuses["P5"] == "Violated"


def test_trace_example4():
    text, ok = effsum.trace(fixture("example4_system"))
    assert ok
    assert text.endswith("P3 | (3b)P0_G\nP4 | bP0_G\nCONTRADICTION | bP0_G\n")


def test_minkowski_perm():
    assert effsum.minkowski_sum({"kind": "perm", "n": 3}, [[2, 1, 3]], [[2, 3, 1]]) == [[3, 2, 1]]


def test_generate_deterministic():
    a = effsum.generate(3, "orthant_holds")
    assert a == effsum.generate(3, "orthant_holds")
    assert effsum.verdict(a)["direction"] == "Holds"


def test_index_cycle():
    assert effsum.find_index_cycle([2, 3, 2, 5, 4], 1) == [2, 3]


def test_errors():
    bad = {"group": {"kind": "perm", "n": 3}, "relation": {"kind": "fixed_points"}, "A": [[1, 1, 3]], "B": [[1, 2, 3]]}
    with pytest.raises(effsum.ValidationError):
        effsum.verdict(bad)
    with pytest.raises(effsum.ParseError):
        effsum.verdict("{not json")
    with pytest.raises(effsum.NotApplicable):
        effsum.trace(fixture("yu_ehrgott_orthant"))
