import json

import pytest

from permlab.bundle import bundle_from_dict, bundle_to_dict, dump_bundle, load_bundle
from permlab.corpus import corpus_names, corpus_path
from permlab.errors import OverlappingRules, SchemaError
from permlab.scalars import Poly

from conftest import poly


def _raw(name):
    return json.loads(corpus_path(name).read_text(encoding="utf-8"))


def test_load_example_2_26(corpus):
    b = corpus["example-2-26"]
    assert b.parameters == ("k1", "k2", "k3", "k4")
    g = b.get("mul", "algebra").space
    assert g.labels == ("e1", "e2")
    assert b.get("cop", "coalgebra").table() == {"e1": {("e2", "e2"): -1}}
    gens = b.parameters
    assert b.get("N", "map").images() == {
        "e1": {"e1": poly("k1", gens), "e2": poly("k2", gens)},
        "e2": {"e2": poly("k3", gens)},
    }
    assert b.get("S", "map").images()["e1"] == {"e1": poly("k3", gens), "e2": poly("k4", gens)}


def test_empty_file(tmp_path):
    f = tmp_path / "empty.json"
    f.write_text("")
    with pytest.raises(SchemaError):
        load_bundle(f)
    with pytest.raises(OSError):
        load_bundle(tmp_path / "missing.json")


def test_invalid_json(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{")
    with pytest.raises(SchemaError):
        load_bundle(f)


def test_tensor_over_wrong_space_names_the_tensor():
    data = _raw("thm-2-42-a")
    data["spaces"]["h"] = ["f1", "f2", "f3"]
    data["tensors"]["r"]["spaces"] = ["g", "h"]
    with pytest.raises(SchemaError) as err:
        bundle_from_dict(data)
    assert "r" in err.value.location


def test_overlapping_rules_rejected():
    data = _raw("thm-2-42-a")
    data["rewrites"].append({"lhs": "kappa^3", "rhs": "nu"})
    with pytest.raises(OverlappingRules):
        bundle_from_dict(data)


def test_unknown_label_reports_location():
    data = _raw("intro")
    data["algebras"]["mul"]["products"][0]["out"] = {"e9": "1"}
    with pytest.raises(SchemaError) as err:
        bundle_from_dict(data)
    assert err.value.location.startswith("/algebras/mul")


@pytest.mark.parametrize("name", corpus_names())
def test_round_trip(name, corpus):
    b = corpus[name]
    again = bundle_from_dict(json.loads(dump_bundle(b)))
    assert bundle_to_dict(again) == bundle_to_dict(b)
    for kind, slots in b.slots.items():
        for slot, obj in slots.items():
            other = again.get(slot, kind)
            if hasattr(obj, "equals"):
                assert obj.equals(other)


def test_rules_loaded(corpus):
    b = corpus["thm-2-42-a"]
    (rule,) = b.rules
    assert isinstance(rule.rhs, Poly)
    assert str(rule.lhs) == "kappa^2"
