import json

import pytest

from permlab.corpus import (
    corpus_json,
    corpus_names,
    corpus_path,
    enrich,
    load_corpus,
    verify_bundle,
    verify_corpus,
)
from permlab.identities.registry import REGISTRY


def test_names_and_paths():
    assert len(corpus_names()) == 8
    for name in corpus_names():
        assert corpus_path(name).is_file()
    with pytest.raises(KeyError):
        corpus_path("nope")


@pytest.mark.parametrize("name", corpus_names())
def test_bundle_meets_its_expectations(corpus, name):
    b = corpus[name]
    assert b.expected
    report = verify_bundle(b)
    assert report.verdict == "holds", report.render()
    assert [p.identity for p in report.parts] == sorted(b.expected)


def test_verify_bundle_flags_wrong_expectation(corpus):
    b = corpus["intro"].copy("intro-wrong")
    key = next(k for k, v in sorted(b.expected.items()) if v == "holds")
    b.expected[key] = "fails"
    report = verify_bundle(b)
    assert not report.holds
    part = next(p for p in report.parts if p.identity == key)
    assert part.notes[-1] == "expected fails, got holds"


def test_example_2_26_records_the_admissibility_constraint(corpus):
    summary = json.loads(corpus_json(verify_corpus(["example-2-26"])))
    checks = summary["example-2-26"]["checks"]
    assert checks["ADM_1"]["notes"][-1] == "expected conditional"
    assert checks["ADM_1"]["constraints"]


def test_corpus_json_is_deterministic():
    first = corpus_json(verify_corpus())
    assert first == corpus_json(verify_corpus())
    assert set(json.loads(first)) == set(corpus_names())


def test_enrich_fills_every_role_and_keeps_originals(corpus):
    for name in ("intro", "example-3-14"):
        b = corpus[name]
        e = enrich(b)
        for spec in REGISTRY.values():
            for role, (kind, slot) in spec.roles.items():
                assert e.get(slot, kind) is not None, (name, spec.id, role)
        for kind, objs in b.slots.items():
            for slot, obj in objs.items():
                assert e.get(slot, kind) is obj
    # deterministic probes
    assert enrich(corpus["intro"]).get("T", "map").equals(enrich(corpus["intro"]).get("T", "map"))


def test_load_corpus_returns_fresh_copies():
    a, b = load_corpus("intro"), load_corpus("intro")
    assert a is not b and a.name == b.name
