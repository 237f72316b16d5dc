import pytest

from permlab.corpus import load_corpus
from permlab.scalars import Poly, RewriteRule

PARAMS = ("kappa", "lambda", "nu")


def poly(text, gens=PARAMS):
    return Poly.parse(text, gens)


@pytest.fixture
def kappa_rule():
    return RewriteRule.parse("kappa^2", "lambda*nu", PARAMS)


@pytest.fixture(scope="session")
def corpus():
    from permlab.corpus import corpus_names

    return {name: load_corpus(name) for name in corpus_names()}


_acceptance = {}


def pytest_runtest_logreport(report):
    mark = _acceptance.get(report.nodeid)
    if mark is None:
        return
    if report.failed or (report.when == "call" and mark["outcome"] is None):
        mark["outcome"] = "FAIL" if report.failed else "PASS"


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _acceptance[item.nodeid] = {"number": m.args[0], "title": m.args[1], "outcome": None}


def pytest_terminal_summary(terminalreporter):
    merged = {}
    for m in _acceptance.values():
        if m["outcome"] is None:
            continue
        prev = merged.get(m["number"])
        if prev is None or m["outcome"] == "FAIL":
            merged[m["number"]] = m
    if not merged:
        return
    terminalreporter.section("acceptance criteria")
    for number, m in sorted(merged.items()):
        terminalreporter.write_line(f"criterion {number} {m['outcome']}: {m['title']}")
