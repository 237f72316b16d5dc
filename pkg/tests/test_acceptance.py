"""End-to-end acceptance checks with their time budgets.

A summary line per criterion is printed at the end of the pytest run.
"""

import time

import pytest

from permlab.bialgebra import PermBialgebra, check_bialgebra
from permlab.checks import run
from permlab.classify import (
    GOLDEN_TABLE,
    PLANE,
    enumerate_symmetric_solutions,
    golden_algebra,
    golden_rules,
    row_reports,
    verify_classification,
)
from permlab.corpus import corpus_names, load_corpus, oracle_agreement
from permlab.sampling import (
    Sampler,
    dual_fusion_instances,
    fusion_instances,
    lift_instance,
    matched_sum_instance,
    semidirect_instance,
    sharp_instance,
    triangle_candidate,
    triangle_verdicts,
)
from permlab.scalars import Poly, RewriteRule
from permlab.symplectic import nijenhuis_from_cosymplectic, nijenhuis_from_symplectic, omega_product
from permlab.tensors import Tensor
from permlab.ybe import coboundary_delta

from conftest import PARAMS, poly

K = ("k1", "k2", "k3", "k4")


class Clock:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        print(f"elapsed {self.elapsed:.2f}s (budget {self.budget}s)")

    def check(self):
        assert self.elapsed < self.budget, f"took {self.elapsed:.2f}s, budget {self.budget}s"


@pytest.mark.acceptance(1, "classification rows: P(r)=0 and listed coproducts")
def test_classification_rows_reproduce():
    # the coproduct of item (a) written out by hand, independent of the stored table
    lam, kap, nu = (poly(x) for x in ("lambda", "kappa", "nu"))
    item_a = {
        "e1": {("e1", "e1"): lam, ("e2", "e2"): -nu},
        "e2": {("e2", "e1"): lam, ("e1", "e2"): lam, ("e2", "e2"): 2 * kap},
    }
    failures = []
    with Clock(5) as clock:
        reports = verify_classification(fields=())
        A = golden_algebra("a")
        r = Tensor.from_terms((PLANE, PLANE), {("e1", "e1"): lam, ("e1", "e2"): kap, ("e2", "e1"): kap, ("e2", "e2"): nu})
        rules = golden_rules("a")
        assert run("PYBE", {"mul": A, "r": r}, rules).holds
        assert coboundary_delta(A, r).table(rules) == item_a
        for item, spec in GOLDEN_TABLE.items():
            for k in range(len(spec["rows"])):
                for part in row_reports(item, k).parts:
                    if part.identity in ("PYBE", "listed coproduct") and not part.holds:
                        failures.append(f"({item}) row {k + 1} {part.identity}: {part.verdict}, needs {[str(c) for c in part.constraints]}")
    clock.check()
    assert set(reports) == {"a", "b", "c", "d"}
    assert not failures, "\n".join(failures)


@pytest.mark.acceptance(2, "sign of the coproduct at lambda=kappa=0, nu=1")
def test_remark_sign():
    with Clock(1) as clock:
        r = Tensor.from_terms((PLANE, PLANE), {("e2", "e2"): Poly.const(1, PARAMS)})
        delta = coboundary_delta(golden_algebra("a"), r)
    clock.check()
    assert delta.table()["e1"] == {("e2", "e2"): -1}
    assert delta.table().get("e2", {}) == {}


@pytest.mark.acceptance(3, "example-2-26 Nijenhuis perm bialgebra clauses")
def test_example_2_26_clauses():
    with Clock(10) as clock:
        b = load_corpus("example-2-26")
        B = PermBialgebra(b.get("mul", "algebra"), b.get("cop", "coalgebra"), b.get("N", "map"), b.get("S", "map"))
        report = check_bialgebra(B)
        verdicts = {p.identity: p for p in report.parts}
        clauses = [
            ("PERM", "COPERM", "BIALG"),
            ("NIJ",),
            ("NIJ_CO",),
            ("ADM_1", "ADM_2"),
            ("NADM_CO_1", "NADM_CO_2"),
        ]
        conditional = []
        for clause in clauses:
            for ident in clause:
                part = verdicts[ident]
                assert part.verdict in ("holds", "conditional"), part.render()
                if part.verdict == "conditional":
                    assert part.constraints, ident
                    conditional.append(part)
        # the constraint k4*(k1 - k3) = 0 is exact: the clause holds on both
        # components of its zero set and fails at a point off it
        for part in conditional:
            assert set(part.constraints) <= {poly("k1*k4 - k3*k4", K), poly("k3*k4 - k1*k4", K)}, part.render()
            for locus in (["k4", "0"], ["k1", "k3"]):
                rules = [RewriteRule.parse(*locus, K)]
                assert run(part.identity, B.slots(), rules).holds, locus
            off = [RewriteRule.parse(x, v, K) for x, v in (("k1", "1"), ("k2", "0"), ("k3", "0"), ("k4", "1"))]
            assert run(part.identity, B.slots(), off).verdict == "fails"
    clock.check()
    for part in conditional:
        print(f"discrepancy: {part.identity} needs {' = 0, '.join(str(c) for c in part.constraints)} = 0")


@pytest.mark.acceptance(4, "Nijenhuis operators from (co)symplectic forms")
def test_symplectic_examples():
    with Clock(5) as clock:
        b = load_corpus("example-3-10")
        A, w, r = b.get("mul", "algebra"), b.get("w", "form"), b.get("r", "tensor")
        N = nijenhuis_from_symplectic(A, w, r)
        nij = run("NIJ", {"mul": A, "N": N})
        b = load_corpus("example-3-14")
        C, w, r = b.get("cop", "coalgebra"), b.get("w", "form"), b.get("r", "tensor")
        S = nijenhuis_from_cosymplectic(C, w, r)
        nij_co = run("NIJ_CO", {"cop": C, "S": S})
        table = omega_product(C, w).table()
    clock.check()
    lam_nu, nu = poly("lambda*nu"), poly("nu")
    assert N.images() == {"e1": {"e1": lam_nu}, "e2": {}}
    assert nij.verdict == "holds"
    assert S.images() == {"e1": {"e1": lam_nu}, "e2": {}}
    assert nij_co.verdict == "holds"
    assert table == {("e1", "e1"): {"e1": nu}, ("e1", "e2"): {"e2": nu}, ("e2", "e1"): {"e2": nu}}


def _family_a_points(p):
    # symmetric r with r12^2 = r11 r22, components (r11, r12, r22)
    return {(a, b, c) for a in range(p) for b in range(p) for c in range(p) if (b * b - a * c) % p == 0}


@pytest.mark.acceptance(5, "complete enumeration of item (a) over F_3 and F_5")
@pytest.mark.parametrize("p, count", [(3, 9), (5, 25)])
def test_enumeration_matches_family(p, count):
    assert len(_family_a_points(p)) == count
    with Clock(1) as clock:
        sols = enumerate_symmetric_solutions(golden_algebra("a"), p, "a")
    clock.check()
    assert sols.count == count
    assert sols.as_set() == _family_a_points(p)


def _sweep(draw, n, seed):
    """(violations, left verdicts seen, construction flags seen) over n draws."""
    s = Sampler(7, seed=seed)
    violations, seen, flags = [], set(), set()
    for i in range(n):
        left, *rights, constructed = draw(s)
        flags.add(constructed)
        seen.add(left.verdict)
        for right in rights:
            if left.verdict != right.verdict:
                violations.append((i, left.identity, left.verdict, right.identity, right.verdict))
    return violations, seen, flags


@pytest.mark.acceptance(6, "equivalence sweeps over F_7, 200 instances each")
def test_equivalence_sweeps():
    draws = [lift_instance, sharp_instance, semidirect_instance, matched_sum_instance, fusion_instances, dual_fusion_instances]
    results = {}
    with Clock(60) as clock:
        for seed, draw in enumerate(draws):
            results[draw.__name__] = _sweep(draw, 200, seed)
    for name, (violations, seen, flags) in results.items():
        print(f"{name}: {len(violations)} violations, verdicts {sorted(seen)}")
    clock.check()
    for name, (violations, seen, flags) in results.items():
        assert not violations, (name, violations[:5])
        assert seen == {"holds", "fails"}, name
        assert flags == {True, False}, name


@pytest.mark.acceptance(7, "hand-coded checks agree with the DSL on the corpus")
def test_oracle_agreement():
    counts, disagreements = {}, []
    with Clock(30) as clock:
        for name in corpus_names():
            result = oracle_agreement(load_corpus(name))
            counts[name] = len(result)
            disagreements += [(name, ident) for ident, (_, _, agree) in result.items() if not agree]
    clock.check()
    assert len(counts) >= 7
    assert min(counts.values()) >= 30, counts
    assert not disagreements


@pytest.mark.acceptance(8, "matched pair, Manin triple and bialgebra verdicts coincide")
def test_triangle():
    with Clock(30) as clock:
        b = load_corpus("example-2-26")
        B = PermBialgebra(b.get("mul", "algebra"), b.get("cop", "coalgebra"), b.get("N", "map"), b.get("S", "map"))
        verdicts = [triangle_verdicts(B)]
        s = Sampler(5, seed=8)
        verdicts += [triangle_verdicts(triangle_candidate(s)) for _ in range(20)]
    clock.check()
    for v in verdicts:
        assert len(set(v.values())) == 1, v
    assert {next(iter(v.values())) for v in verdicts[1:]} == {"holds", "fails"}
