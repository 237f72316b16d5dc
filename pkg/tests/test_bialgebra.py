import numpy as np
import pytest

from permlab.algebra import PermAlgebra, PermCoalgebra, zero_coalgebra
from permlab.bialgebra import (
    PermBialgebra,
    adjoint_wrt_form,
    assemble_manin,
    check_bialgebra,
    coboundary_bialgebra,
    extract_matched_pair,
    psi_equivalence,
    triangle,
)
from permlab.checks import run
from permlab.classify import golden_algebra
from permlab.errors import AxiomFailure, DegenerateForm
from permlab.sampling import Sampler, triangle_candidate, triangle_verdicts
from permlab.scalars import RewriteRule
from permlab.tensors import BilinearForm, LinearMap, Tensor
from permlab.ybe import coboundary_delta

from conftest import poly

GENS = ("k1", "k2", "k3", "k4")


@pytest.fixture
def ex226(corpus):
    b = corpus["example-2-26"]
    return PermBialgebra(b.get("mul", "algebra"), b.get("cop", "coalgebra"), b.get("N", "map"), b.get("S", "map"))


@pytest.fixture
def on_locus():
    # the locus where every clause of the Example 2.26 data holds
    return [RewriteRule.parse("k4", "0", GENS)]


def test_zero_coproduct_is_bialgebra(corpus):
    for b in corpus.values():
        A = b.get("mul", "algebra")
        if A is None or not run("PERM", {"mul": A}, b.rules).holds:
            continue
        B = PermBialgebra(A, zero_coalgebra(A.space))
        assert check_bialgebra(B, b.rules).holds
        mp = extract_matched_pair(B, b.rules, verify=True)
        assert not np.any(mp.lh.constants != 0) and not np.any(mp.rh.constants != 0)
        assert assemble_manin(B, b.rules, verify=True).check(b.rules).holds


def test_example_2_26_clauses(ex226):
    report = check_bialgebra(ex226)
    verdicts = {p.identity: p.verdict for p in report.parts}
    assert verdicts == {
        "PERM": "holds",
        "COPERM": "holds",
        "BIALG": "holds",
        "NIJ": "holds",
        "NIJ_CO": "holds",
        "ADM_1": "conditional",
        "ADM_2": "holds",
        "NADM_CO_1": "holds",
        "NADM_CO_2": "holds",
    }
    adm = next(p for p in report.parts if p.identity == "ADM_1")
    assert set(adm.constraints) <= {poly("k1*k4 - k3*k4", GENS), poly("k3*k4 - k1*k4", GENS)}
    assert adm.constraints


def test_example_2_26_on_locus(ex226, on_locus):
    assert check_bialgebra(ex226, on_locus).holds


def test_item_c_second_row():
    A = golden_algebra("c")
    g = A.space
    lam = poly("lambda", ("lambda",))
    r = Tensor.from_terms((g, g), {("e2", "e2"): lam})
    B = coboundary_bialgebra(A, r)
    assert B.coalgebra.table() == {"e1": {("e1", "e2"): lam, ("e2", "e1"): lam}, "e2": {("e2", "e2"): lam}}
    assert check_bialgebra(B).holds


def test_extract_matched_pair_example_2_26(ex226, on_locus):
    mp = extract_matched_pair(ex226)
    assert mp.check().holds
    assert mp.nijenhuis_check().verdict == "conditional"
    assert extract_matched_pair(ex226, on_locus, verify=True).nijenhuis_check(on_locus).holds
    with pytest.raises(AxiomFailure):
        extract_matched_pair(ex226, verify=True)


def _premises_hold(A, C):
    return run("PERM", {"mul": A}).holds and run("COPERM", {"cop": C}).holds


def test_bialgebra_iff_matched_pair_random():
    s = Sampler(5, seed=21)
    seen = {True: 0, False: 0}
    for i in range(80):
        A = s.perm_algebra()
        C = coboundary_delta(A, s.pybe_solution(A))
        if i % 2:
            C = PermCoalgebra(A.space, s.perturb(C.constants))
        if not _premises_hold(A, C):
            continue
        B = PermBialgebra(A, C)
        left = run("BIALG", B.slots()).holds
        right = extract_matched_pair(B).check().holds
        assert left == right
        seen[left] += 1
    assert seen[True] and seen[False]


def test_manin_example_2_26(ex226, on_locus):
    triple = assemble_manin(ex226)
    assert triple.space.dim == 4
    report = triple.check()
    parts = {p.identity: p.verdict for p in report.parts}
    assert parts["PERM"] == parts["FROB"] == parts["subalgebras"] == "holds"
    assert parts["NIJ"] == "conditional"
    assert assemble_manin(ex226, on_locus, verify=True).check(on_locus).holds
    assert triple.form.form.is_skew()
    m = triple.form.form.matrix
    assert m[0, 2] == 1 and m[2, 0] == -1 and m[0, 1] == 0


def test_adjoint_wrt_form_examples(ex226):
    triple = assemble_manin(ex226)
    form = triple.form.form
    assert adjoint_wrt_form(LinearMap.identity(triple.space), form).equals(LinearMap.identity(triple.space))
    assert adjoint_wrt_form(triple.operator, form).equals(triple.dual_operator)
    g = ex226.space
    with pytest.raises(DegenerateForm):
        adjoint_wrt_form(LinearMap.identity(g), BilinearForm(g, np.zeros((2, 2), dtype=object)))


def test_adjoint_defining_property_and_double_adjoint():
    s = Sampler(7, seed=22)
    g = s.g
    for _ in range(50):
        a = s.nonzero()
        B = BilinearForm(g, np.array([[0 * a, a], [-a, 0 * a]], dtype=object), "skew")
        f = s.map(g)
        fh = adjoint_wrt_form(f, B)
        lhs = f.matrix.T.dot(B.matrix)
        rhs = B.matrix.dot(fh.matrix)
        assert not np.any(lhs - rhs != 0)
        assert adjoint_wrt_form(fh, B).equals(f)


def test_psi_equivalence_zero_product():
    s = Sampler(5, seed=23)
    g = s.g
    zero = PermAlgebra(g, s.fp(np.zeros((2, 2, 2), dtype=np.int64)))
    B = BilinearForm(g, s.fp(np.array([[0, 1], [4, 0]])), "skew")
    assert psi_equivalence(zero, s.map(g), B).holds


def test_psi_equivalence_example_2_26(ex226, on_locus):
    triple = assemble_manin(ex226, on_locus)
    report = psi_equivalence(triple.ambient, triple.operator, triple.form.form, rules=on_locus)
    assert report.holds


def test_psi_equivalence_perturbed_adjoint():
    s = Sampler(5, seed=24)
    found = 0
    for _ in range(60):
        cand = triangle_candidate(s)
        if not check_bialgebra(cand).holds:
            continue
        triple = assemble_manin(cand)
        A, N, form = triple.ambient, triple.operator, triple.form.form
        assert psi_equivalence(A, N, form).holds
        bad = LinearMap(N.domain, N.codomain, s.perturb(adjoint_wrt_form(N, form).matrix))
        report = psi_equivalence(A, N, form, Nhat=bad)
        assert [p.identity for p in report.parts if not p.holds] == ["psi N = Nhat* psi"]
        with pytest.raises(AxiomFailure) as err:
            psi_equivalence(A, N, form, Nhat=bad, strict=True)
        assert err.value.identity == "psi N = Nhat* psi"
        found += 1
        if found >= 5:
            break
    assert found


def test_triangle_on_corpus(ex226, on_locus):
    assert set(triangle_verdicts(ex226).values()) == {"conditional"}
    assert set(triangle_verdicts(ex226, on_locus).values()) == {"holds"}
    with pytest.raises(ValueError):
        triangle(PermBialgebra(ex226.algebra, ex226.coalgebra))


def test_triangle_random_candidates():
    s = Sampler(5, seed=25)
    seen = set()
    for _ in range(20):
        verdicts = triangle_verdicts(triangle_candidate(s))
        assert len(set(verdicts.values())) == 1
        seen |= set(verdicts.values())
    assert seen == {"holds", "fails"}


def test_ambient_gives_admissibility_both_sides():
    s = Sampler(5, seed=26)
    checked = 0
    for _ in range(40):
        cand = triangle_candidate(s)
        triple = assemble_manin(cand)
        if not triple.check().holds:
            continue
        h = triple.matched_pair.h
        g_side = {"mul": cand.algebra, "N": cand.N, "S": cand.S}
        h_side = {"mul": h, "N": cand.S.transpose(), "S": cand.N.transpose()}
        for slots in (g_side, h_side):
            assert run("ADM_1", slots).holds and run("ADM_2", slots).holds
        checked += 1
    assert checked


def test_frob_skew_identity_on_triples():
    s = Sampler(5, seed=27)
    for _ in range(20):
        triple = assemble_manin(triangle_candidate(s))
        if run("FROB", triple.slots()).holds:
            assert run("FROB_SKEW_ID", triple.slots()).holds
