import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permlab.algebra import BilinearOp, PermAlgebra
from permlab.bialgebra import PermBialgebra, extract_matched_pair
from permlab.checks import run
from permlab.errors import AxiomFailure
from permlab.reps import (
    MatchedPair,
    Pencil,
    Representation,
    adjoint_representation,
    deformed_actions,
    deformed_product,
    dual_of,
    dual_representation,
    matched_pair_sum,
    pencil_homomorphism_report,
    relation_report,
    semidirect_product,
)
from permlab.sampling import Sampler, semidirect_instance
from permlab.scalars import FpElement
from permlab.tensors import LinearMap, Space, zeros

from conftest import poly


@pytest.fixture
def ex226(corpus):
    b = corpus["example-2-26"]
    return b.get("mul", "algebra"), b.get("N", "map"), b.get("S", "map")


def _zero(space):
    return LinearMap.zero(space)


def test_adjoint_representation_examples(corpus, ex226):
    A = corpus["intro"].get("mul", "algebra")
    assert adjoint_representation(A, LinearMap.identity(A.space)).check().holds
    assert adjoint_representation(A, _zero(A.space)).check().holds
    A, N, _ = ex226
    rep = adjoint_representation(A, N)
    assert rep.check().verdict == "holds"
    assert np.array_equal(rep.base.left.constants, A.constants)


def test_adjoint_representation_rejects_non_nijenhuis():
    g = Space("g", ["e1", "e2"])
    # every operator is Nijenhuis for the intro product, so use the nilpotent one
    A = PermAlgebra.from_table(g, {("e1", "e1"): {"e2": 1}})
    N = LinearMap(g, g, np.array([[0, 1], [1, 0]], dtype=object))
    with pytest.raises(AxiomFailure) as err:
        adjoint_representation(A, N)
    assert err.value.identity == "NIJ"


def test_dual_representation_zero(ex226):
    A, _, _ = ex226
    g = A.space
    rep = adjoint_representation(A, _zero(g)).base
    out = dual_representation(rep, _zero(g), _zero(g))
    assert out.space == g.dual()
    assert out.check().holds


def test_dual_representation_example_2_26(ex226):
    # S is admissible only on the locus k1*k4 = k3*k4
    A, N, S = ex226
    rep = adjoint_representation(A, N).base
    with pytest.raises(AxiomFailure):
        dual_representation(rep, S, N)
    out = dual_representation(rep, S, N, strict=False)
    report = out.nijenhuis_report()
    assert report.verdict == "conditional"
    gens = ("k1", "k2", "k3", "k4")
    assert poly("k1*k4 - k3*k4", gens) in report.constraints or poly("k3*k4 - k1*k4", gens) in report.constraints


def test_dual_representation_witness_on_violation():
    s = Sampler(7, seed=3)
    for _ in range(50):
        A, N = s.nijenhuis_pair()
        g = A.space
        base = adjoint_representation(A, N).base
        beta = s.map(g)
        report = dual_representation(base, beta, N, strict=False).nijenhuis_report()
        if not report.holds:
            failing = [p for p in report.parts if not p.holds]
            assert failing[0].witnesses
            return
    pytest.fail("no violating beta found")


def test_dual_actions_on_dual_basis(ex226):
    A, N, _ = ex226
    rep = dual_of(adjoint_representation(A, N).base)
    # <(R* - L*)(e1) e1*, e1> = <e1*, e1 e1> - <e1*, e1 e1> = 0; <e2* R*(e1), e2> = <e2*, e2 e1> = 1
    assert rep.left.constants[0, 0, 0] == 0
    assert rep.right.constants[1, 0, 1] == 1


def test_deformed_product_examples(ex226):
    A, N, _ = ex226
    g = A.space
    assert deformed_product(A, LinearMap.identity(g)).equals(A)
    assert not np.any(deformed_product(A, _zero(g)).constants != 0)
    gens = ("k1", "k2", "k3", "k4")
    k1 = poly("k1", gens)
    assert deformed_product(A, N).table() == {("e1", "e1"): {"e1": k1}, ("e2", "e1"): {"e2": k1}}


def test_semidirect_trivial_rep(ex226):
    A, N, _ = ex226
    g = A.space
    V = Space("V", ["v1", "v2"])
    z = BilinearOp(g, V, V, zeros((2, 2, 2)))
    rep = Representation(A, V, z, BilinearOp(V, g, V, zeros((2, 2, 2))))
    prod, op = semidirect_product(A, rep, N, _zero(V), verify=True)
    assert prod.space.dim == 4
    assert run("NIJ", {"mul": prod, "N": op}).holds
    assert np.array_equal(prod.constants[:2, :2, :2], A.constants)


def test_semidirect_adjoint_example_2_26(ex226):
    A, N, _ = ex226
    rep = adjoint_representation(A, N).base
    prod, op = semidirect_product(A, rep, N, N, verify=True)
    assert run("PERM", {"mul": prod}).holds
    assert run("NIJ", {"mul": prod, "N": op}).holds


def test_semidirect_perturbed_alpha_fails():
    s = Sampler(5, seed=11)
    found = 0
    for _ in range(60):
        nij, rep_report, constructed = semidirect_instance(s)
        if not constructed and not rep_report.holds:
            assert not nij.holds
            assert nij.witnesses
            found += 1
    assert found


def test_matched_pair_sum_from_example_2_26(corpus):
    b = corpus["example-2-26"]
    mp = extract_matched_pair(PermBialgebra(b.get("mul", "algebra"), b.get("cop", "coalgebra")))
    assert mp.check().holds
    prod, _ = matched_pair_sum(mp, verify=True)
    assert prod.space.dim == 4
    assert run("PERM", {"mul": prod}).holds


def test_matched_pair_sum_trivial_h(ex226):
    # spaces are never empty; a zero algebra with zero actions plays h = 0
    A, _, _ = ex226
    g = A.space
    h = Space("h", ["f1"])
    mp = MatchedPair(
        A,
        PermAlgebra(h, zeros((1, 1, 1))),
        BilinearOp(g, h, h, zeros((2, 1, 1))),
        BilinearOp(h, g, h, zeros((1, 2, 1))),
        BilinearOp(h, g, g, zeros((1, 2, 2))),
        BilinearOp(g, h, g, zeros((2, 1, 2))),
    )
    assert mp.check().holds
    prod, _ = matched_pair_sum(mp)
    assert np.array_equal(prod.constants[:2, :2, :2], A.constants)
    assert not np.any(prod.constants[2:] != 0) and not np.any(prod.constants[:, 2:] != 0)


def test_matched_pair_perturbed_actions_fail():
    from permlab.sampling import matched_sum_instance

    s = Sampler(5, seed=2)
    seen = 0
    for _ in range(40):
        perm, mp_report, constructed = matched_sum_instance(s)
        assert perm.holds == mp_report.holds
        if not constructed and not perm.holds:
            seen += 1
    assert seen


# ---------------------------------------------------------------- properties


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_nij_scale_invariant(seed, c):
    s = Sampler(7, seed)
    A, N = s.nijenhuis_pair()
    assert run("NIJ", {"mul": A, "N": N}).holds
    assert run("NIJ", {"mul": A, "N": N.scale(FpElement(c, 7))}).holds


def test_identity_and_zero_are_nijenhuis(corpus):
    for b in corpus.values():
        A = b.get("mul", "algebra")
        if A is None:
            continue
        for N in (LinearMap.identity(A.space), _zero(A.space)):
            assert run("NIJ", {"mul": A, "N": N}, b.rules).holds


def test_deformed_product_corpus(corpus):
    for b in corpus.values():
        A, N = b.get("mul", "algebra"), b.get("N", "map")
        if A is None or N is None or not run("NIJ", {"mul": A, "N": N}, b.rules).holds:
            continue
        slots = {"mul": A, "N": N, "mb": deformed_product(A, N)}
        assert run("PERM", {"mul": slots["mb"]}, b.rules).holds
        assert run("NIJ_HOM", slots, b.rules).holds


def test_deformed_product_random_f7():
    s = Sampler(7, seed=5)
    for _ in range(200):
        A, N = s.nijenhuis_pair()
        mb = deformed_product(A, N)
        assert run("PERM", {"mul": mb}).holds
        assert run("NIJ_HOM", {"mul": A, "N": N, "mb": mb}).holds


def _symbolic_pencil_perm(pencil):
    st_gens = ("s", "t")
    prod, _ = pencil.combined(poly("s", st_gens), poly("t", st_gens))
    return run("PERM", {"mul": prod}).holds


def test_pencil_algebra_equivalence():
    s = Sampler(7, seed=8)
    both = {True: 0, False: 0}
    for i in range(60):
        first = s.perm_algebra()
        if i % 3 == 0:
            A, N = s.nijenhuis_pair()
            first, second = A, deformed_product(A, N)
        elif i % 3 == 1:
            second = s.perm_algebra()
        else:
            second = PermAlgebra(first.space, s.perturb(first.constants))
        left = _symbolic_pencil_perm(Pencil(first, second))
        right = Pencil(first, second).algebra_report().holds
        assert left == right
        both[left] += 1
    assert both[True] and both[False]


def test_pencil_representation_equivalence():
    st_gens = ("s", "t")
    s = Sampler(7, seed=9)
    both = {True: 0, False: 0}
    for i in range(40):
        A, N = s.nijenhuis_pair()
        _, _, rep = s.representation(A)
        alpha = s.map(rep.space) if i % 2 else LinearMap.identity(rep.space, FpElement(1, 7)).scale(s.nonzero())
        second = deformed_actions(rep, N, alpha)
        pencil = Pencil(A, second.algebra, rep, second)
        prod, comb = pencil.combined(poly("s", st_gens), poly("t", st_gens))
        left = comb.check().holds and _symbolic_pencil_perm(pencil)
        right = pencil.algebra_report().holds and pencil.representation_report().holds
        assert left == right
        both[left] += 1
    assert both[True] and both[False]


def test_shifted_homomorphism_equivalence():
    st_gens = ("s", "t")
    sv, tv = poly("s", st_gens), poly("t", st_gens)
    s = Sampler(7, seed=10)
    both = {True: 0, False: 0}
    for i in range(40):
        A, N = s.nijenhuis_pair()
        _, _, rep = s.representation(A)
        lam = FpElement(s.rng.randrange(7), 7)
        alpha = LinearMap.identity(rep.space, FpElement(1, 7)).scale(lam)
        if i % 2:
            alpha = LinearMap(rep.space, rep.space, s.perturb(alpha.matrix))
        pencil = Pencil(A, deformed_product(A, N), rep, deformed_actions(rep, N, alpha))
        left = pencil_homomorphism_report(pencil, N, alpha, sv, tv).holds
        right = relation_report(pencil, N, alpha).holds
        assert left == right
        both[left] += 1
    assert both[True] and both[False]
