import numpy as np
import pytest

from permlab.algebra import PermAlgebra, PermCoalgebra
from permlab.bundle import StructureBundle
from permlab.checks import run
from permlab.corpus import oracle_agreement
from permlab.errors import FreeVarMismatch, ParseError, RankMismatch, UnboundName, UsageError
from permlab.identities import dsl
from permlab.identities.dsl import Apply, Equation, Mul, Sum, Var
from permlab.identities.evaluator import evaluate
from permlab.identities.registry import REGISTRY, check_builtin, check_dsl, parsed_sources, reports_agree
from permlab.sampling import Sampler
from permlab.scalars import GF
from permlab.tensors import BilinearForm, LinearMap, Tensor, mat_inverse

NIJ_TEXT = "N(x)*N(y) + N(N(x*y)) == N(N(x)*y) + N(x*N(y))"


def test_parse_nijenhuis():
    eq = dsl.parse(NIJ_TEXT)
    x, y = Var("x"), Var("y")
    N = lambda e: Apply("N", e)
    assert eq == Equation(
        (
            Sum((Mul(N(x), N(y)), N(N(Mul(x, y))))),
            Sum((N(Mul(N(x), y)), N(Mul(x, N(y))))),
        )
    )


def test_parse_trivial_and_perm_clause():
    assert dsl.parse("x*y == x*y") == Equation((Mul(Var("x"), Var("y")),) * 2)
    x, y, z = Var("x"), Var("y"), Var("z")
    assert dsl.parse("(x*y)*z == x*(z*y)") == Equation((Mul(Mul(x, y), z), Mul(x, Mul(z, y))))


@pytest.mark.parametrize(
    "text,err",
    [
        ("x*y == ", ParseError),
        ("x*y == x", FreeVarMismatch),
        ("x ox y == x*y", RankMismatch),
        ("x*y == x*y)", ParseError),
        ("x*x == x*x", ParseError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        dsl.parse(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        dsl.parse("N(x) == N(x) $")
    assert e.value.position is not None


def test_round_trip_registry_sources():
    count = 0
    for ident in REGISTRY:
        for eq in parsed_sources(ident):
            assert dsl.parse(dsl.to_text(eq)) == eq
            count += 1
    assert count >= 50


def test_evaluate_examples(corpus):
    b = corpus["example-2-26"]
    assert evaluate(NIJ_TEXT, b).holds
    assert evaluate("x*y == x*y", b).holds
    assert evaluate("x*y == x*y", corpus["intro"]).holds


def _hand_nij(c, n):
    """N(x)N(y)+N^2(xy)-N(N(x)y)-N(xN(y)) on basis pairs, by explicit sums."""
    dim = c.shape[0]

    def mul(u, v):
        return [sum(u[i] * v[j] * c[i, j, k] for i in range(dim) for j in range(dim)) for k in range(dim)]

    def ap(v):
        return [sum(n[k, m] * v[m] for m in range(dim)) for k in range(dim)]

    bad = []
    for a in range(dim):
        for b in range(dim):
            x = [int(i == a) for i in range(dim)]
            y = [int(i == b) for i in range(dim)]
            lhs = [p + q for p, q in zip(mul(ap(x), ap(y)), ap(ap(mul(x, y))))]
            rhs = [p + q for p, q in zip(ap(mul(ap(x), y)), ap(mul(x, ap(y))))]
            if lhs != rhs:
                bad.append((a, b))
    return bad


def test_evaluate_nijenhuis_swap_on_intro(corpus):
    b = corpus["intro"].copy("swap")
    g = b.get("mul", "algebra").space
    swap = LinearMap(g, g, np.array([[0, 1], [1, 0]], dtype=object))
    b.add("N", swap)
    report = evaluate(NIJ_TEXT, b)
    bad = _hand_nij(b.get("mul", "algebra").constants, swap.matrix)
    assert report.holds == (not bad)
    # the same map fails on the nilpotent product, with the hand-found witness
    nil = PermAlgebra.from_table(g, {("e1", "e1"): {"e2": 1}})
    b2 = b.copy("nil")
    b2.add("mul", nil)
    report = evaluate(NIJ_TEXT, b2)
    bad = _hand_nij(nil.constants, swap.matrix)
    assert bad and report.verdict == "fails"
    located = {tuple(dict(w.assignment)[v] for v in ("x", "y")) for w in report.witnesses}
    assert located == {(g.labels[a], g.labels[c]) for a, c in bad}


def test_check_builtin_examples(corpus):
    assert check_builtin("PERM", corpus["intro"]).holds
    b = corpus["thm-2-42-b"]
    assert check_builtin("PYBE", b).holds
    s = Sampler(5, seed=41)
    seen = 0
    for _ in range(30):
        A, N = s.nijenhuis_pair()
        bad = LinearMap(N.domain, N.codomain, s.perturb(N.matrix))
        bundle = StructureBundle(GF(5), name="probe")
        bundle.add("mul", A)
        bundle.add("N", bad)
        report = check_builtin("NIJ", bundle)
        if not report.holds:
            assert report.verdict == "fails" and report.witnesses
            seen += 1
    assert seen


def test_unknown_identity_and_unbound(corpus):
    with pytest.raises(UsageError):
        check_builtin("NOPE", corpus["intro"])
    with pytest.raises(UnboundName):
        check_builtin("NIJ", corpus["intro"])
    with pytest.raises(UsageError):
        check_builtin("NIJ", corpus["example-2-26"], {"product": "mul"})
    with pytest.raises(UnboundName):
        evaluate("M(x) == M(x)", corpus["intro"])


def test_binding_renames_slot(corpus):
    b = corpus["thm-2-42-c"]
    assert check_builtin("PYBE", b, {"r": "r1"}).verdict == check_dsl("PYBE", b, {"r": "r1"}).verdict


def test_oracle_agreement_on_corpus(corpus):
    total = 0
    for name, b in corpus.items():
        result = oracle_agreement(b)
        disagree = [k for k, (_, _, ok) in result.items() if not ok]
        assert not disagree, (name, disagree)
        total += len(result)
    assert total >= 30 * len(corpus)


def test_reports_agree_detects_difference(corpus):
    b = corpus["example-2-26"]
    a = check_builtin("ADM_1", b)
    assert reports_agree(a, check_dsl("ADM_1", b))
    assert not reports_agree(a, check_builtin("ADM_2", b))


# ---------------------------------------------------------------- multilinearity probe
#
# Evaluating an identity on the basis f_a = sum_i P[i, a] e_i is evaluating the
# original structures on random vector tuples.  Rewriting every structure in
# that basis must therefore leave the verdict unchanged.


def _rebase(bundle, P):
    Pi = mat_inverse(P)
    out = StructureBundle(bundle.field, name=bundle.name + "-rebased")
    for name, obj in bundle.slots["algebra"].items():
        c = np.einsum("ia,jb,ijk,dk->abd", P, P, obj.constants, Pi)
        out.add(name, PermAlgebra(obj.space, c))
    for name, obj in bundle.slots["coalgebra"].items():
        d = np.einsum("ia,ijk,bj,ck->abc", P, obj.constants, Pi, Pi)
        out.add(name, PermCoalgebra(obj.space, d))
    for name, obj in bundle.slots["map"].items():
        out.add(name, LinearMap(obj.domain, obj.codomain, Pi.dot(obj.matrix).dot(P)))
    for name, obj in bundle.slots["form"].items():
        out.add(name, BilinearForm(obj.space, P.T.dot(obj.matrix).dot(P), obj.symmetry))
    for name, obj in bundle.slots["tensor"].items():
        out.add(name, Tensor(obj.spaces, Pi.dot(obj.array).dot(Pi.T)))
    return out


def _random_bundle(s, i):
    A, N = s.nijenhuis_pair()
    g = A.space
    b = StructureBundle(GF(7), name=f"probe{i}")
    b.add("mul", A)
    b.add("N", N if i % 2 else s.map(g))
    b.add("S", s.map(g))
    b.add("r", s.pybe_solution(A) if i % 3 else s.symmetric(g))
    from permlab.ybe import coboundary_delta

    b.add("cop", coboundary_delta(A, b.get("r", "tensor")))
    w = s.symmetric(g).array
    b.add("w", BilinearForm(g, w, "symmetric"))
    b.add("B", BilinearForm(g, w))
    return b


PROBED = ["PERM", "COPERM", "NIJ", "ADM_1", "ADM_2", "NIJ_CO", "BIALG", "NADM_CO_1", "FROB", "PYBE", "RS_COMPAT", "NH_1", "SYMP", "COYBE", "DQT1", "COSYMP", "QT1"]


def test_verdicts_invariant_under_basis_change():
    s = Sampler(7, seed=42)
    seen = {True: 0, False: 0}
    for i in range(50):
        b = _random_bundle(s, i)
        nb = _rebase(b, s.invertible())
        for ident in PROBED:
            before = run(ident, dict(_flat(b)))
            after = run(ident, dict(_flat(nb)))
            assert before.verdict == after.verdict, (i, ident)
            seen[before.holds] += 1
    assert seen[True] and seen[False]


def _flat(bundle):
    for kind in bundle.slots.values():
        yield from kind.items()
