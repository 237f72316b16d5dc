"""Perm bialgebras, their matched pairs, Manin triples on g (+) g* and Frobenius adjoints."""

import numpy as np

from .algebra import BilinearOp, FrobeniusForm, dualize_coalgebra
from .checks import require, run, run_all
from .errors import AxiomFailure, DegenerateForm, SpaceMismatch
from .reports import Defect, build_report, combine
from .reps import MatchedPair, Representation, dual_of, matched_pair_sum
from .tensors import BilinearForm, LinearMap, block_diagonal, determinant, mat_inverse, zeros
from .scalars import is_zero

E = np.einsum


class PermBialgebra:
    """Product and coproduct on one space, optionally with N and S."""

    def __init__(self, algebra, coalgebra, N=None, S=None):
        if coalgebra.space != algebra.space:
            raise SpaceMismatch("product and coproduct must live on the same space")
        if (N is None) != (S is None):
            raise ValueError("give both N and S or neither")
        self.algebra = algebra
        self.coalgebra = coalgebra
        self.N = N
        self.S = S

    @property
    def space(self):
        return self.algebra.space

    @property
    def nijenhuis(self):
        return self.N is not None

    def slots(self):
        out = {"mul": self.algebra, "cop": self.coalgebra}
        if self.nijenhuis:
            out.update(N=self.N, S=self.S)
        return out

    def premises(self, rules=()):
        """Both sides are (Nijenhuis) perm algebras: PERM, COPERM and NIJ, NIJ_CO."""
        ids = ["PERM", "COPERM"] + (["NIJ", "NIJ_CO"] if self.nijenhuis else [])
        return run_all("perm algebras on g and g*", [(i, self.slots(), None) for i in ids], rules)

    def __repr__(self):
        extra = ", Nijenhuis" if self.nijenhuis else ""
        return f"PermBialgebra({self.space.name}{extra})"


def check_bialgebra(B, rules=()):
    """PERM, COPERM and BIALG; with operators also the Nijenhuis clauses."""
    ids = ["PERM", "COPERM", "BIALG"]
    name = "perm bialgebra"
    if B.nijenhuis:
        ids += ["NIJ", "NIJ_CO", "ADM_1", "ADM_2", "NADM_CO_1", "NADM_CO_2"]
        name = "Nijenhuis perm bialgebra"
    return run_all(name, [(i, B.slots(), None) for i in ids], rules)


def _adjoint_rep(algebra):
    g = algebra.space
    c = algebra.constants
    return Representation(algebra, g, BilinearOp(g, g, g, c), BilinearOp(g, g, g, c))


def extract_matched_pair(B, rules=(), verify=False):
    """(g, g*, N, S*, R*-L*, R*, R'*-L'*, R'*) with ' the dual product on g*.

    With ``verify`` the (Nijenhuis) matched pair conditions must hold.
    """
    g = B.algebra
    h = dualize_coalgebra(B.coalgebra)
    on_h = dual_of(_adjoint_rep(g))
    on_g = dual_of(_adjoint_rep(h))
    Nh = B.S.transpose() if B.nijenhuis else None
    mp = MatchedPair(g, h, on_h.left, on_h.right, on_g.left, on_g.right, B.N, Nh)
    if verify:
        report = mp.nijenhuis_check(rules) if B.nijenhuis else mp.check(rules)
        if not report.holds:
            raise AxiomFailure("MP", report, f"matched pair conditions do not hold ({report.verdict})")
    return mp


def manin_form(space, n):
    """B(x+a, y+b) = <x, b> - <y, a> on g (+) g* with dim g = n."""
    m = zeros((2 * n, 2 * n))
    for i in range(n):
        m[i, n + i] = 1
        m[n + i, i] = -1
    return BilinearForm(space, m, "skew")


class ManinTriple:
    """Ambient product on g (+) g*, the skew form, and N + S* when present."""

    def __init__(self, ambient, form, n, operator=None, dual_operator=None, matched_pair=None):
        self.ambient = ambient
        self.form = form
        self.n = n
        self.operator = operator
        self.dual_operator = dual_operator
        self.matched_pair = matched_pair

    @property
    def space(self):
        return self.ambient.space

    def slots(self):
        out = {"mul": self.ambient, "B": self.form.form}
        if self.operator is not None:
            out.update(N=self.operator, N_sum=self.operator, S_sum=self.dual_operator)
        return out

    def closure_report(self, rules=()):
        """g and g* are subalgebras of the ambient product."""
        c, n = self.ambient.constants, self.n
        g, gd = self.matched_pair.g.space, self.matched_pair.h.space
        top = Defect("g", c[:n, :n, n:], [("x", g), ("y", g)], [gd])
        bottom = Defect("g*", c[n:, n:, :n], [("a", gd), ("b", gd)], [g])
        return build_report("subalgebras", [top, bottom], rules)

    def check(self, rules=()):
        """Manin triple of Frobenius perm algebras; NF when the operator is present."""
        parts = [
            run("PERM", {"mul": self.ambient}, rules),
            run("FROB", {"mul": self.ambient, "B": self.form.form}, rules),
            self.closure_report(rules),
        ]
        name = "Manin triple of Frobenius perm algebras"
        if self.operator is not None:
            parts.append(run("NIJ", {"mul": self.ambient, "N": self.operator}, rules))
            name = "Manin triple of NF perm algebras"
        return combine(name, parts)

    def __repr__(self):
        return f"ManinTriple({self.space.name}, dim {self.space.dim})"


def assemble_manin(B, rules=(), verify=False):
    """Manin triple built through the matched pair of B.

    With ``verify`` the matched pair and the resulting Frobenius (and NF)
    structure must hold, else AxiomFailure.
    """
    mp = extract_matched_pair(B, rules, verify=verify)
    prod, op = matched_pair_sum(mp)
    n = B.space.dim
    form = FrobeniusForm(manin_form(prod.space, n), True, rules)
    dual_op = None
    if op is not None:
        dual_op = block_diagonal(B.S, B.N.transpose(), prod.space)
    triple = ManinTriple(prod, form, n, op, dual_op, mp)
    if verify:
        report = triple.check(rules)
        if not report.holds:
            raise AxiomFailure("FROB", report, f"{report.identity} does not hold ({report.verdict})")
    return triple


def triangle(B, rules=()):
    """The three equivalent verdicts for Nijenhuis data B.

    Each includes the premises that g and g* are Nijenhuis perm algebras.
    """
    if not B.nijenhuis:
        raise ValueError("the triangle needs N and S")
    base = B.premises(rules)
    mp = extract_matched_pair(B, rules)
    triple = assemble_manin(B, rules)
    return {
        "matched_pair": combine("Nijenhuis matched pair", [base, mp.nijenhuis_check(rules)]),
        "manin": combine("Manin triple of NF perm algebras", [base, triple.check(rules)]),
        "bialgebra": combine("Nijenhuis perm bialgebra", [base, check_bialgebra(B, rules)]),
    }


def adjoint_wrt_form(f, form, rules=()):
    """N-hat with B(f(x), y) = B(x, N-hat(y)), i.e. B^-1 f^T B."""
    B = form.matrix
    if f.domain != form.space or f.codomain != form.space:
        raise SpaceMismatch("map and form live on different spaces")
    if is_zero(determinant(B, rules), rules):
        raise DegenerateForm("form is degenerate")
    m = mat_inverse(B, rules).dot(f.matrix.T).dot(B)
    return LinearMap(f.domain, f.codomain, m).normalized(rules)


def psi_map(form):
    """psi: g -> g*, <psi(x), y> = B(x, y)."""
    sp = form.space
    return LinearMap(sp, sp.dual(), form.matrix.T.copy())


def psi_equivalence(A, N, form, Nhat=None, rules=(), strict=False):
    """psi intertwines (g, L, R, N) with (g*, R*-L*, R*, Nhat*).

    ``form`` must make (A, N, form) a skew NF perm algebra.  ``Nhat``
    defaults to the adjoint of N.  The report also confirms that
    <psi(x), y> rebuilds the form.  With ``strict`` a failing law raises
    AxiomFailure naming it.
    """
    require("PERM", {"mul": A}, rules)
    require("NIJ", {"mul": A, "N": N}, rules)
    require("FROB", {"mul": A, "B": form}, rules)
    if not form.is_skew(rules):
        raise AxiomFailure("FROB", None, "form is not skew-symmetric")
    if not form.is_nondegenerate(rules):
        raise DegenerateForm("form is degenerate")
    if Nhat is None:
        Nhat = adjoint_wrt_form(N, form, rules)
    g = A.space
    psi = psi_map(form)
    adj = _adjoint_rep(A)
    dual = dual_of(adj)
    actions = run(
        "HOM_REP",
        {
            "mul": A,
            "phi": LinearMap.identity(g),
            "f": psi,
            "la": adj.left,
            "ra": adj.right,
            "dla": dual.left,
            "dra": dual.right,
        },
        rules,
        binding={"mul2": "mul", "la2": "dla", "ra2": "dra"},
    )
    lhs = psi.compose(N).matrix
    rhs = Nhat.transpose().compose(psi).matrix
    op = build_report("psi N = Nhat* psi", [Defect("0=1", (lhs - rhs).T, [("x", g)], [g.dual()])], rules)
    rebuilt = psi.matrix.T
    back = build_report("form from psi", [Defect("0=1", rebuilt - form.matrix, [("x", g), ("y", g)], [])], rules)
    report = combine("psi equivalence", [actions, op, back])
    if strict and not report.holds:
        failing = next(p.identity for p in report.parts if not p.holds)
        raise AxiomFailure(failing, report, f"{failing} fails")
    return report


def coboundary_bialgebra(algebra, r, N=None, S=None):
    """PermBialgebra with Delta = Delta_r (unverified)."""
    from .ybe import coboundary_delta

    return PermBialgebra(algebra, coboundary_delta(algebra, r), N, S)
