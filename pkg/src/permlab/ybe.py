"""Coboundary coproducts, the perm Yang-Baxter equation and O-operators."""

import numpy as np

from .algebra import BilinearOp, PermCoalgebra
from .checks import require, run, run_all
from .errors import NotSymmetric, SpaceMismatch
from .reports import combine
from .reps import NijRepresentation, Representation, dual_of, semidirect_product
from .tensors import LinearMap, Tensor, place_in_triple, placement_product, zeros

E = np.einsum


def _check_over(algebra, r):
    g = algebra.space
    if r.rank != 2 or r.spaces != (g, g):
        raise SpaceMismatch("r must live in g (x) g for the algebra's space g")


def coboundary_delta(algebra, r):
    """Delta_r(x) = x r1 (x) r2 + r1 (x) x r2 - r1 (x) r2 x (unverified coalgebra)."""
    _check_over(algebra, r)
    c, t = algebra.constants, r.array
    d = E("ik,aij->ajk", t, c) + E("jl,alk->ajk", t, c) - E("jl,lak->ajk", t, c)
    return PermCoalgebra(algebra.space, d)


PRODUCTS = {
    "P": [(1, 13, 12), (-1, 13, 23), (1, 23, 12), (-1, 12, 23)],
    "Q": [(1, 13, 12), (-1, 13, 32), (1, 23, 12), (-1, 12, 23)],
    "J": [(1, 12, 23), (1, 13, 23), (-1, 12, 13), (-1, 23, 13)],
    "T": [(1, 12, 23), (1, 13, 32), (-1, 13, 12), (-1, 32, 12)],
}


class YbeTensors:
    """P, Q, J, T of r in an algebra, and M(x) on demand."""

    def __init__(self, algebra, r):
        _check_over(algebra, r)
        self.algebra = algebra
        self.r = r
        self._cache = {}

    def product(self, a, b):
        key = (a, b)
        if key not in self._cache:
            self._cache[key] = placement_product(
                self.algebra, place_in_triple(self.r, a), place_in_triple(self.r, b)
            )
        return self._cache[key]

    def combination(self, terms):
        out = None
        for sign, a, b in terms:
            t = self.product(a, b)
            t = t if sign > 0 else -t
            out = t if out is None else out + t
        return out

    @property
    def P(self):
        return self.combination(PRODUCTS["P"])

    @property
    def Q(self):
        return self.combination(PRODUCTS["Q"])

    @property
    def J(self):
        return self.combination(PRODUCTS["J"])

    @property
    def T(self):
        return self.combination(PRODUCTS["T"])

    def M(self, x):
        """(id (x) L(x) (x) id)(r32 r12 - r23 r12) + (id (x) R(x) (x) id)(r12 r23 - r12 r32)."""
        x = np.asarray(x, dtype=object)
        c = self.algebra.constants
        Lx = E("a,amk->km", x, c)
        Rx = E("a,mak->km", x, c)
        first = self.combination([(1, 32, 12), (-1, 23, 12)]).array
        second = self.combination([(1, 12, 23), (-1, 12, 32)]).array
        arr = E("ptq,st->psq", first, Lx) + E("ptq,st->psq", second, Rx)
        return Tensor(self.r.spaces + (self.r.spaces[0],), arr)


def ybe_tensors(algebra, r):
    return YbeTensors(algebra, r)


def check_pybe(algebra, r, rules=()):
    return run("PYBE", {"mul": algebra, "r": r}, rules)


def _require_symmetric(r, rules):
    if not r.is_symmetric(rules):
        raise NotSymmetric("r must be symmetric")


def check_s_admissible_ybe(algebra, N, S, r, rules=()):
    """PYBE together with (S (x) id - id (x) N)(r) = 0, for symmetric r."""
    _require_symmetric(r, rules)
    slots = {"mul": algebra, "r": r, "N": N, "S": S}
    return run_all("S-admissible perm Yang-Baxter equation", [("PYBE", slots, None), ("RS_COMPAT", slots, None)], rules)


def r_sharp(r):
    """u* -> <u*, r1> r2 as a map g* -> g."""
    g0, g1 = r.spaces
    return LinearMap(g0.dual(), g1, r.array.T.copy())


def sharp_report(algebra, r, N, S, rules=()):
    """The r-sharp form of the S-admissible equation (for symmetric r)."""
    slots = {"mul": algebra, "r": r, "N": N, "S": S}
    return run_all("r-sharp conditions", [("THX_OP", slots, None), ("THX_TWIST", slots, None)], rules)


def dual_adjoint(algebra):
    """(g*, R* - L*, R*)."""
    g = algebra.space
    adj = Representation(
        algebra, g, BilinearOp(g, g, g, algebra.constants), BilinearOp(g, g, g, algebra.constants)
    )
    return dual_of(adj)


def check_ooperator(T, rep, alpha=None, N=None, rules=()):
    """Weak O-operator verdict; named an O-operator when (rep, alpha) is Nijenhuis over N."""
    if T.codomain != rep.algebra.space or T.domain != rep.space:
        raise SpaceMismatch("T must map the module space to the algebra")
    slots = {"mul": rep.algebra, "la": rep.left, "ra": rep.right, "T": T}
    items = [("OOP", slots, None)]
    if alpha is not None and N is not None:
        items.append(("OOP_TW", dict(slots, N=N, alpha=alpha), None))
    report = run_all("weak O-operator", items, rules)
    if report.holds and alpha is not None and N is not None:
        if NijRepresentation(rep, alpha, N).check(rules).holds:
            report.identity = "O-operator"
            report.notes.append("the representation with alpha is Nijenhuis, so T is an O-operator")
    return report


def lift_ooperator(T, rep):
    """r = T + tau(T) in the semi-direct product g x| V* by (r* - l*, r*).

    Returns (product on g (+) V*, r).
    """
    if T.codomain != rep.algebra.space or T.domain != rep.space:
        raise SpaceMismatch("T must map the module space to the algebra")
    dual = dual_of(rep)
    prod, _ = semidirect_product(rep.algebra, dual)
    n, m = rep.algebra.space.dim, rep.space.dim
    arr = zeros((n + m, n + m))
    arr[:n, n:] = T.matrix
    arr[n:, :n] = T.matrix.T
    return prod, Tensor((prod.space, prod.space), arr)


def lift_with_operators(T, rep, N, S, alpha, beta):
    """The lift together with N + beta* and S + alpha* on g (+) V*."""
    prod, r = lift_ooperator(T, rep)
    n, m = rep.algebra.space.dim, rep.space.dim

    def block(a, b):
        out = zeros((n + m, n + m))
        out[:n, :n] = a
        out[n:, n:] = b
        return LinearMap(prod.space, prod.space, out)

    return prod, r, block(N.matrix, beta.matrix.T), block(S.matrix, alpha.matrix.T)


def lifted_conditions_report(T, rep, N, S, alpha, beta, rules=()):
    """Weak O-operator for (rep, alpha) plus T beta = S T."""
    base = check_ooperator(T, rep, alpha, N, rules)
    twist = run("OOP_TW", {"N": S, "T": T, "alpha": beta}, rules)
    return combine("weak O-operator with T beta = S T", [base, twist])


def admissibility_prerequisites(algebra, N, S, rules=()):
    slots = {"mul": algebra, "N": N, "S": S}
    return run_all("S-admissible Nijenhuis perm algebra", [("NIJ", slots, None), ("ADM_1", slots, None), ("ADM_2", slots, None)], rules)


def check_nh_conditions(algebra, N, S, r, rules=()):
    """The three Nijenhuis conditions on r for the coboundary bialgebra.

    Requires (g, N) to be an S-admissible Nijenhuis perm algebra.
    """
    _check_over(algebra, r)
    for ident in ("NIJ", "ADM_1", "ADM_2"):
        require(ident, {"mul": algebra, "N": N, "S": S}, rules)
    slots = {"mul": algebra, "r": r, "N": N, "S": S}
    return run_all("Nijenhuis coboundary conditions", [(i, slots, None) for i in ("NH_1", "NH_2", "NH_3")], rules)


def coboundary_conditions_report(algebra, N, S, r, rules=()):
    """All conditions on r for Delta_r to give a Nijenhuis perm bialgebra."""
    slots = {"mul": algebra, "r": r, "N": N, "S": S}
    ids = ["COB_1", "COB_2", "COB_3", "COB_4", "COB_5", "COB_6", "NH_1", "NH_2", "NH_3"]
    return run_all("coboundary conditions", [(i, slots, None) for i in ids], rules)


def lemma_implications(r, N, S, rules=()):
    """The three implications between (S (x) id - id (x) N)(r) = 0 and its relatives."""
    slots = {"r": r, "N": N, "S": S}
    return run_all("twist implications", [(i, slots, None) for i in ("LPQ_1", "LPQ_2", "LPQ_3")], rules)
