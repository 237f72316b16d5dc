"""Representations, Nijenhuis data, deformations, semi-direct products, matched pairs."""

import numpy as np

from .algebra import BilinearOp, PermAlgebra
from .checks import require, run, run_all
from .errors import AxiomFailure, SpaceMismatch
from .reports import combine
from .tensors import LinearMap, direct_sum, zeros

E = np.einsum


class Representation:
    """Left and right actions of an algebra on a space.

    ``left`` is a BilinearOp g x V -> V and ``right`` one V x g -> V, so
    ``left.constants[i, v, w]`` is the w-coordinate of l(e_i) e_v.
    """

    def __init__(self, algebra, space, left, right):
        g = algebra.space
        if (left.left, left.right, left.out) != (g, space, space):
            raise SpaceMismatch("left action must be g x V -> V")
        if (right.left, right.right, right.out) != (space, g, space):
            raise SpaceMismatch("right action must be V x g -> V")
        self.algebra = algebra
        self.space = space
        self.left = left
        self.right = right

    @classmethod
    def from_matrices(cls, algebra, space, left_maps, right_maps):
        """Actions given as one LinearMap (or matrix) per algebra basis vector."""
        g = algebra.space
        la = zeros((g.dim, space.dim, space.dim))
        ra = zeros((space.dim, g.dim, space.dim))
        for i in range(g.dim):
            lm = getattr(left_maps[i], "matrix", left_maps[i])
            rm = getattr(right_maps[i], "matrix", right_maps[i])
            la[i] = np.asarray(lm, dtype=object).T
            ra[:, i, :] = np.asarray(rm, dtype=object).T
        return cls(algebra, space, BilinearOp(g, space, space, la), BilinearOp(space, g, space, ra))

    def left_map(self, x):
        """l(x) as a map on V."""
        return LinearMap(self.space, self.space, self.left.left_matrix(x))

    def right_map(self, x):
        """v -> v r(x) as a map on V."""
        return LinearMap(self.space, self.space, self.right.right_matrix(x))

    def slots(self):
        return {"mul": self.algebra, "la": self.left, "ra": self.right}

    def check(self, rules=()):
        s = self.slots()
        return run_all("representation", [("REP_L", s, None), ("REP_R", s, None)], rules)

    def __repr__(self):
        return f"Representation({self.algebra.space.name} on {self.space.name})"


class NijRepresentation:
    """A representation with an operator alpha on V, over a Nijenhuis pair (g, N)."""

    def __init__(self, base, alpha, N):
        if alpha.domain != base.space or alpha.codomain != base.space:
            raise SpaceMismatch("alpha must be an operator on the module space")
        if N.domain != base.algebra.space or N.codomain != base.algebra.space:
            raise SpaceMismatch("N must be an operator on the algebra")
        self.base = base
        self.alpha = alpha
        self.N = N

    @property
    def algebra(self):
        return self.base.algebra

    @property
    def space(self):
        return self.base.space

    def slots(self):
        s = self.base.slots()
        s.update(alpha=self.alpha, N=self.N)
        return s

    def nijenhuis_report(self, rules=()):
        s = self.slots()
        return run_all("Nijenhuis representation", [("NIJREP_L", s, None), ("NIJREP_R", s, None)], rules)

    def check(self, rules=()):
        return combine("Nijenhuis representation", [self.base.check(rules), self.nijenhuis_report(rules)])


def adjoint_representation(algebra, N, rules=()):
    """(g, L, R, N); requires PERM for the product and NIJ for N."""
    require("PERM", {"mul": algebra}, rules)
    require("NIJ", {"mul": algebra, "N": N}, rules)
    c = algebra.constants
    g = algebra.space
    rep = Representation(algebra, g, BilinearOp(g, g, g, c), BilinearOp(g, g, g, c))
    out = NijRepresentation(rep, N, N)
    _require_report(out.check(rules), "NIJREP_L")
    return out


def dual_action_constants(left, right):
    """Constants of (r* - l*, r*) on V* for actions l = left, r = right.

    Pairing convention: <l*(x)u*, v> = <u*, l(x)v> and <u* r*(x), v> = <u*, v r(x)>.
    """
    la, ra = left.constants, right.constants
    dl = np.transpose(ra, (1, 2, 0)) - np.transpose(la, (0, 2, 1))
    dr = np.transpose(ra, (2, 1, 0)).copy()
    return dl, dr


def dual_of(rep):
    """The plain representation (V*, r* - l*, r*)."""
    g, Vd = rep.algebra.space, rep.space.dual()
    dl, dr = dual_action_constants(rep.left, rep.right)
    return Representation(rep.algebra, Vd, BilinearOp(g, Vd, Vd, dl), BilinearOp(Vd, g, Vd, dr))


def admissibility_report(rep, N, beta, rules=()):
    """ADMREP_L and ADMREP_R for beta against (rep, N)."""
    s = dict(rep.slots(), N=N, beta=beta)
    return run_all("admissible", [("ADMREP_L", s, None), ("ADMREP_R", s, None)], rules)


def dual_representation(rep, beta, N, rules=(), strict=True):
    """(V*, r* - l*, r*, beta*) as a representation of (g, N).

    With ``strict`` the Nijenhuis conditions of the result must hold, which
    happens exactly when beta is admissible; otherwise AxiomFailure carries
    the failing report.
    """
    _require_report(rep.check(rules), "REP_L")
    out = NijRepresentation(dual_of(rep), beta.transpose(), N)
    if strict:
        _require_report(out.nijenhuis_report(rules), "NIJREP_L")
    return out


def _require_report(report, identity):
    if not report.holds:
        failing = next((p.identity for p in report.parts if not p.holds), identity)
        raise AxiomFailure(failing, report, f"{failing} does not hold ({report.verdict})")
    return report


def deformed_product(algebra, N):
    """x . y = N(x)y + xN(y) - N(xy) as a PermAlgebra (unverified)."""
    c, n = algebra.constants, N.matrix
    d = E("pa,pbk->abk", n, c) + E("pb,apk->abk", n, c) - E("abm,km->abk", c, n)
    return PermAlgebra(algebra.space, d)


def deformed_actions(rep, N, alpha):
    """Deformed actions x -> l(N(x)) + l(x) alpha - alpha l(x), likewise on the right."""
    la, ra, n, a = rep.left.constants, rep.right.constants, N.matrix, alpha.matrix
    tl = E("pa,pvw->avw", n, la) + E("qv,aqw->avw", a, la) - E("avm,wm->avw", la, a)
    tr = E("pa,vpw->vaw", n, ra) + E("qv,qaw->vaw", a, ra) - E("vam,wm->vaw", ra, a)
    g, V = rep.algebra.space, rep.space
    return Representation(deformed_product(rep.algebra, N), V, BilinearOp(g, V, V, tl), BilinearOp(V, g, V, tr))


def _sum_product(g_const, h_const, lh, rh, lg, rg):
    """Constants of (a+x)(b+y) = ab + lh(x)b + a rh(y) + xy + lg(a)y + x rg(b).

    a, b in the first summand (dimension n), x, y in the second (dimension m);
    lh: h x g -> g, rh: g x h -> g, lg: g x h -> h, rg: h x g -> h.
    """
    n, m = g_const.shape[0], h_const.shape[0]
    c = zeros((n + m,) * 3)
    c[:n, :n, :n] = g_const
    c[n:, n:, n:] = h_const
    c[n:, :n, :n] = lh
    c[n:, :n, n:] = rg
    c[:n, n:, :n] = rh
    c[:n, n:, n:] = lg
    return c


def semidirect_product(algebra, rep, N=None, alpha=None, rules=(), verify=False):
    """g (+) V with (x+u)(y+v) = xy + l(x)v + u r(y), and N + alpha when given.

    With ``verify`` the product must be perm and rep a representation.
    """
    if verify:
        require("PERM", {"mul": algebra}, rules)
        _require_report(rep.check(rules), "REP_L")
    g, V = algebra.space, rep.space
    n, m = g.dim, V.dim
    space = direct_sum(g, V)
    c = _sum_product(
        algebra.constants,
        zeros((m, m, m)),
        zeros((m, n, n)),
        zeros((n, m, n)),
        rep.left.constants,
        rep.right.constants,
    )
    prod = PermAlgebra(space, c)
    if N is None and alpha is None:
        return prod, None
    N = N if N is not None else LinearMap.zero(g)
    alpha = alpha if alpha is not None else LinearMap.zero(V)
    op = zeros((n + m, n + m))
    op[:n, :n] = N.matrix
    op[n:, n:] = alpha.matrix
    return prod, LinearMap(space, space, op)


class MatchedPair:
    """Two algebras acting on each other.

    ``lg``: g x h -> h, ``rg``: h x g -> h (the g-actions on h);
    ``lh``: h x g -> g, ``rh``: g x h -> g (the h-actions on g).
    """

    def __init__(self, g, h, lg, rg, lh, rh, Ng=None, Nh=None):
        gs, hs = g.space, h.space
        for op, shape, name in (
            (lg, (gs, hs, hs), "lg"),
            (rg, (hs, gs, hs), "rg"),
            (lh, (hs, gs, gs), "lh"),
            (rh, (gs, hs, gs), "rh"),
        ):
            if (op.left, op.right, op.out) != shape:
                raise SpaceMismatch(f"action {name} has the wrong spaces")
        self.g, self.h = g, h
        self.lg, self.rg, self.lh, self.rh = lg, rg, lh, rh
        self.Ng, self.Nh = Ng, Nh

    def g_on_h(self):
        return Representation(self.g, self.h.space, self.lg, self.rg)

    def h_on_g(self):
        return Representation(self.h, self.g.space, self.lh, self.rh)

    def slots(self):
        return {
            "mul": self.g,
            "mulh": self.h,
            "lg": self.lg,
            "rg": self.rg,
            "lh": self.lh,
            "rh": self.rh,
        }

    def check(self, rules=()):
        """Compatibilities plus both representation conditions.

        Together these are equivalent to the sum product being perm when g
        and h are perm.
        """
        parts = [
            run("MP", self.slots(), rules),
            self.g_on_h().check(rules),
            self.h_on_g().check(rules),
        ]
        return combine("matched pair", parts)

    def nijenhuis_check(self, rules=()):
        """Matched pair conditions plus the Nijenhuis conditions on both sides."""
        if self.Ng is None or self.Nh is None:
            raise AxiomFailure("NIJ", None, "Nijenhuis check needs operators on both algebras")
        g_side = NijRepresentation(self.g_on_h(), self.Nh, self.Ng)
        h_side = NijRepresentation(self.h_on_g(), self.Ng, self.Nh)
        parts = [
            self.check(rules),
            run("NIJ", {"mul": self.g, "N": self.Ng}, rules),
            run("NIJ", {"mul": self.h, "N": self.Nh}, rules),
            g_side.nijenhuis_report(rules),
            h_side.nijenhuis_report(rules),
        ]
        return combine("Nijenhuis matched pair", parts)


def matched_pair_sum(mp, verify=False, rules=()):
    """The sum algebra on g (+) h and, when both operators exist, Ng + Nh."""
    if verify:
        require("PERM", {"mul": mp.g}, rules)
        require("PERM", {"mul": mp.h}, rules)
    gs, hs = mp.g.space, mp.h.space
    space = direct_sum(gs, hs)
    c = _sum_product(
        mp.g.constants,
        mp.h.constants,
        mp.lh.constants,
        mp.rh.constants,
        mp.lg.constants,
        mp.rg.constants,
    )
    prod = PermAlgebra(space, c)
    if mp.Ng is None or mp.Nh is None:
        return prod, None
    n = gs.dim
    op = zeros((space.dim, space.dim))
    op[:n, :n] = mp.Ng.matrix
    op[n:, n:] = mp.Nh.matrix
    return prod, LinearMap(space, space, op)


class Pencil:
    """Two products and two action pairs on the same spaces.

    ``combined(s, t)`` forms s(first) + t(second) for products and actions.
    """

    def __init__(self, first, second, first_rep=None, second_rep=None):
        if first.space != second.space:
            raise SpaceMismatch("pencil products live on different spaces")
        self.first, self.second = first, second
        self.first_rep, self.second_rep = first_rep, second_rep

    def combined(self, s, t):
        c = self.first.constants * s + self.second.constants * t
        prod = PermAlgebra(self.first.space, c)
        if self.first_rep is None:
            return prod, None
        a, b = self.first_rep, self.second_rep
        g, V = prod.space, a.space
        la = a.left.constants * s + b.left.constants * t
        ra = a.right.constants * s + b.right.constants * t
        return prod, Representation(prod, V, BilinearOp(g, V, V, la), BilinearOp(V, g, V, ra))

    def slots(self):
        s = {"mul": self.first, "mb": self.second}
        if self.first_rep is not None:
            s.update(
                el=self.first_rep.left,
                er=self.first_rep.right,
                tl=self.second_rep.left,
                tr=self.second_rep.right,
            )
        return s

    def algebra_report(self, rules=()):
        return run_all(
            "pencil algebra",
            [
                ("PERM", {"mul": self.first}, None),
                ("PERM", {"mul": self.second}, None),
                ("LIN_COMB_ALG", self.slots(), None),
            ],
            rules,
        )

    def representation_report(self, rules=()):
        s = self.slots()
        return run_all(
            "pencil representation",
            [
                ("REP_L", {"mul": self.first, "la": s["el"], "ra": s["er"]}, None),
                ("REP_R", {"mul": self.first, "ra": s["er"]}, None),
                ("REP_L", {"mul": self.second, "la": s["tl"], "ra": s["tr"]}, None),
                ("REP_R", {"mul": self.second, "ra": s["tr"]}, None),
                ("LIN_COMB_REP", s, None),
            ],
            rules,
        )


def homomorphism_report(source_rep, target_rep, phi, f, rules=()):
    """phi: g1 -> g2 and f: V1 -> V2 intertwine products and actions."""
    slots = {
        "mul1": source_rep.algebra,
        "mul2": target_rep.algebra,
        "phi": phi,
        "f": f,
        "la1": source_rep.left,
        "ra1": source_rep.right,
        "la2": target_rep.left,
        "ra2": target_rep.right,
    }
    # the unbound defaults are never consulted: every role is bound by name
    binding = {k: k for k in slots}
    return run("HOM_REP", slots, rules, binding)


def shifted_pair(rep, N, alpha, s, t):
    """(s id + t N, s id + t alpha)."""
    g, V = rep.algebra.space, rep.space
    return (
        LinearMap(g, g, LinearMap.identity(g).matrix * s + N.matrix * t),
        LinearMap(V, V, LinearMap.identity(V).matrix * s + alpha.matrix * t),
    )


def relation_report(pencil, N, alpha, rules=()):
    """The six relations tying the pencil's second structures to (N, alpha).

    Equivalent to (s id + t N, s id + t alpha) being a homomorphism from the
    combined representation to the first one, for symbolic s and t.
    """
    slots = dict(pencil.slots(), N=N, alpha=alpha)
    ids = ["RL_PRODUCT", "NIJ_HOM", "RL_L", "RL_L2", "RL_R", "RL_R2"]
    return run_all("deformation relations", [(i, slots, None) for i in ids], rules)


def pencil_homomorphism_report(pencil, N, alpha, s, t, rules=()):
    """HOM_REP for (s id + t N, s id + t alpha) from the combined data to the first."""
    prod, rep = pencil.combined(s, t)
    phi, f = shifted_pair(pencil.first_rep, N, alpha, s, t)
    return homomorphism_report(rep, pencil.first_rep, phi, f, rules)
