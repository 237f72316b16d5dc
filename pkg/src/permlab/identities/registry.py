"""Builtin identities: hand-coded checks plus DSL sources.

Every entry carries two independent routes to the same verdict:

* ``hand``: einsum contractions written directly against structure
  constants (and, for the Yang-Baxter family, the placement products of
  ``tensors.placement_product``);
* ``dsl``: equation text evaluated by ``evaluator.evaluate``.

Roles are the names an identity uses for the structures it consumes.  Each
role has a kind and a default bundle slot; a binding maps roles to other
slots.  Defect labels are ``"i=j"`` for the pair of chain members and carry
an ``"eq{k}:"`` prefix when an identity has several equations, identically
in both routes.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import UnboundName, UsageError
from ..reports import Defect, build_report, combine, implication_report
from ..tensors import LinearMap, place_in_triple, placement_product
from . import dsl
from .evaluator import evaluate

E = np.einsum


@dataclass
class IdentitySpec:
    id: str
    formula: str
    roles: dict  # role -> (kind, default slot)
    hand: Callable
    dsl: list = field(default_factory=list)
    kind: str = "equation"  # or "implication"
    prepare: Optional[Callable] = None
    premise: list = field(default_factory=list)  # DSL for implication premises
    notes: str = ""

    @property
    def dsl_expressible(self):
        return bool(self.dsl)


REGISTRY = {}


def _register(id, formula, roles, dsl_text=(), kind="equation", prepare=None, premise=(), notes=""):
    def deco(fn):
        REGISTRY[id] = IdentitySpec(
            id, formula, dict(roles), fn, list(dsl_text), kind, prepare, list(premise), notes
        )
        return fn

    return deco


# ------------------------------------------------------------------ roles


class HandContext:
    """Resolved role -> structure view used by the hand-coded checks."""

    def __init__(self, spec, bundle, binding=None):
        binding = dict(binding or {})
        unknown = sorted(set(binding) - set(spec.roles))
        if unknown:
            raise UsageError(
                f"{spec.id} has no role(s) {', '.join(unknown)}; roles are {', '.join(sorted(spec.roles))}"
            )
        self.spec = spec
        self.bundle = bundle
        self.rules = bundle.rules
        self.slots = {}
        self.objs = {}
        for role, (kind, default) in spec.roles.items():
            slot = binding.get(role, default)
            obj = bundle.get(slot, kind)
            if obj is None and role not in binding:
                obj, slot = _fallback(bundle, kind, role, default)
            if obj is None:
                raise UnboundName(f"{spec.id}: {kind} role {role!r} wants slot {slot!r}, not in the bundle")
            self.slots[role] = slot
            self.objs[role] = obj

    def __getitem__(self, role):
        return self.objs[role]

    def arr(self, role):
        o = self.objs[role]
        for attr in ("constants", "matrix", "array"):
            if hasattr(o, attr):
                return getattr(o, attr)
        raise TypeError(role)

    def dsl_binding(self):
        out = dict(self.slots)
        if "r" in out:
            out.setdefault("rb", out["r"])
        return out


def _fallback(bundle, kind, role, default):
    pool = bundle.slots_of_kind(kind)
    if kind == "algebra":
        pool = {k: v for k, v in pool.items() if v.left == v.right == v.out}
    if len(pool) == 1 and role in ("mul", "cop", "r", "B", "w"):
        name, obj = next(iter(pool.items()))
        return obj, name
    return None, default


def _chain(sides, variables, outputs, prefix=""):
    out = []
    for i in range(len(sides)):
        for j in range(i + 1, len(sides)):
            out.append(Defect(f"{prefix}{i}={j}", sides[i] - sides[j], variables, outputs))
    return out


def _equations(*chains):
    """chains: (sides, variables, outputs); adds eq prefixes when needed."""
    out = []
    for k, (sides, variables, outputs) in enumerate(chains):
        prefix = f"eq{k}:" if len(chains) > 1 else ""
        out.extend(_chain(sides, variables, outputs, prefix))
    return out


def _zero_like(a):
    return a - a


# ------------------------------------------------------------------ algebra axioms


ALG = ("algebra", "mul")


@_register("PERM", "(xy)z = x(yz) = x(zy)", {"mul": ALG}, ["(x*y)*z == x*(y*z) == x*(z*y)"])
def _perm(h):
    c = h.arr("mul")
    g = h["mul"].out
    s0 = E("abm,mck->abck", c, c)
    s1 = E("bcm,amk->abck", c, c)
    s2 = E("cbm,amk->abck", c, c)
    return _equations(([s0, s1, s2], [("x", g), ("y", g), ("z", g)], [g]))


@_register(
    "COPERM",
    "x(1)(1) (x) x(1)(2) (x) x(2) = x(1) (x) x(2)(1) (x) x(2)(2) = x(1) (x) x(2)(2) (x) x(2)(1)",
    {"cop": ("coalgebra", "cop")},
    [
        "cop1(cop1(x)) ox cop2(cop1(x)) ox cop2(x) == cop1(x) ox cop1(cop2(x)) ox cop2(cop2(x))"
        " == cop1(x) ox cop2(cop2(x)) ox cop1(cop2(x))"
    ],
)
def _coperm(h):
    d = h.arr("cop")
    g = h["cop"].space
    s0 = E("aml,mjk->ajkl", d, d)
    s1 = E("ajm,mkl->ajkl", d, d)
    s2 = E("ajm,mlk->ajkl", d, d)
    return _equations(([s0, s1, s2], [("x", g)], [g, g, g]))


REP = {"mul": ALG, "la": ("algebra", "la"), "ra": ("algebra", "ra")}


@_register(
    "REP_R",
    "v r(xy) = (v r(x)) r(y) = (v r(y)) r(x)",
    {"mul": ALG, "ra": ("algebra", "ra")},
    ["ra(v, x*y) == ra(ra(v, x), y) == ra(ra(v, y), x)"],
)
def _rep_r(h):
    c, ra = h.arr("mul"), h.arr("ra")
    g, V = h["mul"].out, h["ra"].out
    s0 = E("abm,vmw->vabw", c, ra)
    s1 = E("vam,mbw->vabw", ra, ra)
    s2 = E("vbm,maw->vabw", ra, ra)
    return _equations(([s0, s1, s2], [("v", V), ("x", g), ("y", g)], [V]))


@_register(
    "REP_L",
    "l(xy)v = l(x)(l(y)v) = l(x)(v r(y)) = (l(x)v) r(y)",
    REP,
    ["la(x*y, v) == la(x, la(y, v)) == la(x, ra(v, y)) == ra(la(x, v), y)"],
)
def _rep_l(h):
    c, la, ra = h.arr("mul"), h.arr("la"), h.arr("ra")
    g, V = h["mul"].out, h["la"].out
    s0 = E("abm,mvw->abvw", c, la)
    s1 = E("bvm,amw->abvw", la, la)
    s2 = E("vbm,amw->abvw", ra, la)
    s3 = E("avm,mbw->abvw", la, ra)
    return _equations(([s0, s1, s2, s3], [("x", g), ("y", g), ("v", V)], [V]))


@_register(
    "HOM_REP",
    "phi(x.y) = phi(x)phi(y); f(l1(x)v) = l2(phi(x))f(v); f(v r1(x)) = f(v) r2(phi(x))",
    {
        "mul1": ALG,
        "mul2": ("algebra", "mul"),
        "phi": ("map", "phi"),
        "f": ("map", "f"),
        "la1": ("algebra", "la"),
        "ra1": ("algebra", "ra"),
        "la2": ("algebra", "la"),
        "ra2": ("algebra", "ra"),
    },
    [
        "phi(mul1(x, y)) == mul2(phi(x), phi(y))",
        "f(la1(x, v)) == la2(phi(x), f(v))",
        "f(ra1(v, x)) == ra2(f(v), phi(x))",
    ],
)
def _hom_rep(h):
    c1, c2, phi, f = h.arr("mul1"), h.arr("mul2"), h.arr("phi"), h.arr("f")
    la1, ra1, la2, ra2 = (h.arr(k) for k in ("la1", "ra1", "la2", "ra2"))
    g, h2, V1, V2 = h["mul1"].out, h["mul2"].out, h["la1"].out, h["la2"].out
    e0 = [E("abm,km->abk", c1, phi), E("pa,qb,pqk->abk", phi, phi, c2)]
    e1 = [E("avm,wm->avw", la1, f), E("pa,qv,pqw->avw", phi, f, la2)]
    e2 = [E("vam,wm->vaw", ra1, f), E("qv,pa,qpw->vaw", f, phi, ra2)]
    return _equations(
        (e0, [("x", g), ("y", g)], [h2]),
        (e1, [("x", g), ("v", V1)], [V2]),
        (e2, [("v", V1), ("x", g)], [V2]),
    )


# ------------------------------------------------------------------ deformations


@_register(
    "LIN_COMB_ALG",
    "(x*y).z + (x.y)*z = x.(y*z) + x*(y.z) = x.(z*y) + x*(z.y)",
    {"mul": ALG, "mb": ("algebra", "mb")},
    [
        "mb(x, y)*z + mb(x*y, z) == x*mb(y, z) + mb(x, y*z) == x*mb(z, y) + mb(x, z*y)",
    ],
)
def _lin_comb_alg(h):
    c, b = h.arr("mul"), h.arr("mb")
    g = h["mul"].out
    s0 = E("abm,mck->abck", b, c) + E("abm,mck->abck", c, b)
    s1 = E("bcm,amk->abck", b, c) + E("bcm,amk->abck", c, b)
    s2 = E("cbm,amk->abck", b, c) + E("cbm,amk->abck", c, b)
    return _equations(([s0, s1, s2], [("x", g), ("y", g), ("z", g)], [g]))


PENCIL = {
    "mul": ALG,
    "mb": ("algebra", "mb"),
    "el": ("algebra", "el"),
    "er": ("algebra", "er"),
    "tl": ("algebra", "tl"),
    "tr": ("algebra", "tr"),
}


@_register(
    "LIN_COMB_REP",
    "mixed representation conditions of the two action pairs of a pencil",
    PENCIL,
    [
        "el(mb(x, y), u) + tl(x*y, u) == el(x, tl(y, u)) + tl(x, el(y, u))"
        " == el(x, tr(u, y)) + tl(x, er(u, y)) == er(tl(x, u), y) + tr(el(x, u), y)",
        "er(u, mb(x, y)) + tr(u, x*y) == er(tr(u, y), x) + tr(er(u, y), x)"
        " == er(tr(u, x), y) + tr(er(u, x), y)",
    ],
)
def _lin_comb_rep(h):
    c, b = h.arr("mul"), h.arr("mb")
    el, er, tl, tr = (h.arr(k) for k in ("el", "er", "tl", "tr"))
    g, V = h["mul"].out, h["el"].out
    a0 = E("abm,mvw->abvw", b, el) + E("abm,mvw->abvw", c, tl)
    a1 = E("bvm,amw->abvw", tl, el) + E("bvm,amw->abvw", el, tl)
    a2 = E("vbm,amw->abvw", tr, el) + E("vbm,amw->abvw", er, tl)
    a3 = E("avm,mbw->abvw", tl, er) + E("avm,mbw->abvw", el, tr)
    b0 = E("abm,vmw->vabw", b, er) + E("abm,vmw->vabw", c, tr)
    b1 = E("vbm,maw->vabw", tr, er) + E("vbm,maw->vabw", er, tr)
    b2 = E("vam,mbw->vabw", tr, er) + E("vam,mbw->vabw", er, tr)
    return _equations(
        ([a0, a1, a2, a3], [("x", g), ("y", g), ("u", V)], [V]),
        ([b0, b1, b2], [("u", V), ("x", g), ("y", g)], [V]),
    )


NMAP = ("map", "N")


@_register(
    "RL_PRODUCT",
    "x*y = N(x)y + xN(y) - N(xy)",
    {"mul": ALG, "mb": ("algebra", "mb"), "N": NMAP},
    ["mb(x, y) == N(x)*y + x*N(y) - N(x*y)"],
)
def _rl_product(h):
    c, b, N = h.arr("mul"), h.arr("mb"), h.arr("N")
    g = h["mul"].out
    rhs = E("pa,pbk->abk", N, c) + E("pb,apk->abk", N, c) - E("abm,km->abk", c, N)
    return _equations(([b, rhs], [("x", g), ("y", g)], [g]))


@_register(
    "NIJ_HOM",
    "N(x*y) = N(x)N(y)",
    {"mul": ALG, "mb": ("algebra", "mb"), "N": NMAP},
    ["N(mb(x, y)) == N(x)*N(y)"],
)
def _nij_hom(h):
    c, b, N = h.arr("mul"), h.arr("mb"), h.arr("N")
    g = h["mul"].out
    return _equations(([E("abm,km->abk", b, N), E("pa,qb,pqk->abk", N, N, c)], [("x", g), ("y", g)], [g]))


RL_ROLES = {
    "N": NMAP,
    "alpha": ("map", "alpha"),
    "el": ("algebra", "el"),
    "er": ("algebra", "er"),
    "tl": ("algebra", "tl"),
    "tr": ("algebra", "tr"),
}


@_register(
    "RL_L",
    "tl(x) = el(N(x)) + el(x) alpha - alpha el(x)",
    {k: RL_ROLES[k] for k in ("N", "alpha", "el", "tl")},
    ["tl(x, u) == el(N(x), u) + el(x, alpha(u)) - alpha(el(x, u))"],
)
def _rl_l(h):
    N, A, el, tl = h.arr("N"), h.arr("alpha"), h.arr("el"), h.arr("tl")
    g, V = h["el"].left, h["el"].out
    rhs = E("pa,pvw->avw", N, el) + E("qv,aqw->avw", A, el) - E("avm,wm->avw", el, A)
    return _equations(([tl, rhs], [("x", g), ("u", V)], [V]))


@_register(
    "RL_L2",
    "el(N(x)) alpha = alpha tl(x)",
    {k: RL_ROLES[k] for k in ("N", "alpha", "el", "tl")},
    ["el(N(x), alpha(u)) == alpha(tl(x, u))"],
)
def _rl_l2(h):
    N, A, el, tl = h.arr("N"), h.arr("alpha"), h.arr("el"), h.arr("tl")
    g, V = h["el"].left, h["el"].out
    return _equations(
        ([E("pa,qv,pqw->avw", N, A, el), E("avm,wm->avw", tl, A)], [("x", g), ("u", V)], [V])
    )


@_register(
    "RL_R",
    "tr(x) = er(N(x)) + er(x) alpha - alpha er(x)",
    {k: RL_ROLES[k] for k in ("N", "alpha", "er", "tr")},
    ["tr(u, x) == er(u, N(x)) + er(alpha(u), x) - alpha(er(u, x))"],
)
def _rl_r(h):
    N, A, er, tr = h.arr("N"), h.arr("alpha"), h.arr("er"), h.arr("tr")
    g, V = h["er"].right, h["er"].out
    rhs = E("pa,vpw->vaw", N, er) + E("qv,qaw->vaw", A, er) - E("vam,wm->vaw", er, A)
    return _equations(([tr, rhs], [("u", V), ("x", g)], [V]))


@_register(
    "RL_R2",
    "er(N(x)) alpha = alpha tr(x)",
    {k: RL_ROLES[k] for k in ("N", "alpha", "er", "tr")},
    ["er(alpha(u), N(x)) == alpha(tr(u, x))"],
)
def _rl_r2(h):
    N, A, er, tr = h.arr("N"), h.arr("alpha"), h.arr("er"), h.arr("tr")
    g, V = h["er"].right, h["er"].out
    return _equations(
        ([E("qv,pa,qpw->vaw", A, N, er), E("vam,wm->vaw", tr, A)], [("u", V), ("x", g)], [V])
    )


# ------------------------------------------------------------------ Nijenhuis operators


@_register(
    "NIJ",
    "N(x)N(y) + N^2(xy) = N(N(x)y) + N(xN(y))",
    {"mul": ALG, "N": NMAP},
    ["N(x)*N(y) + N(N(x*y)) == N(N(x)*y) + N(x*N(y))"],
)
def _nij(h):
    c, N = h.arr("mul"), h.arr("N")
    g = h["mul"].out
    N2 = N.dot(N)
    lhs = E("pa,qb,pqk->abk", N, N, c) + E("abm,km->abk", c, N2)
    rhs = E("pa,pbm,km->abk", N, c, N) + E("qb,aqm,km->abk", N, c, N)
    return _equations(([lhs, rhs], [("x", g), ("y", g)], [g]))


NREP = {"N": NMAP, "alpha": ("map", "alpha"), "la": ("algebra", "la"), "ra": ("algebra", "ra")}


@_register(
    "NIJREP_L",
    "l(N(x))a(v) + a^2(l(x)v) = a(l(N(x))v) + a(l(x)a(v))",
    {k: NREP[k] for k in ("N", "alpha", "la")},
    ["la(N(x), alpha(v)) + alpha(alpha(la(x, v))) == alpha(la(N(x), v)) + alpha(la(x, alpha(v)))"],
)
def _nijrep_l(h):
    N, A, la = h.arr("N"), h.arr("alpha"), h.arr("la")
    g, V = h["la"].left, h["la"].out
    A2 = A.dot(A)
    lhs = E("pa,qv,pqw->avw", N, A, la) + E("avm,wm->avw", la, A2)
    rhs = E("pa,pvm,wm->avw", N, la, A) + E("qv,aqm,wm->avw", A, la, A)
    return _equations(([lhs, rhs], [("x", g), ("v", V)], [V]))


@_register(
    "NIJREP_R",
    "a(v)r(N(x)) + a^2(v r(x)) = a(v r(N(x))) + a(a(v)r(x))",
    {k: NREP[k] for k in ("N", "alpha", "ra")},
    ["ra(alpha(v), N(x)) + alpha(alpha(ra(v, x))) == alpha(ra(v, N(x))) + alpha(ra(alpha(v), x))"],
)
def _nijrep_r(h):
    N, A, ra = h.arr("N"), h.arr("alpha"), h.arr("ra")
    g, V = h["ra"].right, h["ra"].out
    A2 = A.dot(A)
    lhs = E("qv,pa,qpw->vaw", A, N, ra) + E("vam,wm->vaw", ra, A2)
    rhs = E("pa,vpm,wm->vaw", N, ra, A) + E("qv,qam,wm->vaw", A, ra, A)
    return _equations(([lhs, rhs], [("v", V), ("x", g)], [V]))


BREP = {"N": NMAP, "beta": ("map", "beta"), "la": ("algebra", "la"), "ra": ("algebra", "ra")}


@_register(
    "ADMREP_L",
    "b(l(N(x))u) + l(x)b^2(u) - l(N(x))b(u) - b(l(x)b(u)) = 0",
    {k: BREP[k] for k in ("N", "beta", "la")},
    ["beta(la(N(x), u)) + la(x, beta(beta(u))) == la(N(x), beta(u)) + beta(la(x, beta(u)))"],
)
def _admrep_l(h):
    N, B, la = h.arr("N"), h.arr("beta"), h.arr("la")
    g, V = h["la"].left, h["la"].out
    B2 = B.dot(B)
    lhs = E("pa,pvm,wm->avw", N, la, B) + E("qv,aqw->avw", B2, la)
    rhs = E("pa,qv,pqw->avw", N, B, la) + E("qv,aqm,wm->avw", B, la, B)
    return _equations(([lhs, rhs], [("x", g), ("u", V)], [V]))


@_register(
    "ADMREP_R",
    "b(u r(N(x))) + b^2(u)r(x) - b(u)r(N(x)) - b(b(u)r(x)) = 0",
    {k: BREP[k] for k in ("N", "beta", "ra")},
    ["beta(ra(u, N(x))) + ra(beta(beta(u)), x) == ra(beta(u), N(x)) + beta(ra(beta(u), x))"],
)
def _admrep_r(h):
    N, B, ra = h.arr("N"), h.arr("beta"), h.arr("ra")
    g, V = h["ra"].right, h["ra"].out
    B2 = B.dot(B)
    lhs = E("pa,vpm,wm->vaw", N, ra, B) + E("qv,qaw->vaw", B2, ra)
    rhs = E("qv,pa,qpw->vaw", B, N, ra) + E("qv,qam,wm->vaw", B, ra, B)
    return _equations(([lhs, rhs], [("u", V), ("x", g)], [V]))


SMAP = ("map", "S")


@_register(
    "ADM_1",
    "S(N(x)y) + xS^2(y) - N(x)S(y) - S(xS(y)) = 0",
    {"mul": ALG, "N": NMAP, "S": SMAP},
    ["S(N(x)*y) + x*S(S(y)) == N(x)*S(y) + S(x*S(y))"],
)
def _adm_1(h):
    c, N, S = h.arr("mul"), h.arr("N"), h.arr("S")
    g = h["mul"].out
    S2 = S.dot(S)
    lhs = E("pa,pbm,km->abk", N, c, S) + E("qb,aqk->abk", S2, c)
    rhs = E("pa,qb,pqk->abk", N, S, c) + E("qb,aqm,km->abk", S, c, S)
    return _equations(([lhs, rhs], [("x", g), ("y", g)], [g]))


@_register(
    "ADM_2",
    "S(xN(y)) + S^2(x)y - S(x)N(y) - S(S(x)y) = 0",
    {"mul": ALG, "N": NMAP, "S": SMAP},
    ["S(x*N(y)) + S(S(x))*y == S(x)*N(y) + S(S(x)*y)"],
)
def _adm_2(h):
    c, N, S = h.arr("mul"), h.arr("N"), h.arr("S")
    g = h["mul"].out
    S2 = S.dot(S)
    lhs = E("qb,aqm,km->abk", N, c, S) + E("pa,pbk->abk", S2, c)
    rhs = E("pa,qb,pqk->abk", S, N, c) + E("pa,pbm,km->abk", S, c, S)
    return _equations(([lhs, rhs], [("x", g), ("y", g)], [g]))


# ------------------------------------------------------------------ matched pairs


MP_ROLES = {
    "mul": ALG,
    "mulh": ("algebra", "mulh"),
    "lg": ("algebra", "lg"),
    "rg": ("algebra", "rg"),
    "lh": ("algebra", "lh"),
    "rh": ("algebra", "rh"),
}


@_register(
    "MP",
    "matched pair compatibilities between two algebras acting on each other",
    MP_ROLES,
    [
        "lh(y, x1*x2) == lh(y, x2*x1) == lh(y, x1)*x2 + lh(rg(y, x1), x2)",
        "rh(x1*x2, y) == x1*rh(x2, y) + rh(x1, lg(x2, y)) == x1*lh(y, x2) + rh(x1, rg(y, x2))"
        " == rh(x1, y)*x2 + lh(lg(x1, y), x2)",
        "lg(x, mulh(y1, y2)) == lg(x, mulh(y2, y1)) == mulh(lg(x, y1), y2) + lg(rh(x, y1), y2)",
        "rg(mulh(y1, y2), x) == mulh(y1, rg(y2, x)) + rg(y1, lh(y2, x))"
        " == mulh(y1, lg(x, y2)) + rg(y1, rh(x, y2)) == mulh(rg(y1, x), y2) + lg(lh(y1, x), y2)",
    ],
    notes="the last member of the fourth chain is read as (y1 r(x)) y2, mirroring the second chain",
)
def _mp(h):
    c, ch = h.arr("mul"), h.arr("mulh")
    lg, rg, lh, rh = (h.arr(k) for k in ("lg", "rg", "lh", "rh"))
    g, k = h["mul"].out, h["mulh"].out
    e0 = [
        E("abm,qmk->qabk", c, lh),
        E("bam,qmk->qabk", c, lh),
        E("qam,mbk->qabk", lh, c) + E("qap,pbk->qabk", rg, lh),
    ]
    e1 = [
        E("abm,mqk->abqk", c, rh),
        E("bqm,amk->abqk", rh, c) + E("bqp,apk->abqk", lg, rh),
        E("qbm,amk->abqk", lh, c) + E("qbp,apk->abqk", rg, rh),
        E("aqm,mbk->abqk", rh, c) + E("aqp,pbk->abqk", lg, lh),
    ]
    e2 = [
        E("qsm,amw->aqsw", ch, lg),
        E("sqm,amw->aqsw", ch, lg),
        E("aqm,msw->aqsw", lg, ch) + E("aqp,psw->aqsw", rh, lg),
    ]
    e3 = [
        E("qsm,maw->qsaw", ch, rg),
        E("sam,qmw->qsaw", rg, ch) + E("sap,qpw->qsaw", lh, rg),
        E("asm,qmw->qsaw", lg, ch) + E("asp,qpw->qsaw", rh, rg),
        E("qam,msw->qsaw", rg, ch) + E("qap,psw->qsaw", lh, lg),
    ]
    return _equations(
        (e0, [("y", k), ("x1", g), ("x2", g)], [g]),
        (e1, [("x1", g), ("x2", g), ("y", k)], [g]),
        (e2, [("x", g), ("y1", k), ("y2", k)], [k]),
        (e3, [("y1", k), ("y2", k), ("x", g)], [k]),
    )


# ------------------------------------------------------------------ forms


FORM = ("form", "B")


@_register(
    "FROB",
    "B(xy, z) = B(y, zx) - B(y, xz)",
    {"mul": ALG, "B": FORM},
    ["B(x*y, z) == B(y, z*x) - B(y, x*z)"],
)
def _frob(h):
    c, B = h.arr("mul"), h.arr("B")
    g = h["mul"].out
    lhs = E("abm,mc->abc", c, B)
    rhs = E("cam,bm->abc", c, B) - E("acm,bm->abc", c, B)
    return _equations(([lhs, rhs], [("x", g), ("y", g), ("z", g)], []))


@_register(
    "FROB_SKEW_ID",
    "B(xy, z) = B(x, zy)",
    {"mul": ALG, "B": FORM},
    ["B(x*y, z) == B(x, z*y)"],
)
def _frob_skew_id(h):
    c, B = h.arr("mul"), h.arr("B")
    g = h["mul"].out
    return _equations(
        ([E("abm,mc->abc", c, B), E("cbm,am->abc", c, B)], [("x", g), ("y", g), ("z", g)], [])
    )


@_register(
    "ADJ",
    "B(N(x), y) = B(x, Nhat(y))",
    {"N": NMAP, "Nh": ("map", "Nh"), "B": FORM},
    ["B(N(x), y) == B(x, Nh(y))"],
)
def _adj(h):
    N, Nh, B = h.arr("N"), h.arr("Nh"), h.arr("B")
    g = h["N"].domain
    return _equations(([E("pa,pb->ab", N, B), E("aq,qb->ab", B, Nh)], [("x", g), ("y", g)], []))


@_register(
    "MANIN_ADJ",
    "the adjoint of N+S* under the Manin form is S+N*",
    {"NS": ("map", "N_sum"), "SN": ("map", "S_sum"), "B": FORM},
    ["B(NS(x), y) == B(x, SN(y))"],
)
def _manin_adj(h):
    N, Nh, B = h.arr("NS"), h.arr("SN"), h.arr("B")
    g = h["NS"].domain
    return _equations(([E("pa,pb->ab", N, B), E("aq,qb->ab", B, Nh)], [("x", g), ("y", g)], []))


# ------------------------------------------------------------------ coalgebra side


COP = ("coalgebra", "cop")


@_register(
    "NIJ_CO",
    "S(x1) (x) S(x2) + S^2(x)1 (x) S^2(x)2 = S(S(x)1) (x) S(x)2 + S(x)1 (x) S(S(x)2)",
    {"cop": COP, "S": SMAP},
    [
        "S(cop1(x)) ox S(cop2(x)) + cop1(S(S(x))) ox cop2(S(S(x)))"
        " == S(cop1(S(x))) ox cop2(S(x)) + cop1(S(x)) ox S(cop2(S(x)))"
    ],
)
def _nij_co(h):
    d, S = h.arr("cop"), h.arr("S")
    g = h["cop"].space
    S2 = S.dot(S)
    lhs = E("ajk,pj,qk->apq", d, S, S) + E("ma,mpq->apq", S2, d)
    rhs = E("ma,mjq,pj->apq", S, d, S) + E("ma,mpk,qk->apq", S, d, S)
    return _equations(([lhs, rhs], [("x", g)], [g, g]))


BIALG_DSL = [
    "cop1(x*y) ox cop2(x*y) - tau(cop1(x*y) ox cop2(x*y))"
    " == cop1(y*x) ox cop2(y*x) - tau(cop1(y*x) ox cop2(y*x))"
    " == cop1(x)*y ox cop2(x) - tau(cop1(x) ox cop2(x)*y) + cop1(y) ox cop2(y)*x - tau(cop1(y)*x ox cop2(y))",
    "cop1(x*y) ox cop2(x*y)"
    " == x*cop1(y) ox cop2(y) + cop1(x) ox cop2(x)*y - cop1(x) ox y*cop2(x)"
    " == x*cop1(y) ox cop2(y) - tau(cop1(y) ox x*cop2(y)) + cop1(x) ox cop2(x)*y"
    " == cop1(x)*y ox cop2(x) + cop1(y) ox cop2(y)*x - cop1(y) ox x*cop2(y)"
    " - tau(cop1(y)*x ox cop2(y)) + tau(x*cop1(y) ox cop2(y))",
]


@_register(
    "BIALG",
    "perm bialgebra compatibility chains",
    {"mul": ALG, "cop": COP},
    BIALG_DSL,
    notes="the tau(id (x) L(x))Delta(y) term of the second chain's middle member carries a minus sign",
)
def _bialg(h):
    c, d = h.arr("mul"), h.arr("cop")
    g = h["mul"].out
    hh = [
        E("abm,mjk->abjk", c, d) - E("abm,mkj->abjk", c, d),
        E("bam,mjk->abjk", c, d) - E("bam,mkj->abjk", c, d),
        E("amk,mbj->abjk", d, c)
        - E("akm,mbj->abjk", d, c)
        + E("bjm,mak->abjk", d, c)
        - E("bmj,mak->abjk", d, c),
    ]
    kk = [
        E("abm,mjk->abjk", c, d),
        E("bmk,amj->abjk", d, c) + E("ajm,mbk->abjk", d, c) - E("ajm,bmk->abjk", d, c),
        E("bmk,amj->abjk", d, c) - E("bkm,amj->abjk", d, c) + E("ajm,mbk->abjk", d, c),
        E("amk,mbj->abjk", d, c)
        + E("bjm,mak->abjk", d, c)
        - E("bjm,amk->abjk", d, c)
        - E("bmj,mak->abjk", d, c)
        + E("bmj,amk->abjk", d, c),
    ]
    var = [("x", g), ("y", g)]
    return _equations((hh, var, [g, g]), (kk, var, [g, g]))


@_register(
    "NADM_CO_1",
    "(S (x) id)Delta N + (id (x) N^2)Delta - (S (x) N)Delta - (id (x) N)Delta N = 0",
    {"cop": COP, "N": NMAP, "S": SMAP},
    [
        "S(cop1(N(x))) ox cop2(N(x)) + cop1(x) ox N(N(cop2(x)))"
        " == S(cop1(x)) ox N(cop2(x)) + cop1(N(x)) ox N(cop2(N(x)))"
    ],
)
def _nadm_co_1(h):
    d, N, S = h.arr("cop"), h.arr("N"), h.arr("S")
    g = h["cop"].space
    N2 = N.dot(N)
    lhs = E("ma,mpk,jp->ajk", N, d, S) + E("ajq,kq->ajk", d, N2)
    rhs = E("apq,jp,kq->ajk", d, S, N) + E("ma,mjq,kq->ajk", N, d, N)
    return _equations(([lhs, rhs], [("x", g)], [g, g]))


@_register(
    "NADM_CO_2",
    "(id (x) S)Delta N + (N^2 (x) id)Delta - (N (x) S)Delta - (N (x) id)Delta N = 0",
    {"cop": COP, "N": NMAP, "S": SMAP},
    [
        "cop1(N(x)) ox S(cop2(N(x))) + N(N(cop1(x))) ox cop2(x)"
        " == N(cop1(x)) ox S(cop2(x)) + N(cop1(N(x))) ox cop2(N(x))"
    ],
)
def _nadm_co_2(h):
    d, N, S = h.arr("cop"), h.arr("N"), h.arr("S")
    g = h["cop"].space
    N2 = N.dot(N)
    lhs = E("ma,mjq,kq->ajk", N, d, S) + E("apk,jp->ajk", d, N2)
    rhs = E("apq,jp,kq->ajk", d, N, S) + E("ma,mpk,jp->ajk", N, d, N)
    return _equations(([lhs, rhs], [("x", g)], [g, g]))


# ------------------------------------------------------------------ coboundary conditions

# Placement products as leg expressions: the first copy of r is r, the
# second rb; a slot shared by both receives (r leg)*(rb leg).
PLACE = {
    "13.12": ("r^1*rb^1", "rb^2", "r^2"),
    "13.23": ("r^1", "rb^1", "r^2*rb^2"),
    "23.12": ("rb^1", "r^1*rb^2", "r^2"),
    "12.23": ("r^1", "r^2*rb^1", "rb^2"),
    "13.32": ("r^1", "rb^2", "r^2*rb^1"),
    "12.13": ("r^1*rb^1", "r^2", "rb^2"),
    "23.13": ("rb^1", "r^1", "r^2*rb^2"),
    "32.12": ("rb^1", "r^2*rb^2", "r^1"),
    "12.32": ("r^1", "r^2*rb^2", "rb^1"),
}

P_TERMS = [(1, "13.12"), (-1, "13.23"), (1, "23.12"), (-1, "12.23")]
Q_TERMS = [(1, "13.12"), (-1, "13.32"), (1, "23.12"), (-1, "12.23")]
J_TERMS = [(1, "12.23"), (1, "13.23"), (-1, "12.13"), (-1, "23.13")]
T_TERMS = [(1, "12.23"), (1, "13.32"), (-1, "13.12"), (-1, "32.12")]


def _legs_text(terms, maps=("{}", "{}", "{}")):
    """Signed sum of placement products with leg maps given as format strings."""
    parts = []
    for sign, code in terms:
        legs = [m.format(f"({leg})" if "*" in leg and m != "{}" else leg) for m, leg in zip(maps, PLACE[code])]
        parts.append(("+ " if sign > 0 else "- ") + " ox ".join(legs))
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def _sum_text(*chunks):
    out = ""
    for ch in chunks:
        ch = ch.strip()
        if not out:
            out = ch
        elif ch.startswith("- "):
            out += " " + ch
        else:
            out += " + " + ch
    return out


L3 = ("{}", "{}", "x*{}")
R3 = ("{}", "{}", "{}*x")
L1 = ("x*{}", "{}", "{}")
L2 = ("{}", "x*{}", "{}")
R2 = ("{}", "{}*x", "{}")


def _neg(terms):
    return [(-s, c) for s, c in terms]


PYBE_TEXT = _legs_text(P_TERMS) + " == 0"
COB5_TEXT = (
    _sum_text(_legs_text(P_TERMS, L3), _legs_text(_neg(P_TERMS), R3)) + " == " + _legs_text(J_TERMS, L1)
)
M_TEXT = _sum_text(
    _legs_text([(1, "32.12"), (-1, "23.12")], L2), _legs_text([(1, "12.23"), (-1, "12.32")], R2)
)
COB6_TEXT = (
    _sum_text(_legs_text(Q_TERMS, L3), _legs_text(_neg(Q_TERMS), R3))
    + " == "
    + _sum_text(_legs_text(T_TERMS, L1), M_TEXT)
)


def _anti(left, right):
    """(A (x) B)(r - tau r) as DSL text, A and B given as format strings."""
    return (
        f"{left.format('r^1')} ox {right.format('r^2')} - {left.format('r^2')} ox {right.format('r^1')}"
    )


def _anti_sum(*pairs):
    return _sum_text(*(_anti(a, b) for a, b in pairs))


ID = "{}"
LXY, LYX = "(x*y)*{}", "(y*x)*{}"
LX, LY, RX, RY = "x*{}", "y*{}", "{}*x", "{}*y"
RYX, RXY = "{}*(y*x)", "{}*(x*y)"

COB1_TEXT = _anti_sum((LXY, ID), (ID, LXY)) + " == " + _anti_sum((LYX, ID), (ID, LYX))
COB2_TEXT = _anti_sum((RY, LX), (LY, RX), (ID, LYX)) + " == " + _anti_sum((RY, RX), (ID, RYX), (ID, LXY))
COB3_TEXT = _anti(LX, LY) + " == 0"
COB4_TEXT = _anti_sum((RY, LX), (LY, RX), (ID, LYX)) + " == " + _anti_sum((RY, RX), (LY, LX), (ID, LXY))

RT = {"mul": ALG, "r": ("tensor", "r")}


def _antisym(h):
    r = h.arr("r")
    return r - r.T


def _triple(h, terms):
    c = h.arr("mul")
    rt = h["r"]
    out = None
    for sign, code in terms:
        a, b = code.split(".")
        t = placement_product(c, place_in_triple(rt, int(a)), place_in_triple(rt, int(b))).array
        t = t if sign > 0 else -t
        out = t if out is None else out + t
    return out


def _g(h):
    return h["mul"].out


@_register("COB_1", "(L(xy) (x) id + id (x) L(xy))(r - tau r) = same with yx", RT, [COB1_TEXT])
def _cob_1(h):
    c, u, g = h.arr("mul"), _antisym(h), _g(h)

    def side(s):
        return E(s + ",mip,iq->abpq", c, c, u) + E(s + ",miq,pi->abpq", c, c, u)

    return _equations(([side("abm"), side("bam")], [("x", g), ("y", g)], [g, g]))


@_register(
    "COB_2",
    "(R(y) (x) L(x) + L(y) (x) R(x) + id (x) L(yx))(r - tau r) = (R(y) (x) R(x) + id (x) R(yx) + id (x) L(xy))(r - tau r)",
    RT,
    [COB2_TEXT],
)
def _cob_2(h):
    c, u, g = h.arr("mul"), _antisym(h), _g(h)
    lhs = E("ibp,ij,ajq->abpq", c, u, c) + E("bip,ij,jaq->abpq", c, u, c) + E("bam,pj,mjq->abpq", c, u, c)
    rhs = E("ibp,ij,jaq->abpq", c, u, c) + E("bam,pj,jmq->abpq", c, u, c) + E("abm,pj,mjq->abpq", c, u, c)
    # the DSL form mentions y first
    return _equations(([lhs.transpose(1, 0, 2, 3), rhs.transpose(1, 0, 2, 3)], [("y", g), ("x", g)], [g, g]))


@_register("COB_3", "(L(x) (x) L(y))(r - tau r) = 0", RT, [COB3_TEXT])
def _cob_3(h):
    c, u, g = h.arr("mul"), _antisym(h), _g(h)
    lhs = E("aip,ij,bjq->abpq", c, u, c)
    return _equations(([lhs, _zero_like(lhs)], [("x", g), ("y", g)], [g, g]))


@_register(
    "COB_4",
    "(R(y) (x) L(x) + L(y) (x) R(x) + id (x) L(yx))(r - tau r) = (R(y) (x) R(x) + L(y) (x) L(x) + id (x) L(xy))(r - tau r)",
    RT,
    [COB4_TEXT],
)
def _cob_4(h):
    c, u, g = h.arr("mul"), _antisym(h), _g(h)
    lhs = E("ibp,ij,ajq->abpq", c, u, c) + E("bip,ij,jaq->abpq", c, u, c) + E("bam,pj,mjq->abpq", c, u, c)
    rhs = E("ibp,ij,jaq->abpq", c, u, c) + E("bip,ij,ajq->abpq", c, u, c) + E("abm,pj,mjq->abpq", c, u, c)
    return _equations(([lhs.transpose(1, 0, 2, 3), rhs.transpose(1, 0, 2, 3)], [("y", g), ("x", g)], [g, g]))


def _third_leg_lr(c, X):
    """(id (x) id (x) (L(x) - R(x))) X, indexed [x, p, q, s]."""
    return E("pqt,ats->apqs", X, c) - E("pqt,tas->apqs", X, c)


@_register("COB_5", "(id (x) id (x) (L(x) - R(x)))P(r) = (L(x) (x) id (x) id)J(r)", RT, [COB5_TEXT])
def _cob_5(h):
    c, g = h.arr("mul"), _g(h)
    P, J = _triple(h, P_TERMS), _triple(h, J_TERMS)
    lhs = _third_leg_lr(c, P)
    rhs = E("tqs,atp->apqs", J, c)
    return _equations(([lhs, rhs], [("x", g)], [g, g, g]))


@_register(
    "COB_6", "(id (x) id (x) (L(x) - R(x)))Q(r) = (L(x) (x) id (x) id)T(r) + M(r)", RT, [COB6_TEXT]
)
def _cob_6(h):
    c, g = h.arr("mul"), _g(h)
    Q, T = _triple(h, Q_TERMS), _triple(h, T_TERMS)
    lhs = _third_leg_lr(c, Q)
    M = E("pts,atq->apqs", _triple(h, [(1, "32.12"), (-1, "23.12")]), c) + E(
        "pts,taq->apqs", _triple(h, [(1, "12.23"), (-1, "12.32")]), c
    )
    rhs = E("tqs,atp->apqs", T, c) + M
    return _equations(([lhs, rhs], [("x", g)], [g, g, g]))


@_register("PYBE", "P(r) = r13 r12 - r13 r23 + r23 r12 - r12 r23 = 0", RT, [PYBE_TEXT])
def _pybe(h):
    P = _triple(h, P_TERMS)
    g = _g(h)
    return _equations(([P, _zero_like(P)], [], [g, g, g]))


RSN = {"r": ("tensor", "r"), "N": NMAP, "S": SMAP}


@_register("RS_COMPAT", "(S (x) id - id (x) N)(r) = 0", RSN, ["S(r^1) ox r^2 == r^1 ox N(r^2)"])
def _rs_compat(h):
    r, N, S = h.arr("r"), h.arr("N"), h.arr("S")
    g = h["r"].spaces[0]
    return _equations(([S.dot(r), r.dot(N.T)], [], [g, g]))


# ------------------------------------------------------------------ Nijenhuis coboundary conditions

NH_ROLES = {"mul": ALG, "r": ("tensor", "r"), "N": NMAP, "S": SMAP}

NH1_TEXT = (
    "S(r^1) ox S(x*r^2) - r^1 ox S(x*N(r^2)) - S(r^1) ox S(r^2*x) + r^1 ox S(N(r^2)*x)"
    " - S(r^1) ox S(x)*r^2 + r^1 ox S(x)*N(r^2) + S(r^1) ox r^2*S(x) - r^1 ox N(r^2)*S(x)"
    " + S(x)*N(r^1) ox r^2 - S(x)*r^1 ox S(r^2) - S(x*N(r^1)) ox r^2 + S(x*r^1) ox S(r^2) == 0"
)
NH2_TEXT = (
    "r^1 ox N(x)*S(r^2) - N(r^1) ox N(x)*r^2 + N(x)*r^1 ox S(r^2) - N(x)*N(r^1) ox r^2"
    " + r^1 ox S(x*S(r^2)) - N(r^1) ox S(x*r^2) - r^1 ox S(S(r^2)*x) + N(r^1) ox S(r^2*x)"
    " - r^1 ox S(r^2)*N(x) + N(r^1) ox r^2*N(x) - N(x*r^1) ox S(r^2) + N(x*N(r^1)) ox r^2"
    " + r^1 ox S(S(r^2))*x - N(N(r^1)) ox r^2*x - r^1 ox x*S(S(r^2)) + N(N(r^1)) ox x*r^2 == 0"
)
NH3_TEXT = (
    "S(r^1) ox N(x)*r^2 - r^1 ox N(x)*N(r^2) + N(x)*S(r^1) ox r^2 - N(x)*r^1 ox N(r^2)"
    " + S(x*S(r^1)) ox r^2 - S(x*r^1) ox N(r^2) - S(r^1) ox r^2*N(x) + r^1 ox N(r^2)*N(x)"
    " - S(r^1) ox N(x*r^2) + r^1 ox N(x*N(r^2)) + S(r^1) ox N(r^2*x) - r^1 ox N(N(r^2)*x)"
    " + x*r^1 ox N(N(r^2)) - x*S(S(r^1)) ox r^2 == 0"
)


def _lr_mats(c, v):
    """Left and right multiplication matrices of the vectors in the rows of v.

    Returns arrays indexed [a, out, in].
    """
    return E("ap,pmk->akm", v, c), E("ap,mpk->akm", v, c)


def _nh_common(h):
    c, r, N, S = h.arr("mul"), h.arr("r"), h.arr("N"), h.arr("S")
    n = c.shape[0]
    eye = np.eye(n, dtype=object) * 1
    La, Ra = _lr_mats(c, eye)
    return c, r, N, S, La, Ra


def _left(A, X):
    """(A_a (x) id) X for a family of matrices A[a]: result [a, p, q]."""
    return E("apt,tq->apq", A, X)


def _right(X, A):
    """(id (x) A_a) X: result [a, p, q]."""
    return E("pt,aqt->apq", X, A)


def _compose(M, A):
    """M after A[a] for each a."""
    return E("km,amj->akj", M, A)


@_register(
    "NH_1",
    "(id (x) (S L(x) - S R(x) - L(S x) + R(S x)))(S (x) id - id (x) N)(r)"
    " + ((L(S x) - S L(x)) (x) id)(N (x) id - id (x) S)(r) = 0",
    NH_ROLES,
    [NH1_TEXT],
)
def _nh_1(h):
    c, r, N, S, La, Ra = _nh_common(h)
    g = h["mul"].out
    LS, RS = _lr_mats(c, S.T)
    u = S.dot(r) - r.dot(N.T)
    w = N.dot(r) - r.dot(S.T)
    lhs = _right(u, _compose(S, La) - _compose(S, Ra) - LS + RS) + _left(LS - _compose(S, La), w)
    return _equations(([lhs, _zero_like(lhs)], [("x", g)], [g, g]))


@_register(
    "NH_2",
    "(id (x) L(Nx) + L(Nx) (x) id + id (x) S L(x) - id (x) S R(x) - id (x) R(Nx) - N L(x) (x) id)"
    "(id (x) S - N (x) id)(r) + (id (x) (R(x) - L(x)))(id (x) S^2 - N^2 (x) id)(r) = 0",
    NH_ROLES,
    [NH2_TEXT],
)
def _nh_2(h):
    c, r, N, S, La, Ra = _nh_common(h)
    g = h["mul"].out
    LN, RN = _lr_mats(c, N.T)
    v = r.dot(S.T) - N.dot(r)
    q = r.dot(S.dot(S).T) - N.dot(N).dot(r)
    lhs = (
        _right(v, LN + _compose(S, La) - _compose(S, Ra) - RN)
        + _left(LN - _compose(N, La), v)
        + _right(q, Ra - La)
    )
    return _equations(([lhs, _zero_like(lhs)], [("x", g)], [g, g]))


@_register(
    "NH_3",
    "(id (x) L(Nx) + L(Nx) (x) id + S L(x) (x) id - id (x) R(Nx) - id (x) N L(x) + id (x) N R(x))"
    "(S (x) id - id (x) N)(r) + (L(x) (x) id)(id (x) N^2 - S^2 (x) id)(r) = 0",
    NH_ROLES,
    [NH3_TEXT],
)
def _nh_3(h):
    c, r, N, S, La, Ra = _nh_common(h)
    g = h["mul"].out
    LN, RN = _lr_mats(c, N.T)
    u = S.dot(r) - r.dot(N.T)
    p = r.dot(N.dot(N).T) - S.dot(S).dot(r)
    lhs = (
        _right(u, LN - RN - _compose(N, La) + _compose(N, Ra))
        + _left(LN + _compose(S, La), u)
        + _left(La, p)
    )
    return _equations(([lhs, _zero_like(lhs)], [("x", g)], [g, g]))


# ------------------------------------------------------------------ implications on r


def _tensor_defect(h, lhs, rhs, label_prefix=""):
    g = h["r"].spaces[0]
    return _chain([lhs, rhs], [], [g, g], label_prefix)


def _lpq_parts(h):
    r, N, S = h.arr("r"), h.arr("N"), h.arr("S")
    S2, N2 = S.dot(S), N.dot(N)
    rules = h.rules
    return {
        "sn": build_report("S(x)id = id(x)N on r", _tensor_defect(h, S.dot(r), r.dot(N.T)), rules),
        "ns": build_report("N(x)id = id(x)S on r", _tensor_defect(h, N.dot(r), r.dot(S.T)), rules),
        "sq1": build_report("id(x)N^2 = S^2(x)id on r", _tensor_defect(h, r.dot(N2.T), S2.dot(r)), rules),
        "sq2": build_report("N^2(x)id = id(x)S^2 on r", _tensor_defect(h, N2.dot(r), r.dot(S2.T)), rules),
        "sym": build_report("r symmetric", _tensor_defect(h, r, r.T), rules),
    }


LPQ_DSL = {
    "sn": "S(r^1) ox r^2 == r^1 ox N(r^2)",
    "ns": "N(r^1) ox r^2 == r^1 ox S(r^2)",
    "sq1": "r^1 ox N(N(r^2)) == S(S(r^1)) ox r^2",
    "sq2": "N(N(r^1)) ox r^2 == r^1 ox S(S(r^2))",
    "sym": "r^1 ox r^2 == r^2 ox r^1",
}
LPQ_NAMES = {
    "sn": "S(x)id = id(x)N on r",
    "ns": "N(x)id = id(x)S on r",
    "sq1": "id(x)N^2 = S^2(x)id on r",
    "sq2": "N^2(x)id = id(x)S^2 on r",
    "sym": "r symmetric",
}


def _lpq_combine(id, parts):
    if id == "LPQ_1":
        return implication_report(id, parts["sn"], parts["sq1"])
    if id == "LPQ_2":
        return implication_report(id, parts["ns"], parts["sq2"])
    forward = implication_report(
        "LPQ_3 forward", combine("r symmetric and S(x)id = id(x)N", [parts["sym"], parts["sn"]]), parts["ns"]
    )
    backward = implication_report(
        "LPQ_3 backward", combine("r symmetric and N(x)id = id(x)S", [parts["sym"], parts["ns"]]), parts["sn"]
    )
    return combine(id, [forward, backward])


for _id, _formula in (
    ("LPQ_1", "(S (x) id - id (x) N)(r) = 0 implies (id (x) N^2 - S^2 (x) id)(r) = 0"),
    ("LPQ_2", "(N (x) id - id (x) S)(r) = 0 implies (N^2 (x) id - id (x) S^2)(r) = 0"),
    ("LPQ_3", "for symmetric r, (S (x) id - id (x) N)(r) = 0 iff (N (x) id - id (x) S)(r) = 0"),
):
    REGISTRY[_id] = IdentitySpec(
        _id,
        _formula,
        dict(RSN),
        (lambda i: (lambda h: _lpq_combine(i, _lpq_parts(h))))(_id),
        [],
        "implication",
    )


# ------------------------------------------------------------------ O-operators and r-sharp


OOP_TEXT = "T(x)*T(y) == T(la(T(x), y) + ra(x, T(y)))"


@_register(
    "OOP",
    "T(x)T(y) = T(l(T(x))y + x r(T(y)))",
    {"mul": ALG, "T": ("map", "T"), "la": ("algebra", "la"), "ra": ("algebra", "ra")},
    [OOP_TEXT],
)
def _oop(h):
    c, T, la, ra = h.arr("mul"), h.arr("T"), h.arr("la"), h.arr("ra")
    V, g = h["T"].domain, h["mul"].out
    lhs = E("ia,jb,ijk->abk", T, T, c)
    rhs = E("ia,ibw,kw->abk", T, la, T) + E("jb,ajw,kw->abk", T, ra, T)
    return _equations(([lhs, rhs], [("x", V), ("y", V)], [g]))


@_register(
    "OOP_TW",
    "N T = T alpha",
    {"N": NMAP, "T": ("map", "T"), "alpha": ("map", "alpha")},
    ["N(T(x)) == T(alpha(x))"],
)
def _oop_tw(h):
    N, T, A = h.arr("N"), h.arr("T"), h.arr("alpha")
    V, g = h["T"].domain, h["T"].codomain
    return _equations(([N.dot(T).T, T.dot(A).T], [("x", V)], [g]))


def _prepare_sharp(bundle, binding):
    """Adds r-sharp, the dual adjoint actions on g* and S* as slots."""
    from ..algebra import BilinearOp

    out = bundle.copy()
    mul = bundle.get(binding["mul"], "algebra")
    r = bundle.get(binding["r"], "tensor")
    g = mul.out
    gd = g.dual()
    out.add("_T", LinearMap(gd, g, r.array.T.copy()))
    c = mul.constants
    # (R* - L*)(x) u* and u* R*(x) on the dual basis, by pairing
    n = g.dim
    dl = np.empty((n, n, n), dtype=object)
    dr = np.empty((n, n, n), dtype=object)
    for i in range(n):
        for u in range(n):
            for w in range(n):
                dl[i, u, w] = c[w, i, u] - c[i, w, u]
                dr[u, i, w] = c[w, i, u]
    out.add("_la", BilinearOp(g, gd, gd, dl))
    out.add("_ra", BilinearOp(gd, g, gd, dr))
    new = dict(binding)
    new.update({"T": "_T", "la": "_la", "ra": "_ra"})
    if "S" in binding:
        S = bundle.get(binding["S"], "map")
        out.add("_Sd", S.transpose())
        new["Sd"] = "_Sd"
    return out, new


@_register(
    "THX_OP",
    "r#(x*) r#(y*) = r#(y* R*(r#(x*)) - L*(r#(x*)) y* + x* R*(r#(y*)))",
    {"mul": ALG, "r": ("tensor", "r")},
    [OOP_TEXT],
    prepare=_prepare_sharp,
)
def _thx_op(h):
    c, r = h.arr("mul"), h.arr("r")
    g = h["mul"].out
    gd = g.dual()
    lhs = E("ai,bj,ijk->abk", r, r, c)
    rhs = E("ai,vib,vk->abk", r, c, r) - E("ai,ivb,vk->abk", r, c, r) + E("bi,via,vk->abk", r, c, r)
    return _equations(([lhs, rhs], [("x", gd), ("y", gd)], [g]))


@_register(
    "THX_TWIST",
    "N r# = r# S*",
    {"mul": ALG, "r": ("tensor", "r"), "N": NMAP, "S": SMAP},
    ["N(T(x)) == T(Sd(x))"],
    prepare=_prepare_sharp,
)
def _thx_twist(h):
    r, N, S = h.arr("r"), h.arr("N"), h.arr("S")
    g = h["r"].spaces[1]
    gd = h["r"].spaces[0].dual()
    return _equations(([N.dot(r.T).T, r.T.dot(S.T).T], [("x", gd)], [g]))


FV_ROLES = {
    "S": SMAP,
    "alpha": ("map", "alpha"),
    "beta": ("map", "beta"),
    "la": ("algebra", "la"),
    "ra": ("algebra", "ra"),
}


@_register(
    "FV_A",
    "b(l(x)a(u)) + l(S^2(x))u = l(S(x))a(u) + b(l(S(x))u)",
    {k: FV_ROLES[k] for k in ("S", "alpha", "beta", "la")},
    ["beta(la(x, alpha(u))) + la(S(S(x)), u) == la(S(x), alpha(u)) + beta(la(S(x), u))"],
)
def _fv_a(h):
    S, A, B, la = h.arr("S"), h.arr("alpha"), h.arr("beta"), h.arr("la")
    g, V = h["la"].left, h["la"].out
    S2 = S.dot(S)
    lhs = E("qv,aqm,wm->avw", A, la, B) + E("pa,pvw->avw", S2, la)
    rhs = E("pa,qv,pqw->avw", S, A, la) + E("pa,pvm,wm->avw", S, la, B)
    return _equations(([lhs, rhs], [("x", g), ("u", V)], [V]))


@_register(
    "FV_B",
    "b(a(u)r(x)) + u r(S^2(x)) = a(u)r(S(x)) + b(u r(S(x)))",
    {k: FV_ROLES[k] for k in ("S", "alpha", "beta", "ra")},
    ["beta(ra(alpha(u), x)) + ra(u, S(S(x))) == ra(alpha(u), S(x)) + beta(ra(u, S(x)))"],
)
def _fv_b(h):
    S, A, B, ra = h.arr("S"), h.arr("alpha"), h.arr("beta"), h.arr("ra")
    g, V = h["ra"].right, h["ra"].out
    S2 = S.dot(S)
    lhs = E("qv,qam,wm->vaw", A, ra, B) + E("pa,vpw->vaw", S2, ra)
    rhs = E("qv,pa,qpw->vaw", A, S, ra) + E("pa,vpm,wm->vaw", S, ra, B)
    return _equations(([lhs, rhs], [("u", V), ("x", g)], [V]))


# ------------------------------------------------------------------ quasitriangular and symplectic


@_register(
    "QT1",
    "(Delta_r (x) id)(r) = r1 (x) rb1 (x) r2 rb2",
    {"mul": ALG, "cop": COP, "r": ("tensor", "r")},
    ["cop1(r^1) ox cop2(r^1) ox r^2 == r^1 ox rb^1 ox r^2*rb^2"],
)
def _qt1(h):
    c, d, r = h.arr("mul"), h.arr("cop"), h.arr("r")
    g = h["mul"].out
    return _equations(([E("ij,imn->mnj", r, d), E("ij,kl,jlm->ikm", r, r, c)], [], [g, g, g]))


@_register(
    "QT2",
    "(id (x) Delta_r)(r) = r1 rb1 (x) r2 (x) rb2",
    {"mul": ALG, "cop": COP, "r": ("tensor", "r")},
    ["r^1 ox cop1(r^2) ox cop2(r^2) == r^1*rb^1 ox r^2 ox rb^2"],
)
def _qt2(h):
    c, d, r = h.arr("mul"), h.arr("cop"), h.arr("r")
    g = h["mul"].out
    return _equations(([E("ij,jmn->imn", r, d), E("ij,kl,ikm->mjl", r, r, c)], [], [g, g, g]))


WFORM = ("form", "w")


@_register(
    "COYBE",
    "w(x1, z)w(x2, y) - w(x, z1)w(y, z2) + w(y1, z)w(x, y2) - w(x, y1)w(y2, z) = 0",
    {"cop": COP, "w": WFORM},
    [
        "w(cop1(x), z)*w(cop2(x), y) - w(x, cop1(z))*w(y, cop2(z))"
        " + w(cop1(y), z)*w(x, cop2(y)) - w(x, cop1(y))*w(cop2(y), z) == 0"
    ],
)
def _coybe(h):
    d, w = h.arr("cop"), h.arr("w")
    g = h["cop"].space
    lhs = (
        E("amn,me,nb->aeb", d, w, w)
        - E("emn,am,bn->aeb", d, w, w)
        + E("bmn,me,an->aeb", d, w, w)
        - E("bmn,am,ne->aeb", d, w, w)
    )
    return _equations(([lhs, _zero_like(lhs)], [("x", g), ("z", g), ("y", g)], []))


@_register(
    "OMEGA_PROD",
    "x.y = x1 w(x2, y) + y1 w(x, y2) - y2 w(x, y1)",
    {"mulw": ("algebra", "mul"), "cop": COP, "w": WFORM},
    ["mulw(x, y) == cop1(x)*w(cop2(x), y) + cop1(y)*w(x, cop2(y)) - cop2(y)*w(x, cop1(y))"],
)
def _omega_prod(h):
    cw, d, w = h.arr("mulw"), h.arr("cop"), h.arr("w")
    g = h["cop"].space
    rhs = E("akm,mb->abk", d, w) + E("bkm,am->abk", d, w) - E("bmk,am->abk", d, w)
    return _equations(([cw, rhs], [("x", g), ("y", g)], [g]))


@_register(
    "DQT1",
    "w(x.y, z) = w(x, z1)w(y, z2)",
    {"mul": ALG, "cop": COP, "w": WFORM},
    ["w(x*y, z) == w(x, cop1(z))*w(y, cop2(z))"],
)
def _dqt1(h):
    c, d, w = h.arr("mul"), h.arr("cop"), h.arr("w")
    g = h["cop"].space
    return _equations(
        ([E("abm,mc->abc", c, w), E("cmn,am,bn->abc", d, w, w)], [("x", g), ("y", g), ("z", g)], [])
    )


@_register(
    "DQT2",
    "w(x, y.z) = w(x1, y)w(x2, z)",
    {"mul": ALG, "cop": COP, "w": WFORM},
    ["w(x, y*z) == w(cop1(x), y)*w(cop2(x), z)"],
)
def _dqt2(h):
    c, d, w = h.arr("mul"), h.arr("cop"), h.arr("w")
    g = h["cop"].space
    return _equations(
        ([E("bcm,am->abc", c, w), E("amn,mb,nc->abc", d, w, w)], [("x", g), ("y", g), ("z", g)], [])
    )


@_register(
    "SYMP",
    "w(xy, z) + w(xz, y) = w(zx, y) + w(zy, x)",
    {"mul": ALG, "w": WFORM},
    ["w(x*y, z) + w(x*z, y) == w(z*x, y) + w(z*y, x)"],
)
def _symp(h):
    c, w = h.arr("mul"), h.arr("w")
    g = h["mul"].out
    lhs = E("abm,mc->abc", c, w) + E("acm,mb->abc", c, w)
    rhs = E("cam,mb->abc", c, w) + E("cbm,ma->abc", c, w)
    return _equations(([lhs, rhs], [("x", g), ("y", g), ("z", g)], []))


@_register(
    "COSYMP",
    "r1(1) (x) r1(2) (x) r2 + r1(1) (x) r2 (x) r1(2) - r1(2) (x) r2 (x) r1(1) - r2 (x) r1(2) (x) r1(1) = 0",
    {"cop": COP, "r": ("tensor", "r")},
    [
        "cop1(r^1) ox cop2(r^1) ox r^2 + cop1(r^1) ox r^2 ox cop2(r^1)"
        " - cop2(r^1) ox r^2 ox cop1(r^1) - r^2 ox cop2(r^1) ox cop1(r^1) == 0"
    ],
)
def _cosymp(h):
    d, r = h.arr("cop"), h.arr("r")
    g = h["cop"].space
    lhs = (
        E("ij,imn->mnj", r, d)
        + E("ij,imn->mjn", r, d)
        - E("ij,imn->njm", r, d)
        - E("ij,imn->jnm", r, d)
    )
    return _equations(([lhs, _zero_like(lhs)], [], [g, g, g]))


@_register(
    "CQT_SYM",
    "w(r2, y)w(zx, r1) - w(r2, y)w(xz, r1) - w(r1, z)w(xy, r2) + w(x, r1)w(zy, r2) = 0",
    {"mul": ALG, "w": WFORM, "r": ("tensor", "r")},
    [
        "w(r^2, y)*w(z*x, r^1) - w(r^2, y)*w(x*z, r^1) - w(r^1, z)*w(x*y, r^2) + w(x, r^1)*w(z*y, r^2) == 0"
    ],
)
def _cqt_sym(h):
    c, w, r = h.arr("mul"), h.arr("w"), h.arr("r")
    g = h["mul"].out
    lhs = (
        E("ij,jb,eam,mi->bea", r, w, c, w)
        - E("ij,jb,aem,mi->bea", r, w, c, w)
        - E("ij,ie,abm,mj->bea", r, w, c, w)
        + E("ij,ai,ebm,mj->bea", r, w, c, w)
    )
    return _equations(([lhs, _zero_like(lhs)], [("y", g), ("z", g), ("x", g)], []))


# ------------------------------------------------------------------ entry points


def identity_ids():
    return list(REGISTRY)


def get_spec(identity):
    try:
        return REGISTRY[identity]
    except KeyError:
        raise UsageError(f"unknown identity {identity!r}") from None


def check_builtin(identity, bundle, binding=None):
    """Hand-coded route."""
    spec = get_spec(identity)
    h = HandContext(spec, bundle, binding)
    out = spec.hand(h)
    if isinstance(out, list):
        return build_report(spec.id, out, bundle.rules)
    return out


def check_dsl(identity, bundle, binding=None):
    """DSL route for the same identity; the oracle for ``check_builtin``."""
    spec = get_spec(identity)
    h = HandContext(spec, bundle, binding)
    b, binding = bundle, h.dsl_binding()
    if spec.prepare is not None:
        b, binding = spec.prepare(bundle, binding)
    if spec.kind == "implication":
        parts = {
            key: evaluate([text], b, binding, identity=LPQ_NAMES[key]) for key, text in LPQ_DSL.items()
        }
        return _lpq_combine(spec.id, parts)
    if not spec.dsl:
        raise UsageError(f"{identity} has no DSL source")
    return evaluate(spec.dsl, b, binding, identity=spec.id)


def parsed_sources(identity):
    spec = get_spec(identity)
    return [dsl.parse(t) for t in spec.dsl]


def reports_agree(a, b):
    """Same verdict, same constraint set, same witness locations and values."""
    if a.verdict != b.verdict or a.constraint_set() != b.constraint_set():
        return False
    if a.parts or b.parts:
        return len(a.parts) == len(b.parts) and all(reports_agree(x, y) for x, y in zip(a.parts, b.parts))
    wa = sorted(str(w) for w in a.witnesses)
    wb = sorted(str(w) for w in b.witnesses)
    return wa == wb
