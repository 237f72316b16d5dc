"""Random instances over F_p for equivalence sweeps.

Instances are built from a small catalog of 2-dimensional perm algebras by
random changes of basis.  Operators are drawn from exhaustive lists (all
Nijenhuis operators of a catalog algebra, all symmetric PYBE solutions), so
a sweep mixes instances that satisfy a hypothesis by construction with
perturbed ones.  Every verdict in a sweep comes from the library checks;
the integer prefilters here only choose candidates.
"""

import random
from functools import lru_cache
from itertools import product

import numpy as np

from .algebra import BilinearOp, PermAlgebra, dualize_algebra, dualize_coalgebra
from .bialgebra import PermBialgebra, extract_matched_pair, triangle
from .checks import run
from .classify import enumerate_symmetric_solutions
from .reps import MatchedPair, NijRepresentation, Representation, dual_of, matched_pair_sum, semidirect_product
from .scalars import FpElement, GF
from .symplectic import quasitriangular_forms, dual_quasitriangular_forms, tensor_as_dual_form
from .tensors import LinearMap, Space, Tensor, mat_inverse
from .ybe import check_ooperator, check_s_admissible_ybe, coboundary_delta, lift_ooperator, r_sharp, sharp_report

E = np.einsum


def _table(entries, n=2):
    c = np.zeros((n, n, n), dtype=np.int64)
    for (i, j), out in entries.items():
        for k, v in out.items():
            c[i, j, k] = v
    return c


# integer structure constants c[i, j, k] of perm algebras on a 2-dimensional space
CATALOG = {
    "a": _table({(0, 0): {0: 1}, (1, 0): {1: 1}}),
    "c": _table({(0, 1): {0: 1}, (1, 1): {1: 1}}),
    "idempotents": _table({(0, 0): {0: 1}, (1, 1): {1: 1}}),
    "nilpotent": _table({(0, 0): {1: 1}}),
    "zero": _table({}),
}


def _all_matrices(n, p):
    return np.array(list(product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)


@lru_cache(maxsize=None)
def nijenhuis_matrices(name, p):
    """All Nijenhuis operators (integer matrices, [out, in]) of a catalog algebra over F_p."""
    c = CATALOG[name]
    Ns = _all_matrices(c.shape[0], p)
    NN = E("Bkm,Bmj->Bkj", Ns, Ns) % p
    lhs = E("Bia,Bjb,ijk->Babk", Ns, Ns, c) + E("abm,Bkm->Babk", c, NN)
    rhs = E("Bia,ibm,Bkm->Babk", Ns, c, Ns) + E("Bjb,ajm,Bkm->Babk", Ns, c, Ns)
    ok = ~((lhs - rhs) % p).reshape(len(Ns), -1).any(axis=1)
    return Ns[ok]


class Sampler:
    """Seeded source of random F_p instances on 2-dimensional spaces."""

    def __init__(self, p, seed=0, space=None):
        self.p = p
        self.field = GF(p)
        self.rng = random.Random(seed)
        self.g = space or Space("g", ["e1", "e2"])
        self.V = Space("V", ["v1", "v2"])

    # scalars and matrices
    def fp(self, arr):
        arr = np.asarray(arr)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(*arr.shape):
            out[idx] = FpElement(int(arr[idx]), self.p)
        return out

    def ints(self, shape):
        return np.array([self.rng.randrange(self.p) for _ in range(int(np.prod(shape)))], dtype=np.int64).reshape(shape)

    def invertible(self, n=2):
        while True:
            P = self.ints((n, n))
            if round(np.linalg.det(P)) % self.p:
                return self.fp(P)

    def nonzero(self):
        return FpElement(self.rng.randrange(1, self.p), self.p)

    def perturb(self, arr):
        """Copy of an object array with one random entry shifted by a nonzero amount."""
        out = arr.copy()
        idx = tuple(self.rng.randrange(s) for s in arr.shape)
        out[idx] = out[idx] + self.nonzero()
        return out

    def map(self, domain, codomain=None):
        codomain = codomain or domain
        return LinearMap(domain, codomain, self.fp(self.ints((codomain.dim, domain.dim))))

    def symmetric(self, space):
        a = self.ints((space.dim, space.dim))
        return Tensor((space, space), self.fp((a + a.T) % self.p))

    # algebras
    def _based(self, space, name=None):
        """(catalog name, P, P^-1, algebra) with the new basis f_a = sum_i P[i, a] e_i."""
        name = name or self.rng.choice(sorted(CATALOG))
        P = self.invertible(space.dim)
        Pinv = mat_inverse(P)
        c = E("ia,jb,ijk,dk->abd", P, P, self.fp(CATALOG[name]), Pinv)
        return name, P, Pinv, PermAlgebra(space, c)

    def perm_algebra(self, space=None):
        return self._based(space or self.g)[3]

    def nijenhuis_pair(self, space=None):
        """A random perm algebra with a random Nijenhuis operator."""
        name, P, Pinv, A = self._based(space or self.g)
        Ns = nijenhuis_matrices(name, self.p)
        N0 = self.fp(Ns[self.rng.randrange(len(Ns))])
        return A, LinearMap(A.space, A.space, Pinv.dot(N0).dot(P))

    def pybe_solutions(self, algebra):
        return enumerate_symmetric_solutions(algebra, self.p)

    def pybe_solution(self, algebra):
        sols = self.pybe_solutions(algebra)
        return sols.tensor(self.rng.choice(sols.solutions), algebra.space)

    # representations
    def representation(self, algebra, V=None):
        """(kind, Q, rep): adjoint, dual adjoint or zero actions moved to V along a random Q."""
        V = V or self.V
        g = algebra.space
        kind = self.rng.choice(["adjoint", "dual", "zero"])
        c = algebra.constants
        if kind == "zero":
            la = ra = np.zeros(c.shape, dtype=object) * FpElement(0, self.p)
        elif kind == "adjoint":
            la, ra = c, c
        else:
            dual = dual_of(Representation(algebra, g, BilinearOp(g, g, g, c), BilinearOp(g, g, g, c)))
            la, ra = dual.left.constants, dual.right.constants
        Q = self.invertible(V.dim)
        return kind, Q, self.move(Representation(algebra, g, BilinearOp(g, g, g, la), BilinearOp(g, g, g, ra)), Q, V)

    @staticmethod
    def move(rep, Q, V):
        """The representation carried to V along the isomorphism Q: rep.space -> V."""
        Qinv = mat_inverse(Q)
        g = rep.algebra.space
        la = E("wm,akm,kv->avw", Q, rep.left.constants, Qinv)
        ra = E("wm,kam,kv->vaw", Q, rep.right.constants, Qinv)
        return Representation(rep.algebra, V, BilinearOp(g, V, V, la), BilinearOp(V, g, V, ra))


# ---------------------------------------------------------------- equivalence instances
#
# Each function draws one instance and returns (left report, right report, constructed),
# where ``constructed`` says whether the instance was built to satisfy the left side.


def lift_instance(s):
    """T an O-operator  <=>  T + tau(T) solves PYBE in the semi-direct product with V*."""
    A = s.perm_algebra()
    g = A.space
    constructed = s.rng.random() < 0.5
    if constructed or s.rng.random() < 0.5:
        # r-sharp of a PYBE solution is an O-operator for (g*, R* - L*, R*)
        c = A.constants
        rep = dual_of(Representation(A, g, BilinearOp(g, g, g, c), BilinearOp(g, g, g, c)))
        Q = s.invertible()
        rep = s.move(rep, Q, s.V)
        T = LinearMap(s.V, g, r_sharp(s.pybe_solution(A)).matrix.dot(mat_inverse(Q)))
    else:
        _, _, rep = s.representation(A)
        T = LinearMap(s.V, g, np.zeros((2, 2), dtype=object) * FpElement(0, s.p))
    if not constructed:
        T = LinearMap(T.domain, T.codomain, s.perturb(T.matrix))
    left = check_ooperator(T, rep)
    prod, r = lift_ooperator(T, rep)
    return left, run("PYBE", {"mul": prod, "r": r}), constructed


def sharp_instance(s):
    """r solves the S-admissible PYBE  <=>  r-sharp satisfies both r-sharp conditions."""
    A, N = s.nijenhuis_pair()
    g = A.space
    constructed = s.rng.random() < 0.5
    r = s.pybe_solution(A) if constructed or s.rng.random() < 0.5 else s.symmetric(g)
    R = r.array
    # S with S R = R N^T, i.e. (S (x) id)(r) = (id (x) N)(r)
    Ri = np.vectorize(lambda v: v.value, otypes=[np.int64])(R)
    target = np.vectorize(lambda v: v.value, otypes=[np.int64])(R.dot(N.matrix.T))
    Ss = _all_matrices(2, s.p)
    candidates = Ss[~((E("Bki,ij->Bkj", Ss, Ri) - target) % s.p).reshape(len(Ss), -1).any(axis=1)]
    if len(candidates) and constructed:
        S = LinearMap(g, g, s.fp(candidates[s.rng.randrange(len(candidates))]))
    elif constructed:
        # no S fits this N; a scalar pair always does and is Nijenhuis
        N = S = LinearMap.identity(g, FpElement(1, s.p)).scale(s.nonzero())
    else:
        S = s.map(g)
    if not constructed and s.rng.random() < 0.5:
        r = Tensor(r.spaces, _sym_perturb(s, r.array))
    return check_s_admissible_ybe(A, N, S, r), sharp_report(A, r, N, S), constructed


def _sym_perturb(s, arr):
    out = arr.copy()
    i, j = s.rng.randrange(2), s.rng.randrange(2)
    d = s.nonzero()
    out[i, j] = out[i, j] + d
    if i != j:
        out[j, i] = out[j, i] + d
    return out


def semidirect_instance(s):
    """(g (+) V, N + alpha) Nijenhuis  <=>  (V, l, r, alpha) a representation of (g, N)."""
    A, N = s.nijenhuis_pair()
    kind, Q, rep = s.representation(A)
    constructed = s.rng.random() < 0.5
    V = rep.space
    lam = FpElement(s.rng.randrange(s.p), s.p)
    alpha = LinearMap.identity(V, FpElement(1, s.p)).scale(lam)
    if kind == "adjoint" and s.rng.random() < 0.5:
        # the adjoint representation carries N itself, moved along Q
        alpha = LinearMap(V, V, Q.dot(N.matrix).dot(mat_inverse(Q)))
    if not constructed:
        alpha = LinearMap(V, V, s.perturb(alpha.matrix))
    prod, op = semidirect_product(A, rep, N, alpha)
    return run("NIJ", {"mul": prod, "N": op}), NijRepresentation(rep, alpha, N).nijenhuis_report(), constructed


def matched_sum_instance(s):
    """The sum product on g (+) h is perm  <=>  the actions form a matched pair."""
    g = s.g
    h_space = g.dual()
    constructed = s.rng.random() < 0.5
    mode = s.rng.choice(["bialgebra", "semidirect", "direct"])
    A = s.perm_algebra(g)
    if mode == "bialgebra":
        mp = None
        for _ in range(20):
            C = coboundary_delta(A, s.pybe_solution(A))
            if run("COPERM", {"cop": C}).holds:
                mp = extract_matched_pair(PermBialgebra(A, C))
                break
            A = s.perm_algebra(g)
        if mp is None:
            mode = "direct"
    if mode != "bialgebra":
        h = s.perm_algebra(h_space) if mode == "direct" else PermAlgebra(h_space, s.fp(np.zeros((2, 2, 2), dtype=np.int64)))
        zero_gh = lambda l, r, o: BilinearOp(l, r, o, s.fp(np.zeros((2, 2, 2), dtype=np.int64)))
        if mode == "semidirect":
            _, _, rep = s.representation(A, h_space)
            lg, rg = rep.left, rep.right
        else:
            lg, rg = zero_gh(g, h_space, h_space), zero_gh(h_space, g, h_space)
        mp = MatchedPair(A, h, lg, rg, zero_gh(h_space, g, g), zero_gh(g, h_space, g))
    if not constructed:
        which = s.rng.choice(["lg", "rg", "lh", "rh"])
        op = getattr(mp, which)
        setattr(mp, which, BilinearOp(op.left, op.right, op.out, s.perturb(op.constants)))
    prod, _ = matched_pair_sum(mp)
    return run("PERM", {"mul": prod}), mp.check(), constructed


def fusion_instances(s):
    """PYBE  <=>  QT1 and PYBE  <=>  QT2 for symmetric r and Delta_r."""
    A = s.perm_algebra()
    constructed = s.rng.random() < 0.5
    r = s.pybe_solution(A)
    if not constructed:
        r = Tensor(r.spaces, _sym_perturb(s, r.array))
    forms = quasitriangular_forms(A, r)
    pybe = run("PYBE", {"mul": A, "r": r})
    return pybe, forms["QT1"], forms["QT2"], constructed


def dual_fusion_instances(s):
    """co-YBE  <=>  DQT1 and co-YBE  <=>  DQT2 for symmetric w and the induced product."""
    B = s.perm_algebra(s.g.dual())
    C = dualize_algebra(B)
    constructed = s.rng.random() < 0.5
    # w solves co-YBE on C exactly when w read on the dual solves PYBE in B
    w = tensor_as_dual_form(s.pybe_solution(B))
    if not constructed:
        w = type(w)(w.space, _sym_perturb(s, w.matrix), "symmetric")
    forms = dual_quasitriangular_forms(C, w)
    coybe = run("COYBE", {"cop": C, "w": w})
    return coybe, forms["DQT1"], forms["DQT2"], constructed


def triangle_candidate(s):
    """(g, N) and a Nijenhuis perm algebra (g*, S*) with random actions between them.

    Both premises hold by construction; the bialgebra compatibility is left
    to chance, with a bias towards coboundary coproducts.
    """
    A, N = s.nijenhuis_pair()
    if s.rng.random() < 0.5:
        h, Nh = s.nijenhuis_pair(A.space.dual())
        C = dualize_algebra(h)
        S = Nh.transpose()
    else:
        C = coboundary_delta(A, s.pybe_solution(A))
        h = dualize_coalgebra(C)
        if not run("PERM", {"mul": h}).holds:
            return triangle_candidate(s)
        S = LinearMap(A.space, A.space, s.fp(np.zeros((2, 2), dtype=np.int64)))
        if s.rng.random() < 0.5:
            S = LinearMap.identity(A.space, FpElement(1, s.p)).scale(s.nonzero())
        if not run("NIJ", {"mul": h, "N": S.transpose()}).holds:
            return triangle_candidate(s)
    return PermBialgebra(A, C, N, S)


def triangle_verdicts(B, rules=()):
    return {k: v.verdict for k, v in triangle(B, rules).items()}
