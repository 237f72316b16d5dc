"""Co-perm YBE, the product induced by a form, (co)symplectic checks and the N, S constructions."""

import numpy as np

from .algebra import PermAlgebra, dualize_algebra, dualize_coalgebra
from .checks import run, run_all
from .errors import HypothesisFailure, NotSymmetric, NotSymmetricForm
from .reports import combine
from .tensors import BilinearForm, LinearMap, Tensor
from .ybe import coboundary_delta

E = np.einsum


def _require_symmetric_form(w, rules=()):
    if not w.is_symmetric(rules):
        raise NotSymmetricForm("w must satisfy w(x, y) = w(y, x)")


def _require_symmetric_tensor(r, rules=()):
    if not r.is_symmetric(rules):
        raise NotSymmetric("r must be symmetric")


def omega_product(C, w, rules=()):
    """x.y = x1 w(x2, y) + y1 w(x, y2) - y2 w(x, y1) as a PermAlgebra (unverified)."""
    _require_symmetric_form(w, rules)
    d, m = C.constants, w.matrix
    c = E("akm,mb->abk", d, m) + E("bkm,am->abk", d, m) - E("bmk,am->abk", d, m)
    return PermAlgebra(C.space, c)


def check_co_ybe(C, w, rules=()):
    return run("COYBE", {"cop": C, "w": w}, rules)


def check_quasitriangular(A, r, rules=()):
    """Symmetric r solving PYBE in a perm algebra."""
    _require_symmetric_tensor(r, rules)
    slots = {"mul": A, "r": r}
    return run_all("quasitriangular perm bialgebra", [("PERM", slots, None), ("PYBE", slots, None)], rules)


def quasitriangular_forms(A, r, rules=()):
    """QT1 and QT2 for Delta_r, each equivalent to PYBE for symmetric r."""
    _require_symmetric_tensor(r, rules)
    slots = {"mul": A, "cop": coboundary_delta(A, r), "r": r}
    return {i: run(i, slots, rules) for i in ("QT1", "QT2")}


def check_dual_quasitriangular(C, w, rules=()):
    """Symmetric w solving the co-perm YBE in a perm coalgebra."""
    _require_symmetric_form(w, rules)
    slots = {"cop": C, "w": w}
    return run_all(
        "dual quasitriangular perm bialgebra", [("COPERM", slots, None), ("COYBE", slots, None)], rules
    )


def dual_quasitriangular_forms(C, w, rules=()):
    """DQT1 and DQT2 against the induced product, each equivalent to co-YBE."""
    slots = {"mul": omega_product(C, w, rules), "cop": C, "w": w}
    return {i: run(i, slots, rules) for i in ("DQT1", "DQT2")}


def check_symplectic(A, w, rules=()):
    _require_symmetric_form(w, rules)
    return run("SYMP", {"mul": A, "w": w}, rules)


def check_cosymplectic(C, r, rules=()):
    _require_symmetric_tensor(r, rules)
    return run("COSYMP", {"cop": C, "r": r}, rules)


def _hypothesis(report, what):
    if not report.holds:
        raise HypothesisFailure(report.identity, report, f"{what} does not hold ({report.verdict})")


def form_tensor_map(w, r):
    """x -> w(x, r1) r2."""
    sp = w.space
    return LinearMap(sp, sp, w.matrix.dot(r.array).T.copy())


def tensor_form_map(r, w):
    """x -> r1 w(r2, x)."""
    sp = w.space
    return LinearMap(sp, sp, r.array.dot(w.matrix))


def nijenhuis_from_symplectic(A, w, r, rules=()):
    """N(x) = w(x, r1) r2, after checking the three hypotheses.

    HypothesisFailure names the structure that fails: symplectic (A, w),
    quasitriangular (A, r) or dual quasitriangular (Delta_r, w).
    """
    _hypothesis(check_symplectic(A, w, rules), "symplectic perm algebra")
    _hypothesis(check_quasitriangular(A, r, rules), "quasitriangular perm bialgebra")
    _hypothesis(check_dual_quasitriangular(coboundary_delta(A, r), w, rules), "dual quasitriangular perm bialgebra")
    return form_tensor_map(w, r)


def symplectic_diagnostics(A, w, r, rules=()):
    """The intermediate identity of the construction and NIJ of its output."""
    N = form_tensor_map(w, r)
    return combine(
        "Nijenhuis operator from a symplectic form",
        [run("CQT_SYM", {"mul": A, "w": w, "r": r}, rules), run("NIJ", {"mul": A, "N": N}, rules)],
    )


def nijenhuis_from_cosymplectic(C, w, r, rules=()):
    """S(x) = r1 w(r2, x), after checking the three hypotheses.

    HypothesisFailure names the structure that fails: cosymplectic (C, r),
    dual quasitriangular (C, w) or quasitriangular (product from w, r).
    """
    _hypothesis(check_cosymplectic(C, r, rules), "cosymplectic perm coalgebra")
    _hypothesis(check_dual_quasitriangular(C, w, rules), "dual quasitriangular perm bialgebra")
    _hypothesis(check_quasitriangular(omega_product(C, w, rules), r, rules), "quasitriangular perm bialgebra")
    return tensor_form_map(r, w)


def form_as_dual_tensor(w):
    """w read as an element of g* (x) g*."""
    sp = w.space.dual()
    return Tensor((sp, sp), w.matrix.copy())


def tensor_as_dual_form(r):
    """r read as a bilinear form on g*."""
    return BilinearForm(r.spaces[0].dual(), r.array.copy())


def co_ybe_to_pybe(C, w, rules=()):
    """(co-YBE verdict for w on C, PYBE verdict for w* on the dual algebra)."""
    return check_co_ybe(C, w, rules), run("PYBE", {"mul": dualize_coalgebra(C), "r": form_as_dual_tensor(w)}, rules)


def pybe_to_co_ybe(A, r, rules=()):
    """(PYBE verdict for r on A, co-YBE verdict for r* on the dual coalgebra)."""
    return run("PYBE", {"mul": A, "r": r}, rules), check_co_ybe(dualize_algebra(A), tensor_as_dual_form(r), rules)
