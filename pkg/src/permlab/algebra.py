"""Algebras, coalgebras and bilinear operations given by structure constants.

``BilinearOp`` is the common carrier: a bilinear map ``left x right -> out``
with constants ``c[i, j, k]`` meaning op(e_i, e_j) = sum_k c[i, j, k] e_k.
Products, left actions (algebra x module -> module) and right actions
(module x algebra -> module) are all BilinearOps.

A coalgebra stores ``d[i, j, k]`` with Delta(e_i) = sum d[i, j, k] e_j (x) e_k.
Whether a structure satisfies its axioms is a separate question answered by
the identity checks; constructing one never verifies anything.
"""

import numpy as np

from .errors import DegenerateForm, SpaceMismatch
from .tensors import (
    BilinearForm,
    LinearMap,
    Tensor,
    as_object_array,
    arrays_equal,
    zeros,
)
from .scalars import is_zero, normal_form


class BilinearOp:
    def __init__(self, left, right, out, constants):
        constants = as_object_array(constants)
        if constants.shape != (left.dim, right.dim, out.dim):
            raise SpaceMismatch(
                f"constants of shape {constants.shape} do not fit {left.dim}x{right.dim}->{out.dim}"
            )
        self.left = left
        self.right = right
        self.out = out
        self.constants = constants

    @classmethod
    def from_table(cls, left, right, out, table):
        """``table`` maps (left label, right label) to ``{out label: scalar}``."""
        c = zeros((left.dim, right.dim, out.dim))
        for (a, b), img in table.items():
            for dst, v in img.items():
                c[left.index(a), right.index(b), out.index(dst)] = v
        return cls(left, right, out, c)

    def __call__(self, x, y):
        x = np.asarray(x, dtype=object)
        y = np.asarray(y, dtype=object)
        if x.shape != (self.left.dim,) or y.shape != (self.right.dim,):
            raise SpaceMismatch("arguments do not live in the operation's spaces")
        return np.einsum("i,j,ijk->k", x, y, self.constants)

    def left_matrix(self, x):
        """Matrix of y -> op(x, y)."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=object), self.constants)

    def right_matrix(self, y):
        """Matrix of x -> op(x, y)."""
        return np.einsum("j,ijk->ki", np.asarray(y, dtype=object), self.constants)

    def table(self, rules=()):
        out = {}
        for i, a in enumerate(self.left.labels):
            for j, b in enumerate(self.right.labels):
                img = {
                    self.out.labels[k]: normal_form(self.constants[i, j, k], rules)
                    for k in range(self.out.dim)
                }
                img = {k: v for k, v in img.items() if not is_zero(v)}
                if img:
                    out[(a, b)] = img
        return out

    def equals(self, other, rules=()):
        return (
            (self.left, self.right, self.out) == (other.left, other.right, other.out)
            and arrays_equal(self.constants, other.constants, rules)
        )

    def __repr__(self):
        return f"{type(self).__name__}({self.table()})"


class PermAlgebra(BilinearOp):
    """A product on a single space (right perm convention)."""

    def __init__(self, space, constants):
        super().__init__(space, space, space, constants)

    @classmethod
    def from_table(cls, space, table):
        op = BilinearOp.from_table(space, space, space, table)
        return cls(space, op.constants)

    @property
    def space(self):
        return self.left

    @property
    def dim(self):
        return self.left.dim

    def left_mult(self, x):
        return LinearMap(self.space, self.space, self.left_matrix(x))

    def right_mult(self, y):
        return LinearMap(self.space, self.space, self.right_matrix(y))


class PermCoalgebra:
    def __init__(self, space, constants):
        constants = as_object_array(constants)
        if constants.shape != (space.dim,) * 3:
            raise SpaceMismatch("coalgebra constants do not fit the space")
        self.space = space
        self.constants = constants

    @classmethod
    def from_table(cls, space, table):
        """``table`` maps a label to ``{(label, label): scalar}``."""
        d = zeros((space.dim,) * 3)
        for src, img in table.items():
            for (a, b), v in img.items():
                d[space.index(src), space.index(a), space.index(b)] = v
        return cls(space, d)

    @property
    def dim(self):
        return self.space.dim

    def __call__(self, x):
        x = np.asarray(x, dtype=object)
        if x.shape != (self.space.dim,):
            raise SpaceMismatch("argument does not live in the coalgebra's space")
        return Tensor((self.space, self.space), np.einsum("i,ijk->jk", x, self.constants))

    def table(self, rules=()):
        out = {}
        for i, a in enumerate(self.space.labels):
            img = Tensor((self.space, self.space), self.constants[i]).terms(rules)
            if img:
                out[a] = img
        return out

    def equals(self, other, rules=()):
        return self.space == other.space and arrays_equal(self.constants, other.constants, rules)

    def __repr__(self):
        return f"PermCoalgebra({self.table()})"


class FrobeniusForm:
    """A bilinear form on an algebra's space together with a nondegeneracy flag.

    The flag is verified: claiming nondegeneracy for a singular form raises
    DegenerateForm.
    """

    def __init__(self, form, nondegenerate=True, rules=()):
        if nondegenerate and not form.is_nondegenerate(rules):
            raise DegenerateForm("form declared nondegenerate has zero determinant")
        self.form = form
        self.nondegenerate = nondegenerate

    @property
    def space(self):
        return self.form.space

    @property
    def matrix(self):
        return self.form.matrix


def multiply(algebra, x, y):
    return algebra(x, y)


def dualize_algebra(algebra):
    """The coalgebra on the dual space with d*[k, i, j] = c[i, j, k]."""
    d = np.transpose(algebra.constants, (2, 0, 1)).copy()
    return PermCoalgebra(algebra.space.dual(), d)


def dualize_coalgebra(coalgebra):
    """The algebra on the dual space with c*[j, k, i] = d[i, j, k]."""
    c = np.transpose(coalgebra.constants, (1, 2, 0)).copy()
    return PermAlgebra(coalgebra.space.dual(), c)


def zero_algebra(space):
    return PermAlgebra(space, zeros((space.dim,) * 3))


def zero_coalgebra(space):
    return PermCoalgebra(space, zeros((space.dim,) * 3))


def form_from_matrix(space, matrix, symmetry="none"):
    return BilinearForm(space, matrix, symmetry)
