"""Named-basis spaces, linear maps, bilinear forms and small tensors.

All arrays are dense numpy arrays of dtype ``object`` holding exact scalars
(Fraction, Poly or FpElement).  Index conventions:

* ``LinearMap.matrix[out, in]``: column j is the image of the j-th basis vector.
* ``BilinearForm.matrix[a, b]`` is B(e_a, e_b).
* ``Tensor.array[i, j(, k)]`` is the coefficient of e_i (x) e_j (x) e_k.
"""

from fractions import Fraction

import numpy as np

from .errors import BadLegIndex, DegenerateForm, DimTooLarge, NotSymmetricForm, SpaceMismatch
from .scalars import Poly, is_zero, normal_form

MAX_DIM = 16


def zeros(shape, zero=Fraction(0)):
    return np.full(shape, zero, dtype=object)


def as_object_array(values):
    arr = np.array(values, dtype=object)
    flat = arr.reshape(-1)
    for i, v in enumerate(flat):
        if isinstance(v, int) and not isinstance(v, bool):
            flat[i] = Fraction(v)
    return arr


def array_is_zero(arr, rules=()):
    return all(is_zero(v, rules) for v in np.asarray(arr, dtype=object).reshape(-1))


def arrays_equal(a, b, rules=()):
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and array_is_zero(a - b, rules)


def normalize_array(arr, rules=()):
    out = np.empty(np.shape(arr), dtype=object)
    flat_in = np.asarray(arr, dtype=object).reshape(-1)
    flat_out = out.reshape(-1)
    for i, v in enumerate(flat_in):
        flat_out[i] = normal_form(v, rules)
    return out


class Space:
    """A finite-dimensional space with named basis vectors.

    ``dual()`` returns the same space tagged dual; its basis labels carry a
    trailing ``*``.  Taking the dual twice gives back the original space.
    """

    __slots__ = ("name", "basis", "is_dual")

    def __init__(self, name, basis, is_dual=False):
        basis = tuple(str(b) for b in basis)
        if not basis:
            raise ValueError("a space needs at least one basis vector")
        if len(set(basis)) != len(basis):
            raise ValueError(f"basis names of {name} are not distinct")
        if len(basis) > MAX_DIM:
            raise DimTooLarge(f"dimension {len(basis)} exceeds {MAX_DIM}")
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "is_dual", bool(is_dual))

    def __setattr__(self, key, value):
        raise AttributeError("Space is immutable")

    @property
    def dim(self):
        return len(self.basis)

    @property
    def labels(self):
        return tuple(b + "*" for b in self.basis) if self.is_dual else self.basis

    def dual(self):
        return Space(self.name, self.basis, not self.is_dual)

    def index(self, label):
        labels = self.labels
        if label in labels:
            return labels.index(label)
        if label in self.basis:
            return self.basis.index(label)
        raise KeyError(f"{label!r} is not a basis vector of {self}")

    def __eq__(self, other):
        return (
            isinstance(other, Space)
            and self.name == other.name
            and self.basis == other.basis
            and self.is_dual == other.is_dual
        )

    def __hash__(self):
        return hash((self.name, self.basis, self.is_dual))

    def __repr__(self):
        return f"Space({self.name}{'*' if self.is_dual else ''}, {list(self.labels)})"


def direct_sum(first, second, name=None):
    """First summand's basis followed by the second's, as a plain space."""
    labels = list(first.labels) + list(second.labels)
    if len(set(labels)) != len(labels):
        a, b = first.name, second.name
        if a == b:
            a, b = a + "1", b + "2"
        labels = [f"{a}.{x}" for x in first.labels] + [f"{b}.{x}" for x in second.labels]
    def tag(sp):
        return sp.name + ("_dual" if sp.is_dual else "")

    return Space(name or f"{tag(first)}_plus_{tag(second)}", labels)


def basis_vector(space, i, one=Fraction(1)):
    v = zeros(space.dim, one * 0)
    v[i] = one
    return v


def vector(space, coords):
    """Build a vector from ``{label: scalar}``."""
    v = zeros(space.dim)
    for label, c in coords.items():
        v[space.index(label)] = c
    return v


# ---------------------------------------------------------------- linear maps


class LinearMap:
    def __init__(self, domain, codomain, matrix):
        matrix = as_object_array(matrix)
        if matrix.shape != (codomain.dim, domain.dim):
            raise SpaceMismatch(
                f"matrix shape {matrix.shape} does not match {codomain.dim}x{domain.dim}"
            )
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix

    @classmethod
    def identity(cls, space, one=Fraction(1)):
        m = zeros((space.dim, space.dim), one * 0)
        for i in range(space.dim):
            m[i, i] = one
        return cls(space, space, m)

    @classmethod
    def zero(cls, domain, codomain=None):
        codomain = codomain or domain
        return cls(domain, codomain, zeros((codomain.dim, domain.dim)))

    @classmethod
    def from_images(cls, domain, codomain, images):
        """``images`` maps a domain label to ``{codomain label: scalar}``."""
        m = zeros((codomain.dim, domain.dim))
        for src, img in images.items():
            j = domain.index(src)
            for dst, c in img.items():
                m[codomain.index(dst), j] = c
        return cls(domain, codomain, m)

    def __call__(self, v):
        v = np.asarray(v, dtype=object)
        if v.shape != (self.domain.dim,):
            raise SpaceMismatch("vector does not live in the map's domain")
        return self.matrix.dot(v)

    def compose(self, other):
        """self after other."""
        if other.codomain != self.domain:
            raise SpaceMismatch(f"cannot compose {self.domain} with {other.codomain}")
        return LinearMap(other.domain, self.codomain, self.matrix.dot(other.matrix))

    def __matmul__(self, other):
        return self.compose(other)

    def _same_shape(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise SpaceMismatch("maps between different spaces")

    def __add__(self, other):
        self._same_shape(other)
        return LinearMap(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other):
        self._same_shape(other)
        return LinearMap(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self):
        return LinearMap(self.domain, self.codomain, -self.matrix)

    def scale(self, c):
        return LinearMap(self.domain, self.codomain, self.matrix * c)

    def power(self, n):
        if self.domain != self.codomain:
            raise SpaceMismatch("power of a non-endomorphism")
        out = LinearMap.identity(self.domain)
        for _ in range(n):
            out = self.compose(out)
        return out

    def transpose(self):
        """The dual map codomain* -> domain*."""
        return LinearMap(self.codomain.dual(), self.domain.dual(), self.matrix.T.copy())

    dual = transpose

    def equals(self, other, rules=()):
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and arrays_equal(self.matrix, other.matrix, rules)
        )

    def normalized(self, rules=()):
        return LinearMap(self.domain, self.codomain, normalize_array(self.matrix, rules))

    def images(self):
        """``{domain label: {codomain label: scalar}}`` for nonzero entries."""
        out = {}
        for j, src in enumerate(self.domain.labels):
            out[src] = {
                dst: self.matrix[i, j]
                for i, dst in enumerate(self.codomain.labels)
                if not is_zero(self.matrix[i, j])
            }
        return out

    def __repr__(self):
        return f"LinearMap({self.domain.name} -> {self.codomain.name}, {self.images()})"


def block_diagonal(first, second, space=None):
    """f (+) g acting on the direct sum of the two domains."""
    dom = space or direct_sum(first.domain, second.domain)
    m = zeros((first.codomain.dim + second.codomain.dim, first.domain.dim + second.domain.dim))
    m[: first.codomain.dim, : first.domain.dim] = first.matrix
    m[first.codomain.dim :, first.domain.dim :] = second.matrix
    if first.domain.dim + second.domain.dim != dom.dim:
        raise SpaceMismatch("block sizes do not match the given space")
    return LinearMap(dom, dom, m)


# ---------------------------------------------------------------- exact linear algebra


def _is_unit(x):
    if isinstance(x, Poly):
        return x.is_constant() and x.constant_value() != 0
    return x != 0


def _invert_scalar(x):
    if isinstance(x, Poly):
        x = x.constant_value()
    return 1 / x if not isinstance(x, Fraction) else Fraction(1) / x


def mat_inverse(m, rules=()):
    """Gauss-Jordan inverse.  Pivots must be invertible scalars.

    Polynomial entries are accepted as long as every pivot met is a nonzero
    constant after normalization.
    """
    m = normalize_array(np.asarray(m, dtype=object), rules)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    ident = zeros((n, n))
    for i in range(n):
        ident[i, i] = Fraction(1)
    aug = np.concatenate([m, ident], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if _is_unit(aug[r, col])), None)
        if pivot is None:
            raise DegenerateForm("matrix is singular or has a non-constant pivot")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        inv = _invert_scalar(aug[col, col])
        aug[col] = aug[col] * inv
        for r in range(n):
            if r != col and not is_zero(aug[r, col]):
                aug[r] = aug[r] - aug[r, col] * aug[col]
        aug = normalize_array(aug, rules)
    return aug[:, n:]


def determinant(m, rules=()):
    """Exact determinant by Laplace expansion memoised on column subsets."""
    m = np.asarray(m, dtype=object)
    n = m.shape[0]
    memo = {}

    def minor(row, cols):
        if row == n:
            return Fraction(1)
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = Fraction(0)
        sign = 1
        for k, c in enumerate(cols):
            if not is_zero(m[row, c]):
                sub = cols[:k] + cols[k + 1 :]
                term = m[row, c] * minor(row + 1, sub)
                total = total + term if sign > 0 else total - term
            sign = -sign
        total = normal_form(total, rules)
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


# ---------------------------------------------------------------- bilinear forms


SYMMETRY_FLAGS = ("none", "symmetric", "skew")


class BilinearForm:
    def __init__(self, space, matrix, symmetry="none"):
        matrix = as_object_array(matrix)
        if matrix.shape != (space.dim, space.dim):
            raise SpaceMismatch("form matrix does not match the space")
        if symmetry not in SYMMETRY_FLAGS:
            raise ValueError(f"symmetry flag must be one of {SYMMETRY_FLAGS}")
        if symmetry == "symmetric" and not array_is_zero(matrix - matrix.T):
            raise NotSymmetricForm("form declared symmetric is not")
        if symmetry == "skew" and not array_is_zero(matrix + matrix.T):
            raise NotSymmetricForm("form declared skew is not")
        self.space = space
        self.matrix = matrix
        self.symmetry = symmetry

    def __call__(self, x, y):
        return np.asarray(x, dtype=object).dot(self.matrix).dot(np.asarray(y, dtype=object))

    def is_nondegenerate(self, rules=()):
        return not is_zero(determinant(self.matrix, rules), rules)

    def is_symmetric(self, rules=()):
        return array_is_zero(self.matrix - self.matrix.T, rules)

    def is_skew(self, rules=()):
        return array_is_zero(self.matrix + self.matrix.T, rules)

    def __repr__(self):
        return f"BilinearForm({self.space.name}, {self.symmetry})"


# ---------------------------------------------------------------- tensors


class Tensor:
    """Rank 1, 2 or 3 tensor over the given component spaces."""

    def __init__(self, spaces, array):
        spaces = tuple(spaces)
        array = as_object_array(array)
        if not 1 <= len(spaces) <= 3:
            raise ValueError("only tensors of rank 1 to 3 are supported")
        if array.shape != tuple(s.dim for s in spaces):
            raise SpaceMismatch(f"array shape {array.shape} does not match the component spaces")
        self.spaces = spaces
        self.array = array

    @property
    def rank(self):
        return len(self.spaces)

    @classmethod
    def from_terms(cls, spaces, terms):
        """``terms`` maps label tuples to scalars."""
        arr = zeros(tuple(s.dim for s in spaces))
        for labels, c in terms.items():
            idx = tuple(s.index(l) for s, l in zip(spaces, labels))
            arr[idx] = arr[idx] + c
        return cls(spaces, arr)

    def terms(self, rules=()):
        out = {}
        for idx in np.ndindex(*self.array.shape):
            v = normal_form(self.array[idx], rules)
            if not is_zero(v):
                out[tuple(s.labels[i] for s, i in zip(self.spaces, idx))] = v
        return out

    def __add__(self, other):
        if self.spaces != other.spaces:
            raise SpaceMismatch("adding tensors over different spaces")
        return Tensor(self.spaces, self.array + other.array)

    def __sub__(self, other):
        if self.spaces != other.spaces:
            raise SpaceMismatch("subtracting tensors over different spaces")
        return Tensor(self.spaces, self.array - other.array)

    def __neg__(self):
        return Tensor(self.spaces, -self.array)

    def scale(self, c):
        return Tensor(self.spaces, self.array * c)

    def is_zero(self, rules=()):
        return array_is_zero(self.array, rules)

    def equals(self, other, rules=()):
        return self.spaces == other.spaces and arrays_equal(self.array, other.array, rules)

    def is_symmetric(self, rules=()):
        if self.rank != 2 or self.spaces[0] != self.spaces[1]:
            return False
        return array_is_zero(self.array - self.array.T, rules)

    def normalized(self, rules=()):
        return Tensor(self.spaces, normalize_array(self.array, rules))

    def __repr__(self):
        names = " (x) ".join(s.name for s in self.spaces)
        return f"Tensor[{names}]({self.terms()})"


def Tensor2(space, array, second=None):
    return Tensor((space, second or space), array)


def Tensor3(space, array):
    return Tensor((space, space, space), array)


def flip(t):
    """Swap the two legs of a rank-2 tensor."""
    if t.rank != 2:
        raise BadLegIndex("flip needs a rank-2 tensor")
    if t.spaces[0] != t.spaces[1]:
        raise SpaceMismatch("flip needs equal component spaces")
    return Tensor(t.spaces, t.array.T.copy())


def swap_legs(t, i, j):
    """Swap legs i and j (1-based) of a tensor whose legs live in one space."""
    for k in (i, j):
        if not 1 <= k <= t.rank:
            raise BadLegIndex(f"leg {k} out of range for rank {t.rank}")
    if t.spaces[i - 1] != t.spaces[j - 1]:
        raise SpaceMismatch("swapped legs must live in the same space")
    spaces = list(t.spaces)
    spaces[i - 1], spaces[j - 1] = spaces[j - 1], spaces[i - 1]
    return Tensor(spaces, np.swapaxes(t.array, i - 1, j - 1).copy())


def leg_apply(f, t, leg):
    """Apply the linear map f to one leg (1-based) of t."""
    if not 1 <= leg <= t.rank:
        raise BadLegIndex(f"leg {leg} out of range for rank {t.rank}")
    if f.domain != t.spaces[leg - 1]:
        raise SpaceMismatch(f"map domain {f.domain} differs from leg space {t.spaces[leg - 1]}")
    arr = np.moveaxis(np.tensordot(f.matrix, t.array, axes=([1], [leg - 1])), 0, leg - 1)
    spaces = list(t.spaces)
    spaces[leg - 1] = f.codomain
    return Tensor(spaces, arr)


# ---------------------------------------------------------------- placements


_SLOT_CODES = {12: (1, 2), 13: (1, 3), 23: (2, 3), 32: (3, 2), 21: (2, 1), 31: (3, 1)}


class Placement:
    """r placed into two slots of the triple tensor space.

    ``slots = (a, b)`` means the first leg of r sits in slot a and the second
    in slot b.  The remaining slot is left free; a placement is only a handle
    until it is multiplied with another placement.
    """

    def __init__(self, r, slots):
        if r.rank != 2 or r.spaces[0] != r.spaces[1]:
            raise SpaceMismatch("placement needs a rank-2 tensor over one space")
        self.r = r
        self.slots = tuple(slots)

    @property
    def space(self):
        return self.r.spaces[0]

    def __repr__(self):
        return f"r{self.slots[0]}{self.slots[1]}"


def place_in_triple(r, slot):
    if isinstance(slot, int):
        if slot not in _SLOT_CODES:
            raise BadLegIndex(f"unknown slot code {slot}")
        slot = _SLOT_CODES[slot]
    slot = tuple(slot)
    if len(slot) != 2 or slot[0] == slot[1] or not set(slot) <= {1, 2, 3}:
        raise BadLegIndex(f"bad slot pair {slot}")
    return Placement(r, slot)


def placement_product(constants, first, second):
    """Product of two placements in the triple tensor space.

    A slot occupied by both placements receives (first's leg)(second's leg)
    under the product with structure constants ``constants[i, j, k]``; a
    slot occupied by only one placement receives that placement's leg.
    """
    c = getattr(constants, "constants", constants)
    if first.space != second.space:
        raise SpaceMismatch("placements over different spaces")
    shared = set(first.slots) & set(second.slots)
    if len(shared) != 1:
        raise BadLegIndex("placements must share exactly one slot")
    (s,) = shared
    # first's legs use indices i (leg 1), j (leg 2); second's use k, l
    first_idx = dict(zip(first.slots, "ij"))
    second_idx = dict(zip(second.slots, "kl"))
    out = []
    for slot in (1, 2, 3):
        if slot == s:
            out.append("m")
        else:
            out.append(first_idx.get(slot) or second_idx.get(slot))
    spec = f"ij,kl,{first_idx[s]}{second_idx[s]}m->{''.join(out)}"
    arr = np.einsum(spec, first.r.array, second.r.array, c)
    sp = first.space
    return Tensor((sp, sp, sp), arr)
