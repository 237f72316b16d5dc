"""Evaluate parsed identities on a StructureBundle.

Every side of an equation is expanded into sum-free terms.  For each term
the evaluator enumerates the implicit summations (coproduct legs and tensor
legs, innermost first) with their structure-constant weights, and for each
assignment of basis vectors to the free variables accumulates the value of
the term.  Differences of the sides become Defects for the report builder.
"""

import itertools
from fractions import Fraction

import numpy as np

from ..errors import SpaceMismatch, UnboundName
from ..reports import Defect, build_report
from ..tensors import zeros
from . import dsl


class _Val:
    __slots__ = ("spaces", "arr")

    def __init__(self, spaces, arr):
        self.spaces = tuple(spaces)
        self.arr = arr if isinstance(arr, np.ndarray) else np.array(arr, dtype=object)

    @property
    def rank(self):
        return len(self.spaces)


def _scalar(v):
    return v.arr[()] if v.rank == 0 else None


class Binder:
    """Resolves DSL names to bundle slots.

    ``binding`` maps a DSL name to a slot name; unbound names resolve to the
    slot of the same name.  A few conventional names fall back to the unique
    structure of their kind: ``mul`` to the only product, ``cop`` to the only
    coalgebra, ``r``/``rb`` to the only tensor, form names to the only form.
    """

    def __init__(self, bundle, binding=None):
        self.bundle = bundle
        self.binding = dict(binding or {})

    def _fallback(self, name, kind):
        pool = self.bundle.slots_of_kind(kind)
        if kind == "algebra":
            pool = {k: v for k, v in pool.items() if v.left == v.right == v.out}
        if len(pool) == 1 and (
            (kind == "algebra" and name == "mul")
            or (kind == "coalgebra" and name == "cop")
            or (kind == "tensor" and name in ("r", "rb"))
            or (kind == "form" and name in dsl.DEFAULT_FORMS)
        ):
            return next(iter(pool.values()))
        return None

    def resolve(self, name, kind):
        slot = self.binding.get(name, name)
        if slot == name and name == "rb" and "rb" not in self.binding and "r" in self.binding:
            slot = self.binding["r"]
        obj = self.bundle.get(slot, kind)
        if obj is None and slot == name:
            if name == "rb" and self.bundle.get("r", kind) is not None:
                obj = self.bundle.get("r", kind)
            else:
                obj = self._fallback(name, kind)
        if obj is None:
            raise UnboundName(f"{kind} {name!r} (slot {slot!r}) is not in the bundle")
        return obj


class Evaluator:
    def __init__(self, bundle, binding=None, var_spaces=None):
        self.bundle = bundle
        self.binder = Binder(bundle, binding)
        self.var_spaces_override = dict(var_spaces or {})
        self.rules = bundle.rules

    # ------------------------------------------------------------ spaces

    def infer_spaces(self, eq):
        found = {}

        def constrain(node, space):
            if isinstance(node, dsl.Var):
                if node.name in found and found[node.name] != space:
                    raise SpaceMismatch(
                        f"variable {node.name} used in {found[node.name]} and in {space}"
                    )
                found[node.name] = space
            elif isinstance(node, dsl.ScalarMul):
                constrain(node.arg, space)
            elif isinstance(node, dsl.Sum):
                for t in node.terms:
                    constrain(t, space)

        for side in eq.sides:
            for n in dsl.walk(side):
                if isinstance(n, dsl.Apply):
                    constrain(n.arg, self.binder.resolve(n.fn, "map").domain)
                elif isinstance(n, dsl.Mul):
                    if n.op is None:
                        if dsl.rank(n.left) == 0 or dsl.rank(n.right) == 0:
                            continue
                        op = self.binder.resolve("mul", "algebra")
                    else:
                        op = self.binder.resolve(n.op, "algebra")
                    constrain(n.left, op.left)
                    constrain(n.right, op.right)
                elif isinstance(n, dsl.Pair):
                    form = self.binder.resolve(n.form, "form")
                    constrain(n.left, form.space)
                    constrain(n.right, form.space)
                elif isinstance(n, dsl.Coprod):
                    constrain(n.arg, self.binder.resolve(n.coalgebra, "coalgebra").space)
        found.update(self.var_spaces_override)
        names = dsl.free_variables(eq)
        missing = [v for v in names if v not in found]
        if missing:
            raise UnboundName(f"cannot infer the space of variable(s) {', '.join(missing)}")
        return [(v, found[v]) for v in names]

    # ------------------------------------------------------------ terms

    def _sources(self, term):
        keys = []

        def visit(n):
            for k in dsl.children(n):
                visit(k)
            if isinstance(n, dsl.TensorLeg):
                key = ("tensor", n.tensor)
            elif isinstance(n, dsl.Coprod):
                key = ("cop", n.coalgebra, n.arg)
            else:
                return
            if key not in keys:
                keys.append(key)

        visit(term)
        return keys

    def _eval(self, node, env, assignment):
        if isinstance(node, dsl.Var):
            space = env[node.name][0]
            arr = zeros(space.dim)
            arr[env[node.name][1]] = Fraction(1)
            return _Val((space,), arr)
        if isinstance(node, dsl.TensorLeg):
            t = self.binder.resolve(node.tensor, "tensor")
            if t.rank != 2:
                raise SpaceMismatch(f"tensor {node.tensor} is not of rank 2")
            idx = assignment[("tensor", node.tensor)][node.leg - 1]
            space = t.spaces[node.leg - 1]
            arr = zeros(space.dim)
            arr[idx] = Fraction(1)
            return _Val((space,), arr)
        if isinstance(node, dsl.Coprod):
            c = self.binder.resolve(node.coalgebra, "coalgebra")
            idx = assignment[("cop", node.coalgebra, node.arg)][node.leg - 1]
            arr = zeros(c.space.dim)
            arr[idx] = Fraction(1)
            return _Val((c.space,), arr)
        if isinstance(node, dsl.Apply):
            f = self.binder.resolve(node.fn, "map")
            v = self._eval(node.arg, env, assignment)
            if v.spaces != (f.domain,):
                raise SpaceMismatch(f"{node.fn} expects {f.domain}, got {v.spaces}")
            return _Val((f.codomain,), f.matrix.dot(v.arr))
        if isinstance(node, dsl.Mul):
            a = self._eval(node.left, env, assignment)
            b = self._eval(node.right, env, assignment)
            if node.op is None and (a.rank == 0 or b.rank == 0):
                if a.rank == 0:
                    return _Val(b.spaces, b.arr * _scalar(a))
                return _Val(a.spaces, a.arr * _scalar(b))
            op = self.binder.resolve(node.op or "mul", "algebra")
            if a.spaces != (op.left,) or b.spaces != (op.right,):
                raise SpaceMismatch(
                    f"{node.op or 'mul'} expects {op.left} x {op.right}, got {a.spaces} x {b.spaces}"
                )
            return _Val((op.out,), np.einsum("i,j,ijk->k", a.arr, b.arr, op.constants))
        if isinstance(node, dsl.Pair):
            form = self.binder.resolve(node.form, "form")
            a = self._eval(node.left, env, assignment)
            b = self._eval(node.right, env, assignment)
            if a.spaces != (form.space,) or b.spaces != (form.space,):
                raise SpaceMismatch(f"form {node.form} lives on {form.space}")
            return _Val((), np.array(a.arr.dot(form.matrix).dot(b.arr), dtype=object))
        if isinstance(node, dsl.ScalarMul):
            v = self._eval(node.arg, env, assignment)
            return _Val(v.spaces, v.arr * node.coef)
        if isinstance(node, dsl.TensorConcat):
            a = self._eval(node.left, env, assignment)
            b = self._eval(node.right, env, assignment)
            return _Val(a.spaces + b.spaces, np.multiply.outer(a.arr, b.arr))
        if isinstance(node, dsl.FlipLegs):
            v = self._eval(node.arg, env, assignment)
            spaces = list(v.spaces)
            i, j = node.i - 1, node.j - 1
            spaces[i], spaces[j] = spaces[j], spaces[i]
            return _Val(spaces, np.swapaxes(v.arr, i, j).copy())
        raise TypeError(f"cannot evaluate {node!r} directly")

    def _term_value(self, term, env):
        sources = self._sources(term)
        total = None

        def recurse(k, weight, assignment):
            nonlocal total
            if k == len(sources):
                v = self._eval(term, env, assignment)
                contrib = _Val(v.spaces, v.arr * weight)
                if total is None:
                    total = contrib
                else:
                    if total.spaces != contrib.spaces:
                        raise SpaceMismatch("term values live in different spaces")
                    total = _Val(total.spaces, total.arr + contrib.arr)
                return
            key = sources[k]
            if key[0] == "tensor":
                t = self.binder.resolve(key[1], "tensor")
                weights = t.array
            else:
                c = self.binder.resolve(key[1], "coalgebra")
                arg = self._eval(key[2], env, assignment)
                if arg.spaces != (c.space,):
                    raise SpaceMismatch(f"coproduct {key[1]} applied outside {c.space}")
                weights = np.einsum("i,ijk->jk", arg.arr, c.constants)
            for j, l in itertools.product(range(weights.shape[0]), range(weights.shape[1])):
                w = weights[j, l]
                if w == 0:
                    continue
                assignment[key] = (j, l)
                recurse(k + 1, weight * w, assignment)
                del assignment[key]

        recurse(0, Fraction(1), {})
        return total

    def _side_value(self, terms, env):
        total = None
        for term in terms:
            if isinstance(term, dsl.Zero) or any(isinstance(n, dsl.Zero) for n in dsl.walk(term)):
                continue
            v = self._term_value(term, env)
            if v is None:
                continue
            if total is None:
                total = _Val(v.spaces, v.arr.copy())
            else:
                if total.spaces != v.spaces:
                    raise SpaceMismatch("terms of one side live in different spaces")
                total = _Val(total.spaces, total.arr + v.arr)
        return total

    def _output_spaces(self, expanded, variables):
        env = {name: (space, 0) for name, space in variables}
        for terms in expanded:
            for term in terms:
                if any(isinstance(n, dsl.Zero) for n in dsl.walk(term)):
                    continue
                return list(self._shape_of(term, env))
        return []

    def _shape_of(self, node, env):
        """Spaces of a sum-free term without enumerating summations."""
        if isinstance(node, dsl.Var):
            return (env[node.name][0],)
        if isinstance(node, dsl.TensorLeg):
            return (self.binder.resolve(node.tensor, "tensor").spaces[node.leg - 1],)
        if isinstance(node, dsl.Coprod):
            return (self.binder.resolve(node.coalgebra, "coalgebra").space,)
        if isinstance(node, dsl.Apply):
            return (self.binder.resolve(node.fn, "map").codomain,)
        if isinstance(node, dsl.Mul):
            a, b = self._shape_of(node.left, env), self._shape_of(node.right, env)
            if node.op is None and (not a or not b):
                return a or b
            return (self.binder.resolve(node.op or "mul", "algebra").out,)
        if isinstance(node, dsl.Pair):
            return ()
        if isinstance(node, dsl.ScalarMul):
            return self._shape_of(node.arg, env)
        if isinstance(node, dsl.TensorConcat):
            return self._shape_of(node.left, env) + self._shape_of(node.right, env)
        if isinstance(node, dsl.FlipLegs):
            s = list(self._shape_of(node.arg, env))
            s[node.i - 1], s[node.j - 1] = s[node.j - 1], s[node.i - 1]
            return tuple(s)
        raise TypeError(f"unexpected node {node!r}")

    # ------------------------------------------------------------ equations

    def defects(self, eq, prefix=""):
        variables = self.infer_spaces(eq)
        expanded = [dsl.expand(side) for side in eq.sides]
        outputs = self._output_spaces(expanded, variables)
        shape = tuple(s.dim for _, s in variables) + tuple(s.dim for s in outputs)
        values = [zeros(shape) for _ in eq.sides]
        for idx in itertools.product(*(range(s.dim) for _, s in variables)):
            env = {name: (space, i) for (name, space), i in zip(variables, idx)}
            for k, terms in enumerate(expanded):
                v = self._side_value(terms, env)
                if v is None:
                    continue
                if list(v.spaces) != outputs:
                    raise SpaceMismatch(f"side {k} lives in {v.spaces}, expected {outputs}")
                values[k][idx] = v.arr if outputs else v.arr[()]
        out = []
        for i, j in itertools.combinations(range(len(eq.sides)), 2):
            out.append(Defect(f"{prefix}{i}={j}", values[i] - values[j], variables, outputs))
        return out


def evaluate(equations, bundle, binding=None, var_spaces=None, identity=None):
    """Evaluate one equation or a list of equations and return a Report."""
    if isinstance(equations, (str, dsl.Equation)):
        equations = [equations]
    equations = [dsl.parse(e) if isinstance(e, str) else e for e in equations]
    ev = Evaluator(bundle, binding, var_spaces)
    defects = []
    for k, eq in enumerate(equations):
        prefix = f"eq{k}:" if len(equations) > 1 else ""
        defects.extend(ev.defects(eq, prefix))
    name = identity or " ; ".join(dsl.to_text(e) for e in equations)
    return build_report(name, defects, bundle.rules)
