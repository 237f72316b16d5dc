"""StructureBundle: a named collection of structures and its JSON form.

File layout (all scalars are strings)::

    {
      "name": "intro-example",
      "field": "QQ",                      # or "GF(7)"
      "parameters": ["kappa", "lambda", "nu"],
      "rewrites": [{"lhs": "kappa^2", "rhs": "lambda*nu"}],
      "spaces": {"g": ["e1", "e2"]},
      "algebras": {
        "mul": {"space": "g", "products": [{"i": "e1", "j": "e1", "out": {"e1": "1"}}]},
        "la":  {"spaces": ["g", "V", "V"], "products": [...]}
      },
      "coalgebras": {"cop": {"space": "g", "coproducts": [{"i": "e1", "out": {"e2 ox e2": "-1"}}]}},
      "maps": {"N": {"domain": "g", "codomain": "g", "matrix": [["k1", "0"], ["k2", "k3"]]}},
      "forms": {"w": {"space": "g", "matrix": [["nu", "0"], ["0", "0"]], "symmetry": "symmetric"}},
      "tensors": {"r": {"spaces": ["g", "g"], "array": [["lambda", "0"], ["0", "0"]]}},
      "expected": {"PERM": "holds"}
    }

A space reference ``"g*"`` denotes the dual of ``g``.  Map matrices are
indexed ``[codomain][domain]``; a map may instead give ``"images"``
``{"e1": {"e1": "k1", "e2": "k2"}}``.
"""

import json
from pathlib import Path

import numpy as np

from .algebra import BilinearOp, PermAlgebra, PermCoalgebra
from .errors import OverlappingRules, SchemaError, SpaceMismatch
from .scalars import QQ, GF, Poly, RewriteRule, check_rules, field_from_spec, format_scalar
from .tensors import BilinearForm, LinearMap, Space, Tensor, zeros

KINDS = ("algebra", "coalgebra", "map", "form", "tensor")
_SECTION = {
    "algebra": "algebras",
    "coalgebra": "coalgebras",
    "map": "maps",
    "form": "forms",
    "tensor": "tensors",
}
TOP_KEYS = {"name", "description", "field", "parameters", "rewrites", "spaces", "expected"} | set(
    _SECTION.values()
)


class StructureBundle:
    def __init__(self, field=QQ, parameters=(), rules=(), spaces=None, name="bundle", description=""):
        self.name = name
        self.description = description
        self.field = field
        self.parameters = tuple(parameters)
        self.rules = list(rules)
        check_rules(self.rules)
        self.spaces = dict(spaces or {})
        self.slots = {k: {} for k in KINDS}
        self.expected = {}

    # access
    def get(self, name, kind):
        return self.slots[kind].get(name)

    def slots_of_kind(self, kind):
        return dict(self.slots[kind])

    def kind_of(self, name):
        for k in KINDS:
            if name in self.slots[k]:
                return k
        return None

    def __contains__(self, name):
        return self.kind_of(name) is not None

    def __getitem__(self, name):
        kind = self.kind_of(name)
        if kind is None:
            raise KeyError(name)
        return self.slots[kind][name]

    def add(self, name, obj, kind=None):
        kind = kind or _kind_of_object(obj)
        other = self.kind_of(name)
        if other is not None and other != kind:
            raise ValueError(f"slot {name!r} already holds a {other}")
        self.slots[kind][name] = obj
        for sp in _spaces_of(obj):
            base = sp.dual() if sp.is_dual else sp
            self.spaces.setdefault(base.name, base)
        return self

    def copy(self, name=None):
        out = StructureBundle(self.field, self.parameters, self.rules, self.spaces, name or self.name, self.description)
        for k in KINDS:
            out.slots[k] = dict(self.slots[k])
        out.expected = dict(self.expected)
        return out

    def with_slots(self, **slots):
        out = self.copy()
        for name, obj in slots.items():
            out.add(name, obj)
        return out

    def scalar(self, text):
        if self.parameters:
            return Poly.parse(text, self.parameters, self.field if isinstance(self.field, GF) else None)
        return self.field.parse(text)

    def __repr__(self):
        inner = ", ".join(f"{k}s={sorted(v)}" for k, v in self.slots.items() if v)
        return f"StructureBundle({self.name}: {inner})"


def _kind_of_object(obj):
    if isinstance(obj, BilinearOp):
        return "algebra"
    if isinstance(obj, PermCoalgebra):
        return "coalgebra"
    if isinstance(obj, LinearMap):
        return "map"
    if isinstance(obj, BilinearForm):
        return "form"
    if isinstance(obj, Tensor):
        return "tensor"
    raise TypeError(f"cannot store {type(obj).__name__} in a bundle")


def _spaces_of(obj):
    if isinstance(obj, BilinearOp):
        return (obj.left, obj.right, obj.out)
    if isinstance(obj, PermCoalgebra):
        return (obj.space,)
    if isinstance(obj, LinearMap):
        return (obj.domain, obj.codomain)
    if isinstance(obj, BilinearForm):
        return (obj.space,)
    return tuple(obj.spaces)


# ---------------------------------------------------------------- loading


class _Loader:
    def __init__(self, data):
        self.data = data

    def fail(self, message, *path):
        pointer = "/" + "/".join(str(p) for p in path) if path else ""
        raise SchemaError(message, pointer)

    def need(self, obj, key, *path):
        if not isinstance(obj, dict) or key not in obj:
            self.fail(f"missing key {key!r}", *path)
        return obj[key]

    def load(self):
        d = self.data
        if not isinstance(d, dict):
            self.fail("a bundle must be a JSON object")
        unknown = set(d) - TOP_KEYS
        if unknown:
            self.fail(f"unknown top-level keys {sorted(unknown)}")
        try:
            field = field_from_spec(d.get("field", "QQ"))
        except ValueError as e:
            self.fail(str(e), "field")
        params = d.get("parameters", [])
        if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
            self.fail("parameters must be a list of names", "parameters")
        self.field = field
        self.params = tuple(params)
        rules = []
        for k, rw in enumerate(d.get("rewrites", [])):
            try:
                rules.append(
                    RewriteRule.parse(
                        self.need(rw, "lhs", "rewrites", k),
                        self.need(rw, "rhs", "rewrites", k),
                        self.params,
                        field if isinstance(field, GF) else None,
                    )
                )
            except ValueError as e:
                self.fail(str(e), "rewrites", k)
        spaces = {}
        raw_spaces = self.need(d, "spaces")
        if not isinstance(raw_spaces, dict) or not raw_spaces:
            self.fail("spaces must be a non-empty object", "spaces")
        for name, basis in raw_spaces.items():
            try:
                spaces[name] = Space(name, basis)
            except Exception as e:
                self.fail(str(e), "spaces", name)
        self.spaces = spaces
        try:
            bundle = StructureBundle(
                field, self.params, rules, spaces, d.get("name", "bundle"), d.get("description", "")
            )
        except OverlappingRules:
            raise
        for name, spec in d.get("algebras", {}).items():
            bundle.add(name, self.algebra(name, spec), "algebra")
        for name, spec in d.get("coalgebras", {}).items():
            bundle.add(name, self.coalgebra(name, spec), "coalgebra")
        for name, spec in d.get("maps", {}).items():
            bundle.add(name, self.linear_map(name, spec), "map")
        for name, spec in d.get("forms", {}).items():
            bundle.add(name, self.form(name, spec), "form")
        for name, spec in d.get("tensors", {}).items():
            bundle.add(name, self.tensor(name, spec), "tensor")
        seen = {}
        for kind in KINDS:
            for name in bundle.slots[kind]:
                if name in seen:
                    self.fail(f"slot name {name!r} used for a {seen[name]} and a {kind}", _SECTION[kind], name)
                seen[name] = kind
        expected = d.get("expected", {})
        if not isinstance(expected, dict):
            self.fail("expected must be an object", "expected")
        bundle.expected = dict(expected)
        return bundle

    def space(self, ref, *path):
        if not isinstance(ref, str):
            self.fail("space reference must be a string", *path)
        dual = ref.endswith("*")
        base = ref[:-1] if dual else ref
        if base not in self.spaces:
            self.fail(f"unknown space {ref!r}", *path)
        return self.spaces[base].dual() if dual else self.spaces[base]

    def scalar(self, text, *path):
        if not isinstance(text, str):
            self.fail("scalars are written as strings", *path)
        try:
            if self.params:
                return Poly.parse(text, self.params, self.field if isinstance(self.field, GF) else None)
            return self.field.parse(text)
        except (ValueError, ZeroDivisionError) as e:
            self.fail(str(e), *path)

    def label(self, space, label, *path):
        try:
            return space.index(label)
        except KeyError:
            self.fail(f"{label!r} is not a basis vector of {space.name}", *path)

    def algebra(self, name, spec):
        path = ("algebras", name)
        if "spaces" in spec:
            refs = spec["spaces"]
            if not isinstance(refs, list) or len(refs) != 3:
                self.fail("spaces must list three spaces", *path, "spaces")
            left, right, out = (self.space(r, *path, "spaces", k) for k, r in enumerate(refs))
        else:
            left = right = out = self.space(self.need(spec, "space", *path), *path, "space")
        c = zeros((left.dim, right.dim, out.dim))
        for k, entry in enumerate(spec.get("products", [])):
            p = path + ("products", k)
            i = self.label(left, self.need(entry, "i", *p), *p, "i")
            j = self.label(right, self.need(entry, "j", *p), *p, "j")
            for lab, val in self.need(entry, "out", *p).items():
                c[i, j, self.label(out, lab, *p, "out", lab)] += self.scalar(val, *p, "out", lab)
        if left == right == out:
            return PermAlgebra(left, c)
        return BilinearOp(left, right, out, c)

    def coalgebra(self, name, spec):
        path = ("coalgebras", name)
        sp = self.space(self.need(spec, "space", *path), *path, "space")
        d = zeros((sp.dim,) * 3)
        for k, entry in enumerate(spec.get("coproducts", [])):
            p = path + ("coproducts", k)
            i = self.label(sp, self.need(entry, "i", *p), *p, "i")
            for key, val in self.need(entry, "out", *p).items():
                parts = [s.strip() for s in key.split(" ox ")]
                if len(parts) != 2:
                    self.fail("coproduct keys look like 'e1 ox e2'", *p, "out", key)
                a = self.label(sp, parts[0], *p, "out", key)
                b = self.label(sp, parts[1], *p, "out", key)
                d[i, a, b] += self.scalar(val, *p, "out", key)
        return PermCoalgebra(sp, d)

    def matrix(self, raw, shape, *path):
        if not isinstance(raw, list):
            self.fail("expected a nested array", *path)
        arr = np.empty(shape, dtype=object)
        if len(raw) != shape[0]:
            self.fail(f"expected {shape[0]} rows, found {len(raw)}", *path)
        for i, row in enumerate(raw):
            if len(shape) == 1:
                arr[i] = self.scalar(row, *path, i)
                continue
            sub = self.matrix(row, shape[1:], *path, i)
            arr[i] = sub
        return arr

    def linear_map(self, name, spec):
        path = ("maps", name)
        dom = self.space(self.need(spec, "domain", *path), *path, "domain")
        cod = self.space(self.need(spec, "codomain", *path), *path, "codomain")
        if "images" in spec:
            m = zeros((cod.dim, dom.dim))
            for src, img in spec["images"].items():
                j = self.label(dom, src, *path, "images", src)
                for dst, val in img.items():
                    m[self.label(cod, dst, *path, "images", src, dst), j] = self.scalar(
                        val, *path, "images", src, dst
                    )
        else:
            m = self.matrix(self.need(spec, "matrix", *path), (cod.dim, dom.dim), *path, "matrix")
        return LinearMap(dom, cod, m)

    def form(self, name, spec):
        path = ("forms", name)
        sp = self.space(self.need(spec, "space", *path), *path, "space")
        m = self.matrix(self.need(spec, "matrix", *path), (sp.dim, sp.dim), *path, "matrix")
        try:
            return BilinearForm(sp, m, spec.get("symmetry", "none"))
        except Exception as e:
            self.fail(str(e), *path)

    def tensor(self, name, spec):
        path = ("tensors", name)
        refs = self.need(spec, "spaces", *path)
        if not isinstance(refs, list) or not 1 <= len(refs) <= 3:
            self.fail(f"tensor {name!r} needs one to three component spaces", *path, "spaces")
        spaces = [self.space(r, *path, "spaces", k) for k, r in enumerate(refs)]
        shape = tuple(s.dim for s in spaces)
        try:
            arr = self.matrix(self.need(spec, "array", *path), shape, *path, "array")
        except SchemaError as e:
            raise SchemaError(f"tensor {name!r}: {e.message}", e.location) from None
        return Tensor(spaces, arr)


def bundle_from_dict(data):
    return _Loader(data).load()


def load_bundle(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise IOError(f"cannot read {path}: {e}") from e
    if not text.strip():
        raise SchemaError("empty bundle file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} (line {e.lineno})") from None
    return bundle_from_dict(data)


# ---------------------------------------------------------------- dumping


def _space_ref(sp, names):
    for n, base in names.items():
        if base.basis == sp.basis and base.name == sp.name:
            return n + ("*" if sp.is_dual else "")
    raise SpaceMismatch(f"space {sp} is not registered in the bundle")


def _arr_to_json(arr):
    if not isinstance(arr, np.ndarray):
        return format_scalar(arr)
    if arr.ndim == 0:
        return format_scalar(arr[()])
    return [_arr_to_json(a) for a in arr]


def bundle_to_dict(bundle):
    names = {n: (s.dual() if s.is_dual else s) for n, s in bundle.spaces.items()}
    d = {
        "name": bundle.name,
        "field": bundle.field.name,
        "parameters": list(bundle.parameters),
        "rewrites": [{"lhs": str(r.lhs), "rhs": str(r.rhs)} for r in bundle.rules],
        "spaces": {n: list(s.basis) for n, s in names.items()},
    }
    if bundle.description:
        d["description"] = bundle.description
    algs = {}
    for name, op in bundle.slots["algebra"].items():
        entries = []
        for i, j in np.ndindex(op.constants.shape[:2]):
            out = {
                op.out.labels[k]: format_scalar(op.constants[i, j, k])
                for k in range(op.out.dim)
                if op.constants[i, j, k] != 0
            }
            if out:
                entries.append({"i": op.left.labels[i], "j": op.right.labels[j], "out": out})
        spec = {"products": entries}
        if op.left == op.right == op.out:
            spec["space"] = _space_ref(op.left, names)
        else:
            spec["spaces"] = [_space_ref(s, names) for s in (op.left, op.right, op.out)]
        algs[name] = spec
    d["algebras"] = algs
    cos = {}
    for name, c in bundle.slots["coalgebra"].items():
        entries = []
        for i in range(c.space.dim):
            out = {
                f"{c.space.labels[a]} ox {c.space.labels[b]}": format_scalar(c.constants[i, a, b])
                for a in range(c.space.dim)
                for b in range(c.space.dim)
                if c.constants[i, a, b] != 0
            }
            if out:
                entries.append({"i": c.space.labels[i], "out": out})
        cos[name] = {"space": _space_ref(c.space, names), "coproducts": entries}
    d["coalgebras"] = cos
    d["maps"] = {
        n: {
            "domain": _space_ref(f.domain, names),
            "codomain": _space_ref(f.codomain, names),
            "matrix": _arr_to_json(f.matrix),
        }
        for n, f in bundle.slots["map"].items()
    }
    d["forms"] = {
        n: {"space": _space_ref(f.space, names), "matrix": _arr_to_json(f.matrix), "symmetry": f.symmetry}
        for n, f in bundle.slots["form"].items()
    }
    d["tensors"] = {
        n: {"spaces": [_space_ref(s, names) for s in t.spaces], "array": _arr_to_json(t.array)}
        for n, t in bundle.slots["tensor"].items()
    }
    if bundle.expected:
        d["expected"] = dict(bundle.expected)
    return d


def dump_bundle(bundle, path=None):
    text = json.dumps(bundle_to_dict(bundle), indent=2, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
