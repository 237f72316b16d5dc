"""Finite-field search for symmetric PYBE solutions and the 2-dimensional classification table."""

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .algebra import PermAlgebra, PermCoalgebra
from .checks import run
from .errors import DimTooLarge, FieldTooLarge
from .reports import FAILS, HOLDS, Defect, Report, build_report, combine
from .scalars import GF, FpElement, Poly, RewriteRule, format_scalar
from .tensors import Space, Tensor
from .ybe import PRODUCTS, coboundary_delta

MAX_PRIME = 17
MAX_DIM = 3
CHUNK = 1 << 16

PARAMS = ("kappa", "lambda", "nu")

# Rows of each table: the r family (label pair -> polynomial text), an
# optional constraint lhs -> rhs, and the printed coproduct.
GOLDEN_TABLE = {
    "a": {
        "product": {("e1", "e1"): {"e1": "1"}, ("e2", "e1"): {"e2": "1"}},
        "rows": [
            {
                "r": {("e1", "e1"): "lambda", ("e1", "e2"): "kappa", ("e2", "e1"): "kappa", ("e2", "e2"): "nu"},
                "constraint": ("kappa^2", "lambda*nu"),
                "delta": {
                    "e1": {("e1", "e1"): "lambda", ("e2", "e2"): "-nu"},
                    "e2": {("e2", "e1"): "lambda", ("e1", "e2"): "lambda", ("e2", "e2"): "2*kappa"},
                },
            }
        ],
    },
    "b": {
        "product": {("e1", "e1"): {"e1": "1", "e2": "1"}, ("e2", "e1"): {"e2": "1"}},
        "rows": [
            {"r": {("e2", "e2"): "lambda"}, "delta": {"e1": {("e2", "e2"): "-lambda"}, "e2": {}}},
        ],
    },
    "c": {
        "product": {("e1", "e2"): {"e1": "1"}, ("e2", "e2"): {"e2": "1"}},
        "rows": [
            {"r": {("e1", "e1"): "lambda"}, "delta": {"e1": {}, "e2": {("e1", "e1"): "lambda"}}},
            {
                "r": {("e2", "e2"): "lambda"},
                "delta": {"e1": {("e1", "e2"): "lambda", ("e2", "e1"): "lambda"}, "e2": {("e2", "e2"): "lambda"}},
            },
        ],
    },
    "d": {
        "product": {("e1", "e2"): {"e1": "1"}, ("e2", "e2"): {"e1": "1", "e2": "1"}},
        "rows": [
            {"r": {("e1", "e1"): "lambda"}, "delta": {"e1": {}, "e2": {("e1", "e1"): "-lambda"}}},
        ],
    },
}

PLANE = Space("g", ["e1", "e2"])


def _poly(text):
    return Poly.parse(text, PARAMS)


def golden_algebra(item):
    table = {k: {o: _poly(v) for o, v in img.items()} for k, img in GOLDEN_TABLE[item]["product"].items()}
    return PermAlgebra.from_table(PLANE, table)


def golden_rules(item, row=0):
    con = GOLDEN_TABLE[item]["rows"][row].get("constraint")
    return [RewriteRule.parse(con[0], con[1], PARAMS)] if con else []


def golden_r(item, row=0):
    terms = GOLDEN_TABLE[item]["rows"][row]["r"]
    return Tensor.from_terms((PLANE, PLANE), {k: _poly(v) for k, v in terms.items()})


def golden_delta(item, row=0):
    table = GOLDEN_TABLE[item]["rows"][row]["delta"]
    return PermCoalgebra.from_table(PLANE, {x: {k: _poly(v) for k, v in img.items()} for x, img in table.items()})


def items():
    return list(GOLDEN_TABLE)


# ---------------------------------------------------------------- enumeration


def _to_int(x, p):
    if isinstance(x, FpElement):
        return x.value % p
    if isinstance(x, Poly):
        if not x.is_constant():
            raise ValueError("enumeration needs numeric structure constants")
        x = x.constant_value()
        return _to_int(x, p)
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def _components(d):
    return [(i, j) for i in range(d) for j in range(i, d)]


def _batch_spec(a, b):
    """einsum spec for r_a r_b with a batch axis n, mirroring placement_product."""
    first, second = (a // 10, a % 10), (b // 10, b % 10)
    (s,) = set(first) & set(second)
    fi, si = dict(zip(first, "ij")), dict(zip(second, "kl"))
    out = "".join("m" if slot == s else fi.get(slot) or si.get(slot) for slot in (1, 2, 3))
    return f"nij,nkl,{fi[s]}{si[s]}m->n{out}"


def pybe_mask(constants, R, p):
    """Boolean mask of the batch R (n, d, d) of integer tensors with P(r) = 0 mod p."""
    total = None
    for sign, a, b in PRODUCTS["P"]:
        t = np.einsum(_batch_spec(a, b), R, R, constants) % p
        total = sign * t if total is None else total + sign * t
    total %= p
    return ~total.reshape(len(R), -1).any(axis=1)


def _threads():
    raw = os.environ.get("PERMLAB_THREADS", "0").strip() or "0"
    n = int(raw)
    return n if n > 0 else (os.cpu_count() or 1)


class SolutionSet:
    """All symmetric r over F_p with P(r) = 0, in lexicographic order of components."""

    def __init__(self, algebra_id, p, dim, solutions, tags=None):
        self.algebra_id = algebra_id
        self.p = p
        self.dim = dim
        self.components = _components(dim)
        self.solutions = list(solutions)
        self.tags = tags or {}

    def __len__(self):
        return len(self.solutions)

    @property
    def count(self):
        return len(self.solutions)

    def as_set(self):
        return set(self.solutions)

    def tensor(self, sol, space):
        arr = np.empty((self.dim, self.dim), dtype=object)
        for (i, j), v in zip(self.components, sol):
            arr[i, j] = arr[j, i] = FpElement(v, self.p)
        return Tensor((space, space), arr)

    def as_dict(self):
        labels = [f"r{i + 1}{j + 1}" for i, j in self.components]
        return {
            "algebra": self.algebra_id,
            "field": f"GF({self.p})",
            "components": labels,
            "count": self.count,
            "solutions": [list(s) for s in self.solutions],
            "tags": {",".join(map(str, k)): v for k, v in sorted(self.tags.items())},
        }


def enumerate_symmetric_solutions(algebra, p, algebra_id=None, workers=None):
    """Every symmetric r in g (x) g over F_p solving PYBE, by exhaustion.

    The candidate space is split by the first component; ``workers`` (default
    from PERMLAB_THREADS, 0 meaning all cores) threads process the parts.
    """
    GF(p)
    if p > MAX_PRIME:
        raise FieldTooLarge(f"p = {p} exceeds {MAX_PRIME}")
    d = algebra.space.dim
    if d > MAX_DIM:
        raise DimTooLarge(f"dimension {d} exceeds {MAX_DIM}")
    c = np.vectorize(lambda x: _to_int(x, p), otypes=[np.int64])(algebra.constants)
    comps = _components(d)
    m = len(comps)
    rows = np.array([i for i, _ in comps])
    cols = np.array([j for _, j in comps])

    def part(first):
        rest = np.array(list(itertools.product(range(p), repeat=m - 1)), dtype=np.int64).reshape(-1, m - 1)
        vals = np.concatenate([np.full((len(rest), 1), first, dtype=np.int64), rest], axis=1)
        found = []
        for start in range(0, len(vals), CHUNK):
            block = vals[start : start + CHUNK]
            R = np.zeros((len(block), d, d), dtype=np.int64)
            R[:, rows, cols] = block
            R[:, cols, rows] = block
            found.extend(map(tuple, block[pybe_mask(c, R, p)].tolist()))
        return found

    n = workers if workers is not None else _threads()
    if n <= 1:
        parts = [part(v) for v in range(p)]
    else:
        with ThreadPoolExecutor(max_workers=min(n, p)) as pool:
            parts = list(pool.map(part, range(p)))
    sols = sorted(s for chunk in parts for s in chunk)
    return SolutionSet(algebra_id or algebra.space.name, p, d, sols)


def _at(x, point):
    return x.evaluate(point) if isinstance(x, Poly) else x


def family_points(item, p):
    """{row index: set of component tuples} of the listed families over F_p."""
    out = {}
    for k, row in enumerate(GOLDEN_TABLE[item]["rows"]):
        r = golden_r(item, k)
        con = row.get("constraint")
        con_poly = _poly(con[0]) - _poly(con[1]) if con else None
        used = sorted({g for v in row["r"].values() for g in _poly(v).used_gens()})
        pts = set()
        for vals in itertools.product(range(p), repeat=len(used)):
            point = {g: 0 for g in PARAMS}
            point.update(zip(used, vals))
            if con_poly is not None and _to_int(con_poly.evaluate(point), p):
                continue
            pts.add(tuple(_to_int(_at(r.array[i, j], point), p) for i, j in _components(2)))
        out[k] = pts
    return out


def tag_solutions(solutions, item):
    fam = family_points(item, solutions.p)
    solutions.tags = {s: [f"row{k + 1}" for k, pts in fam.items() if s in pts] for s in solutions.solutions}
    return solutions


def completeness_report(item, p, workers=None):
    """Set equality between the enumeration over F_p and the listed families."""
    sols = tag_solutions(enumerate_symmetric_solutions(golden_algebra(item), p, item, workers), item)
    fam = set().union(*family_points(item, p).values())
    found = sols.as_set()
    missing, extra = sorted(fam - found), sorted(found - fam)
    notes = [f"enumerated {len(found)} solutions, listed families give {len(fam)} points"]
    if missing:
        notes.append(f"listed but not solutions: {missing[:6]}{' ...' if len(missing) > 6 else ''}")
    if extra:
        notes.append(f"solutions outside the listed families: {extra[:6]}{' ...' if len(extra) > 6 else ''}")
    verdict = HOLDS if not missing and not extra else FAILS
    return Report(f"complete over GF({p})", verdict, notes=notes)


# ---------------------------------------------------------------- the table


def row_reports(item, row):
    A, r, rules = golden_algebra(item), golden_r(item, row), golden_rules(item, row)
    delta = coboundary_delta(A, r)
    listed = golden_delta(item, row)
    g = A.space
    match = build_report(
        "listed coproduct",
        [Defect("computed=listed", delta.constants - listed.constants, [("x", g)], [g, g])],
        rules,
    )
    slots = {"mul": A, "cop": delta, "r": r}
    parts = [
        run("PYBE", slots, rules),
        match,
        run("COPERM", slots, rules),
        run("BIALG", slots, rules),
    ]
    return combine(f"row {row + 1}", parts)


def verify_classification(fields=(3, 5, 7), workers=None, only=None):
    """One Report per item: PERM of the algebra, each row, completeness per field."""
    out = {}
    for item in only or items():
        parts = [run("PERM", {"mul": golden_algebra(item)})]
        parts += [row_reports(item, k) for k in range(len(GOLDEN_TABLE[item]["rows"]))]
        parts += [completeness_report(item, p, workers) for p in fields]
        out[item] = combine(f"item ({item})", parts)
    return out


def _fmt_tensor_terms(terms):
    if not terms:
        return "0"
    pieces = []
    for labels, v in terms.items():
        s = format_scalar(v)
        coef = "" if s == "1" else "-" if s == "-1" else f"({s})" if " " in s else s
        pieces.append(f"{coef}{' (x) '.join(labels)}" if coef in ("", "-") else f"{coef} {' (x) '.join(labels)}")
    return " + ".join(pieces).replace("+ -", "- ")


def _product_lines(A):
    table = A.table()
    labels = A.space.labels
    width = 10
    lines = ["  " + " " * 4 + "|" + "".join(f"{l:>{width}}" for l in labels)]
    lines.append("  " + "-" * (5 + width * len(labels)))
    for a in labels:
        cells = []
        for b in labels:
            img = table.get((a, b), {})
            cells.append(_fmt_tensor_terms({(k,): v for k, v in img.items()}))
        lines.append("  " + f"{a:>4}|" + "".join(f"{c:>{width}}" for c in cells))
    return lines


def format_table(reports):
    """Text layout of the four tables with computed coproducts and verdicts."""
    lines = []
    for item, rep in reports.items():
        A = golden_algebra(item)
        lines.append(f"({item}) product:")
        lines.extend(_product_lines(A))
        perm = rep.parts[0]
        lines.append(f"  PERM: {perm.verdict}")
        nrows = len(GOLDEN_TABLE[item]["rows"])
        for k in range(nrows):
            rules = golden_rules(item, k)
            r = golden_r(item, k)
            delta = coboundary_delta(A, r)
            row = rep.parts[1 + k]
            cons = f"  ({rules[0].lhs} = {rules[0].rhs})" if rules else ""
            lines.append(f"  r = {_fmt_tensor_terms(r.terms(rules))}{cons}")
            for x in A.space.labels:
                got = _fmt_tensor_terms(Tensor((A.space, A.space), delta.constants[A.space.index(x)]).terms(rules))
                want = golden_delta(item, k)
                listed = _fmt_tensor_terms(Tensor((A.space, A.space), want.constants[A.space.index(x)]).terms())
                mark = "" if got == listed or row.parts[1].holds else f"   [listed: {listed}]"
                lines.append(f"    Delta({x}) = {got}{mark}")
            lines.append("    " + ", ".join(f"{p.identity}: {p.verdict}" for p in row.parts))
        for p in rep.parts[1 + nrows :]:
            lines.append(f"  {p.identity}: {p.verdict}; " + "; ".join(p.notes))
        lines.append(f"  => {rep.verdict}")
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
