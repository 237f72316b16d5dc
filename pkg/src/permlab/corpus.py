"""The builtin example bundles, their expected verdicts, and probe slots for oracle runs.

Expected entries take three forms::

    "PERM": "holds"
    "PYBE@r1": {"identity": "PYBE", "bind": {"r": "r1"}, "verdict": "holds"}
    "Delta_r": {"coboundary": {"r": "r", "cop": "cop"}, "verdict": "holds"}

The last compares the coboundary coproduct of the ``mul`` slot and ``r``
with a stored coproduct.
"""

import json
import random
from fractions import Fraction
from importlib import resources

import numpy as np

from .algebra import BilinearOp
from .bundle import load_bundle
from .reports import Defect, build_report, combine
from .identities.registry import REGISTRY, check_builtin, check_dsl, reports_agree
from .tensors import BilinearForm, LinearMap, Tensor, determinant
from .scalars import is_zero

CORPUS = {
    "intro": "intro.json",
    "example-2-26": "example_2_26.json",
    "thm-2-42-a": "thm_2_42_a.json",
    "thm-2-42-b": "thm_2_42_b.json",
    "thm-2-42-c": "thm_2_42_c.json",
    "thm-2-42-d": "thm_2_42_d.json",
    "example-3-10": "example_3_10.json",
    "example-3-14": "example_3_14.json",
}


def corpus_names():
    return list(CORPUS)


def corpus_path(name):
    if name not in CORPUS:
        raise KeyError(f"no corpus bundle {name!r}")
    return resources.files("permlab").joinpath("corpus_data", CORPUS[name])


def load_corpus(name):
    with resources.as_file(corpus_path(name)) as path:
        return load_bundle(path)


def coboundary_report(bundle, r="r", cop="cop", mul="mul"):
    from .ybe import coboundary_delta

    A = bundle.get(mul, "algebra")
    computed = coboundary_delta(A, bundle.get(r, "tensor"))
    stored = bundle.get(cop, "coalgebra")
    g = A.space
    diff = computed.constants - stored.constants
    return build_report("Delta_r", [Defect("computed=stored", diff, [("x", g)], [g, g])], bundle.rules)


def check_expectation(bundle, key, spec):
    """(report, expected verdict) for one expected entry."""
    if isinstance(spec, str):
        return check_builtin(key, bundle), spec
    if "coboundary" in spec:
        return coboundary_report(bundle, **spec["coboundary"]), spec["verdict"]
    return check_builtin(spec["identity"], bundle, spec.get("bind")), spec["verdict"]


def verify_bundle(bundle):
    """Report with one part per expected entry; a part fails when its verdict differs."""
    parts = []
    for key in sorted(bundle.expected):
        report, want = check_expectation(bundle, key, bundle.expected[key])
        report.identity = key
        if report.verdict != want:
            report.notes.append(f"expected {want}, got {report.verdict}")
            report.verdict = "fails"
        else:
            report.notes.append(f"expected {want}")
            report.verdict = "holds"
        parts.append(report)
    return combine(bundle.name, parts)


def verify_corpus(names=None):
    return {n: verify_bundle(load_corpus(n)) for n in names or corpus_names()}


def corpus_summary(results):
    """Deterministic JSON-ready summary of verify_corpus output."""
    return {
        name: {
            "verdict": rep.verdict,
            "checks": {p.identity: {"verdict": p.verdict, "notes": p.notes, "constraints": [str(c) for c in p.constraints]} for p in rep.parts},
        }
        for name, rep in results.items()
    }


def corpus_json(results):
    return json.dumps(corpus_summary(results), indent=2, sort_keys=True)


# ---------------------------------------------------------------- probes for oracle runs


class _Probe:
    """Deterministic small integers seeded by the bundle name."""

    def __init__(self, seed):
        self.rng = random.Random(seed)

    def value(self):
        return Fraction(self.rng.randint(-2, 2))

    def array(self, shape):
        arr = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            arr[idx] = self.value()
        return arr

    def symmetric(self, n):
        a = self.array((n, n))
        return (a + a.T)


def _main_space(bundle):
    mul = bundle.get("mul", "algebra")
    if mul is not None:
        return mul.space
    cop = bundle.get("cop", "coalgebra")
    if cop is not None:
        return cop.space
    raise KeyError(f"{bundle.name} has neither a product nor a coproduct")


def enrich(bundle):
    """Copy of the bundle with every default role slot of the registry filled.

    Missing structures are derived from present ones where a natural choice
    exists (coboundary coproduct, deformed product, dual actions of the
    matched pair, the adjoint of N); the rest are deterministic integer
    probes.  Used to run both routes of every identity on every bundle.
    """
    from .bialgebra import PermBialgebra, adjoint_wrt_form, extract_matched_pair
    from .reps import Representation, deformed_actions, deformed_product
    from .symplectic import omega_product
    from .ybe import coboundary_delta

    b = bundle.copy(bundle.name + "+probes")
    probe = _Probe(bundle.name)
    g = _main_space(bundle)
    n = g.dim

    def missing(name, kind):
        return b.get(name, kind) is None

    if missing("r", "tensor"):
        b.add("r", Tensor((g, g), probe.symmetric(n)))
    if missing("w", "form"):
        b.add("w", BilinearForm(g, probe.symmetric(n), "symmetric"))
    if missing("mul", "algebra"):
        cop = b.get("cop", "coalgebra")
        b.add("mul", omega_product(cop, b.get("w", "form"), b.rules))
    mul = b.get("mul", "algebra")
    if missing("cop", "coalgebra"):
        b.add("cop", coboundary_delta(mul, b.get("r", "tensor")))
    for name in ("N", "S", "T"):
        if missing(name, "map"):
            b.add(name, LinearMap(g, g, probe.array((n, n))))
    N = b.get("N", "map")
    if missing("alpha", "map"):
        b.add("alpha", N)
    if missing("beta", "map"):
        b.add("beta", b.get("S", "map"))
    adj = BilinearOp(g, g, g, mul.constants)
    for name in ("la", "ra", "el", "er"):
        if missing(name, "algebra"):
            b.add(name, adj)
    if missing("mb", "algebra"):
        b.add("mb", deformed_product(mul, N))
    rep = Representation(mul, g, adj, adj)
    shifted = deformed_actions(rep, N, b.get("alpha", "map"))
    if missing("tl", "algebra"):
        b.add("tl", shifted.left)
    if missing("tr", "algebra"):
        b.add("tr", shifted.right)
    if missing("phi", "map"):
        b.add("phi", N)
    if missing("f", "map"):
        b.add("f", b.get("alpha", "map"))
    mp = extract_matched_pair(PermBialgebra(mul, b.get("cop", "coalgebra")))
    for name, obj in (("mulh", mp.h), ("lg", mp.lg), ("rg", mp.rg), ("lh", mp.lh), ("rh", mp.rh)):
        if missing(name, "algebra"):
            b.add(name, obj)
    if missing("B", "form"):
        while True:
            form = BilinearForm(g, probe.array((n, n)))
            if not is_zero(determinant(form.matrix)):
                break
        b.add("B", form)
    B = b.get("B", "form")
    if missing("Nh", "map"):
        b.add("Nh", adjoint_wrt_form(N, B, b.rules) if B.is_nondegenerate(b.rules) else N)
    if missing("N_sum", "map"):
        b.add("N_sum", N)
    if missing("S_sum", "map"):
        b.add("S_sum", b.get("Nh", "map"))
    return b


def oracle_agreement(bundle, identities=None):
    """{identity: (hand report, dsl report, agree)} on the enriched bundle."""
    b = enrich(bundle)
    out = {}
    for ident in identities or list(REGISTRY):
        spec = REGISTRY[ident]
        if not spec.dsl_expressible and spec.kind != "implication":
            continue
        hand = check_builtin(ident, b)
        dsl = check_dsl(ident, b)
        out[ident] = (hand, dsl, reports_agree(hand, dsl))
    return out
