"""Run registry identities against loose structures without building a bundle by hand."""

from .bundle import StructureBundle
from .errors import AxiomFailure
from .identities.registry import check_builtin, check_dsl
from .reports import combine


def bundle_of(slots, rules=(), name="scratch"):
    b = StructureBundle(rules=tuple(rules), name=name)
    for key, obj in slots.items():
        if obj is not None:
            b.add(key, obj)
    return b


def run(identity, slots, rules=(), binding=None, route="builtin"):
    """Report for one identity.  ``slots`` maps slot names to structures."""
    b = bundle_of(slots, rules)
    fn = check_dsl if route == "dsl" else check_builtin
    return fn(identity, b, binding)


def run_all(name, items, rules=()):
    """``items`` is a list of (identity, slots, binding); reports are combined."""
    return combine(name, [run(i, s, rules, b) for i, s, b in items])


def require(identity, slots, rules=(), binding=None, what=None):
    rep = run(identity, slots, rules, binding)
    if not rep.holds:
        raise AxiomFailure(identity, rep, f"{what or identity} does not hold ({rep.verdict})")
    return rep
