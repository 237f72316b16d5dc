"""Verdicts of identity checks.

A check produces one or more *defect arrays*: the difference of two sides of
an identity, indexed by basis tuples of the free variables followed by the
basis of the output.  ``build_report`` turns defects into a Report:

* ``holds`` when every entry normalizes to zero,
* ``fails`` when some entry normalizes to a nonzero constant,
* ``conditional`` when every nonzero entry is a non-constant polynomial; the
  distinct entries (made monic) are listed as constraints.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .scalars import Poly, format_scalar, is_constant_scalar, is_zero, normal_form

HOLDS = "holds"
FAILS = "fails"
CONDITIONAL = "conditional"

_ORDER = {HOLDS: 0, CONDITIONAL: 1, FAILS: 2}


@dataclass
class Defect:
    """LHS - RHS of one equality, over basis tuples.

    ``array`` has one axis per free variable followed by one axis per
    output leg.  ``variables`` is a list of (name, Space); ``outputs`` is a
    list of Spaces (empty for scalar-valued identities).
    """

    label: str
    array: np.ndarray
    variables: list
    outputs: list


@dataclass(frozen=True)
class Witness:
    identity: str
    label: str
    assignment: tuple  # ((variable, basis label), ...)
    entry: tuple  # output basis labels
    value: object

    def as_dict(self):
        return {
            "identity": self.identity,
            "equality": self.label,
            "assignment": dict(self.assignment),
            "entry": list(self.entry),
            "value": format_scalar(self.value),
        }

    def __str__(self):
        assign = ", ".join(f"{k}={v}" for k, v in self.assignment)
        entry = " (x) ".join(self.entry) if self.entry else "scalar"
        return f"[{self.identity} {self.label}] {assign or '-'} @ {entry}: {format_scalar(self.value)}"


def _monic(p):
    lead = next(iter(p.terms.values()))
    return p / lead


@dataclass
class Report:
    identity: str
    verdict: str
    witnesses: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    parts: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def holds(self):
        return self.verdict == HOLDS

    def __bool__(self):
        return self.holds

    def constraint_set(self):
        return frozenset(self.constraints)

    def as_dict(self):
        d = {
            "identity": self.identity,
            "verdict": self.verdict,
            "witnesses": [w.as_dict() for w in self.witnesses],
            "constraints": [str(c) for c in self.constraints],
        }
        if self.parts:
            d["parts"] = [p.as_dict() for p in self.parts]
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)

    def render(self, max_witnesses=5, indent=""):
        lines = [f"{indent}{self.identity}: {self.verdict}"]
        for note in self.notes:
            lines.append(f"{indent}  note: {note}")
        if self.parts:
            for p in self.parts:
                lines.append(p.render(max_witnesses, indent + "  "))
            return "\n".join(lines)
        for w in self.witnesses[:max_witnesses]:
            lines.append(f"{indent}  witness {w}")
        if len(self.witnesses) > max_witnesses:
            lines.append(f"{indent}  ... {len(self.witnesses) - max_witnesses} more witnesses")
        for c in self.constraints:
            lines.append(f"{indent}  constraint {c} = 0")
        return "\n".join(lines)

    def __str__(self):
        return self.render()


def worst(verdicts):
    return max(verdicts, key=_ORDER.__getitem__, default=HOLDS)


def build_report(identity, defects, rules=(), max_witnesses=2000):
    witnesses = []
    constraints = {}
    any_constant = False
    any_nonzero = False
    for d in defects:
        arr = np.asarray(d.array, dtype=object)
        for idx in np.ndindex(*arr.shape):
            v = normal_form(arr[idx], rules)
            if is_zero(v):
                continue
            any_nonzero = True
            if is_constant_scalar(v):
                any_constant = True
            elif isinstance(v, Poly):
                m = _monic(v)
                constraints.setdefault(str(m), m)
            if len(witnesses) < max_witnesses:
                nv = len(d.variables)
                assignment = tuple(
                    (name, space.labels[i]) for (name, space), i in zip(d.variables, idx[:nv])
                )
                entry = tuple(space.labels[i] for space, i in zip(d.outputs, idx[nv:]))
                witnesses.append(Witness(identity, d.label, assignment, entry, v))
    if not any_nonzero:
        verdict = HOLDS
    elif any_constant:
        verdict = FAILS
    else:
        verdict = CONDITIONAL
    cons = [constraints[k] for k in sorted(constraints)]
    return Report(identity, verdict, witnesses, cons)


def combine(name, reports, notes=()):
    reports = list(reports)
    witnesses = [w for r in reports for w in r.witnesses]
    seen = {}
    for r in reports:
        for c in r.constraints:
            seen.setdefault(str(c), c)
    verdict = worst(r.verdict for r in reports)
    return Report(name, verdict, witnesses, [seen[k] for k in sorted(seen)], reports, list(notes))


def implication_report(name, premise, conclusion, notes=()):
    """Verdict of ``premise => conclusion``.

    Holds when the premise fails outright or the conclusion holds.  When the
    premise holds and the conclusion does not, the conclusion's witnesses are
    reported.  A conditional premise makes the implication conditional unless
    the conclusion holds.
    """
    if conclusion.holds or premise.verdict == FAILS:
        verdict = HOLDS
        witnesses, constraints = [], []
    elif premise.holds:
        verdict = conclusion.verdict
        witnesses, constraints = conclusion.witnesses, conclusion.constraints
    else:
        verdict = CONDITIONAL
        witnesses = conclusion.witnesses
        constraints = sorted(
            {str(c): c for c in premise.constraints + conclusion.constraints}.values(), key=str
        )
    return Report(name, verdict, list(witnesses), list(constraints), [premise, conclusion], list(notes))
