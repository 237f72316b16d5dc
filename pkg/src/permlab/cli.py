"""Command-line front end.

Exit codes: 0 when every verdict holds, 1 when some check fails or is only
conditional, 2 on usage or schema errors.
"""

import argparse
import json
import sys
from pathlib import Path

from . import classify
from .bundle import StructureBundle, bundle_to_dict, load_bundle
from .checks import run
from .corpus import CORPUS, corpus_json, corpus_names, load_corpus, verify_corpus
from .errors import AxiomFailure, PermlabError, SchemaError, UsageError
from .identities import dsl
from .identities.evaluator import evaluate
from .identities.registry import check_builtin
from .reports import combine
from .scalars import format_scalar

OK, FAIL, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _exit_code(report):
    return OK if report.holds else FAIL


def _open_bundle(ref):
    """A path, or the name or file name of a builtin corpus bundle."""
    path = Path(ref)
    if path.exists():
        return load_bundle(path)
    by_file = {v: k for k, v in CORPUS.items()}
    name = by_file.get(path.name, ref)
    if name in CORPUS:
        return load_corpus(name)
    raise UsageError(f"no bundle file {ref!r} and no corpus bundle of that name")


def _need(bundle, name, kind):
    obj = bundle.get(name, kind)
    if obj is None:
        raise UsageError(f"bundle {bundle.name} has no {kind} slot {name!r}")
    return obj


def _parse_bind(items):
    out = {}
    for item in items or ():
        role, sep, slot = item.partition("=")
        if not sep or not role or not slot:
            raise UsageError(f"--bind wants role=slot, got {item!r}")
        out[role.strip()] = slot.strip()
    return out


def _emit(args, report, extra=None):
    if args.json:
        d = report.as_dict()
        if extra:
            d.update(extra)
        print(json.dumps(d, indent=2, sort_keys=True))
    else:
        print(report.render(max_witnesses=args.witnesses))
        for key, value in (extra or {}).items():
            if isinstance(value, str):
                print(f"{key}:\n{value}")
    return _exit_code(report)


# ---------------------------------------------------------------- commands


def cmd_check(args):
    bundle = _open_bundle(args.bundle)
    return _emit(args, check_builtin(args.identity, bundle, _parse_bind(args.bind)))


def cmd_eval(args):
    bundle = _open_bundle(args.bundle)
    try:
        text = Path(args.dsl).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.dsl}: {exc}") from None
    equations = dsl.parse_file(text)
    if not equations:
        raise UsageError(f"{args.dsl} holds no equations")
    parts = [evaluate([eq], bundle, _parse_bind(args.bind), identity=dsl.to_text(eq)) for eq in equations]
    report = parts[0] if len(parts) == 1 else combine(Path(args.dsl).name, parts)
    return _emit(args, report)


def _coalgebra_lines(C):
    lines = []
    for i, x in enumerate(C.space.labels):
        terms = []
        for a, b in ((a, b) for a in range(C.space.dim) for b in range(C.space.dim)):
            v = C.constants[i, a, b]
            if v != 0:
                terms.append(f"({format_scalar(v)}) {C.space.labels[a]} (x) {C.space.labels[b]}")
        lines.append(f"Delta({x}) = " + (" + ".join(terms) if terms else "0"))
    return lines


def cmd_delta(args):
    from .ybe import coboundary_delta

    bundle = _open_bundle(args.bundle)
    A = _need(bundle, args.mul, "algebra")
    C = coboundary_delta(A, _need(bundle, args.r, "tensor"))
    out = bundle.copy()
    out.add(args.name, C)
    if args.json:
        print(json.dumps(bundle_to_dict(out)["coalgebras"][args.name], indent=2, sort_keys=True))
    else:
        print("\n".join(_coalgebra_lines(C)))
    return OK


def _construct(args, bundle):
    """(report of the construction's own checks, bundle with the results)."""
    from .bialgebra import PermBialgebra, assemble_manin
    from .reps import MatchedPair, Representation, deformed_product, matched_pair_sum, semidirect_product
    from .symplectic import nijenhuis_from_cosymplectic, nijenhuis_from_symplectic
    from .ybe import lift_ooperator

    rules = bundle.rules
    out = StructureBundle(bundle.field, bundle.parameters, rules, name=f"{bundle.name}:{args.what}")
    g = _need(bundle, args.mul, "algebra") if args.what != "s-from-cosymplectic" else None
    opt = lambda name, kind: _need(bundle, name, kind) if name else None

    if args.what == "semidirect":
        la, ra = _need(bundle, args.la, "algebra"), _need(bundle, args.ra, "algebra")
        rep = Representation(g, la.out, la, ra)
        prod, op = semidirect_product(g, rep, opt(args.N, "map"), opt(args.alpha, "map"), rules)
        out.add("mul", prod)
        parts = [run("PERM", {"mul": prod}, rules)]
        if op is not None:
            out.add("N", op)
            parts.append(run("NIJ", {"mul": prod, "N": op}, rules))
        return combine("semidirect product", parts), out
    if args.what == "matched-sum":
        h = _need(bundle, args.mulh, "algebra")
        acts = [_need(bundle, n, "algebra") for n in ("lg", "rg", "lh", "rh")]
        mp = MatchedPair(g, h, *acts, opt(args.N, "map"), opt(args.Nh, "map"))
        prod, op = matched_pair_sum(mp)
        out.add("mul", prod)
        parts = [run("PERM", {"mul": prod}, rules)]
        if op is not None:
            out.add("N", op)
            parts.append(run("NIJ", {"mul": prod, "N": op}, rules))
        return combine("matched pair sum", parts), out
    if args.what == "manin":
        C = _need(bundle, args.cop, "coalgebra")
        N, S = opt(args.N, "map"), opt(args.S, "map")
        triple = assemble_manin(PermBialgebra(g, C, N, S), rules)
        for name, obj in triple.slots().items():
            out.add(name, obj)
        return triple.check(rules), out
    if args.what == "deformed":
        N = _need(bundle, args.N or "N", "map")
        prod = deformed_product(g, N)
        out.add("mul", prod)
        return run("PERM", {"mul": prod}, rules), out
    if args.what == "nij-from-symplectic":
        w, r = _need(bundle, args.w, "form"), _need(bundle, args.r, "tensor")
        N = nijenhuis_from_symplectic(g, w, r, rules)
        out.add("N", N)
        return run("NIJ", {"mul": g, "N": N}, rules), out
    if args.what == "s-from-cosymplectic":
        C = _need(bundle, args.cop, "coalgebra")
        w, r = _need(bundle, args.w, "form"), _need(bundle, args.r, "tensor")
        S = nijenhuis_from_cosymplectic(C, w, r, rules)
        out.add("S", S)
        return run("NIJ_CO", {"cop": C, "S": S}, rules), out
    if args.what == "lift-oop":
        la, ra = _need(bundle, args.la, "algebra"), _need(bundle, args.ra, "algebra")
        T = _need(bundle, args.T, "map")
        prod, r = lift_ooperator(T, Representation(g, la.out, la, ra))
        out.add("mul", prod)
        out.add("r", r)
        return run("PYBE", {"mul": prod, "r": r}, rules), out
    raise UsageError(f"unknown construction {args.what!r}")


def cmd_construct(args):
    bundle = _open_bundle(args.bundle)
    report, out = _construct(args, bundle)
    data = bundle_to_dict(out)
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    if args.json:
        print(json.dumps({"report": report.as_dict(), "bundle": data}, indent=2, sort_keys=True))
    else:
        print(report.render(max_witnesses=args.witnesses))
        if not args.out:
            print(json.dumps(data, indent=2, ensure_ascii=False))
    return _exit_code(report)


def cmd_solve_ybe(args):
    bundle = _open_bundle(args.bundle)
    A = _need(bundle, args.mul, "algebra")
    if bundle.parameters:
        raise UsageError("solve-ybe needs numeric structure constants; the bundle has parameters")
    sols = classify.enumerate_symmetric_solutions(A, args.field, bundle.name, workers=args.workers)
    if args.json:
        print(json.dumps(sols.as_dict(), indent=2, sort_keys=True))
    else:
        print(f"{bundle.name} over F_{args.field}: {sols.count} symmetric solutions of P(r) = 0")
        print("components: r[i][j] for i <= j")
        for s in sols.solutions:
            print("  " + " ".join(str(v) for v in s))
    return OK


def cmd_classify2d(args):
    fields = tuple(int(p) for p in args.fields.split(",")) if args.fields else (3, 5, 7)
    reports = classify.verify_classification(fields, workers=args.workers)
    report = combine("classification of 2-dimensional perm bialgebras", list(reports.values()))
    if args.json:
        print(report.to_json())
    else:
        print(classify.format_table(reports), end="")
        print(f"overall: {report.verdict}")
    return _exit_code(report)


def cmd_corpus(args):
    names = args.names or corpus_names()
    unknown = [n for n in names if n not in CORPUS]
    if unknown:
        raise UsageError(f"unknown corpus bundle(s): {', '.join(unknown)}")
    results = verify_corpus(names)
    report = combine("corpus", list(results.values()))
    if args.json:
        print(corpus_json(results))
    else:
        for name, rep in results.items():
            print(f"{name}: {rep.verdict}")
            for p in rep.parts:
                if not p.holds or args.verbose:
                    print(f"  {p.identity}: {p.verdict}; " + "; ".join(p.notes))
    return _exit_code(report)


# ---------------------------------------------------------------- parser


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--witnesses", type=int, default=5, help="witnesses shown per identity")

    p = _Parser(prog="permlab", description="Exact checks for perm algebras, bialgebras and Yang-Baxter solutions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", parents=[common], help="check a builtin identity on a bundle")
    c.add_argument("--bundle", required=True)
    c.add_argument("--identity", required=True)
    c.add_argument("--bind", action="append", metavar="ROLE=SLOT")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("eval", parents=[common], help="evaluate the equations of a DSL file")
    c.add_argument("--bundle", required=True)
    c.add_argument("--dsl", required=True)
    c.add_argument("--bind", action="append", metavar="ROLE=SLOT")
    c.set_defaults(func=cmd_eval)

    c = sub.add_parser("delta", parents=[common], help="print the coboundary coproduct of r")
    c.add_argument("--bundle", required=True)
    c.add_argument("--r", required=True)
    c.add_argument("--mul", default="mul")
    c.add_argument("--name", default="delta_r", help="slot name used in JSON output")
    c.set_defaults(func=cmd_delta)

    c = sub.add_parser("construct", parents=[common], help="build a derived structure")
    c.add_argument(
        "what",
        choices=["semidirect", "matched-sum", "manin", "deformed", "nij-from-symplectic", "s-from-cosymplectic", "lift-oop"],
    )
    c.add_argument("--bundle", required=True)
    c.add_argument("--out", help="write the resulting bundle here")
    for name, default in (
        ("mul", "mul"), ("mulh", "mulh"), ("cop", "cop"), ("la", "la"), ("ra", "ra"),
        ("w", "w"), ("r", "r"), ("T", "T"), ("N", None), ("S", None), ("Nh", None), ("alpha", None),
    ):
        c.add_argument(f"--{name}", dest=name, default=default, help=f"slot name (default {default})")
    c.set_defaults(func=cmd_construct)

    c = sub.add_parser("solve-ybe", parents=[common], help="enumerate symmetric solutions of P(r) = 0 over F_p")
    c.add_argument("--bundle", required=True)
    c.add_argument("--field", type=int, required=True, metavar="P")
    c.add_argument("--mul", default="mul")
    c.add_argument("--workers", type=int)
    c.set_defaults(func=cmd_solve_ybe)

    c = sub.add_parser("classify2d", parents=[common], help="verify the 2-dimensional classification tables")
    c.add_argument("--fields", help="comma-separated primes for the completeness probe (default 3,5,7)")
    c.add_argument("--workers", type=int)
    c.set_defaults(func=cmd_classify2d)

    c = sub.add_parser("corpus", parents=[common], help="builtin example bundles")
    c.add_argument("action", choices=["verify"])
    c.add_argument("names", nargs="*")
    c.add_argument("-v", "--verbose", action="store_true")
    c.set_defaults(func=cmd_corpus)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except AxiomFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.report is not None:
            print(exc.report.render(), file=sys.stderr)
        return FAIL
    except PermlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
