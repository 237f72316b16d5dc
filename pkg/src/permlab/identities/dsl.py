"""A small language for multilinear identities.

Examples::

    N(x)*N(y) + N(N(x*y)) == N(N(x)*y) + N(x*N(y))
    cop1(cop1(x)) ox cop2(cop1(x)) ox cop2(x) == cop1(x) ox cop1(cop2(x)) ox cop2(cop2(x))
    w(x*y, z) == w(x, cop1(z))*w(y, cop2(z))

Syntax:

* lowercase identifiers are free variables, quantified over basis vectors;
* ``a*b`` multiplies with the product bound to ``mul``; a numeric factor
  such as ``2*x`` or ``3/2*x`` scales, and a scalar-valued factor scales too;
* ``f(a)`` applies a linear map, ``op(a, b)`` applies a bilinear operation
  (a product or an action); when ``op`` is a form name the result is a scalar;
* ``cop1(a)`` / ``cop2(a)`` are the two Sweedler legs of the coproduct bound
  to ``cop``; occurrences with the same argument share one summation;
* ``r^1`` / ``r^2`` are the legs of the bound rank-2 tensor ``r``; a second,
  independent summation over the same tensor uses another name (``rb``);
* ``a ox b`` is the tensor product, ``tau(a)`` flips a rank-2 value and
  ``tau13(a)`` swaps legs 1 and 3;
* ``0`` is the zero of any rank; ``==`` separates the members of a chain.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import FreeVarMismatch, ParseError, RankMismatch

DEFAULT_FORMS = frozenset({"B", "w", "omega"})
DEFAULT_COALGEBRAS = frozenset({"cop"})


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class TensorLeg(Expr):
    tensor: str
    leg: int


@dataclass(frozen=True)
class Apply(Expr):
    fn: str
    arg: Expr


@dataclass(frozen=True)
class Mul(Expr):
    """Bilinear operation; ``op=None`` means the default product ``*``."""

    left: Expr
    right: Expr
    op: str = None


@dataclass(frozen=True)
class Coprod(Expr):
    arg: Expr
    leg: int
    coalgebra: str = "cop"


@dataclass(frozen=True)
class TensorConcat(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class FlipLegs(Expr):
    arg: Expr
    i: int = 1
    j: int = 2


@dataclass(frozen=True)
class Pair(Expr):
    form: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class ScalarMul(Expr):
    coef: Fraction
    arg: Expr


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple


@dataclass(frozen=True)
class Zero(Expr):
    pass


@dataclass(frozen=True)
class Equation:
    sides: tuple

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class _Num:
    value: Fraction
    pos: int


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(r"\s*(?:(==)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/(),^]))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        kind = ("op", "num", "name", "op")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, forms, coalgebras):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.forms = forms
        self.coalgebras = coalgebras

    def peek(self, k=0):
        return self.tokens[self.i + k]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2], self.text)
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], self.text)

    def equation(self):
        sides = [self.expr()]
        while self.peek()[1] == "==":
            self.next()
            sides.append(self.expr())
        if self.peek()[0] != "eof":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        if len(sides) < 2:
            raise self.error("an equation needs '=='")
        return Equation(tuple(sides))

    def expr(self):
        terms = []
        tok = self.peek()
        if tok[1] == "-":
            self.next()
            terms.append(ScalarMul(Fraction(-1), self.concat()))
        else:
            if tok[1] == "+":
                self.next()
            terms.append(self.concat())
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = self.concat()
            terms.append(ScalarMul(Fraction(-1), t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def concat(self):
        node = self.product()
        while self.peek()[0] == "name" and self.peek()[1] == "ox":
            self.next()
            node = TensorConcat(node, self.product())
        return node

    def product(self):
        node = self.unary()
        while self.peek()[1] == "*":
            self.next()
            right = self.unary()
            if isinstance(node, _Num) and isinstance(right, _Num):
                node = _Num(node.value * right.value, node.pos)
            elif isinstance(node, _Num):
                node = ScalarMul(node.value, right)
            elif isinstance(right, _Num):
                node = ScalarMul(right.value, node)
            else:
                node = Mul(node, right)
        if isinstance(node, _Num):
            if node.value == 0:
                return Zero()
            raise ParseError("a bare number must multiply something", node.pos, self.text)
        return node

    def unary(self):
        tok = self.next()
        kind, value, pos = tok
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "num":
            q = Fraction(int(value))
            if self.peek()[1] == "/":
                self.next()
                den = self.next()
                if den[0] != "num" or int(den[1]) == 0:
                    raise self.error("expected a nonzero denominator", den)
                q = q / int(den[1])
            return _Num(q, pos)
        if kind != "name" or value == "ox":
            raise self.error(f"unexpected token {value or 'end of input'!r}", tok)
        if self.peek()[1] == "(":
            self.next()
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.next()
                args.append(self.expr())
            self.expect(")")
            return self.call(value, args, tok)
        if self.peek()[1] == "^":
            self.next()
            leg = self.next()
            if leg[1] not in ("1", "2"):
                raise self.error("tensor legs are ^1 or ^2", leg)
            return TensorLeg(value, int(leg[1]))
        if not re.fullmatch(r"[a-z][a-z0-9_]*", value):
            raise self.error(f"variables are lowercase identifiers, got {value!r}", tok)
        return Var(value)

    def call(self, name, args, tok):
        m = re.fullmatch(r"tau(\d)(\d)", name)
        if name == "tau" or m:
            if len(args) != 1:
                raise self.error("tau takes one argument", tok)
            i, j = (1, 2) if name == "tau" else (int(m.group(1)), int(m.group(2)))
            if i == j or not {i, j} <= {1, 2, 3}:
                raise self.error("bad legs for tau", tok)
            return FlipLegs(args[0], min(i, j), max(i, j))
        if name[:-1] in self.coalgebras and name[-1] in "12":
            if len(args) != 1:
                raise self.error("a coproduct leg takes one argument", tok)
            return Coprod(args[0], int(name[-1]), name[:-1])
        if len(args) == 1:
            return Apply(name, args[0])
        if len(args) == 2:
            if name in self.forms:
                return Pair(name, args[0], args[1])
            return Mul(args[0], args[1], name)
        raise self.error(f"{name} called with {len(args)} arguments", tok)


def parse(text, forms=DEFAULT_FORMS, coalgebras=DEFAULT_COALGEBRAS, check=True):
    """Parse one equation (or chain of equalities)."""
    eq = _Parser(text, frozenset(forms), frozenset(coalgebras)).equation()
    if check:
        check_equation(eq, text)
    return eq


def parse_file(text, **kw):
    """One equation per line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse(line, **kw))
    return out


# ---------------------------------------------------------------- tree utilities


def children(node):
    if isinstance(node, (Apply, Coprod, FlipLegs, ScalarMul)):
        return (node.arg,)
    if isinstance(node, (Mul, TensorConcat, Pair)):
        return (node.left, node.right)
    if isinstance(node, Sum):
        return node.terms
    return ()


def rebuild(node, kids):
    if isinstance(node, Apply):
        return Apply(node.fn, kids[0])
    if isinstance(node, Coprod):
        return Coprod(kids[0], node.leg, node.coalgebra)
    if isinstance(node, FlipLegs):
        return FlipLegs(kids[0], node.i, node.j)
    if isinstance(node, ScalarMul):
        return ScalarMul(node.coef, kids[0])
    if isinstance(node, Mul):
        return Mul(kids[0], kids[1], node.op)
    if isinstance(node, TensorConcat):
        return TensorConcat(kids[0], kids[1])
    if isinstance(node, Pair):
        return Pair(node.form, kids[0], kids[1])
    if isinstance(node, Sum):
        return Sum(tuple(kids))
    return node


def walk(node):
    yield node
    for k in children(node):
        yield from walk(k)


def _find_sum(node, inside=None):
    """First Sum in pre-order, with the argument of its innermost enclosing Coprod."""
    if isinstance(node, Sum):
        return node, inside
    for k in children(node):
        nxt = node.arg if isinstance(node, Coprod) else inside
        found = _find_sum(k, nxt)
        if found is not None:
            return found
    return None


def _replace(node, target, replacement):
    if node is target:
        return replacement
    kids = children(node)
    if not kids:
        return node
    new = tuple(_replace(k, target, replacement) for k in kids)
    if all(a is b for a, b in zip(new, kids)):
        return node
    return rebuild(node, new)


def _replace_sources(node, arg, coalgebra, new_arg):
    if isinstance(node, Coprod) and node.coalgebra == coalgebra and node.arg == arg:
        return Coprod(new_arg, node.leg, coalgebra)
    kids = children(node)
    if not kids:
        return node
    return rebuild(node, tuple(_replace_sources(k, arg, coalgebra, new_arg) for k in kids))


def _enclosing_coprod(node, target):
    """The innermost Coprod whose argument contains ``target`` (by identity)."""
    best = None

    def visit(n, current):
        nonlocal best
        if n is target:
            best = current
            return True
        for k in children(n):
            if visit(k, n if isinstance(n, Coprod) else current):
                return True
        return False

    visit(node, None)
    return best


def expand(node):
    """Distribute sums so that every returned term is sum-free.

    A sum inside the argument of a coproduct leg is split consistently: all
    legs of that same coproduct source receive the same summand.
    """
    found = _find_sum(node)
    if found is None:
        return [node]
    target, _ = found
    source = _enclosing_coprod(node, target)
    out = []
    for summand in target.terms:
        if source is None:
            new = _replace(node, target, summand)
        else:
            new_arg = _replace(source.arg, target, summand)
            new = _replace_sources(node, source.arg, source.coalgebra, new_arg)
        out.extend(expand(new))
    return out


# ---------------------------------------------------------------- static checks


def rank(node, text=None):
    """Tensor rank of ``node``; ``None`` for the rank-polymorphic zero."""
    if isinstance(node, (Var, TensorLeg)):
        return 1
    if isinstance(node, Zero):
        return None
    if isinstance(node, (Apply, Coprod)):
        r = rank(node.arg, text)
        if r not in (1, None):
            raise RankMismatch(f"{type(node).__name__} needs a vector argument, got rank {r}", None, text)
        return 1
    if isinstance(node, Mul):
        a, b = rank(node.left, text), rank(node.right, text)
        if node.op is None and (a == 0 or b == 0):
            return b if a == 0 else a
        if a not in (1, None) or b not in (1, None):
            raise RankMismatch(f"product of ranks {a} and {b}", None, text)
        return 1
    if isinstance(node, Pair):
        a, b = rank(node.left, text), rank(node.right, text)
        if a not in (1, None) or b not in (1, None):
            raise RankMismatch(f"form {node.form} applied to ranks {a} and {b}", None, text)
        return 0
    if isinstance(node, ScalarMul):
        return rank(node.arg, text)
    if isinstance(node, TensorConcat):
        a, b = rank(node.left, text), rank(node.right, text)
        if not a or not b:
            raise RankMismatch("tensor product with a scalar or zero factor", None, text)
        if a + b > 3:
            raise RankMismatch("tensors above rank 3 are not supported", None, text)
        return a + b
    if isinstance(node, FlipLegs):
        r = rank(node.arg, text)
        if r is not None and r < node.j:
            raise RankMismatch(f"cannot swap legs {node.i},{node.j} of a rank-{r} value", None, text)
        return r
    if isinstance(node, Sum):
        ranks = {rank(t, text) for t in node.terms} - {None}
        if len(ranks) > 1:
            raise RankMismatch(f"sum of terms with ranks {sorted(ranks)}", None, text)
        return ranks.pop() if ranks else None
    raise TypeError(f"unknown node {node!r}")


def variable_counts(term):
    """Occurrences of each variable, counting a shared coproduct source once."""
    counts = {}
    seen = set()

    def visit(n):
        if isinstance(n, Var):
            counts[n.name] = counts.get(n.name, 0) + 1
            return
        if isinstance(n, Coprod):
            key = (n.coalgebra, n.arg)
            if key in seen:
                return
            seen.add(key)
        for k in children(n):
            visit(k)

    visit(term)
    return counts


def free_variables(eq):
    """Variables in order of first appearance."""
    out = []
    for side in eq.sides:
        for n in walk(side):
            if isinstance(n, Var) and n.name not in out:
                out.append(n.name)
    return out


def check_equation(eq, text=None):
    ranks = {rank(s, text) for s in eq.sides} - {None}
    if len(ranks) > 1:
        raise RankMismatch(f"sides have ranks {sorted(ranks)}", None, text)
    reference = None
    for side in eq.sides:
        for term in expand(side):
            if isinstance(term, Zero) or any(isinstance(n, Zero) for n in walk(term)):
                continue
            counts = variable_counts(term)
            repeated = sorted(v for v, c in counts.items() if c != 1)
            if repeated:
                raise FreeVarMismatch(
                    f"variable(s) {', '.join(repeated)} occur more than once in the term {to_text(term)}",
                    None,
                    text,
                )
            names = frozenset(counts)
            if reference is None:
                reference = names
            elif names != reference:
                raise FreeVarMismatch(
                    f"term {to_text(term)} has variables {sorted(names)}, expected {sorted(reference)}",
                    None,
                    text,
                )
    return eq


# ---------------------------------------------------------------- printer


def _fmt_coef(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _level(node):
    if isinstance(node, Sum):
        return 1
    if isinstance(node, ScalarMul):
        return 2 if node.coef < 0 else 4
    if isinstance(node, TensorConcat):
        return 3
    if isinstance(node, Mul) and node.op is None:
        return 4
    return 5


def _text(node, need):
    s = _render(node)
    return f"({s})" if _level(node) < need else s


def _render(node):
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Zero):
        return "0"
    if isinstance(node, TensorLeg):
        return f"{node.tensor}^{node.leg}"
    if isinstance(node, Apply):
        return f"{node.fn}({_text(node.arg, 1)})"
    if isinstance(node, Coprod):
        return f"{node.coalgebra}{node.leg}({_text(node.arg, 1)})"
    if isinstance(node, FlipLegs):
        name = "tau" if (node.i, node.j) == (1, 2) else f"tau{node.i}{node.j}"
        return f"{name}({_text(node.arg, 1)})"
    if isinstance(node, Pair):
        return f"{node.form}({_text(node.left, 1)}, {_text(node.right, 1)})"
    if isinstance(node, Mul):
        if node.op is not None:
            return f"{node.op}({_text(node.left, 1)}, {_text(node.right, 1)})"
        return f"{_text(node.left, 4)}*{_text(node.right, 5)}"
    if isinstance(node, TensorConcat):
        return f"{_text(node.left, 3)} ox {_text(node.right, 4)}"
    if isinstance(node, ScalarMul):
        if node.coef == -1:
            return f"-{_text(node.arg, 3)}"
        if node.coef < 0:
            return f"-({_render(ScalarMul(-node.coef, node.arg))})"
        return f"{_fmt_coef(node.coef)}*{_text(node.arg, 5)}"
    if isinstance(node, Sum):
        parts = []
        for k, t in enumerate(node.terms):
            neg = isinstance(t, ScalarMul) and t.coef == -1
            if k == 0:
                parts.append(_text(t, 2))
            elif neg:
                parts.append(f" - {_text(t.arg, 3)}")
            else:
                parts.append(f" + {_text(t, 3)}")
        return "".join(parts)
    raise TypeError(f"unknown node {node!r}")


def to_text(obj):
    if isinstance(obj, Equation):
        return " == ".join(_text(s, 1) for s in obj.sides)
    return _text(obj, 1)
