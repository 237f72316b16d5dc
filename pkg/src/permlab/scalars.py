"""Exact scalars.

Three kinds of scalar appear in the library:

* ``Fraction`` (aliased as ``Rational``) for exact rational numbers,
* ``Poly``, sparse multivariate polynomials used for named parameters,
* ``FpElement``, residues modulo an odd prime, used by the enumeration code.

Polynomials may be reduced by monomial rewrite rules such as
``kappa^2 -> lambda*nu``.  Rules must have pairwise non-overlapping left
hand sides, which makes the reduction confluent without any Groebner basis
machinery.
"""

import itertools
import re
from fractions import Fraction

from .errors import OverlappingRules

Rational = Fraction


def parse_rational(text):
    """Parse ``"p/q"`` or ``"n"`` into a Fraction."""
    text = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def format_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- finite fields


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class FpElement:
    """Residue class modulo an odd prime ``p``."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        if isinstance(value, Fraction):
            value = value.numerator * pow(value.denominator, -1, p)
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError(f"mixing GF({self.p}) and GF({other.p})")
            return other
        if isinstance(other, (int, Fraction)):
            return FpElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value - o.value, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o.value - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.value * o.value, self.p)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(pow(self.value, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FpElement) or other.p == self.p else None
        if o is None or o is NotImplemented:
            return False
        return self.value == o.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    name = "QQ"
    characteristic = 0

    def convert(self, x):
        if isinstance(x, FpElement):
            raise TypeError("cannot convert a finite-field element to a rational")
        if isinstance(x, Poly):
            return x
        return Fraction(x)

    def parse(self, text):
        return parse_rational(text)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class GF:
    """The prime field of odd order p.  Characteristic 2 is rejected."""

    def __init__(self, p):
        p = int(p)
        if p == 2:
            raise ValueError("characteristic 2 is not supported")
        if not is_prime(p):
            raise ValueError(f"{p} is not a prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, value):
        return FpElement(value, self.p)

    def convert(self, x):
        if isinstance(x, Poly):
            return x.map_coefficients(self.convert)
        return FpElement(x.value if isinstance(x, FpElement) else x, self.p)

    def parse(self, text):
        return FpElement(parse_rational(text), self.p)

    def zero(self):
        return FpElement(0, self.p)

    def one(self):
        return FpElement(1, self.p)

    def elements(self):
        return [FpElement(v, self.p) for v in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, GF) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


def field_from_spec(spec):
    """``"QQ"`` / ``"Q"`` / ``"GF(7)"`` / ``"F7"`` -> field object."""
    s = str(spec).strip()
    if s.upper() in ("QQ", "Q", "RATIONALS"):
        return QQ
    m = re.fullmatch(r"(?:GF\(\s*(\d+)\s*\)|F_?(\d+))", s, re.IGNORECASE)
    if m:
        return GF(int(m.group(1) or m.group(2)))
    raise ValueError(f"unknown field {spec!r}")


# ---------------------------------------------------------------- polynomials


def _grlex_key(mono):
    return (sum(mono), mono)


def _coerce_coef(c):
    if isinstance(c, (Fraction, FpElement)):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported polynomial coefficient {c!r}")


def _fmt_coef(c):
    return format_rational(c) if isinstance(c, Fraction) else str(c)


class Poly:
    """Sparse polynomial over a prime field or the rationals.

    ``terms`` maps exponent tuples (aligned with ``gens``) to nonzero
    coefficients.  Terms are stored in decreasing graded-lex order with the
    generators compared in declaration order.
    """

    __slots__ = ("gens", "terms")

    def __init__(self, terms=None, gens=()):
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise ValueError(f"repeated generator in {gens}")
        clean = {}
        for mono, coef in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != len(gens):
                raise ValueError("monomial length does not match generators")
            coef = _coerce_coef(coef)
            if coef != 0:
                clean[mono] = coef
        ordered = sorted(clean.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", dict(ordered))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def gen(cls, name, gens=None):
        gens = tuple(gens) if gens is not None else (name,)
        mono = tuple(1 if g == name else 0 for g in gens)
        if name not in gens:
            raise ValueError(f"{name} not among {gens}")
        return cls({mono: 1}, gens)

    @classmethod
    def const(cls, c, gens=()):
        gens = tuple(gens)
        return cls({(0,) * len(gens): c}, gens)

    @classmethod
    def parse(cls, text, gens, field=None):
        """Parse ``"3/2*kappa^2*lambda - nu + 1"`` over the given generators."""
        gens = tuple(gens)
        s = re.sub(r"\s+", "", str(text))
        if not s:
            raise ValueError("empty polynomial")
        if not re.fullmatch(r"[+-]?[^+-]+([+-][^+-]+)*", s):
            raise ValueError(f"malformed polynomial {text!r}")
        conv = field.parse if field is not None else parse_rational
        total = cls({}, gens)
        for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
            coef = conv("1")
            mono = [0] * len(gens)
            for factor in body.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coef = coef * conv(factor)
                    continue
                m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?", factor)
                if not m:
                    raise ValueError(f"malformed factor {factor!r} in {text!r}")
                name, exp = m.group(1), int(m.group(2) or 1)
                if name not in gens:
                    raise ValueError(f"unknown parameter {name!r}")
                mono[gens.index(name)] += exp
            if sign == "-":
                coef = -coef
            total = total + cls({tuple(mono): coef}, gens)
        return total

    # alignment
    def with_gens(self, gens):
        gens = tuple(gens)
        if gens == self.gens:
            return self
        missing = [g for g in self.gens if g not in gens]
        for g, i in zip(self.gens, range(len(self.gens))):
            if g in missing and any(m[i] for m in self.terms):
                raise ValueError(f"generator {g} would be dropped")
        pos = [self.gens.index(g) if g in self.gens else None for g in gens]
        terms = {tuple(m[i] if i is not None else 0 for i in pos): c for m, c in self.terms.items()}
        return Poly(terms, gens)

    def _align(self, other):
        if isinstance(other, Poly):
            if other.gens == self.gens:
                return self, other
            gens = self.gens + tuple(g for g in other.gens if g not in self.gens)
            return self.with_gens(gens), other.with_gens(gens)
        if isinstance(other, (int, Fraction, FpElement)):
            return self, Poly.const(other, self.gens)
        return None, None

    # arithmetic
    def __add__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        terms = dict(a.terms)
        for m, c in b.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Poly(terms, a.gens)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.gens)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        a, b = self._align(other)
        if a is None:
            return NotImplemented
        terms = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
        return Poly(terms, a.gens)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            if not other.is_constant():
                raise ZeroDivisionError("division by a non-constant polynomial")
            other = other.constant_value()
        if isinstance(other, (int, Fraction, FpElement)):
            inv = Fraction(1, 1) / other if not isinstance(other, FpElement) else other.inverse()
            return self * inv
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        out = Poly.const(1, self.gens)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # queries
    def is_zero_poly(self):
        return not self.terms

    def is_constant(self):
        return all(sum(m) == 0 for m in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def used_gens(self):
        return tuple(g for i, g in enumerate(self.gens) if any(m[i] for m in self.terms))

    def map_coefficients(self, fn):
        return Poly({m: fn(c) for m, c in self.terms.items()}, self.gens)

    def evaluate(self, point):
        """Evaluate at ``point`` (a mapping name -> value or a sequence)."""
        if not isinstance(point, dict):
            point = dict(zip(self.gens, point))
        total = 0
        for m, c in self.terms.items():
            t = c
            for g, e in zip(self.gens, m):
                if e:
                    t = t * point[g] ** e
            total = total + t
        return total

    def __eq__(self, other):
        if isinstance(other, Poly):
            a, b = self._align(other)
            return a.terms == b.terms
        if isinstance(other, (int, Fraction, FpElement)):
            if other == 0:
                return not self.terms
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.constant_value())
        named = frozenset(
            (tuple((g, e) for g, e in zip(self.gens, m) if e), c) for m, c in self.terms.items()
        )
        return hash(named)

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms.items():
            factors = [g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, m) if e]
            neg = isinstance(c, Fraction) and c < 0
            mag = -c if neg else c
            if not factors:
                body = _fmt_coef(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _fmt_coef(mag) + "*" + "*".join(factors)
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, gens={self.gens})"


# ---------------------------------------------------------------- rewriting


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


class RewriteRule:
    """Monomial substitution ``lhs -> rhs`` with rhs below lhs in grlex."""

    def __init__(self, lhs, rhs):
        if not isinstance(lhs, Poly) or len(lhs.terms) != 1:
            raise ValueError("rule lhs must be a single monomial")
        (mono, coef), = lhs.terms.items()
        if coef != 1:
            raise ValueError("rule lhs must be monic")
        if not isinstance(rhs, Poly):
            rhs = Poly.const(rhs, lhs.gens)
        lhs, rhs = lhs._align(rhs)
        mono = next(iter(lhs.terms))
        for m in rhs.terms:
            if _grlex_key(m) >= _grlex_key(mono):
                raise ValueError(f"rule {lhs} -> {rhs} does not decrease the monomial order")
        self.lhs = lhs
        self.rhs = rhs

    @classmethod
    def parse(cls, lhs, rhs, gens, field=None):
        return cls(Poly.parse(lhs, gens, field), Poly.parse(rhs, gens, field))

    @property
    def gens(self):
        return self.lhs.gens

    def lhs_named(self):
        mono = next(iter(self.lhs.terms))
        return {g: e for g, e in zip(self.lhs.gens, mono) if e}

    def __eq__(self, other):
        return isinstance(other, RewriteRule) and self.lhs == other.lhs and self.rhs == other.rhs

    def __hash__(self):
        return hash((self.lhs, self.rhs))

    def __repr__(self):
        return f"RewriteRule({self.lhs} -> {self.rhs})"


def check_rules(rules):
    rules = list(rules)
    for a, b in itertools.permutations(rules, 2):
        la, lb = a.lhs_named(), b.lhs_named()
        if all(lb.get(g, 0) >= e for g, e in la.items()):
            raise OverlappingRules(f"{a.lhs} divides {b.lhs}")


def normalize(p, rules=()):
    """Reduce ``p`` to the unique normal form modulo the rewrite rules."""
    rules = list(rules)
    if not isinstance(p, Poly):
        return p
    if not rules:
        return p
    check_rules(rules)
    gens = p.gens
    for r in rules:
        gens = gens + tuple(g for g in r.gens if g not in gens)
    p = p.with_gens(gens)
    compiled = []
    for r in rules:
        lhs = next(iter(r.lhs.with_gens(gens).terms))
        compiled.append((lhs, r.rhs.with_gens(gens)))
    while True:
        changed = False
        out = Poly({}, gens)
        pending = {}
        for m, c in p.terms.items():
            for lhs, rhs in compiled:
                if _divides(lhs, m):
                    quotient = tuple(x - y for x, y in zip(m, lhs))
                    out = out + Poly({quotient: c}, gens) * rhs
                    changed = True
                    break
            else:
                pending[m] = pending[m] + c if m in pending else c
        p = out + Poly(pending, gens)
        if not changed:
            return p


def is_zero(x, rules=()):
    if isinstance(x, Poly):
        return normalize(x, rules).is_zero_poly()
    return x == 0


def normal_form(x, rules=()):
    return normalize(x, rules) if isinstance(x, Poly) else x


def grid_is_zero(p):
    """Polynomial identity test on the grid {0..d}^k (d = total degree)."""
    if not isinstance(p, Poly):
        return p == 0
    d = p.total_degree()
    for point in itertools.product(range(d + 1), repeat=len(p.gens)):
        if p.evaluate(point) != 0:
            return False
    return True


def is_constant_scalar(x):
    return not isinstance(x, Poly) or x.is_constant()


def format_scalar(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, int):
        return str(x)
    return str(x)


def parse_scalar(text, field=QQ, gens=()):
    """Parse a scalar string for the given field and parameter names."""
    if gens:
        p = Poly.parse(text, gens, field if isinstance(field, GF) else None)
        return p
    return field.parse(text)
