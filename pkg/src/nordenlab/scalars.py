"""Exact scalars: rationals and multivariate rational functions over Q.

A Scalar is a quotient num/den of sparse polynomials in a fixed, ordered
tuple of parameter symbols, kept in a canonical form that makes equality
(and therefore zero-testing) a structural comparison:

  * num and den have integer coefficients with joint content 1,
  * gcd(num, den) = 1 over Q[params],
  * the graded-lex leading coefficient of den is positive.

Monomials are ordered graded-lexicographically with the symbol order given
by declaration order; printing lists terms in descending order, which makes
the printed form canonical as well.  The expression grammar is

  expr   := term (('+'|'-') term)*
  term   := factor (('*'|'/') factor)*
  factor := base ('^' int)?
  base   := int | symbol | '(' expr ')' | '-' base

with symbols matching [a-z][a-z0-9]* and parse(print(s)) == s on canonical
strings.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

from .errors import (
    DenominatorVanishes,
    DivisionByZero,
    ExprSyntaxError,
    InternalInvariantViolation,
    MissingSymbol,
    UnknownSymbol,
)

Rational = Fraction


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    # gcd on Q as a Z-module: gcd(p/q, r/s) = gcd(ps, rq)/(qs); positive.
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    return Fraction(_int_gcd(a.numerator * b.denominator,
                             b.numerator * a.denominator),
                    a.denominator * b.denominator)


def _grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    """Sparse multivariate polynomial with Fraction coefficients.

    terms maps exponent tuples (length nvars) to nonzero coefficients.
    Instances are immutable.
    """

    __slots__ = ("nvars", "terms", "_hash", "_const")

    def __init__(self, nvars, terms):
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c != 0}
        self._hash = None
        if not self.terms:
            self._const = Fraction(0)
        elif len(self.terms) == 1:
            e, c = next(iter(self.terms.items()))
            self._const = c if not any(e) else None
        else:
            self._const = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars, value):
        value = Fraction(value)
        if value == 0:
            return cls(nvars, {})
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, index):
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, {tuple(exps): Fraction(1)})

    # -- basic queries ----------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return self._const is not None

    def const_value(self):
        if self._const is not None:
            return self._const
        return next(iter(self.terms.values()))

    def leading_exponent(self):
        return max(self.terms, key=_grlex_key)

    def leading_coeff(self):
        return self.terms[self.leading_exponent()]

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, Poly) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms!r})"

    # -- ring operations ---------------------------------------------------

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if not self.terms:
            return other
        if not other.terms:
            return self
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            if s is None:
                terms[e] = c
            else:
                s = s + c
                if s == 0:
                    del terms[e]
                else:
                    terms[e] = s
        return Poly(self.nvars, terms)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        value = Fraction(value)
        if value == 0:
            return Poly.zero(self.nvars)
        if value == 1:
            return self
        return Poly(self.nvars, {e: c * value for e, c in self.terms.items()})

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        if other.is_const():
            return self.scale(other.const_value())
        if self.is_const():
            return other.scale(self.const_value())
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e)
                terms[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly(self.nvars, terms)

    def __pow__(self, power):
        if power < 0:
            raise ValueError("negative power on a Poly")
        result = Poly.const(self.nvars, 1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    # -- content and primitive parts --------------------------------------

    def content(self):
        """Positive rational c with self/c integer-primitive (0 for zero)."""
        c = Fraction(0)
        for coeff in self.terms.values():
            c = _frac_gcd(c, coeff)
        return c

    def primitive(self):
        """(content, primitive part); the sign stays in the primitive part."""
        c = self.content()
        if c == 0:
            return Fraction(0), self
        return c, self.scale(1 / c)

    # -- structure in a chosen variable ------------------------------------

    def degree_in(self, v):
        if not self.terms:
            return -1
        return max(e[v] for e in self.terms)

    def coeffs_in(self, v):
        """Map degree-in-v -> coefficient Poly (with v-exponent zeroed)."""
        out = {}
        for e, c in self.terms.items():
            d = e[v]
            e0 = e[:v] + (0,) + e[v + 1:]
            bucket = out.setdefault(d, {})
            bucket[e0] = bucket.get(e0, Fraction(0)) + c
        return {d: Poly(self.nvars, terms) for d, terms in out.items()}

    def mul_power(self, v, d):
        if d == 0:
            return self
        return Poly(self.nvars, {e[:v] + (e[v] + d,) + e[v + 1:]: c
                                 for e, c in self.terms.items()})

    def divexact(self, other):
        """Exact polynomial division; the remainder must come out zero."""
        if other.is_zero():
            raise InternalInvariantViolation("division by zero polynomial")
        if other.is_const():
            return self.scale(1 / other.const_value())
        quo = {}
        rem = self
        le_d = other.leading_exponent()
        lc_d = other.terms[le_d]
        while rem.terms:
            le_r = rem.leading_exponent()
            e = tuple(a - b for a, b in zip(le_r, le_d))
            if any(x < 0 for x in e):
                raise InternalInvariantViolation("inexact polynomial division")
            c = rem.terms[le_r] / lc_d
            quo[e] = c
            rem = rem - Poly(self.nvars, {e: c}) * other
        return Poly(self.nvars, quo)

    # -- evaluation ---------------------------------------------------------

    def eval(self, values):
        """values: one Fraction per variable, in declaration order."""
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, d in zip(values, e):
                if d:
                    term *= v ** d
            total += term
        return total


def _prem(a, b, v):
    """Pseudo-remainder of a by b in the variable v."""
    db = b.degree_in(v)
    lb = b.coeffs_in(v)[db]
    r = a
    while not r.is_zero() and r.degree_in(v) >= db:
        dr = r.degree_in(v)
        lr = r.coeffs_in(v)[dr]
        r = lb * r - (lr * b).mul_power(v, dr - db)
    return r


def _content_in(p, v):
    """gcd of the coefficient polynomials of p seen in the variable v."""
    g = None
    for coeff in p.coeffs_in(v).values():
        g = coeff if g is None else poly_gcd(g, coeff)
        if g.is_const():
            break
    return g


def poly_gcd(a, b):
    """gcd in Z[params] (content included), positive leading coefficient.

    Primitive-PRS recursion on the last occurring variable; correctness
    only is the contract -- inputs in scope stay small.
    """
    if a.is_zero():
        return _positive(b.primitive()[1]).scale(int(b.content()) or 1)
    if b.is_zero():
        return _positive(a.primitive()[1]).scale(int(a.content()) or 1)
    ca, pa = a.primitive()
    cb, pb = b.primitive()
    c = _frac_gcd(ca, cb)
    v = -1
    for i in range(a.nvars - 1, -1, -1):
        if pa.degree_in(i) > 0 or pb.degree_in(i) > 0:
            v = i
            break
    if v < 0:
        return Poly.const(a.nvars, c)
    # make both v-primitive, keep the removed contents
    conta = _content_in(pa, v)
    contb = _content_in(pb, v)
    f = pa.divexact(conta)
    g = pb.divexact(contb)
    if f.degree_in(v) < g.degree_in(v):
        f, g = g, f
    while not g.is_zero():
        r = _prem(f, g, v)
        f = g
        if r.is_zero():
            g = r
        else:
            g = r.divexact(_content_in(r, v))
    result = poly_gcd(conta, contb) * f.divexact(_content_in(f, v))
    return _positive(result.primitive()[1]).scale(int(c) or 1)


def _positive(p):
    if not p.is_zero() and p.leading_coeff() < 0:
        return -p
    return p


_CONST_CACHE = {}


class Scalar:
    """Element of the field of rational functions over Q in fixed symbols."""

    __slots__ = ("syms", "num", "den", "_hash", "_cv")

    def __init__(self, syms, num, den):
        # assumes canonical num/den; use the constructors below instead
        self.syms = syms
        self.num = num
        self.den = den
        self._hash = None
        nc = num._const
        if nc is not None and den._const is not None:
            self._cv = nc / den._const
        else:
            self._cv = None

    # -- construction -------------------------------------------------------

    @classmethod
    def make(cls, syms, num, den):
        """Build and canonicalize num/den."""
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if num.is_zero():
            return cls(syms, Poly.zero(num.nvars), Poly.const(num.nvars, 1))
        if num.is_const() and den.is_const():
            return cls.const(syms, num.const_value() / den.const_value())
        cn, pn = num.primitive()
        cd, pd = den.primitive()
        if not pd.is_const() and not pn.is_const():
            g = poly_gcd(pn, pd)
            if not g.is_const():
                pn = pn.divexact(g)
                pd = pd.divexact(g)
        ratio = cn / cd
        pn = pn.scale(ratio.numerator)
        pd = pd.scale(ratio.denominator)
        if pd.leading_coeff() < 0:
            pn, pd = -pn, -pd
        return cls(syms, pn, pd)

    @classmethod
    def const(cls, syms, value):
        value = Fraction(value)
        cached = _CONST_CACHE.get((syms, value))
        if cached is not None:
            return cached
        n = len(syms)
        out = cls(syms, Poly.const(n, value.numerator),
                  Poly.const(n, value.denominator))
        if value.numerator in (-2, -1, 0, 1, 2):
            _CONST_CACHE[(syms, value)] = out
        return out

    @classmethod
    def symbol(cls, syms, name):
        try:
            i = syms.index(name)
        except ValueError:
            raise UnknownSymbol(f"symbol {name!r} not among {syms}") from None
        return cls(syms, Poly.variable(len(syms), i),
                   Poly.const(len(syms), 1))

    # -- queries ------------------------------------------------------------

    def is_zero(self):
        return not self.num.terms

    def is_const(self):
        return self._cv is not None

    def const_value(self):
        if self._cv is None:
            raise InternalInvariantViolation("scalar is not constant")
        return self._cv

    def __eq__(self, other):
        return (isinstance(other, Scalar) and self.syms == other.syms
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.syms, self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"<Scalar {self.canonical()}>"

    def __bool__(self):
        return not self.is_zero()

    # -- field operations ----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.syms != self.syms:
            raise InternalInvariantViolation("mixed parameter contexts")

    def __add__(self, other):
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.is_const() and other.is_const():
            return Scalar.const(self.syms,
                                self.const_value() + other.const_value())
        if self.den == other.den:
            return Scalar.make(self.syms, self.num + other.num, self.den)
        return Scalar.make(self.syms,
                           self.num * other.den + other.num * self.den,
                           self.den * other.den)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Scalar(self.syms, -self.num, self.den)

    def __mul__(self, other):
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Scalar.const(self.syms, 0)
        if self.is_const():
            if other.is_const():
                return Scalar.const(self.syms,
                                    self.const_value() * other.const_value())
            return other.scale(self.const_value())
        if other.is_const():
            return self.scale(other.const_value())
        return Scalar.make(self.syms, self.num * other.num,
                           self.den * other.den)

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by the zero scalar")
        if other.is_const():
            return self.scale(1 / other.const_value())
        return Scalar.make(self.syms, self.num * other.den,
                           self.den * other.num)

    def __pow__(self, power):
        if power < 0:
            return Scalar.const(self.syms, 1) / self ** (-power)
        return Scalar.make(self.syms, self.num ** power, self.den ** power)

    def scale(self, value):
        """Multiply by a plain rational; keeps the canonical form without
        re-running the polynomial gcd."""
        value = Fraction(value)
        if value == 0 or self.is_zero():
            return Scalar.const(self.syms, 0)
        if value == 1:
            return self
        if self.is_const():
            return Scalar.const(self.syms, self.const_value() * value)
        num = self.num.scale(value.numerator)
        den = self.den.scale(value.denominator)
        g = _frac_gcd(num.content(), den.content())
        if g != 1:
            inv = 1 / g
            num = num.scale(inv)
            den = den.scale(inv)
        return Scalar(self.syms, num, den)

    # -- evaluation and printing ----------------------------------------------

    def used_symbols(self):
        used = set()
        for poly in (self.num, self.den):
            for e in poly.terms:
                for i, d in enumerate(e):
                    if d:
                        used.add(self.syms[i])
        return used

    def eval(self, assignment):
        """Exact value at a map symbol -> rational."""
        missing = self.used_symbols() - set(assignment)
        if missing:
            raise MissingSymbol(f"no value for {sorted(missing)}")
        values = [Fraction(assignment.get(s, 0)) for s in self.syms]
        d = self.den.eval(values)
        if d == 0:
            raise DenominatorVanishes(
                f"denominator {poly_str(self.den, self.syms)} vanishes")
        return self.num.eval(values) / d

    def canonical(self):
        """Canonical string; parse(canonical()) reproduces the Scalar."""
        if self.is_zero():
            return "0"
        num_s = poly_str(self.num, self.syms)
        if self.den.is_const() and self.den.const_value() == 1:
            return num_s
        if len(self.num.terms) > 1:
            num_s = "(" + num_s + ")"
        den_s = poly_str(self.den, self.syms)
        if not _poly_is_atomic_factor(self.den):
            den_s = "(" + den_s + ")"
        return num_s + "/" + den_s


def _poly_is_atomic_factor(p):
    # safe to print after '/' without parentheses: an integer, or a single
    # monomial sym^k with coefficient 1
    if len(p.terms) != 1:
        return False
    e, c = next(iter(p.terms.items()))
    nz = [d for d in e if d]
    if not nz:
        return True  # plain integer
    return c == 1 and len(nz) == 1


def poly_str(p, syms):
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, key=_grlex_key, reverse=True):
        c = p.terms[e]
        mono = "*".join(
            s if d == 1 else f"{s}^{d}"
            for s, d in zip(syms, e) if d
        )
        mag = abs(c)
        if mag.denominator != 1:
            coeff = f"{mag.numerator}/{mag.denominator}"
        else:
            coeff = str(mag.numerator)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = coeff
        if not parts:
            # grammar quirk: in a leading "-sym^k..." the sign binds to the
            # base, so "-a^2" would read back as (-a)^2; spell out the -1
            if c < 0 and mag == 1 and mono and "^" in mono.split("*")[0]:
                body = f"1*{mono}"
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


# -- expression parser --------------------------------------------------------

class _Parser:
    def __init__(self, text, syms):
        self.text = text
        self.syms = syms
        self.pos = 0

    def error(self, message):
        raise ExprSyntaxError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return ""

    def take(self, ch):
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self):
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.text[self.pos]!r}")
        return value

    def expr(self):
        value = self.term()
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            if self.take("*"):
                value = value * self.factor()
            elif self.take("/"):
                value = value / self.factor()
            else:
                return value

    def factor(self):
        value = self.base()
        if self.take("^"):
            value = value ** self.integer()
        return value

    def base(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if not self.take(")"):
                self.error("expected ')'")
            return value
        if ch == "-":
            self.pos += 1
            return -self.base()
        if ch.isdigit():
            return Scalar.const(self.syms, self.integer())
        if ch.isalpha() and ch.islower():
            return Scalar.symbol(self.syms, self.symbol_name())
        self.error("expected a number, symbol, '(' or '-'")

    def integer(self):
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def symbol_name(self):
        start = self.pos
        self.pos += 1
        while self.pos < len(self.text) and (
                self.text[self.pos].islower() or self.text[self.pos].isdigit()):
            self.pos += 1
        name = self.text[start:self.pos]
        if name not in self.syms:
            raise UnknownSymbol(f"symbol {name!r} not among {self.syms}")
        return name


# -- spec-level operations ------------------------------------------------------

def scalar_parse(text, params):
    """Parse an expression string over an ordered tuple of symbols."""
    return _Parser(text, tuple(params)).parse()


def scalar_eval(s, assignment):
    return s.eval(assignment)


def scalar_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")
