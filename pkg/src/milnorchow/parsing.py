"""Expression grammar for domains, symbols, tuples, places and curves.

::

    domain  := base ( "(" NAME ")" )* [ "[" NAME "]" "@loc" "[" expr ("," expr)* "]" ]
    base    := "Fp(" INT ")" | "Q" | "ext(" domain "," expr "," NAME ")"
    symbol  := term ( ("+" | "-") term )*      term := [INT ["*"]] "{" expr ("," expr)* "}" | INT
    tuple   := "(" expr ("," expr)* ")"
    place   := "place(" ( expr | "inf" ) ")"
    curve   := "curve(" NAME ";" expr ("," expr)* ")"
    expr    := rational expression in + - * / ^ with integer literals and names

Parsing produces small frozen AST values; ``to_text`` prints them back so
that ``parse(to_text(x)) == x``.  ``evaluate`` interprets an expression in a
field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra.fields import QQ, Field, PrimeField, RationalFunctionField, SimpleExtension
from .errors import ParseError, UnsupportedDomain
from .rings import SemiLocalRing

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>@loc|[-+*/^(){}\[\],;]))")


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    out = []
    pos = 0
    line, line_start = 1, 0
    while True:
        while pos < len(text) and text[pos].isspace():
            if text[pos] == "\n":
                line += 1
                line_start = pos + 1
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(line, pos - line_start + 1, "a number, name or operator", text)
        kind = m.lastgroup
        out.append(Tok(kind, m.group(kind), line, m.start(kind) - line_start + 1))
        pos = m.end()
    out.append(Tok("end", "", line, pos - line_start + 1))
    return out


# expression AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


def expr_text(e, top=True):
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return "-" + expr_text(e.arg, top=False)
    if isinstance(e, Pow):
        base = expr_text(e.base, top=False)
        if not isinstance(e.base, (Num, Var)) and not base.startswith("("):
            base = f"({base})"
        return f"{base}^{e.exp}" if e.exp >= 0 else f"{base}^({e.exp})"
    body = f"{expr_text(e.left, top=False)}{e.op}{expr_text(e.right, top=False)}"
    return body if top else f"({body})"


def expr_vars(e):
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Num):
        return set()
    if isinstance(e, (Neg,)):
        return expr_vars(e.arg)
    if isinstance(e, Pow):
        return expr_vars(e.base)
    return expr_vars(e.left) | expr_vars(e.right)


# other AST nodes ----------------------------------------------------------------------


@dataclass(frozen=True)
class DomainAST:
    kind: str  # "Fp", "Q", "rf", "ext", "loc"
    p: int = 0
    base: object = None
    var: str = ""
    poly: object = None
    primes: tuple = ()


@dataclass(frozen=True)
class SymbolAST:
    degree: int
    terms: tuple  # ((coeff, (expr, ...)), ...)


@dataclass(frozen=True)
class PlaceAST:
    poly: object  # expression, or None for infinity


@dataclass(frozen=True)
class TupleAST:
    items: tuple


@dataclass(frozen=True)
class CurveAST:
    var: str
    coords: tuple


def domain_text(d):
    if d.kind == "Fp":
        return f"Fp({d.p})"
    if d.kind == "Q":
        return "Q"
    if d.kind == "rf":
        return f"{domain_text(d.base)}({d.var})"
    if d.kind == "ext":
        return f"ext({domain_text(d.base)}, {expr_text(d.poly)}, {d.var})"
    primes = ", ".join(expr_text(p) for p in d.primes)
    return f"{domain_text(d.base)}[{d.var}]@loc[{primes}]"


def symbol_text(s):
    if s.degree == 0:
        return str(s.terms[0][0]) if s.terms else "0"
    if not s.terms:
        return "0"
    out = ""
    for k, (c, entries) in enumerate(s.terms):
        body = "{" + ", ".join(expr_text(e) for e in entries) + "}"
        coeff = "" if abs(c) == 1 else str(abs(c))
        sign = "-" if c < 0 else "+"
        if k == 0:
            out = ("-" if c < 0 else "") + coeff + body
        else:
            out += f" {sign} {coeff}{body}"
    return out


def place_text(p):
    return "place(inf)" if p.poly is None else f"place({expr_text(p.poly)})"


def tuple_text(t):
    return "(" + ", ".join(expr_text(e) for e in t.items) + ")"


def curve_text(c):
    return f"curve({c.var}; " + ", ".join(expr_text(e) for e in c.coords) + ")"


# recursive-descent parser -------------------------------------------------------------


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, expected):
        t = self.tok
        raise ParseError(t.line, t.col, expected, self.text)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.fail(repr(text))

    def name(self):
        if self.tok.kind != "name":
            self.fail("a name")
        t = self.tok.text
        self.i += 1
        return t

    def integer(self):
        if self.tok.kind != "int":
            self.fail("an integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    def done(self):
        if self.tok.kind != "end":
            self.fail("end of input")

    # expressions

    def expr(self):
        left = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.tok.text
            self.i += 1
            left = Bin(op, left, self.term())
        return left

    def term(self):
        left = self.unary()
        while True:
            if self.tok.kind == "op" and self.tok.text in ("*", "/"):
                op = self.tok.text
                self.i += 1
                left = Bin(op, left, self.unary())
            elif self.tok.kind == "name" or self.tok.text == "(":
                left = Bin("*", left, self.power())  # implicit product, e.g. 3t or 2(t+1)
            else:
                return left

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.accept("^"):
            if self.accept("("):
                neg = self.accept("-")
                e = self.integer()
                self.expect(")")
            else:
                neg = self.accept("-")
                e = self.integer()
            return Pow(base, -e if neg else e)
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "name":
            self.i += 1
            return Var(t.text)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.fail("a number, a name or '('")

    def expr_list(self, close):
        items = [self.expr()]
        while self.accept(","):
            items.append(self.expr())
        self.expect(close)
        return tuple(items)

    # domains

    def domain(self):
        t = self.tok
        if t.text == "Fp":
            self.i += 1
            self.expect("(")
            d = DomainAST("Fp", p=self.integer())
            self.expect(")")
        elif t.text == "Q":
            self.i += 1
            d = DomainAST("Q")
        elif t.text == "ext":
            self.i += 1
            self.expect("(")
            base = self.domain()
            self.expect(",")
            poly = self.expr()
            self.expect(",")
            var = self.name()
            self.expect(")")
            d = DomainAST("ext", base=base, poly=poly, var=var)
        else:
            self.fail("'Fp(p)', 'Q' or 'ext(...)'")
        while True:
            if self.accept("("):
                d = DomainAST("rf", base=d, var=self.name())
                self.expect(")")
            elif self.accept("["):
                var = self.name()
                self.expect("]")
                self.expect("@loc")
                self.expect("[")
                return DomainAST("loc", base=d, var=var, primes=self.expr_list("]"))
            else:
                return d

    def symbol(self):
        terms = []
        sign = 1
        if self.accept("-"):
            sign = -1
        while True:
            c = 1
            if self.tok.kind == "int":
                c = self.integer()
                self.accept("*")
            if self.accept("{"):
                terms.append((sign * c, self.expr_list("}")))
            elif not terms and self.tok.kind == "end":
                return SymbolAST(0, ((sign * c, ()),) if c else ())
            else:
                self.fail("'{'")
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        degrees = {len(e) for _, e in terms}
        if len(degrees) != 1:
            self.fail("tuples of equal length")
        return SymbolAST(degrees.pop(), tuple(terms))

    def place(self):
        self.expect("place")
        self.expect("(")
        if self.tok.text == "inf" and self.toks[self.i + 1].text == ")":
            self.i += 1
            poly = None
        else:
            poly = self.expr()
        self.expect(")")
        return PlaceAST(poly)

    def tuple(self):
        self.expect("(")
        return TupleAST(self.expr_list(")"))

    def curve(self):
        self.expect("curve")
        self.expect("(")
        var = self.name()
        self.expect(";")
        return CurveAST(var, self.expr_list(")"))


def _run(text, method):
    p = _Parser(text)
    out = getattr(p, method)()
    p.done()
    return out


def parse_expr(text):
    return _run(text, "expr")


def parse_domain(text):
    return _run(text, "domain")


def parse_symbol(text):
    return _run(text, "symbol")


def parse_place(text):
    return _run(text, "place")


def parse_tuple(text):
    return _run(text, "tuple")


def parse_curve(text):
    return _run(text, "curve")


# evaluation ------------------------------------------------------------------------------


def evaluate(e, F):
    """Value of expression ``e`` in field ``F`` (names are the field's variables)."""
    if isinstance(e, Num):
        return F.from_int(e.value)
    if isinstance(e, Var):
        try:
            return F.variable(e.name)
        except (KeyError, ValueError, UnsupportedDomain) as exc:
            raise UnsupportedDomain(f"unknown variable {e.name!r} in {F.describe()}") from exc
    if isinstance(e, Neg):
        return F.neg(evaluate(e.arg, F))
    if isinstance(e, Pow):
        return F.pow(evaluate(e.base, F), e.exp)
    a, b = evaluate(e.left, F), evaluate(e.right, F)
    if e.op == "+":
        return F.add(a, b)
    if e.op == "-":
        return F.sub(a, b)
    if e.op == "*":
        return F.mul(a, b)
    return F.div(a, b)


def as_poly(K, f):
    """Polynomial behind an element of ``F(t)``; rejects proper fractions."""
    if f.den.degree != 0:
        raise UnsupportedDomain(f"{K.format(f)} is not a polynomial in {K.var}")
    return f.num.scale(K.base.inv(f.den.lc))


def poly_in(F, e, var):
    K = RationalFunctionField(F, var)
    return as_poly(K, evaluate(e, K))


def build_domain(d):
    """Field or semi-local ring described by a domain AST."""
    if d.kind == "Fp":
        return PrimeField(d.p)
    if d.kind == "Q":
        return QQ
    base = build_domain(d.base)
    if not isinstance(base, Field):
        raise UnsupportedDomain("only fields can be extended")
    if d.kind == "rf":
        return RationalFunctionField(base, d.var)
    if d.kind == "ext":
        return SimpleExtension(base, poly_in(base, d.poly, d.var).monic(), d.var)
    return SemiLocalRing(base, d.var, [poly_in(base, p, d.var) for p in d.primes])


def fraction_field(D):
    return D if isinstance(D, Field) else D.fraction_field


def new_variable(exprs, F, default="t"):
    """The single name in ``exprs`` that is not a variable of ``F``."""
    names = set()
    for e in exprs:
        names |= expr_vars(e)
    fresh = sorted(names - set(F.variables()))
    if len(fresh) > 1:
        raise UnsupportedDomain(f"more than one new variable: {', '.join(fresh)}")
    return fresh[0] if fresh else default


__all__ = [
    "CurveAST", "DomainAST", "PlaceAST", "SymbolAST", "TupleAST", "as_poly", "build_domain", "curve_text",
    "domain_text", "evaluate", "expr_text", "fraction_field", "new_variable", "parse_curve", "parse_domain",
    "parse_expr", "parse_place", "parse_symbol", "parse_tuple", "place_text", "poly_in", "symbol_text",
    "tokenize", "tuple_text",
]
