"""Exact fields: F_p, Q, rational function fields and simple extensions.

A field object owns the arithmetic on its *raw* values:

* ``PrimeField``        -- ints in ``[0, p)``
* ``Rationals``         -- ``fractions.Fraction``
* ``RationalFunctionField`` -- ``RatFunc(num, den)`` with ``den`` monic and
  ``gcd(num, den) == 1``
* ``SimpleExtension``   -- ``Poly`` over the base of degree ``< deg modulus``

Raw values are canonical, so ``==`` on raw values is field equality.
Every field also answers the small ring protocol used by the norm
machinery (``contains``, ``is_unit``, ``fraction_field``), where all nonzero
elements are units.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple

from sympy import isprime

from ..errors import NotIrreducible, UnsupportedCoefficients, UnsupportedDomain
from .poly import Poly, poly_gcd, poly_invmod

MAX_TOWER_HEIGHT = 4


class Field:
    is_finite = False
    characteristic = 0

    # generic helpers --------------------------------------------------

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def is_zero(self, a):
        return a == self.zero

    def from_fraction(self, q):
        q = Fraction(q)
        return self.div(self.from_int(q.numerator), self.from_int(q.denominator))

    def poly(self, coeffs, var="t"):
        return Poly(self, coeffs, var)

    def variable(self, name):
        raise UnsupportedDomain(f"unknown variable {name!r} in {self}")

    def variables(self):
        return ()

    def height(self):
        return 0

    # ring protocol ----------------------------------------------------

    @property
    def fraction_field(self):
        return self

    def contains(self, a):
        return True

    def is_unit(self, a):
        return a != self.zero

    def residue_char(self):
        return self.characteristic

    def __str__(self):
        return self.describe()


class PrimeField(Field):
    is_finite = True

    def __init__(self, p):
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise ValueError(f"{p!r} is not a prime")
        self.p = p
        self._int_mod = p
        self.characteristic = p
        self.order = p
        self.zero = 0
        self.one = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def describe(self):
        return f"Fp({self.p})"

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def sort_key(self, a):
        return a

    def format(self, a):
        return str(a)

    def random(self, rng):
        return rng.randrange(self.p)

    def elements(self):
        return iter(range(self.p))

    def pth_root(self, a):
        return a


class Rationals(Field):
    zero = Fraction(0)
    one = Fraction(1)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"

    def describe(self):
        return "Q"

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def pow(self, a, e):
        if e < 0 and a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return a ** e

    def sort_key(self, a):
        return a

    def format(self, a):
        return str(a)

    def random(self, rng, bound=9):
        num = rng.randint(-bound, bound)
        den = rng.randint(1, 3)
        return Fraction(num, den)


QQ = Rationals()


class RatFunc(NamedTuple):
    num: Poly
    den: Poly


class RationalFunctionField(Field):
    """``base(var)``; elements are reduced fractions with monic denominator."""

    def __init__(self, base, var):
        if var in base.variables():
            raise ValueError(f"variable {var!r} already used in {base}")
        if base.height() + 1 > MAX_TOWER_HEIGHT:
            raise UnsupportedDomain("tower too high")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self._one_poly = Poly.constant(base, base.one, var)
        self.zero = RatFunc(Poly(base, (), var), self._one_poly)
        self.one = RatFunc(self._one_poly, self._one_poly)

    def __eq__(self, other):
        return (isinstance(other, RationalFunctionField)
                and other.base == self.base and other.var == self.var)

    def __hash__(self):
        return hash(("RF", self.base, self.var))

    def __repr__(self):
        return f"RationalFunctionField({self.base!r}, {self.var!r})"

    def describe(self):
        return f"{self.base.describe()}({self.var})"

    def variables(self):
        return self.base.variables() + (self.var,)

    def height(self):
        return self.base.height() + 1

    # construction -----------------------------------------------------

    def make(self, num, den=None):
        """Normalize ``num/den`` (polynomials over the base in ``var``)."""
        num = num.with_var(self.var)
        if den is None:
            den = self._one_poly
        den = den.with_var(self.var)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return self.zero
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        c = den.lc
        if c != self.base.one:
            ci = self.base.inv(c)
            num, den = num.scale(ci), den.scale(ci)
        return RatFunc(num, den)

    def from_poly(self, p):
        return RatFunc(p.with_var(self.var), self._one_poly) if not p.is_zero() else self.zero

    def embed(self, c):
        return self.from_poly(Poly.constant(self.base, c, self.var))

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def from_fraction(self, q):
        return self.embed(self.base.from_fraction(q))

    @property
    def gen(self):
        return self.from_poly(Poly.gen(self.base, self.var))

    def variable(self, name):
        if name == self.var:
            return self.gen
        return self.embed(self.base.variable(name))

    def is_constant(self, a):
        return a.num.degree <= 0 and a.den.degree == 0

    def constant_value(self, a):
        return a.num.coeff(0)

    # arithmetic -------------------------------------------------------

    def add(self, a, b):
        if a.den == b.den:
            return self.make(a.num + b.num, a.den)
        return self.make(a.num * b.den + b.num * a.den, a.den * b.den)

    def neg(self, a):
        return RatFunc(-a.num, a.den)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a.num.is_zero() or b.num.is_zero():
            return self.zero
        g1 = poly_gcd(a.num, b.den)
        g2 = poly_gcd(b.num, a.den)
        an, bd = (a.num // g1, b.den // g1) if g1.degree > 0 else (a.num, b.den)
        bn, ad = (b.num // g2, a.den // g2) if g2.degree > 0 else (b.num, a.den)
        num, den = an * bn, ad * bd
        c = den.lc
        if c != self.base.one:
            ci = self.base.inv(c)
            num, den = num.scale(ci), den.scale(ci)
        return RatFunc(num, den)

    def inv(self, a):
        if a.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        c = self.base.inv(a.num.lc)
        return RatFunc(a.den.scale(c), a.num.scale(c))

    def sort_key(self, a):
        return (a.den.sort_key(), a.num.sort_key())

    def format(self, a):
        n = a.num.format()
        if a.den.degree == 0:
            return n
        if a.num.degree > 0 and len([c for c in a.num.coeffs if c != self.base.zero]) > 1:
            n = f"({n})"
        return f"{n}/({a.den.format()})"

    def pth_root(self, a):
        p = self.characteristic
        root = getattr(self.base, "pth_root", None)
        if not p or root is None:
            raise UnsupportedCoefficients(f"no p-th roots in {self}")
        parts = []
        for poly in (a.num, a.den):
            if any(c != self.base.zero for i, c in enumerate(poly.coeffs) if i % p):
                raise UnsupportedCoefficients(f"{self.format(a)} is not a p-th power")
            parts.append(Poly(self.base, [root(c) for c in poly.coeffs[::p]], self.var))
        return self.make(*parts)

    def random(self, rng, degree=2):
        num = Poly(self.base, [self.base.random(rng) for _ in range(rng.randint(0, degree) + 1)], self.var)
        if num.is_zero():
            return self.zero
        den = Poly(self.base, [self.base.random(rng) for _ in range(rng.randint(0, degree))] + [self.base.one], self.var)
        return self.make(num, den)

    def random_unit(self, rng, degree=2):
        while True:
            x = self.random(rng, degree)
            if x != self.zero:
                return x


class SimpleExtension(Field):
    """``base[var]/(modulus)`` with ``modulus`` monic.

    With ``check=True`` the modulus is verified irreducible (so the quotient is
    a field).  ``check=False`` builds the quotient algebra without the check;
    it is used internally for etale algebras ``F[t]/(g)`` with ``g`` squarefree,
    where inverses exist exactly for elements coprime to ``g``.
    """

    def __init__(self, base, modulus, var=None, check=True):
        var = var or modulus.var
        if modulus.degree < 1 or not modulus.is_monic():
            raise ValueError("modulus must be monic of positive degree")
        if var in base.variables():
            raise ValueError(f"variable {var!r} already used in {base}")
        if base.height() + 1 > MAX_TOWER_HEIGHT:
            raise UnsupportedDomain("tower too high")
        self.base = base
        self.modulus = modulus.with_var(var)
        self.var = var
        self.degree = modulus.degree
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        if self.is_finite:
            self.order = base.order ** self.degree
        self.zero = Poly(base, (), var)
        self.one = Poly.constant(base, base.one, var)
        self.is_field = False
        if check:
            from .factor import is_irreducible

            if not is_irreducible(self.modulus):
                raise NotIrreducible(f"{self.modulus.format()} is reducible over {base}")
            self.is_field = True

    def __eq__(self, other):
        return (isinstance(other, SimpleExtension) and other.base == self.base
                and other.modulus == self.modulus and other.var == self.var)

    def __hash__(self):
        return hash(("ext", self.base, self.modulus, self.var))

    def __repr__(self):
        return f"SimpleExtension({self.base!r}, {self.modulus.format()!r}, {self.var!r})"

    def describe(self):
        return f"ext({self.base.describe()}, {self.modulus.format()}, {self.var})"

    def variables(self):
        return self.base.variables() + (self.var,)

    def height(self):
        return self.base.height() + 1

    def reduce(self, p):
        """Image of a polynomial over the base (in ``var``) in the quotient."""
        return (p.with_var(self.var)) % self.modulus

    def embed(self, c):
        return Poly.constant(self.base, c, self.var)

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def from_fraction(self, q):
        return self.embed(self.base.from_fraction(q))

    @property
    def gen(self):
        return self.reduce(Poly.gen(self.base, self.var))

    def variable(self, name):
        if name == self.var:
            return self.gen
        return self.embed(self.base.variable(name))

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return (a * b) % self.modulus

    def inv(self, a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of zero")
        try:
            return poly_invmod(a, self.modulus)
        except Exception as exc:
            raise ZeroDivisionError(f"{a.format()} is a zero divisor") from exc

    def is_unit(self, a):
        if a.is_zero():
            return False
        return poly_gcd(a, self.modulus).degree == 0

    def sort_key(self, a):
        return a.sort_key()

    def format(self, a):
        return a.format()

    def random(self, rng):
        return Poly(self.base, [self.base.random(rng) for _ in range(self.degree)], self.var)

    def elements(self):
        if not self.is_finite:
            raise UnsupportedDomain("cannot enumerate an infinite field")
        for length in range(self.degree + 1):
            if length == 0:
                yield self.zero
                continue
            for lead in itertools.islice(self.base.elements(), 1, None):
                for rest in itertools.product(list(self.base.elements()), repeat=length - 1):
                    yield Poly(self.base, tuple(rest) + (lead,), self.var)

    def pth_root(self, a):
        p = self.characteristic
        if not self.is_finite:
            raise UnsupportedDomain("p-th roots only in finite fields")
        return self.pow(a, self.order // p)


def tower(field):
    """List ``[field, base, base.base, ...]`` down to the prime field or Q."""
    out = [field]
    while hasattr(out[-1], "base"):
        out.append(out[-1].base)
    return out
