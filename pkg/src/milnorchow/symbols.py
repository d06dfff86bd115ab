"""Formal Milnor K-theory elements.

A ``SymbolSum`` is an integer combination of n-tuples of nonzero field
elements: the tensor algebra on units, taken modulo nothing but the
convention that a tuple containing ``1`` is zero.  ``canonical`` additionally
applies multilinearity, rewriting every entry in a fixed multiplicative basis
of the field.  The Steinberg relations are never rewritten; deciding whether a
sum vanishes in K^M is the job of :mod:`milnorchow.oracles`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _cartesian

from sympy import isprime

from .algebra.factor import factor, supports_factorization
from .algebra.fields import Rationals, RationalFunctionField
from .algebra.finite import discrete_log, field_generator
from .errors import DegreeBoundExceeded, DomainMismatch, FieldTooLarge, UnsupportedDomain, ZeroEntry

DEFAULT_PRIME_BOUND = 10 ** 6


class SymbolSum:
    """Immutable formal sum ``sum c * {x_1, ..., x_n}`` over ``field``."""

    __slots__ = ("field", "degree", "terms", "_hash")

    def __init__(self, field, degree, terms=None):
        acc = {}
        one, zero = field.one, field.zero
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for entries, c in items:
            entries = tuple(entries)
            if len(entries) != degree:
                raise ValueError(f"tuple {entries!r} does not have length {degree}")
            if any(x == zero for x in entries):
                raise ZeroEntry("symbol entries must be nonzero")
            if c == 0 or any(x == one for x in entries):
                continue
            acc[entries] = acc.get(entries, 0) + c
        key = field.sort_key
        self.field = field
        self.degree = degree
        self.terms = tuple(sorted(((e, c) for e, c in acc.items() if c),
                                  key=lambda ec: tuple(key(x) for x in ec[0])))
        self._hash = None

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, field, degree):
        return cls(field, degree)

    @classmethod
    def integer(cls, field, m):
        return cls(field, 0, {(): m})

    @classmethod
    def raw(cls, field, entries, coeff=1):
        entries = tuple(entries)
        return cls(field, len(entries), {entries: coeff})

    # queries ------------------------------------------------------------

    def is_zero(self):
        """Formal vanishing (not vanishing in K^M)."""
        return not self.terms

    def as_integer(self):
        if self.degree != 0:
            raise ValueError("not a degree-0 element")
        return self.terms[0][1] if self.terms else 0

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return self.field == other.field and self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.degree, self.terms))
        return self._hash

    # arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, SymbolSum) or other.field != self.field:
            raise DomainMismatch("symbols over different fields")

    def __add__(self, other):
        self._check(other)
        if self.is_zero() and self.degree != other.degree:
            return other
        if other.is_zero() and self.degree != other.degree:
            return self
        if other.degree != self.degree:
            raise ValueError("adding symbols of different degree")
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return SymbolSum(self.field, self.degree, acc)

    def __neg__(self):
        return SymbolSum(self.field, self.degree, {e: -c for e, c in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return SymbolSum(self.field, self.degree, {e: k * c for e, c in self.terms})

    def __mul__(self, other):
        if isinstance(other, int):
            return other * self
        self._check(other)
        degree = self.degree + other.degree
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = e1 + e2
                acc[key] = acc.get(key, 0) + c1 * c2
        return SymbolSum(self.field, degree, acc)

    def map_entries(self, fn, field):
        """Apply a multiplicative map entrywise (e.g. an inclusion of fields)."""
        acc = {}
        for e, c in self.terms:
            key = tuple(fn(x) for x in e)
            acc[key] = acc.get(key, 0) + c
        return SymbolSum(field, self.degree, acc)

    def entries(self):
        out = []
        for e, _ in self.terms:
            out.extend(e)
        return out

    # printing -----------------------------------------------------------

    def format(self):
        if not self.terms:
            return "0"
        if self.degree == 0:
            return str(self.terms[0][1])
        F = self.field
        parts = []
        for e, c in self.terms:
            body = "{" + ", ".join(F.format(x) for x in e) + "}"
            coeff = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+", coeff + body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"SymbolSum({self.format()} over {self.field.describe()})"

    __str__ = format


def product(m, n):
    """Graded product (concatenation of tuples, bilinear)."""
    return m * n


# canonical multiplicative bases ---------------------------------------------


def _decompose_rational(x, prime_bound):
    out = []
    if x < 0:
        out.append((-1, 1))
        x = -x
    fac = {}
    for n, sign in ((x.numerator, 1), (x.denominator, -1)):
        p = 2
        while n > 1 and p <= prime_bound and p * p <= n:
            while n % p == 0:
                fac[p] = fac.get(p, 0) + sign
                n //= p
            p += 1 if p == 2 else 2
        if n > 1:
            if n <= prime_bound or isprime(n):
                fac[n] = fac.get(n, 0) + sign
            else:
                return None
    out.extend(sorted(fac.items()))
    return out


@lru_cache(maxsize=200000)
def decompose(F, x, prime_bound=DEFAULT_PRIME_BOUND):
    """Canonical basis decomposition ``x = prod atom**e``.

    Returns a tuple of ``(atom, e)`` or ``None`` when the field has no
    supported basis (the caller keeps ``x`` as an opaque atom).
    """
    if x == F.zero:
        raise ZeroEntry("zero has no decomposition")
    if x == F.one:
        return ()
    if F.is_finite:
        try:
            e = discrete_log(F, x)
        except FieldTooLarge:
            return None
        return ((field_generator(F), e),) if e else ()
    if isinstance(F, Rationals):
        parts = _decompose_rational(x, prime_bound)
        if parts is None:
            return None
        return tuple((F.from_int(p), e) for p, e in parts)
    if isinstance(F, RationalFunctionField) and supports_factorization(F.base):
        base = F.base
        c = base.div(x.num.lc, x.den.lc)
        out = []
        if c != base.one:
            inner = decompose(base, c, prime_bound)
            if inner is None:
                out.append((F.embed(c), 1))
            else:
                out.extend((F.embed(a), e) for a, e in inner)
        try:
            for poly, sign in ((x.num, 1), (x.den, -1)):
                if poly.degree > 0:
                    for f, m in factor(poly, max_degree=None).factors:
                        out.append((F.from_poly(f), sign * m))
        except (DegreeBoundExceeded, UnsupportedDomain):
            return None
        acc = {}
        for a, e in out:
            acc[a] = acc.get(a, 0) + e
        return tuple(sorted(((a, e) for a, e in acc.items() if e), key=lambda ae: F.sort_key(ae[0])))
    return None


def _torsion_order(F, a):
    """Order of a torsion basis atom (constants of a finite field, or -1), else 0."""
    if F.is_finite:
        return F.order - 1
    base = F
    while isinstance(base, RationalFunctionField):
        if not base.is_constant(a):
            return 0
        a = base.constant_value(a)
        base = base.base
    if base.is_finite:
        return base.order - 1
    return 2 if a == base.neg(base.one) else 0


def canonical(S, prime_bound=DEFAULT_PRIME_BOUND):
    """Multilinear expansion of ``S`` in the canonical basis of its field."""
    F = S.field
    acc = {}
    for entries, c in S.terms:
        slots = []
        for x in entries:
            d = decompose(F, x, prime_bound)
            slots.append([(x, 1)] if d is None else list(d))
        for choice in _cartesian(*slots):
            coeff = c
            for _, e in choice:
                coeff *= e
            if coeff:
                key = tuple(a for a, _ in choice)
                acc[key] = acc.get(key, 0) + coeff
    orders = {}
    for key in list(acc):
        m = 0
        for a in key:
            if a not in orders:
                orders[a] = _torsion_order(F, a)
            if orders[a]:
                m = math.gcd(m, orders[a])
        if m:
            acc[key] %= m
    return SymbolSum(F, S.degree, acc)


def symbol(F, entries, prime_bound=DEFAULT_PRIME_BOUND):
    """Canonical symbol ``{x_1, ..., x_n}``."""
    entries = list(entries)
    if any(x == F.zero for x in entries):
        raise ZeroEntry("symbol entries must be nonzero")
    return canonical(SymbolSum.raw(F, entries), prime_bound)


def is_canonical_supported(F):
    return F.is_finite or isinstance(F, Rationals) or (
        isinstance(F, RationalFunctionField) and supports_factorization(F.base))


# the xi-extended algebra -------------------------------------------------------


@dataclass(frozen=True)
class XiElem:
    """``even + xi * odd`` with ``xi`` skew-commutative, ``xi^2 = xi {-1}``."""

    even: SymbolSum
    odd: SymbolSum

    @classmethod
    def identity(cls, field):
        return cls(SymbolSum.integer(field, 1), SymbolSum.zero(field, -1))


def xi_mul(z, i, u):
    """Right-multiply ``z`` by ``(i xi + {u})``."""
    F = z.even.field
    if u == F.zero:
        raise ZeroEntry("unit part must be nonzero")
    n = z.even.degree
    u_sym = SymbolSum.raw(F, [u])
    minus_one = SymbolSum.raw(F, [F.neg(F.one)])
    even = z.even * u_sym
    odd = (i * (-1) ** n) * z.even
    if not z.odd.is_zero():
        odd = odd + z.odd * u_sym + (i * (-1) ** (n - 1)) * (minus_one * z.odd)
    return XiElem(even, odd)


def xi_expand(F, factors):
    """Fold ``xi_mul`` over ``[(i_1, u_1), ...]`` from the identity."""
    z = XiElem.identity(F)
    for i, u in factors:
        z = xi_mul(z, i, u)
    return z


__all__ = [
    "SymbolSum", "XiElem", "canonical", "decompose", "product", "symbol", "xi_expand", "xi_mul",
    "is_canonical_supported",
]
