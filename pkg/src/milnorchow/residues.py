"""Places of ``F(t)``, valuations, and the tame symbol.

The tame symbol of a tuple is computed through the xi-algebra: every entry is
written ``u * pi^i`` with ``u`` a unit at the place, the factors
``(i xi + {u_bar})`` are multiplied out, and the coefficient of ``xi`` is the
residue.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra.factor import DEFAULT_Q_DEGREE_BOUND, factor, valuation
from .algebra.fields import RationalFunctionField
from .algebra.poly import Poly
from .errors import UnsupportedDomain
from .rings import residue_field
from .symbols import SymbolSum, canonical, xi_expand


@dataclass(frozen=True)
class Place:
    """A finite place (monic irreducible ``poly``) or the place at infinity (``poly is None``)."""

    poly: Poly | None = None

    @classmethod
    def finite(cls, poly):
        return cls(poly.monic())

    @property
    def is_infinity(self):
        return self.poly is None

    @property
    def degree(self):
        return 1 if self.poly is None else self.poly.degree

    def sort_key(self):
        return (1, ()) if self.poly is None else (0, self.poly.sort_key())

    def format(self):
        return "place(inf)" if self.poly is None else f"place({self.poly.format()})"

    def __repr__(self):
        return self.format()


INFINITY = Place()


def _check_field(K):
    if not isinstance(K, RationalFunctionField):
        raise UnsupportedDomain(f"{K} is not a rational function field")


def valuation_unit(K, f, place):
    """``(i, u)`` with ``f = u * pi^i`` and ``u`` a unit at ``place`` (``pi = 1/t`` at infinity)."""
    _check_field(K)
    if f == K.zero:
        raise ValueError("valuation of zero")
    if place.is_infinity:
        i = f.den.degree - f.num.degree
        u = K.mul(f, K.pow(K.gen, i))
        return i, u
    pi = place.poly.with_var(K.var)
    vn, num = valuation(f.num, pi)
    vd, den = valuation(f.den, pi)
    return vn - vd, K.make(num, den)


@lru_cache(maxsize=4096)
def place_reduction(K, place):
    """Reduction map from the valuation ring at ``place`` to its residue field."""
    if place.is_infinity:
        return None
    return residue_field(K.base, place.poly.with_var(K.var))


def residue_field_of(K, place):
    return K.base if place.is_infinity else place_reduction(K, place).field


def residue_of_unit(K, u, place):
    """Image of a unit ``u`` (valuation 0) in the residue field."""
    if place.is_infinity:
        F = K.base
        return F.div(u.num.lc, u.den.lc)
    return place_reduction(K, place).reduce_fraction(u.num, u.den)


def tame_factors(K, entries, place):
    out = []
    for f in entries:
        i, u = valuation_unit(K, f, place)
        out.append((i, residue_of_unit(K, u, place)))
    return out


def tame_symbol(zeta, place, canonicalize=True):
    """``d_place(zeta)`` as a symbol over the residue field."""
    K = zeta.field
    _check_field(K)
    L = residue_field_of(K, place)
    acc = SymbolSum.zero(L, max(zeta.degree - 1, 0))
    if zeta.degree == 0:
        return acc
    acc = SymbolSum.zero(L, zeta.degree - 1)
    for entries, c in zeta.terms:
        z = xi_expand(L, tame_factors(K, entries, place))
        acc = acc + c * z.odd
    return canonical(acc) if canonicalize else acc


def residue_support(zeta, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """Finite places dividing some entry (sorted), followed by infinity."""
    K = zeta.field
    _check_field(K)
    polys = set()
    for entries, _ in zeta.terms:
        for f in entries:
            for p in (f.num, f.den):
                if p.degree > 0:
                    polys.add(p)
    places = set()
    for p in polys:
        for g, _ in factor(p, max_degree=max_degree).factors:
            places.add(Place(g.with_var(K.var)))
    return sorted(places, key=Place.sort_key) + [INFINITY]
