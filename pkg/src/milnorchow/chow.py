"""Zero-cycles on the cube, parametrized curves and their boundaries, the
graph map ``rho`` and its inverse through norms.

A parametrized curve ``W = (g_1(s), ..., g_{n+1}(s))`` meets the face
``x_i = 0`` (resp. ``x_i = inf``) at the zeros (resp. poles) of ``g_i``.  Each
such locus is a closed point of the ``s``-line with residue field
``F[s]/(m)`` (or ``F`` at ``s = inf``), and contributes the point
``(g_j mod m)_{j != i}`` with coefficient ``(-1)^(i-1) * ord_m(g_i)``.  A
locus where another coordinate equals 1 lies outside the cube and is
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.factor import DEFAULT_Q_DEGREE_BOUND, factor, valuation
from .algebra.fields import Field, RationalFunctionField, SimpleExtension
from .errors import NotAdmissible, NotInCube, UnsupportedTower
from .ktheory import tower_norm
from .oracles import eq_zero
from .residues import INFINITY, Place
from .symbols import SymbolSum


@dataclass(frozen=True)
class CubePoint:
    """A point of the cube with coordinates in ``field`` (``F`` or an extension of it)."""

    field: object
    coords: tuple

    def __post_init__(self):
        L = self.field
        for z in self.coords:
            if z == L.zero or z == L.one:
                raise NotInCube(f"coordinate {L.format(z)} is 0 or 1")

    @property
    def n(self):
        return len(self.coords)

    def sort_key(self):
        return (self.field.describe(), tuple(self.field.sort_key(z) for z in self.coords))

    def format(self):
        body = "(" + ", ".join(self.field.format(z) for z in self.coords) + ")"
        if isinstance(self.field, SimpleExtension):
            body += " @ " + self.field.describe()
        return "[" + body + "]"


class ZeroCycle:
    """Integer combination of cube points over a common base field."""

    def __init__(self, base, n, terms=None):
        acc = {}
        for p, c in (terms.items() if isinstance(terms, dict) else (terms or ())):
            if p.n != n:
                raise ValueError("point of the wrong dimension")
            acc[p] = acc.get(p, 0) + c
        self.base = base
        self.n = n
        self.terms = tuple(sorted(((p, c) for p, c in acc.items() if c), key=lambda pc: pc[0].sort_key()))

    def __eq__(self, other):
        return isinstance(other, ZeroCycle) and (self.base, self.n, self.terms) == (other.base, other.n, other.terms)

    def __hash__(self):
        return hash((self.base, self.n, self.terms))

    def __add__(self, other):
        return ZeroCycle(self.base, self.n, list(self.terms) + list(other.terms))

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Sum of coefficients weighted by the degree of the field of definition."""
        total = 0
        for p, c in self.terms:
            total += c * (p.field.degree if isinstance(p.field, SimpleExtension) else 1)
        return total

    def format(self):
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms:
            coeff = "" if abs(c) == 1 else str(abs(c))
            parts.append(("-" if c < 0 else "+", coeff + p.format()))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"ZeroCycle({self.format()})"


@dataclass(frozen=True)
class ParamCurve:
    """Rational curve ``s -> (g_1(s), ..., g_{n+1}(s))`` over ``field = F(s)``."""

    field: RationalFunctionField
    coords: tuple

    def __post_init__(self):
        K = self.field
        if not isinstance(K, RationalFunctionField):
            raise ValueError("curves are parametrized over a rational function field")
        if len(self.coords) < 1:
            raise ValueError("a curve needs at least one coordinate")
        for g in self.coords:
            if g == K.zero or g == K.one:
                raise NotInCube(f"coordinate {K.format(g)} is identically 0 or 1")
        if all(K.is_constant(g) for g in self.coords):
            raise ValueError("all coordinates are constant")

    @property
    def base(self):
        return self.field.base

    @property
    def n(self):
        return len(self.coords) - 1

    def is_degenerate(self):
        """Exactly one coordinate moves: the curve is pulled back from a point
        and its face contributions cancel in pairs."""
        return sum(not self.field.is_constant(g) for g in self.coords) == 1

    def format(self):
        K = self.field
        return f"curve({K.var}; " + ", ".join(K.format(g) for g in self.coords) + ")"


@dataclass(frozen=True)
class Locus:
    place: Place
    orders: tuple
    values: tuple

    @property
    def degree(self):
        return self.place.degree


def _locus(W, place):
    """Orders of every coordinate at ``place`` and the residues of the units."""
    K = W.field
    F = K.base
    orders, values = [], []
    if place.is_infinity:
        L = F
    else:
        m = place.poly
        L = F if m.degree == 1 else SimpleExtension(F, m, m.var, check=False)
    for g in W.coords:
        if place.is_infinity:
            o = g.den.degree - g.num.degree
            v = F.div(g.num.lc, g.den.lc) if o == 0 else None
        else:
            on, num = valuation(g.num, place.poly)
            od, den = valuation(g.den, place.poly)
            o = on - od
            if o == 0:
                if m.degree == 1:
                    root = F.neg(m.coeffs[0])
                    v = F.div(num(root), den(root))
                else:
                    v = L.div(L.reduce(num), L.reduce(den))
            else:
                v = None
        orders.append(o)
        values.append(v)
    return L, Locus(place, tuple(orders), tuple(values))


def _places(W, max_degree):
    K = W.field
    polys = set()
    for g in W.coords:
        for p in (g.num, g.den):
            if p.degree > 0:
                polys.add(p)
    places = set()
    for p in polys:
        for f, _ in factor(p, max_degree=max_degree).factors:
            places.add(Place(f.with_var(K.var)))
    return sorted(places, key=Place.sort_key) + [INFINITY]


def face_loci(W, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """Every locus where some coordinate has a zero or a pole."""
    out = []
    for place in _places(W, max_degree):
        L, loc = _locus(W, place)
        if any(loc.orders):
            out.append((L, loc))
    return out


def _outside(L, loc):
    return any(v is not None and v == L.one for v in loc.values)


def admissible_check(W, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """None when ``W`` meets the faces properly; otherwise a description of the bad locus."""
    for L, loc in face_loci(W, max_degree):
        hits = [i for i, o in enumerate(loc.orders) if o]
        if len(hits) >= 2 and not _outside(L, loc):
            return {"locus": loc.place.format(), "coordinates": [i + 1 for i in hits]}
    return None


def boundary(W, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """``sum_i (-1)^(i-1) (d_i^0 - d_i^inf) W`` as a zero-cycle in the n-cube."""
    bad = admissible_check(W, max_degree)
    if bad is not None:
        raise NotAdmissible(f"curve meets a deeper face at {bad['locus']}")
    terms = []
    for L, loc in face_loci(W, max_degree):
        if _outside(L, loc):
            continue
        for i, o in enumerate(loc.orders):
            if o:
                coords = loc.values[:i] + loc.values[i + 1:]
                terms.append((CubePoint(L, coords), (-1) ** i * o))
    return ZeroCycle(W.base, W.n, terms)


# rho and its inverse ------------------------------------------------------------------


@dataclass(frozen=True)
class GraphCycle:
    """Graph of ``(f_1, ..., f_n)`` for units of a semi-local ring; it has no boundary."""

    ring: object
    functions: tuple

    def boundary(self):
        return ZeroCycle(self.ring.fraction_field, len(self.functions))

    def format(self):
        F = self.ring.fraction_field
        return "graph(" + ", ".join(F.format(f) for f in self.functions) + ")"


def rho(domain, fs):
    """The point ``(f_1, ..., f_n)`` over a field, or the graph cycle over a semi-local ring."""
    fs = tuple(fs)
    if isinstance(domain, Field):
        for f in fs:
            if f == domain.zero:
                raise NotInCube("coordinate 0 is not a unit")
            if f == domain.one:
                raise NotInCube("coordinate 1 is outside the cube")
        return ZeroCycle(domain, len(fs), [(CubePoint(domain, fs), 1)])
    F = domain.fraction_field
    for f in fs:
        if f == F.one:
            raise NotInCube("coordinate 1 is outside the cube")
        if not (domain.contains(f) and domain.is_unit(f)):
            raise NotInCube(f"{F.format(f)} is not a unit of {domain.describe()}")
    return GraphCycle(domain, fs)


def _norm_to_base(L, F, sym, seed, method):
    if L == F:
        return sym
    if not isinstance(L, SimpleExtension):
        raise UnsupportedTower(f"{L.describe()} is not a tower of simple extensions over {F.describe()}")
    return tower_norm(L, sym, base=F, seed=seed, method=method)


def rho_inverse(Z, seed=None, method=None):
    """``sum c * N_{L/F}{z_1, ..., z_n}``; rational points give the raw symbol."""
    F = Z.base
    out = SymbolSum.zero(F, Z.n)
    for p, c in Z.terms:
        sym = SymbolSum.raw(p.field, p.coords)
        out = out + c * _norm_to_base(p.field, F, sym, seed, method)
    return out


@dataclass(frozen=True)
class SuslinReport:
    cycle: ZeroCycle
    symbol: SymbolSum
    verdict: object
    degenerate: bool


def suslin_check(W, seed=None, method=None, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """``rho^{-1}`` of the boundary of ``W``, which must vanish in ``K_n(F)``."""
    cycle = boundary(W, max_degree)
    sym = rho_inverse(cycle, seed=seed, method=method)
    verdict = eq_zero(W.base, W.n, sym)
    return SuslinReport(cycle, sym, verdict, W.is_degenerate())


__all__ = [
    "CubePoint", "GraphCycle", "Locus", "ParamCurve", "SuslinReport", "ZeroCycle", "admissible_check",
    "boundary", "face_loci", "rho", "rho_inverse", "suslin_check",
]
