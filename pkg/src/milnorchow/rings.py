"""Semi-local rings ``k[u]`` localized at finitely many primes, quotient
rings ``R[t]/(pi)`` over them, and residue-field reductions.

Rings share a duck-typed protocol with fields (a field is a ring whose
nonzero elements are all units):

``fraction_field``, ``contains(x)``, ``is_unit(x)``, ``sample_constant(rng)``,
``constants()`` (finite enumeration or ``None``) and ``describe()``.
Ring elements are raw elements of the fraction field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra.factor import Factorization, factor, is_irreducible
from .algebra.fields import Field, RationalFunctionField, SimpleExtension
from .algebra.poly import Poly, resultant
from .errors import LeadingCoeffNotUnit, NotIrreducible, UnsupportedCoefficients, UnsupportedDomain


def _field_sample_constant(F, rng):
    if isinstance(F, RationalFunctionField):
        # polynomials of degree <= 1 in the inner variable keep coefficients small
        return F.from_poly(Poly(F.base, [F.base.random(rng), F.base.random(rng)], F.var))
    return F.random(rng)


def sample_constant(R, rng):
    if isinstance(R, Field):
        return _field_sample_constant(R, rng)
    return R.sample_constant(rng)


def constants(R):
    """Finite list of constants to enumerate exhaustively, or None."""
    if isinstance(R, Field):
        return list(R.elements()) if R.is_finite else None
    return R.constants()


class SemiLocalRing:
    """``k[u]`` localized at the complement of ``(pi_1) u ... u (pi_r)``."""

    def __init__(self, base, var, primes):
        F = RationalFunctionField(base, var)
        ps = []
        for p in primes:
            p = p.with_var(var)
            if p.field != base:
                raise UnsupportedDomain("localizing primes must have coefficients in the base field")
            p = p.monic()
            if not is_irreducible(p):
                raise NotIrreducible(f"{p.format()} is not irreducible over {base}")
            if p in ps:
                raise ValueError("localizing primes must be pairwise non-associate")
            ps.append(p)
        if not ps:
            raise ValueError("a semi-local ring needs at least one prime")
        self.base = base
        self.var = var
        self.primes = tuple(sorted(ps, key=lambda p: p.sort_key()))
        self.fraction_field = F

    def __eq__(self, other):
        return (isinstance(other, SemiLocalRing) and other.base == self.base
                and other.var == self.var and other.primes == self.primes)

    def __hash__(self):
        return hash(("loc", self.base, self.var, self.primes))

    def __repr__(self):
        return f"SemiLocalRing({self.describe()})"

    def describe(self):
        primes = ", ".join(p.format() for p in self.primes)
        return f"{self.base.describe()}[{self.var}]@loc[{primes}]"

    def variables(self):
        return self.fraction_field.variables()

    def variable(self, name):
        return self.fraction_field.variable(name)

    def height(self):
        return self.fraction_field.height()

    def contains(self, f):
        return all(not p.divides(f.den) for p in self.primes)

    def is_unit(self, f):
        if f.num.is_zero():
            return False
        return all(not p.divides(f.num) and not p.divides(f.den) for p in self.primes)

    def inverse(self, f):
        """Explicit inverse in ``A``; None when ``f`` is not a unit."""
        if not self.contains(f) or not self.is_unit(f):
            return None
        return self.fraction_field.inv(f)

    def sample_constant(self, rng):
        return self.fraction_field.embed(self.base.random(rng))

    def constants(self):
        if not self.base.is_finite:
            return None
        return [self.fraction_field.embed(c) for c in self.base.elements()]

    def random_element(self, rng, degree=1):
        """Random element of ``A`` (denominator coprime to every prime)."""
        F = self.fraction_field
        while True:
            x = F.random(rng, degree)
            if self.contains(x):
                return x

    def prime_decompose(self, c):
        """``c = unit * prod pi_j^e_j`` for ``c`` in the fraction field."""
        F = self.fraction_field
        if c == F.zero:
            raise ValueError("zero has no prime decomposition")
        unit = c
        exps = []
        for p in self.primes:
            e_num = 0
            num = unit.num
            while p.divides(num):
                num = num // p
                e_num += 1
            e_den = 0
            den = unit.den
            while p.divides(den):
                den = den // p
                e_den += 1
            e = e_num - e_den
            if e:
                unit = F.mul(unit, F.pow(F.from_poly(p), -e))
                exps.append((p, e))
        return unit, exps


class QuotientRing:
    """``R[t]/(pi)`` for ``pi`` monic, irreducible over ``Frac(R)``."""

    def __init__(self, base_ring, pi, var=None, check=True):
        F = base_ring.fraction_field
        var = var or pi.var
        if pi.field != F:
            raise UnsupportedDomain("modulus must have coefficients in the fraction field")
        if not pi.is_monic():
            if not base_ring.is_unit(pi.lc):
                raise LeadingCoeffNotUnit(f"leading coefficient of {pi.format()} is not a unit")
            pi = pi.monic()
        if not all(base_ring.contains(c) for c in pi.coeffs):
            raise UnsupportedCoefficients(f"{pi.format()} does not have coefficients in {base_ring.describe()}")
        self.base_ring = base_ring
        self.modulus = pi.with_var(var)
        self.var = var
        self.fraction_field = SimpleExtension(F, pi, var, check=check)

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and other.base_ring == self.base_ring
                and other.modulus == self.modulus and other.var == self.var)

    def __hash__(self):
        return hash(("quot", self.base_ring, self.modulus, self.var))

    def __repr__(self):
        return f"QuotientRing({self.describe()})"

    def describe(self):
        return f"{self.base_ring.describe()}[{self.var}]/({self.modulus.format()})"

    def variables(self):
        return self.fraction_field.variables()

    def variable(self, name):
        return self.fraction_field.variable(name)

    def height(self):
        return self.fraction_field.height()

    def contains(self, x):
        return all(self.base_ring.contains(c) for c in x.coeffs)

    def is_unit(self, x):
        if x.is_zero() or not self.contains(x):
            return False
        return self.base_ring.is_unit(resultant(self.modulus, x.with_var(self.var)))

    def sample_constant(self, rng):
        return self.fraction_field.embed(sample_constant(self.base_ring, rng))

    def constants(self):
        cs = constants(self.base_ring)
        if cs is None:
            return None
        return [self.fraction_field.embed(c) for c in cs]


# residue fields -----------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """Reduction ``R[t] -> R[t]/(pi)``.

    For ``deg pi == 1`` the target is the base itself and reduction is
    evaluation at the root; otherwise the target is the quotient
    (a ``SimpleExtension`` over a field, a ``QuotientRing`` over a ring).
    """

    source: object
    pi: Poly
    target: object

    @property
    def field(self):
        return self.target.fraction_field if not isinstance(self.target, Field) else self.target

    def __call__(self, p):
        F = self.source.fraction_field if not isinstance(self.source, Field) else self.source
        if self.pi.degree == 1:
            root = F.neg(self.pi.coeffs[0])
            return p(root)
        return self.field.reduce(p)

    def reduce_fraction(self, num, den):
        L = self.field
        d = self(den)
        if d == L.zero:
            raise ZeroDivisionError("denominator vanishes at the place")
        return L.div(self(num), d)


def residue_field(base, pi, var=None):
    """Residue field (or quotient ring) of ``base[t]`` at ``pi``."""
    if pi.is_zero() or pi.degree < 1:
        raise ValueError("residue field needs a non-constant polynomial")
    if isinstance(base, Field):
        if not pi.is_monic():
            pi = pi.monic()
        if pi.degree == 1:
            return Reduction(base, pi, base)
        return Reduction(base, pi, SimpleExtension(base, pi, var or pi.var))
    if not base.is_unit(pi.lc):
        raise LeadingCoeffNotUnit(f"leading coefficient of {pi.format()} is not a unit of {base.describe()}")
    pi = pi.monic()
    if not is_irreducible(pi):
        raise NotIrreducible(f"{pi.format()} is reducible")
    if pi.degree == 1:
        return Reduction(base, pi, base)
    return Reduction(base, pi, QuotientRing(base, pi, var or pi.var))


def is_unit(A, f):
    return A.is_unit(f)


def comaximal(R, p, q):
    """``p`` and ``q`` generate the unit ideal of ``R[t]`` (resultant a unit)."""
    return R.is_unit(resultant(p, q))


def ring_factor(A, p, seed=0):
    """Factor ``p`` in ``A[t]``: unit of ``A``, content primes of ``A`` (as
    constant polynomials) and monic-in-t irreducibles."""
    F = A.fraction_field
    if not all(A.contains(c) for c in p.coeffs):
        raise UnsupportedCoefficients(f"{p.format()} has coefficients outside {A.describe()}")
    fac = factor(p, seed=seed)
    unit, exps = A.prime_decompose(fac.unit)
    content = tuple((Poly.constant(F, F.from_poly(q), p.var), e) for q, e in exps)
    return Factorization(unit, content + fac.factors)


