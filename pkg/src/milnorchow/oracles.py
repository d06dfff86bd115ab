"""Decision procedures for vanishing in Milnor K-theory.

Supported fragments:

* ``K_0`` and ``K_1`` of any field (``K_1`` is the unit group);
* ``K_n`` of a finite field for ``n >= 2`` (always zero);
* ``K_2(Q)`` via tame symbols at odd primes and the real Hilbert symbol;
* ``K_2(F_q(u))`` via tame symbols at every finite place of ``u``;
* ``K_n(F_q(u))`` for ``n >= 3`` (always zero).

Anything else is reported as :class:`Verdict` ``undecidable``; callers never
treat that as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import factorint, isprime

from .algebra.fields import PrimeField, Rationals, RationalFunctionField
from .algebra.finite import discrete_log
from .errors import ZeroArgument
from .residues import residue_support, tame_symbol
from .symbols import DEFAULT_PRIME_BOUND, SymbolSum, xi_expand


@dataclass(frozen=True)
class Verdict:
    kind: str
    witness: tuple | None = None
    reason: str | None = None

    @classmethod
    def zero(cls):
        return cls("zero")

    @classmethod
    def nonzero(cls, what, value):
        return cls("nonzero", witness=(what, value))

    @classmethod
    def undecidable(cls, reason):
        return cls("undecidable", reason=reason)

    @property
    def is_zero(self):
        return self.kind == "zero"

    @property
    def is_nonzero(self):
        return self.kind == "nonzero"

    @property
    def is_undecidable(self):
        return self.kind == "undecidable"

    def to_json(self):
        out = {"verdict": self.kind}
        if self.witness is not None:
            out["witness"] = {"invariant": self.witness[0], "value": self.witness[1]}
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def hilbert_real(a, b):
    """Real Hilbert symbol: ``-1`` iff both arguments are negative."""
    if a == 0 or b == 0:
        raise ZeroArgument("Hilbert symbol of zero")
    return -1 if a < 0 and b < 0 else 1


def k1_discrete_log(F, x):
    return discrete_log(F, x)


def _k1_value(zeta):
    F = zeta.field
    value = F.one
    for (x,), c in zeta.terms:
        value = F.mul(value, F.pow(x, c))
    return value


def _k1_verdict(zeta, label="product"):
    F = zeta.field
    value = _k1_value(zeta)
    if value == F.one:
        return Verdict.zero()
    return Verdict.nonzero(label, F.format(value))


# K_2(Q) -------------------------------------------------------------------------


def _vp(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def _rational_primes(values, prime_bound):
    primes = set()
    for x in values:
        for n in (abs(x.numerator), x.denominator):
            if n <= 1:
                continue
            fac = factorint(n, limit=prime_bound)
            for p in fac:
                if p > prime_bound and not isprime(p):
                    return None
                primes.add(p)
    return primes


def _tame_at_prime(zeta, p):
    Fp = PrimeField(p)
    total = Fp.one
    for entries, c in zeta.terms:
        factors = []
        for x in entries:
            vn, num = _vp(x.numerator, p)
            vd, den = _vp(x.denominator, p)
            factors.append((vn - vd, Fp.div(Fp.from_int(num), Fp.from_int(den))))
        odd = xi_expand(Fp, factors).odd
        total = Fp.mul(total, Fp.pow(_k1_value(odd), c))
    return total


def _k2_rationals(zeta, prime_bound):
    values = [Fraction(x) for x in zeta.entries()]
    primes = _rational_primes(values, prime_bound)
    if primes is None:
        return Verdict.undecidable("entries could not be factored within the prime bound")
    for p in sorted(primes):
        if p == 2:
            continue
        value = _tame_at_prime(zeta, p)
        if value != 1:
            return Verdict.nonzero(f"tame symbol at p={p}", str(value))
    sign = 1
    for (a, b), c in zeta.terms:
        if hilbert_real(a, b) == -1 and c % 2:
            sign = -sign
    if sign == -1:
        return Verdict.nonzero("real Hilbert symbol", "-1")
    return Verdict.zero()


# K_2(F_q(u)) ----------------------------------------------------------------------


def _k2_function_field(zeta):
    for place in residue_support(zeta, max_degree=None):
        if place.is_infinity:
            continue
        res = tame_symbol(zeta, place, canonicalize=False)
        verdict = _k1_verdict(res)
        if verdict.is_nonzero:
            return Verdict.nonzero(f"tame symbol at {place.format()}", verdict.witness[1])
    return Verdict.zero()


def eq_zero(F, n, zeta, prime_bound=DEFAULT_PRIME_BOUND):
    """Decide whether ``zeta`` vanishes in ``K_n^M(F)``."""
    if not isinstance(zeta, SymbolSum) or zeta.field != F:
        raise ValueError("symbol does not live over the given field")
    if zeta.is_zero():
        return Verdict.zero()
    if zeta.degree != n:
        raise ValueError(f"symbol of degree {zeta.degree} tested in degree {n}")
    if n == 0:
        return Verdict.nonzero("integer", str(zeta.as_integer()))
    if n == 1:
        return _k1_verdict(zeta)
    if F.is_finite:
        return Verdict.zero()
    if isinstance(F, Rationals):
        if n == 2:
            return _k2_rationals(zeta, prime_bound)
        return Verdict.undecidable(f"K_{n} of Q is not decided")
    if isinstance(F, RationalFunctionField) and F.base.is_finite:
        if n >= 3:
            return Verdict.zero()
        return _k2_function_field(zeta)
    return Verdict.undecidable(f"K_{n} of {F.describe()} is not decided")


def equal(F, n, a, b, prime_bound=DEFAULT_PRIME_BOUND):
    return eq_zero(F, n, a - b, prime_bound)


__all__ = ["Verdict", "eq_zero", "equal", "hilbert_real", "k1_discrete_log"]
