"""Dense univariate polynomials over an exact field.

Coefficients are stored low degree first as *raw* field values; all
arithmetic is delegated to the field object, so the same class serves
F_p, Q, rational function fields and simple extensions.
"""

from __future__ import annotations

from ..errors import NotComaximal, NotCoprime, ZeroPolynomial

# degree of the zero polynomial; compares below every integer degree
DEG_ZERO = float("-inf")


class Poly:
    """Immutable polynomial ``sum(coeffs[i] * var**i)`` over ``field``.

    The variable name is cosmetic: it is used for printing only and does not
    take part in equality.
    """

    __slots__ = ("field", "coeffs", "var", "_hash")

    def __init__(self, field, coeffs=(), var="t"):
        zero = field.zero
        c = list(coeffs)
        while c and c[-1] == zero:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)
        self.var = var
        self._hash = None

    # constructors -----------------------------------------------------

    @classmethod
    def constant(cls, field, c, var="t"):
        return cls(field, (c,), var)

    @classmethod
    def gen(cls, field, var="t"):
        return cls(field, (field.zero, field.one), var)

    @classmethod
    def from_ints(cls, field, ints, var="t"):
        return cls(field, [field.from_int(a) for a in ints], var)

    def _new(self, coeffs):
        return Poly(self.field, coeffs, self.var)

    # basic queries ----------------------------------------------------

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def is_zero(self):
        return not self.coeffs

    def is_constant(self):
        return len(self.coeffs) <= 1

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    def sort_key(self):
        key = self.field.sort_key
        return (len(self.coeffs), tuple(key(c) for c in reversed(self.coeffs)))

    # arithmetic -------------------------------------------------------

    def __add__(self, other):
        F = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = F.add(out[i], c)
        return self._new(out)

    def __neg__(self):
        F = self.field
        return self._new([F.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._new(())
        F = self.field
        p = getattr(F, "_int_mod", None)
        if p is not None:
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return self._new([v % p for v in out])
        zero = F.zero
        out = [zero] * (len(a) + len(b) - 1)
        add, mul = F.add, F.mul
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                out[i + j] = add(out[i + j], mul(x, y))
        return self._new(out)

    def scale(self, c):
        F = self.field
        return self._new([F.mul(c, x) for x in self.coeffs])

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.field, self.field.one, self.var)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroPolynomial("division by the zero polynomial")
        F = self.field
        db = len(other.coeffs) - 1
        rem = list(self.coeffs)
        if len(rem) <= db:
            return self._new(()), self
        inv_lc = F.inv(other.coeffs[-1])
        q = [F.zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == F.zero:
                continue
            c = F.mul(c, inv_lc)
            q[k - db] = c
            for j in range(db + 1):
                rem[k - db + j] = F.sub(rem[k - db + j], F.mul(c, bc[j]))
        return self._new(q), self._new(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("inexact polynomial division")
        return q

    def divides(self, other):
        """True iff ``self`` divides ``other``."""
        return (other % self).is_zero()

    def monic(self):
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no monic associate")
        if self.is_monic():
            return self
        return self.scale(self.field.inv(self.lc))

    def powmod(self, e, m):
        result = Poly.constant(self.field, self.field.one, self.var) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    def derivative(self):
        F = self.field
        return self._new([F.mul(F.from_int(i), c) for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, x):
        """Horner evaluation at a raw element of the coefficient field."""
        F = self.field
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def compose(self, inner):
        acc = Poly(self.field, (), inner.var)
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly.constant(self.field, c, inner.var)
        return acc

    def map_coeffs(self, fn, field, var=None):
        return Poly(field, [fn(c) for c in self.coeffs], var or self.var)

    def with_var(self, var):
        return Poly(self.field, self.coeffs, var)

    def is_squarefree(self):
        if self.degree <= 0:
            return True
        d = self.derivative()
        if d.is_zero():
            return False
        return poly_gcd(self, d).degree == 0

    # printing ---------------------------------------------------------

    def format(self):
        F = self.field
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == F.zero:
                continue
            cs = F.format(c)
            neg = cs.startswith("-") and _is_atomic(cs[1:])
            if neg:
                cs = cs[1:]
            if i and not _is_atomic(cs):
                cs = f"({cs})"
            if i == 0:
                term = cs
            else:
                mono = self.var if i == 1 else f"{self.var}^{i}"
                term = mono if cs == "1" else f"{cs}*{mono}"
            parts.append(("-" if neg else "+", term))
        out = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
        for sign, term in parts[1:]:
            out += sign + term
        return out

    def __repr__(self):
        return f"Poly({self.format()})"

    __str__ = format


def _is_atomic(s):
    return not any(ch in s for ch in "+-/ ") or (s.startswith("(") and s.endswith(")"))


# gcd family -----------------------------------------------------------


def poly_gcd(a, b):
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a if a.is_zero() else a.monic()


def poly_xgcd(a, b):
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and ``g`` monic."""
    F = a.field
    one = Poly.constant(F, F.one, a.var)
    zero = Poly(F, (), a.var)
    r0, r1, s0, s1, t0, t1 = a, b, one, zero, zero, one
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = F.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def poly_invmod(a, m):
    """Inverse of ``a`` modulo ``m``; raises NotCoprime otherwise."""
    g, s, _ = poly_xgcd(a % m, m)
    if g.degree != 0:
        raise NotCoprime(f"{a.format()} is not invertible modulo {m.format()}")
    return s % m


def resultant(a, b):
    """Resultant ``Res(a, b) = lc(a)^deg(b) * prod b(alpha)`` over the roots of ``a``."""
    if a.is_zero() or b.is_zero():
        raise ZeroPolynomial("resultant of the zero polynomial")
    F = a.field
    res = F.one
    while True:
        da, db = a.degree, b.degree
        if db == 0:
            return F.mul(res, F.pow(b.lc, da))
        if da == 0:
            return F.mul(res, F.pow(a.lc, db))
        r = a % b
        if r.is_zero():
            return F.zero
        factor = F.pow(b.lc, da - r.degree)
        if (da * db) % 2:
            factor = F.neg(factor)
        res = F.mul(res, factor)
        a, b = b, r


def crt_combine(congruences):
    """Solve ``x = v_i mod m_i`` for pairwise comaximal moduli.

    Returns ``(x, M)`` with ``deg x < deg M`` and ``M = prod m_i``.
    """
    if not congruences:
        raise ValueError("empty congruence list")
    x, m = congruences[0]
    x = x % m
    for v, n in congruences[1:]:
        g, s, _ = poly_xgcd(m, n)
        if g.degree != 0:
            raise NotComaximal(f"moduli {m.format()} and {n.format()} are not coprime")
        # x + m*s*(v - x) satisfies both congruences since s*m = 1 mod n
        x = (x + m * ((s * (v - x)) % n)) % (m * n)
        m = m * n
    return x, m
