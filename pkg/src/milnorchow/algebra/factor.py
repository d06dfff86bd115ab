"""Univariate factorization and related decompositions.

Dispatch by coefficient field:

* finite fields          -- distinct-degree + Cantor-Zassenhaus equal-degree
* Q                      -- Zassenhaus over one prime larger than twice the
                            Mignotte bound, recombination by trial division
* k(u), k finite or Q    -- Kronecker substitution ``u -> z^N``
* infinite k[a]/(m)      -- Trager's norm method
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import nextprime

from ..errors import DegreeBoundExceeded, UnsupportedCoefficients, UnsupportedDomain, ZeroPolynomial
from .fields import PrimeField, RationalFunctionField, Rationals, SimpleExtension, QQ
from .poly import Poly, poly_gcd

DEFAULT_Q_DEGREE_BOUND = 12
EXHAUSTIVE_LIMIT = 10 ** 6
EDF_ATTEMPTS = 200
MAX_RECOMBINATIONS = 1 << 16


@dataclass(frozen=True)
class Factorization:
    """``unit * prod(f**m for f, m in factors)`` with monic, pairwise distinct ``f``."""

    unit: object
    factors: tuple = field(default_factory=tuple)

    def expand(self, like):
        F = like.field
        out = Poly.constant(F, self.unit, like.var)
        for f, m in self.factors:
            out = out * f ** m
        return out

    def __iter__(self):
        return iter(self.factors)


# squarefree and coprime bases -------------------------------------------


def _pth_root_poly(f):
    F = f.field
    p = F.characteristic
    root = getattr(F, "pth_root", None)
    if root is None:
        raise UnsupportedCoefficients(f"no p-th roots in {F}")
    return Poly(F, [root(c) for c in f.coeffs[::p]], f.var)


def squarefree_decomposition(f):
    """Pairs ``(g, i)``, ``g`` monic squarefree pairwise coprime, ``f = lc * prod g^i``."""
    if f.is_zero():
        raise ZeroPolynomial("squarefree decomposition of zero")
    f = f.monic()
    if f.degree == 0:
        return []
    out = []
    c = poly_gcd(f, f.derivative()) if not f.derivative().is_zero() else f
    w = f // c
    i = 1
    while w.degree > 0:
        y = poly_gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c // y
    if c.degree > 0:
        p = f.field.characteristic
        if p == 0:
            raise AssertionError("nontrivial cofactor in characteristic zero")
        for g, j in squarefree_decomposition(_pth_root_poly(c)):
            out.append((g, j * p))
    return _merge(out)


def _merge(pairs):
    acc = {}
    for g, i in pairs:
        acc[g] = acc.get(g, 0) + i
    return sorted(acc.items(), key=lambda gi: gi[0].sort_key())


def valuation(f, b):
    """Largest ``e`` with ``b**e | f`` and the cofactor."""
    if f.is_zero():
        raise ZeroPolynomial("valuation of zero")
    e = 0
    while True:
        q, r = divmod(f, b)
        if not r.is_zero():
            return e, f
        f, e = q, e + 1


def _insert(base, f):
    if f.degree <= 0:
        return base
    f = f.monic()
    for idx, s in enumerate(base):
        h = poly_gcd(f, s)
        if h.degree > 0:
            rest = base[:idx] + base[idx + 1:]
            for piece in (h, s // h, f // h):
                rest = _insert(rest, piece)
            return rest
    return base + [f]


def coprime_base(polys):
    """Monic squarefree pairwise coprime ``b_j`` such that every input is
    ``c * prod b_j^e_j`` with ``e_j`` uniform over the irreducible factors of
    ``b_j``.  No irreducible factorization is needed."""
    polys = [p for p in polys if not p.is_zero()]
    base = []
    for f in polys:
        base = _insert(base, f)
    changed = True
    while changed:
        changed = False
        for idx, b in enumerate(base):
            splitter = None
            d = b.derivative()
            if d.is_zero():
                splitter = _pth_root_poly(b)
            else:
                g = poly_gcd(b, d)
                if g.degree > 0:
                    splitter = g
            if splitter is None:
                for f in polys:
                    _, rest = valuation(f, b)
                    g = poly_gcd(rest, b)
                    if g.degree > 0:
                        splitter = g
                        break
            if splitter is not None:
                base = base[:idx] + base[idx + 1:]
                for piece in (splitter, b // splitter):
                    base = _insert(base, piece)
                changed = True
                break
    return sorted(base, key=lambda b: b.sort_key())


# finite fields ------------------------------------------------------------


def _ddf(f):
    F = f.field
    q = F.order
    x = Poly.gen(F, f.var)
    h = x
    out = []
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = h.powmod(q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _edf(f, d, rng):
    if f.degree == d:
        return [f]
    F = f.field
    q = F.order
    p = F.characteristic
    n = f.degree
    for _ in range(EDF_ATTEMPTS):
        a = Poly(F, [F.random(rng) for _ in range(n)], f.var)
        if a.degree <= 0:
            continue
        g = poly_gcd(a, f)
        if 0 < g.degree < n:
            break
        if p == 2:
            k = q.bit_length() - 1
            t = a
            s = a
            for _ in range(k * d - 1):
                s = (s * s) % f
                t = t + s
            g = poly_gcd(t, f)
        else:
            b = a.powmod((q ** d - 1) // 2, f)
            g = poly_gcd(b - Poly.constant(F, F.one, f.var), f)
        if 0 < g.degree < n:
            break
    else:
        return _exhaustive_split(f, d)
    return _edf(g, d, rng) + _edf(f // g, d, rng)


def _monic_polys(F, d, var):
    elems = list(F.elements())
    for rest in itertools.product(elems, repeat=d):
        yield Poly(F, tuple(rest) + (F.one,), var)


def _exhaustive_split(f, d):
    F = f.field
    if F.order ** d > EXHAUSTIVE_LIMIT:
        raise UnsupportedCoefficients("equal-degree splitting failed and exhaustive search is too large")
    out = []
    for g in _monic_polys(F, d, f.var):
        while f.degree >= d and g.divides(f):
            out.append(g)
            f = f // g
        if f.degree == 0:
            break
    return out


def _factor_finite(f, rng):
    factors = []
    for g, i in squarefree_decomposition(f):
        for h, d in _ddf(g):
            for irr in _edf(h, d, rng):
                factors.append((irr, i))
    return factors


# rationals ------------------------------------------------------------------


def _to_primitive_int(f):
    den = 1
    for c in f.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in f.coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _int_divides(h, f):
    """Exact division of integer coefficient lists; quotient or None."""
    hq = Poly(QQ, [Fraction(c) for c in h])
    fq = Poly(QQ, [Fraction(c) for c in f])
    q, r = divmod(fq, hq)
    if not r.is_zero() or any(c.denominator != 1 for c in q.coeffs):
        return None
    return [int(c) for c in q.coeffs]


def _factor_int_squarefree(f, rng):
    n = len(f) - 1
    if n <= 1:
        return [f]
    norm = math.isqrt(sum(c * c for c in f)) + 1
    P = nextprime(2 * abs(f[-1]) * (2 ** n) * norm + 1)
    while True:
        if f[-1] % P:
            Fp = PrimeField(P)
            fp = Poly(Fp, [c % P for c in f])
            if fp.is_squarefree():
                break
        P = nextprime(P)
    modular = [g for g, _ in _factor_finite(fp, rng)]
    if len(modular) == 1:
        return [f]

    def lift(g):
        half = P // 2
        return [c - P if c > half else c for c in g.coeffs]

    found = []
    rem = list(range(len(modular)))
    F = f
    s = 1
    while 2 * s <= len(rem):
        hit = None
        for subset in itertools.combinations(rem, s):
            cand = Poly.constant(Fp, F[-1] % P)
            for j in subset:
                cand = cand * modular[j]
            h = lift(cand)
            g = 0
            for c in h:
                g = math.gcd(g, c)
            h = [c // g for c in h]
            quo = _int_divides(h, F)
            if quo is not None:
                hit = (subset, h, quo)
                break
        if hit is None:
            s += 1
            continue
        subset, h, quo = hit
        if h[-1] < 0:
            h = [-c for c in h]
            quo = [-c for c in quo]
        found.append(h)
        F = quo
        rem = [j for j in rem if j not in subset]
    if len(F) > 1:
        found.append(F if F[-1] > 0 else [-c for c in F])
    return found


def _factor_rationals(f, rng, max_degree):
    if max_degree is not None and f.degree > max_degree:
        raise DegreeBoundExceeded(f"degree {f.degree} exceeds bound {max_degree} over Q")
    factors = []
    for g, i in squarefree_decomposition(f):
        for h in _factor_int_squarefree(_to_primitive_int(g), rng):
            factors.append((Poly(QQ, [Fraction(c) for c in h], f.var).monic(), i))
    return factors


# rational function fields -----------------------------------------------------


def _clear_denominators(f):
    """Return coefficient polynomials (in the inner variable) of a primitive
    multiple of ``f`` over ``k[u][t]``."""
    K = f.field
    k = K.base
    lcm = Poly.constant(k, k.one, K.var)
    for c in f.coeffs:
        lcm = (lcm * c.den) // poly_gcd(lcm, c.den)
    nums = [c.num * (lcm // c.den) for c in f.coeffs]
    cont = Poly(k, (), K.var)
    for c in nums:
        cont = poly_gcd(cont, c)
    return [c // cont for c in nums]


def _factor_rf_squarefree(f, rng, max_degree):
    K = f.field
    k = K.base
    if f.degree <= 1:
        return [f.monic()]
    if max_degree is not None and f.degree > max_degree:
        raise DegreeBoundExceeded(f"degree {f.degree} exceeds bound {max_degree}")
    G = _clear_denominators(f)
    N = f.degree + 1
    size = max(len(c.coeffs) for c in G) * N
    img = [k.zero] * size
    for j, c in enumerate(G):
        for i, a in enumerate(c.coeffs):
            img[j + N * i] = a
    image = Poly(k, img, "z")
    image_factors = factor(image, seed=rng.randrange(1 << 30), max_degree=None).factors
    pool = [m for _, m in image_factors]
    polys = [g for g, _ in image_factors]
    count = 1
    for m in pool:
        count *= m + 1
    if count > MAX_RECOMBINATIONS:
        raise DegreeBoundExceeded("too many recombination candidates")

    Gt = Poly(K, [K.from_poly(c) for c in G], f.var)
    found = []
    while Gt.degree > 1:
        candidates = []
        for exps in itertools.product(*[range(m + 1) for m in pool]):
            deg = sum(e * g.degree for e, g in zip(exps, polys))
            if 0 < deg < image.degree:
                candidates.append((deg, exps))
        candidates.sort()
        hit = None
        for _, exps in candidates:
            h = Poly.constant(k, k.one, "z")
            for e, g in zip(exps, polys):
                if e:
                    h = h * g ** e
            coeffs = {}
            for m, a in enumerate(h.coeffs):
                if a != k.zero:
                    coeffs.setdefault(m % N, {})[m // N] = a
            if not coeffs or max(coeffs) < 1:
                continue
            tc = []
            for j in range(max(coeffs) + 1):
                row = coeffs.get(j, {})
                up = [row.get(i, k.zero) for i in range(max(row) + 1)] if row else []
                tc.append(K.from_poly(Poly(k, up, K.var)))
            H = Poly(K, tc, f.var)
            q, r = divmod(Gt, H)
            if r.is_zero() and all(c.den.degree == 0 for c in q.coeffs):
                hit = (exps, H, q)
                break
        if hit is None:
            break
        exps, H, q = hit
        found.append(H.monic())
        pool = [m - e for m, e in zip(pool, exps)]
        # rescale quotient to stay in k[u][t]
        Gt = q
        image = Poly(k, [k.one], "z")
        for m, g in zip(pool, polys):
            image = image * g ** m
    if Gt.degree >= 1:
        found.append(Gt.monic())
    return found


def _factor_rf(f, rng, max_degree):
    if not (isinstance(f.field.base, (PrimeField, Rationals)) or
            (isinstance(f.field.base, SimpleExtension) and f.field.base.is_finite)):
        raise UnsupportedDomain(f"factorization over {f.field} is not supported")
    factors = []
    for g, i in squarefree_decomposition(f):
        for h in _factor_rf_squarefree(g, rng, max_degree):
            factors.append((h, i))
    return factors


# Trager ---------------------------------------------------------------------


def norm_polynomial(g):
    """``N(x) = Norm_{L(x)/K(x)} g(x)`` for ``g`` over ``L = K[a]/(m)``."""
    from .linalg import det

    L = g.field
    K = L.base
    Kx = RationalFunctionField(K, "_x")
    d = L.degree
    a = L.gen
    cols = []
    power = L.one
    for _ in range(d):
        col = []
        prods = [L.mul(c, power) for c in g.coeffs]
        for i in range(d):
            col.append(Kx.from_poly(Poly(K, [pr.coeff(i) for pr in prods], "_x")))
        cols.append(col)
        power = L.mul(power, a)
    matrix = [[cols[j][i] for j in range(d)] for i in range(d)]
    N = det(Kx, matrix)
    if N.den.degree != 0:
        raise AssertionError("norm of a polynomial is not polynomial")
    return Poly(K, N.num.scale(K.inv(N.den.lc)).coeffs, g.var)


def _factor_trager_squarefree(f, rng, max_degree):
    L = f.field
    if f.degree <= 1:
        return [f.monic()]
    a = L.gen
    for s in range(0, 50):
        shift = Poly(L, [L.mul(L.from_int(-s), a), L.one], f.var)
        g = f.compose(shift)
        N = norm_polynomial(g)
        if not N.is_squarefree():
            continue
        out = []
        for h, _ in factor(N, seed=rng.randrange(1 << 30), max_degree=max_degree).factors:
            hL = h.map_coeffs(L.embed, L)
            w = poly_gcd(g, hL)
            if w.degree > 0:
                back = Poly(L, [L.mul(L.from_int(s), a), L.one], f.var)
                out.append(w.compose(back).monic())
        return out
    raise UnsupportedCoefficients("no squarefree norm found for Trager factorization")


def _factor_trager(f, rng, max_degree):
    factors = []
    for g, i in squarefree_decomposition(f):
        for h in _factor_trager_squarefree(g, rng, max_degree):
            factors.append((h, i))
    return factors


# public ---------------------------------------------------------------------


def factor(p, seed=0, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """Factor ``p`` into a unit times monic irreducibles with multiplicity."""
    if p.is_zero():
        raise ZeroPolynomial("cannot factor the zero polynomial")
    F = p.field
    rng = random.Random(seed)
    unit = p.lc
    if p.degree == 0:
        return Factorization(unit, ())
    if F.is_finite:
        pairs = _factor_finite(p, rng)
    elif isinstance(F, Rationals):
        pairs = _factor_rationals(p, rng, max_degree)
    elif isinstance(F, RationalFunctionField):
        pairs = _factor_rf(p, rng, max_degree)
    elif isinstance(F, SimpleExtension):
        pairs = _factor_trager(p, rng, max_degree)
    else:
        raise UnsupportedDomain(f"factorization over {F} is not supported")
    return Factorization(unit, tuple(_merge(pairs)))


def poly_factor(p, seed=0, max_degree=DEFAULT_Q_DEGREE_BOUND):
    """Factorization over F_p or Q (the base coefficient fields)."""
    if not (p.field.is_finite or isinstance(p.field, Rationals)):
        raise UnsupportedDomain("poly_factor expects coefficients in F_p or Q")
    return factor(p, seed=seed, max_degree=max_degree)


def supports_factorization(F):
    if F.is_finite or isinstance(F, Rationals):
        return True
    if isinstance(F, RationalFunctionField):
        b = F.base
        return isinstance(b, (PrimeField, Rationals)) or (isinstance(b, SimpleExtension) and b.is_finite)
    if isinstance(F, SimpleExtension):
        return supports_factorization(F.base)
    return False


def is_irreducible(p):
    if p.degree <= 0:
        return False
    if p.degree == 1:
        return True
    fac = factor(p, max_degree=None)
    return len(fac.factors) == 1 and fac.factors[0][1] == 1
