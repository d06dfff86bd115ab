"""Symbols over semi-local rings, Gabber factorizations, residue prescription
and norms.

Two routes compute the norm ``N_{L/F}`` of a symbol over ``L = F[t]/(pi)``:

* ``prescribe``: build ``zeta`` over ``F(t)`` with the prescribed residue at
  ``pi`` and no other finite residues, then read off ``-d_inf(zeta)``;
* ``recursion``: for each lifted tuple ``G = {g, p_1, ..., p_n}`` the
  reciprocity law gives
  ``N_g(d_g G) = -d_inf(G) - sum_b N_b(d_b G)``
  over a coprime base of the ``p_i``, so no factorization is needed and the
  recursion runs on etale algebras ``F[t]/(b)``.

With ``ring=A`` semi-local the recursion keeps every entry a unit of ``A``
by choosing Gabber factorizations with unit leading coefficients that are
pairwise comaximal across slots.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

from .algebra.factor import coprime_base, factor, supports_factorization, valuation
from .algebra.fields import Field, RationalFunctionField, SimpleExtension
from .algebra.poly import Poly, poly_gcd, poly_invmod, resultant
from .errors import (
    LeadingCoeffNotUnit,
    NotCoprime,
    NotFeasible,
    NotFound,
    TowerTooDeep,
    UnsupportedDomain,
    ZeroEntry,
)
from .oracles import Verdict, eq_zero
from .residues import INFINITY, Place, residue_field_of, residue_support, tame_symbol
from .rings import QuotientRing, comaximal, constants, residue_field, sample_constant
from .symbols import SymbolSum, canonical, is_canonical_supported, xi_expand

EXHAUSTIVE_LIMIT = 10 ** 6
MAX_TOWER_LEVELS = 3


def _frac(R):
    return R if isinstance(R, Field) else R.fraction_field


def _canon(S):
    return canonical(S) if is_canonical_supported(S.field) else S


# Gabber factorization ------------------------------------------------------------


def _in_ring(R, p):
    return isinstance(R, Field) or all(R.contains(c) for c in p.coeffs)


def _gabber_ok(R, pi, x, xp, ys, d):
    """Return ``x''`` when ``x'`` satisfies every constraint, else None."""
    if not comaximal(R, xp, pi):
        return None
    xpp = (x * poly_invmod(xp, pi)) % pi
    if xpp.is_zero() or xpp.degree != d - 1:
        return None
    if not R.is_unit(xpp.lc) or not _in_ring(R, xpp):
        return None
    for y in ys:
        if not comaximal(R, xp, y) or not comaximal(R, xpp, y):
            return None
    return xpp


def _verify_gabber(R, pi, x, xp, xpp, ys):
    d = pi.degree
    assert ((xp * xpp - x) % pi).is_zero()
    assert xp.degree == d - 1 and xpp.degree == d - 1
    assert R.is_unit(xp.lc) and R.is_unit(xpp.lc)
    for y in ys:
        assert comaximal(R, xp, y) and comaximal(R, xpp, y)


def gabber_factor(R, pi, x, ys=(), seed=0, rng=None, trace=None):
    """Factor ``x = x' x'' mod pi`` with ``deg x' = deg x'' = deg pi - 1``,
    unit leading coefficients, and both factors comaximal to every ``y``.

    Random monic candidates for ``x'`` come first; if those run out and the
    candidate space has at most ``EXHAUSTIVE_LIMIT`` elements it is searched
    exhaustively, otherwise ``NotFound`` is raised.
    """
    F = _frac(R)
    if not pi.is_monic():
        if not R.is_unit(pi.lc):
            raise LeadingCoeffNotUnit(f"leading coefficient of {pi.format()} is not a unit")
        pi = pi.monic()
    var = pi.var
    x = x.with_var(var) % pi
    if x.is_zero() or poly_gcd(x, pi).degree > 0:
        raise NotCoprime(f"{x.format()} is not coprime to {pi.format()}")
    ys = [y.with_var(var).monic() for y in ys if y.degree > 0]
    d = pi.degree
    if d == 1:
        c = x
        if not R.is_unit(c.lc):
            raise NotFound(0, f"{c.format()} is not a unit")
        return Poly.constant(F, F.one, var), c
    rng = rng if rng is not None else random.Random(seed)
    lead = [F.one]
    budget = 64 * (len(ys) + 2)
    attempts = 0
    for _ in range(budget):
        attempts += 1
        xp = Poly(F, [sample_constant(R, rng) for _ in range(d - 1)] + lead, var)
        xpp = _gabber_ok(R, pi, x, xp, ys, d)
        if xpp is not None:
            _verify_gabber(R, pi, x, xp, xpp, ys)
            if trace is not None:
                trace.append({"op": "gabber", "mode": "random", "attempts": attempts})
            return xp, xpp
    cs = constants(R)
    if cs is not None and len(cs) ** (d - 1) <= EXHAUSTIVE_LIMIT:
        for tail in itertools.product(cs, repeat=d - 1):
            attempts += 1
            xp = Poly(F, list(tail) + lead, var)
            xpp = _gabber_ok(R, pi, x, xp, ys, d)
            if xpp is not None:
                _verify_gabber(R, pi, x, xp, xpp, ys)
                if trace is not None:
                    trace.append({"op": "gabber", "mode": "exhaustive", "attempts": attempts})
                return xp, xpp
    if trace is not None:
        trace.append({"op": "gabber", "mode": "failed", "attempts": attempts})
    raise NotFound(attempts, f"no factorization of {x.format()} modulo {pi.format()}")


# shared machinery ---------------------------------------------------------------


@dataclass
class _Ctx:
    R: object
    rng: random.Random | None
    ring_mode: bool
    trace: list | None
    memo: dict = dc_field(default_factory=dict)

    @property
    def split(self):
        return self.ring_mode or self.rng is not None


def _lift(E, e, var, F):
    """Representative of degree ``< deg`` of an element of ``E = F[t]/(g)`` (or of ``E = F``)."""
    if E == F:
        return Poly.constant(F, e, var)
    return e.with_var(var)


def _acceptable(R, p, ys):
    return R.is_unit(p.lc) and _in_ring(R, p) and all(comaximal(R, p, y) for y in ys)


def _split_slots(ctx, g, lifts):
    """Alternatives for each slot: ``[lift]`` or a Gabber pair ``[x', x'']``."""
    R = ctx.R
    options = []
    chosen = [g]
    for p in lifts:
        if p.degree < 1 or not ctx.split:
            opts = [p]
        else:
            try:
                rng = ctx.rng if ctx.rng is not None else random.Random(0)
                opts = list(gabber_factor(R, g, p, chosen[1:], rng=rng, trace=ctx.trace))
            except NotFound:
                if ctx.ring_mode and not _acceptable(R, p, chosen):
                    raise
                opts = [p]
        options.append(opts)
        chosen.extend(q.monic() for q in opts if q.degree > 0)
    return options


def _decompose_over_base(p, base):
    """``p = c * prod b**e`` over a coprime base; returns ``(c, [(b, e)])``."""
    rest = p
    parts = []
    for b in base:
        e, rest = valuation(rest, b)
        if e:
            parts.append((b, e))
    assert rest.degree == 0
    return rest.lc, parts


def _generator_tuples(F, polys, var):
    """Expand ``{p_1, ..., p_n}`` multilinearly over a coprime base."""
    base = coprime_base([p for p in polys if p.degree > 0])
    slots = []
    for p in polys:
        c, parts = _decompose_over_base(p, base)
        slot = [(b, e) for b, e in parts]
        if c != F.one:
            slot.append((Poly.constant(F, c, var), 1))
        slots.append(slot)
    for choice in itertools.product(*slots):
        m = 1
        for _, e in choice:
            m *= e
        yield m, tuple(b for b, _ in choice)


def _infinity_part(F, G):
    factors = [(-p.degree, p.lc) for p in G]
    return xi_expand(F, factors).odd


def _residue_at(F, G, b):
    E = SimpleExtension(F, b, b.var, check=False)
    factors = []
    for p in G:
        if p == b:
            factors.append((1, E.one))
        else:
            factors.append((0, p % b))
    return xi_expand(E, factors).odd


def _norm(ctx, g, xi):
    """``N_{F[t]/(g)/F}(xi)`` for squarefree monic ``g``; raw result over ``F``."""
    key = (g, xi)
    if key in ctx.memo:
        return ctx.memo[key]
    F = g.field
    var = g.var
    if g.degree == 1:
        root = F.neg(g.coeffs[0])
        out = xi.map_entries(lambda e: _lift(xi.field, e, var, F)(root), F)
        ctx.memo[key] = out
        return out
    out = SymbolSum.zero(F, xi.degree)
    for entries, c in xi.terms:
        lifts = [_lift(xi.field, e, var, F) for e in entries]
        for choice in itertools.product(*_split_slots(ctx, g, lifts)):
            for m, rest in _generator_tuples(F, choice, var):
                G = (g,) + rest
                step = -_infinity_part(F, G)
                for b in sorted({p for p in rest if p.degree > 0}, key=Poly.sort_key):
                    step = step - _norm(ctx, b, _residue_at(F, G, b))
                out = out + (c * m) * step
    ctx.memo[key] = out
    return out


def _as_extension(L):
    if isinstance(L, SimpleExtension):
        return L
    if hasattr(L, "field") and isinstance(L.field, SimpleExtension):
        return L.field
    raise UnsupportedDomain("norms need a simple extension F[t]/(pi)")


def _ctx(R, seed, trace, ring_mode=None):
    ring_mode = (not isinstance(R, Field)) if ring_mode is None else ring_mode
    rng = random.Random(seed) if seed is not None else None
    return _Ctx(R, rng, ring_mode, trace)


# residue prescription -------------------------------------------------------------


def _targets(F, targets, var):
    out = {}
    for pi, xi in targets:
        pi = pi.with_var(var)
        if pi.field != F:
            raise UnsupportedDomain("target place must have coefficients in the base field")
        place = Place.finite(pi)
        if place in out:
            raise ValueError(f"two targets at {place.format()}")
        K = RationalFunctionField(F, var)
        if xi.field != residue_field_of(K, place):
            raise UnsupportedDomain(f"target at {place.format()} does not live over its residue field")
        out[place] = xi
    degrees = {xi.degree for xi in out.values()}
    if len(degrees) > 1:
        raise ValueError("targets of different degrees")
    return out


def _correction(ctx, K, place, diff):
    pi = place.poly.with_var(K.var)
    out = SymbolSum.zero(K, diff.degree + 1)
    for entries, c in diff.terms:
        lifts = [_lift(diff.field, e, K.var, K.base) for e in entries]
        for choice in itertools.product(*_split_slots(ctx, pi, lifts)):
            out = out + SymbolSum.raw(K, [K.from_poly(pi)] + [K.from_poly(p) for p in choice], c)
    return out


def residue_checks(zeta, required, prime_bound=None):
    """Oracle verdicts for ``d_pi(zeta) - required[pi]`` at every finite place of the support."""
    K = zeta.field
    places = {p for p in residue_support(zeta, max_degree=None) if not p.is_infinity} | set(required)
    checks = []
    for place in sorted(places, key=Place.sort_key):
        got = tame_symbol(zeta, place, canonicalize=False)
        want = required.get(place)
        diff = got if want is None else got - want
        kw = {} if prime_bound is None else {"prime_bound": prime_bound}
        checks.append((place, eq_zero(residue_field_of(K, place), max(zeta.degree - 1, 0), diff, **kw)))
    return checks


def prescribe_residues(R, targets, seed=None, var="t", degree=1, trace=None, return_checks=False):
    """``zeta`` over ``F(t)`` whose residue at each target place is the target
    and whose residues at all other finite places vanish.

    Places are corrected in order of decreasing degree; a correction at a
    place of degree ``e`` only creates residues at places of degree ``< e``.
    Over a ring every correction uses Gabber factorizations so that the
    tuples stay feasible; over a field they are used only when ``seed`` is
    given.
    """
    F = _frac(R)
    K = RationalFunctionField(F, var)
    required = _targets(F, targets, var)
    n = (next(iter(required.values())).degree if required else degree - 1) + 1
    ctx = _ctx(R, seed if seed is not None or isinstance(R, Field) else 0, trace)
    zeta = SymbolSum.zero(K, n)
    processed = []
    while True:
        support = {p for p in residue_support(zeta, max_degree=None) if not p.is_infinity}
        pending = (support | set(required)) - set(processed)
        if not pending:
            break
        place = max(pending, key=lambda p: (p.degree, p.sort_key()))
        if processed and place.degree > min(p.degree for p in processed):
            raise AssertionError("degree filtration violated")
        got = tame_symbol(zeta, place, canonicalize=False)
        want = required.get(place, SymbolSum.zero(got.field, n - 1))
        diff = want - got
        if not diff.is_zero():
            zeta = zeta + _correction(ctx, K, place, diff)
        processed.append(place)
        if trace is not None:
            trace.append({"op": "prescribe", "place": place.format(), "terms": len(diff)})
    checks = residue_checks(zeta, required)
    bad = [(p, v) for p, v in checks if v.is_nonzero]
    if bad:
        raise AssertionError(f"residue mismatch at {bad[0][0].format()}: {bad[0][1]}")
    return (zeta, checks) if return_checks else zeta


# norms --------------------------------------------------------------------------------


def bass_tate_norm(L, xi, seed=None, method=None, trace=None):
    """``N_{L/F}(xi)`` for ``L = F[t]/(pi)``, canonicalized over ``F`` when possible.

    ``method`` is ``"prescribe"`` (the default when ``F`` supports
    factorization) or ``"recursion"``.
    """
    L = _as_extension(L)
    if xi.field != L:
        raise UnsupportedDomain("symbol does not live over the extension")
    F = L.base
    if L.modulus.degree == 1:
        return _canon(xi.map_entries(lambda x: x.coeff(0), F))
    if method is None:
        method = "prescribe" if supports_factorization(F) else "recursion"
    if method == "prescribe":
        zeta = prescribe_residues(F, [(L.modulus, xi)], seed=seed, var=L.var, trace=trace)
        out = -tame_symbol(zeta, INFINITY, canonicalize=False)
    elif method == "recursion":
        out = _norm(_ctx(F, seed, trace), L.modulus, xi)
    else:
        raise ValueError(f"unknown norm method {method!r}")
    return _canon(out)


def tower_norm(L, xi, base=None, seed=None, method=None):
    """Iterated norm down a tower of simple extensions to ``base``."""
    while L != base and isinstance(L, SimpleExtension):
        xi = bass_tate_norm(L, xi, seed=seed, method=method)
        L = L.base
    if base is not None and L != base:
        raise UnsupportedDomain("base is not below the extension")
    return xi


@dataclass(frozen=True)
class NormDescent:
    """A symbol with entries in ``A`` together with its verification verdict."""

    symbol: SymbolSum
    verdict: Verdict
    expected: SymbolSum

    @property
    def verified(self):
        return self.verdict.is_zero


def _check_units(A, S):
    for x in S.entries():
        if not (A.contains(x) and A.is_unit(x)):
            raise AssertionError(f"entry {S.field.format(x)} is not a unit of {A.describe()}")


def norm_into_ring(A, pi, xi, seed=0, trace=None):
    """Norm of ``xi`` over ``B = A[t]/(pi)`` as a symbol whose entries are units of ``A``.

    The result is compared with the field-level norm by the equality oracle.
    """
    F = _frac(A)
    if not pi.is_monic():
        if not A.is_unit(pi.lc):
            raise LeadingCoeffNotUnit(f"leading coefficient of {pi.format()} is not a unit")
        pi = pi.monic()
    if pi.degree == 1:
        E = SimpleExtension(F, pi, pi.var, check=False)
        if xi.field == F:
            xi = xi.map_entries(E.embed, E)
    elif isinstance(A, Field):
        E = SimpleExtension(F, pi, pi.var)
    else:
        E = QuotientRing(A, pi, pi.var).fraction_field
    if xi.field != E:
        raise UnsupportedDomain("symbol does not live over the quotient")
    if isinstance(A, Field):
        out = bass_tate_norm(E, xi, seed=seed, trace=trace) if pi.degree > 1 else _canon(_norm(_ctx(F, None, trace), pi, xi))
        return NormDescent(out, Verdict.zero(), out)
    for x in xi.entries():
        if not A.is_unit(resultant(pi, x.with_var(pi.var))):
            raise ValueError(f"entry {E.format(x)} is not a unit of the quotient")
    ctx = _ctx(A, seed if seed is not None else 0, trace, ring_mode=True)
    raw = _norm(ctx, pi, xi)
    _check_units(A, raw)
    expected = _norm(_ctx(F, None, None), pi, xi)
    return NormDescent(_canon(raw), eq_zero(F, xi.degree, raw - expected), _canon(expected))


def _tower_rings(A, tower):
    if len(tower) > MAX_TOWER_LEVELS:
        raise TowerTooDeep(f"tower of {len(tower)} levels exceeds {MAX_TOWER_LEVELS}")
    rings = [A]
    for pi in tower:
        R = rings[-1]
        rings.append(QuotientRing(R, pi, pi.var))
    return rings


def _embed_up(rings, level, x):
    """Image of an element of ``Frac(rings[level])`` in the top field."""
    for R in rings[level + 1:]:
        x = R.fraction_field.embed(x)
    return x


def milnor_preimage(A, tower, seed=0, trace=None):
    """Symbol over ``A`` mapping to ``N({t_1, ..., t_n})`` for the tower
    ``A -> A[t_1]/(pi_1) -> ... -> A[t_1, ..., t_n]/(pi_1, ..., pi_n)``.
    """
    if not tower:
        raise ValueError("empty tower")
    rings = _tower_rings(A, tower)
    top = rings[-1]
    coords = [_embed_up(rings, i + 1, rings[i + 1].fraction_field.gen) for i in range(len(tower))]
    for x in coords:
        if not top.is_unit(x):
            raise ValueError("coordinates must be units")
    xi = SymbolSum.raw(top.fraction_field, coords)
    ctx_seed = seed if seed is not None else 0
    field_xi = xi
    for level in range(len(tower), 0, -1):
        R = rings[level - 1]
        pi = rings[level].modulus
        xi = _norm(_ctx(R, ctx_seed, trace, ring_mode=True), pi, xi)
        _check_units(R, xi)
        field_xi = _norm(_ctx(R.fraction_field, None, None), pi, field_xi)
    F = A.fraction_field
    verdict = eq_zero(F, len(tower), xi - field_xi)
    return NormDescent(_canon(xi), verdict, _canon(field_xi))


# feasible tuples over A[t] -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    condition: int
    detail: str
    slots: tuple = ()
    pair: tuple = ()

    def to_json(self):
        out = {"condition": self.condition, "detail": self.detail, "slots": list(self.slots)}
        if self.pair:
            out["pair"] = [p.format() for p in self.pair]
        return out


@dataclass(frozen=True)
class FeasibleTuple:
    """Entries ``c_i * P_i / Q_i`` with ``c_i`` units of ``A``, ``P_i, Q_i`` monic in ``A[t]``.

    ``factors[i]`` lists ``(g, e)`` with ``g`` monic irreducible and ``e`` the
    signed exponent; ``verdicts`` records, for every pair of factors from
    distinct slots, whether they are associate or comaximal.
    """

    ring: object
    field: RationalFunctionField
    entries: tuple
    units: tuple
    factors: tuple
    verdicts: tuple

    @property
    def degree(self):
        return len(self.entries)

    def generators(self):
        """Multilinear expansion into tuples of units and monic irreducibles."""
        F = self.field.base
        var = self.field.var
        slots = []
        for c, fac in zip(self.units, self.factors):
            slot = [(g, e) for g, e in fac]
            if c != F.one:
                slot.append((Poly.constant(F, c, var), 1))
            slots.append(slot)
        for choice in itertools.product(*slots):
            m = 1
            for _, e in choice:
                m *= e
            yield m, tuple(g for g, _ in choice)

    def symbol(self):
        return SymbolSum.raw(self.field, self.entries)


def feasible_check(A, entries, var="t"):
    """Certify a tuple of rational functions as feasible over ``A``, or report the violation."""
    F = A.fraction_field
    K = RationalFunctionField(F, var)
    units, factors = [], []
    for i, f in enumerate(entries):
        if f == K.zero:
            raise ZeroEntry("feasible tuples have nonzero entries")
        c = F.div(f.num.lc, f.den.lc)
        num = f.num.monic()
        den = f.den.monic()
        if not (A.contains(c) and A.is_unit(c)):
            return Violation(1, f"leading coefficient {F.format(c)} is not a unit", (i,))
        if not (_in_ring(A, num) and _in_ring(A, den)):
            return Violation(1, f"entry {K.format(f)} has coefficients outside {A.describe()}", (i,))
        fac = []
        for poly, sign in ((num, 1), (den, -1)):
            if poly.degree > 0:
                fac.extend((g, sign * e) for g, e in factor(poly, max_degree=None).factors)
        units.append(c)
        factors.append(tuple(fac))
    verdicts = []
    for i, j in itertools.combinations(range(len(factors)), 2):
        for a, _ in factors[i]:
            for b, _ in factors[j]:
                if a == b:
                    kind = "associate"
                elif comaximal(A, a, b):
                    kind = "comaximal"
                else:
                    return Violation(2, f"{a.format()} and {b.format()} are neither associate nor comaximal",
                                     (i, j), (a, b))
                verdicts.append((i, j, a, b, kind))
    return FeasibleTuple(A, K, tuple(entries), tuple(units), tuple(factors), tuple(verdicts))


def kt_tame(x, place):
    """Tame symbol of a feasible tuple with unit parts reduced in ``A[t]/(pi)``
    (in ``A`` at infinity); the result is a symbol over the fraction field."""
    if not isinstance(x, FeasibleTuple):
        raise NotFeasible("kt_tame needs a certified feasible tuple")
    A, K = x.ring, x.field
    F = K.base
    if place.is_infinity:
        L, unit_test = F, A.is_unit
        red = None
    else:
        pi = place.poly.with_var(K.var)
        if not A.is_unit(pi.lc):
            raise LeadingCoeffNotUnit(f"leading coefficient of {pi.format()} is not a unit")
        red = residue_field(A, pi)
        pi = red.pi
        L = red.field
        unit_test = A.is_unit if pi.degree == 1 else red.target.is_unit
    acc = SymbolSum.zero(L, x.degree - 1)
    for m, gens in x.generators():
        factors = []
        for g in gens:
            if red is None:
                factors.append((-g.degree, g.lc))
            elif g == pi:
                factors.append((1, L.one))
            else:
                factors.append((0, red(g)))
        odd = xi_expand(L, factors).odd
        for e in odd.entries():
            if not unit_test(e):
                raise NotFeasible(f"residue entry {L.format(e)} is not a unit")
        acc = acc + m * odd
    return _canon(acc)


__all__ = [
    "FeasibleTuple", "NormDescent", "Violation", "bass_tate_norm", "feasible_check", "gabber_factor",
    "kt_tame", "milnor_preimage", "norm_into_ring", "prescribe_residues", "reciprocity_sum", "residue_checks",
    "tower_norm",
]


def reciprocity_sum(zeta, seed=None, method=None):
    """``sum_pi N_{k(pi)/F}(d_pi zeta) + d_inf zeta`` over the support; zero by Weil reciprocity."""
    K = zeta.field
    F = K.base
    total = SymbolSum.zero(F, zeta.degree - 1)
    for place in residue_support(zeta, max_degree=None):
        res = tame_symbol(zeta, place, canonicalize=False)
        if place.is_infinity or place.degree == 1:
            total = total + res
        else:
            total = total + bass_tate_norm(res.field, res, seed=seed, method=method)
    return _canon(total)
