"""Command-line front end.

Every invocation parses one request, runs one computation with its
verification block, and prints a JSON report on stdout (keys sorted, exact
values as strings).  Exit status: 0 success, 1 violation or a nonzero class
where zero was expected, 2 error.
"""

from __future__ import annotations

import argparse
import json
import shlex
import sys
import time
from dataclasses import dataclass

from .algebra.fields import Field, RationalFunctionField, SimpleExtension
from .algebra.linalg import mult_matrix_det
from .chow import CubePoint, ParamCurve, ZeroCycle, admissible_check, boundary, face_loci, rho, rho_inverse, suslin_check
from .errors import MilnorChowError, NotIrreducible, ParseError, UnsupportedDomain
from .ktheory import (
    Violation,
    bass_tate_norm,
    feasible_check,
    gabber_factor,
    kt_tame,
    milnor_preimage,
    norm_into_ring,
    prescribe_residues,
    reciprocity_sum,
)
from .algebra.factor import is_irreducible
from .oracles import eq_zero
from .parsing import (
    build_domain,
    curve_text,
    domain_text,
    evaluate,
    fraction_field,
    new_variable,
    parse_curve,
    parse_domain,
    parse_place,
    parse_symbol,
    parse_tuple,
    place_text,
    poly_in,
    symbol_text,
    tuple_text,
)
from .residues import INFINITY, Place, residue_field_of, residue_support, tame_symbol
from .rings import QuotientRing, residue_field
from .symbols import SymbolSum, canonical, is_canonical_supported

COMMANDS = (
    "tame", "norm", "norm-descend", "preimage", "prescribe", "gabber", "feasible", "eq", "rho",
    "rho-inverse", "boundary", "suslin", "reciprocity",
)

_NEEDS = {
    "tame": ("symbol",),
    "norm": ("symbol",),
    "norm-descend": ("symbol", "place"),
    "preimage": ("place",),
    "prescribe": (),
    "gabber": ("place", "tuple"),
    "feasible": ("tuple",),
    "eq": ("symbol",),
    "rho": ("tuple",),
    "rho-inverse": ("tuple",),
    "boundary": ("curve",),
    "suslin": ("curve",),
    "reciprocity": ("symbol",),
}


@dataclass(frozen=True)
class Request:
    command: str
    domain: object
    symbols: tuple = ()
    tuple: object = None
    places: tuple = ()
    curve: object = None
    degree: int | None = None
    seed: int = 0
    max_degree: int | None = None
    prime_bound: int | None = None

    @property
    def symbol(self):
        return self.symbols[0] if self.symbols else None

    def to_text(self):
        parts = [self.command, "--domain", domain_text(self.domain)]
        for s in self.symbols:
            parts += ["--symbol", symbol_text(s)]
        if self.tuple is not None:
            parts += ["--tuple", tuple_text(self.tuple)]
        for p in self.places:
            parts += ["--place", place_text(p)]
        if self.curve is not None:
            parts += ["--curve", curve_text(self.curve)]
        for flag, value in (("--degree", self.degree), ("--max-degree", self.max_degree),
                            ("--prime-bound", self.prime_bound)):
            if value is not None:
                parts += [flag, str(value)]
        parts += ["--seed", str(self.seed)]
        return " ".join(shlex.quote(p) for p in parts)


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(1, 1, message)


def _argparser():
    ap = _ArgParser(prog="milnorchow", add_help=True, description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--domain")
    ap.add_argument("--symbol", action="append", default=None)
    ap.add_argument("--tuple")
    ap.add_argument("--place", action="append", default=None)
    ap.add_argument("--curve")
    ap.add_argument("--degree", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--max-degree", type=int)
    ap.add_argument("--prime-bound", type=int)
    ap.add_argument("--config")
    return ap


def _sub(fn, text, flag):
    """Parse a flag value, reporting positions relative to that value."""
    try:
        return fn(text)
    except ParseError as exc:
        raise ParseError(exc.line, exc.column, f"{exc.expected} (in {flag})", text) from None


def request_from_args(argv):
    ns = _argparser().parse_args(argv)
    cfg = {}
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    get = lambda key, alt=None: getattr(ns, key.replace("-", "_")) if getattr(ns, key.replace("-", "_")) is not None \
        else cfg.get(key, cfg.get(key.replace("-", "_"), alt))
    domain = get("domain")
    if domain is None:
        raise ParseError(1, 1, "--domain")
    symbols = get("symbol", [])
    places = get("place", [])
    symbols = [symbols] if isinstance(symbols, str) else symbols
    places = [places] if isinstance(places, str) else places
    req = Request(
        command=ns.command,
        domain=_sub(parse_domain, domain, "--domain"),
        symbols=tuple(_sub(parse_symbol, s, "--symbol") for s in symbols),
        tuple=_sub(parse_tuple, get("tuple"), "--tuple") if get("tuple") is not None else None,
        places=tuple(_sub(parse_place, p, "--place") for p in places),
        curve=_sub(parse_curve, get("curve"), "--curve") if get("curve") is not None else None,
        degree=get("degree"),
        seed=get("seed", 0),
        max_degree=get("max-degree"),
        prime_bound=get("prime-bound"),
    )
    for need in _NEEDS[req.command]:
        if need == "symbol" and not req.symbols or need == "place" and not req.places \
                or need in ("tuple", "curve") and getattr(req, need) is None:
            raise ParseError(1, 1, f"--{need} for {req.command}")
    return req


def parse(text):
    """Parse a request written as a command line (without the program name)."""
    try:
        argv = shlex.split(text)
    except ValueError as exc:
        raise ParseError(1, 1, f"balanced quotes ({exc})", text) from None
    return request_from_args(argv)


# evaluation helpers -------------------------------------------------------------------


def _symbol(ast, F):
    if ast.degree == 0:
        return SymbolSum.integer(F, ast.terms[0][0] if ast.terms else 0)
    out = SymbolSum.zero(F, ast.degree)
    for c, entries in ast.terms:
        out = out + SymbolSum.raw(F, [evaluate(e, F) for e in entries], c)
    return out


def _place(F, ast, var):
    if ast.poly is None:
        return INFINITY
    p = poly_in(F, ast.poly, var)
    if p.degree < 1:
        raise UnsupportedDomain("a place needs a non-constant polynomial")
    if not is_irreducible(p):
        raise NotIrreducible(f"{p.format()} is reducible")
    return Place.finite(p)


def _reduce_symbol(ast, F, pi):
    """Symbol written in ``F(t)`` reduced into ``F[t]/(pi)``."""
    K = RationalFunctionField(F, pi.var)
    red = residue_field(F, pi)
    z = _symbol(ast, K)
    return z.map_entries(lambda f: red.reduce_fraction(f.num, f.den), red.field)


def _canon(S):
    return canonical(S) if is_canonical_supported(S.field) else S


def _check(name, verdict):
    return {"check": name, **verdict.to_json()}


def _base_of(L):
    while isinstance(L, SimpleExtension):
        L = L.base
    return L


def _new_var(req, F, exprs):
    return new_variable([e for e in exprs if e is not None], F)


# command handlers ---------------------------------------------------------------------


def _tame(req, D, out):
    if not isinstance(D, RationalFunctionField):
        raise UnsupportedDomain("tame needs a rational function field F(t)")
    zeta = _symbol(req.symbol, D)
    place = _place(D.base, req.places[0], D.var) if req.places else INFINITY
    res = tame_symbol(zeta, place)
    out["inputs"].update(place=place.format(), symbol=zeta.format())
    out["result"] = {"symbol": res.format(), "residue_field": res.field.describe()}
    checks = []
    L = res.field
    if not place.is_infinity and len(zeta.terms) == 1:
        entries, c = zeta.terms[0]
        pi = D.from_poly(place.poly)
        if entries[0] == pi and all(tame_symbol(SymbolSum.raw(D, [x]), place).is_zero() for x in entries[1:]):
            red = residue_field(D.base, place.poly)
            expected = SymbolSum.raw(L, [red.reduce_fraction(x.num, x.den) for x in entries[1:]], c)
            checks.append(_check("defining property", eq_zero(L, res.degree, res - expected)))
    if is_canonical_supported(D):
        other = tame_symbol(canonical(zeta), place)
        checks.append(_check("canonicalized input gives the same residue", eq_zero(L, res.degree, res - other)))
    out["verification"] = checks
    return 0


def _norm(req, D, out):
    if not isinstance(D, SimpleExtension):
        raise UnsupportedDomain("norm needs a simple extension ext(F, pi, t)")
    xi = _symbol(req.symbol, D)
    choices = []
    res = bass_tate_norm(D, xi, seed=req.seed, trace=choices)
    F = D.base
    out["inputs"]["symbol"] = xi.format()
    out["result"] = {"symbol": res.format(), "field": F.describe()}
    other = bass_tate_norm(D, xi, method="recursion")
    checks = [_check("recursion route agrees", eq_zero(F, xi.degree, res - other))]
    if xi.degree == 1:
        value = F.one
        for (x,), c in xi.terms:
            value = F.mul(value, F.pow(mult_matrix_det(D.modulus, x), c))
        det = SymbolSum.raw(F, [value]) if value != F.one else SymbolSum.zero(F, 1)
        checks.append(_check("determinant", eq_zero(F, 1, res - _canon(det))))
    out["verification"] = checks
    out["choices"] = choices
    return 0


def _norm_descend(req, D, out):
    if isinstance(D, Field):
        raise UnsupportedDomain("norm-descend needs a semi-local ring")
    F = D.fraction_field
    var = _new_var(req, F, [req.places[0].poly])
    pi = poly_in(F, req.places[0].poly, var)
    K = RationalFunctionField(F, var)
    z = _symbol(req.symbol, K)
    E = QuotientRing(D, pi.monic(), var).fraction_field if pi.degree > 1 else None
    if E is None:
        xi = z.map_entries(lambda f: f.num(F.neg(pi.monic().coeffs[0])), F)
    else:
        xi = z.map_entries(lambda f: E.div(E.reduce(f.num), E.reduce(f.den)), E)
    choices = []
    res = norm_into_ring(D, pi, xi, seed=req.seed, trace=choices)
    out["inputs"].update(place=place_text(req.places[0]), symbol=xi.format())
    out["result"] = {"symbol": res.symbol.format(), "field_norm": res.expected.format()}
    out["verification"] = [{"check": "entries are units of the ring", "verdict": "zero"},
                           _check("agrees with the field-level norm", res.verdict)]
    out["choices"] = choices
    return 1 if res.verdict.is_nonzero else 0


def _preimage(req, D, out):
    if isinstance(D, Field):
        raise UnsupportedDomain("preimage needs a semi-local ring")
    L = D.fraction_field
    tower = []
    for p in req.places:
        var = _new_var(req, L, [p.poly])
        pi = poly_in(L, p.poly, var).monic()
        tower.append(pi)
        L = SimpleExtension(L, pi, var)
    choices = []
    res = milnor_preimage(D, tower, seed=req.seed, trace=choices)
    out["inputs"]["tower"] = [pi.format() for pi in tower]
    out["result"] = {"symbol": res.symbol.format(), "field_norm": res.expected.format()}
    out["verification"] = [_check("agrees with the field-level norm", res.verdict)]
    out["choices"] = choices
    return 1 if res.verdict.is_nonzero else 0


def _prescribe(req, D, out):
    F = fraction_field(D)
    if len(req.symbols) != len(req.places):
        raise UnsupportedDomain("prescribe pairs every --place with a --symbol")
    var = _new_var(req, F, [p.poly for p in req.places])
    targets = []
    for p, s in zip(req.places, req.symbols):
        if p.poly is None:
            raise UnsupportedDomain("targets are finite places")
        pi = poly_in(F, p.poly, var).monic()
        targets.append((pi, _reduce_symbol(s, F, pi)))
    choices = []
    zeta, checks = prescribe_residues(D, targets, seed=req.seed, var=var, degree=req.degree or 1,
                                      trace=choices, return_checks=True)
    out["inputs"]["targets"] = [[Place.finite(pi).format(), xi.format()] for pi, xi in targets]
    out["result"] = {"symbol": zeta.format(), "support": [p.format() for p in residue_support(zeta, None)]}
    out["verification"] = [_check(f"residue at {p.format()}", v) for p, v in checks]
    out["choices"] = choices
    return 0


def _gabber(req, D, out):
    F = fraction_field(D)
    items = req.tuple.items
    var = _new_var(req, F, [req.places[0].poly, *items])
    pi = poly_in(F, req.places[0].poly, var)
    x = poly_in(F, items[0], var)
    ys = [poly_in(F, y, var) for y in items[1:]]
    choices = []
    xp, xpp = gabber_factor(D, pi, x, ys, seed=req.seed, trace=choices)
    out["inputs"].update(place=pi.format(), x=x.format(), constraints=[y.format() for y in ys])
    out["result"] = {"x1": xp.format(), "x2": xpp.format()}
    out["verification"] = [{"check": "product, degrees, leading units, comaximality", "verdict": "zero"}]
    out["choices"] = choices
    return 0


def _feasible(req, D, out):
    if isinstance(D, Field):
        raise UnsupportedDomain("feasible needs a semi-local ring")
    F = D.fraction_field
    var = _new_var(req, F, list(req.tuple.items) + [p.poly for p in req.places])
    K = RationalFunctionField(F, var)
    entries = [evaluate(e, K) for e in req.tuple.items]
    out["inputs"]["tuple"] = [K.format(f) for f in entries]
    x = feasible_check(D, entries, var)
    if isinstance(x, Violation):
        out["result"] = {"feasible": False, "violation": x.to_json()}
        return 1
    out["result"] = {
        "feasible": True,
        "units": [F.format(c) for c in x.units],
        "factors": [[[g.format(), e] for g, e in fac] for fac in x.factors],
        "pairs": [[i, j, a.format(), b.format(), kind] for i, j, a, b, kind in x.verdicts],
    }
    checks = []
    if req.places:
        place = _place(F, req.places[0], var)
        res = kt_tame(x, place)
        out["result"]["tame"] = res.format()
        field_res = tame_symbol(x.symbol(), place)
        L = residue_field_of(K, place)
        checks.append(_check("agrees with the field-level residue", eq_zero(L, res.degree, res - field_res)))
    out["verification"] = checks
    return 0


def _eq(req, D, out):
    F = fraction_field(D)
    z = _symbol(req.symbol, F)
    n = req.degree if req.degree is not None else z.degree
    kw = {} if req.prime_bound is None else {"prime_bound": req.prime_bound}
    z = _canon(z)
    verdict = eq_zero(F, n, z, **kw)
    out["inputs"].update(symbol=z.format(), degree=n)
    out["result"] = verdict.to_json()
    return 1 if verdict.is_nonzero else 0


def _rho(req, D, out):
    F = fraction_field(D)
    fs = [evaluate(e, F) for e in req.tuple.items]
    res = rho(D, fs)
    if isinstance(D, Field):
        out["result"] = {"cycle": res.format()}
    else:
        out["result"] = {"graph": res.format(), "boundary": res.boundary().format()}
    return 0


def _rho_inverse(req, D, out):
    if not isinstance(D, Field):
        raise UnsupportedDomain("rho-inverse needs a field")
    F = _base_of(D)
    coords = tuple(evaluate(e, D) for e in req.tuple.items)
    Z = ZeroCycle(F, len(coords), [(CubePoint(D, coords), 1)])
    res = rho_inverse(Z, seed=req.seed)
    out["inputs"]["cycle"] = Z.format()
    out["result"] = {"symbol": res.format(), "field": F.describe()}
    other = rho_inverse(Z, method="recursion")
    out["verification"] = [_check("recursion route agrees", eq_zero(F, Z.n, res - other))]
    return 0


def _curve(req, D):
    if not isinstance(D, Field):
        raise UnsupportedDomain("curves live over a field")
    K = RationalFunctionField(D, req.curve.var)
    return ParamCurve(K, tuple(evaluate(e, K) for e in req.curve.coords))


def _boundary(req, D, out):
    W = _curve(req, D)
    md = req.max_degree or 12
    out["inputs"]["curve"] = W.format()
    bad = admissible_check(W, md)
    if bad is not None:
        out["result"] = {"admissible": False, "violation": bad}
        return 1
    Z = boundary(W, md)
    out["result"] = {"admissible": True, "cycle": Z.format(), "degenerate": W.is_degenerate()}
    checks = []
    for i, g in enumerate(W.coords):
        zeros = sum(loc.orders[i] * loc.degree for _, loc in face_loci(W, md) if loc.orders[i] > 0)
        poles = -sum(loc.orders[i] * loc.degree for _, loc in face_loci(W, md) if loc.orders[i] < 0)
        ok = zeros == poles == max(g.num.degree, g.den.degree)
        checks.append({"check": f"degree bookkeeping for coordinate {i + 1}",
                       "verdict": "zero" if ok else "nonzero"})
    out["verification"] = checks
    return 0


def _suslin(req, D, out):
    W = _curve(req, D)
    out["inputs"]["curve"] = W.format()
    rep = suslin_check(W, seed=req.seed, max_degree=req.max_degree or 12)
    out["result"] = {"cycle": rep.cycle.format(), "symbol": rep.symbol.format(), "degenerate": rep.degenerate,
                     **rep.verdict.to_json()}
    return 1 if rep.verdict.is_nonzero else 0


def _reciprocity(req, D, out):
    if not isinstance(D, RationalFunctionField):
        raise UnsupportedDomain("reciprocity needs a rational function field F(t)")
    zeta = _symbol(req.symbol, D)
    total = reciprocity_sum(zeta, seed=req.seed)
    F = D.base
    verdict = eq_zero(F, total.degree, total)
    out["inputs"]["symbol"] = zeta.format()
    out["result"] = {"sum": total.format(), **verdict.to_json()}
    return 1 if verdict.is_nonzero else 0


_HANDLERS = {
    "tame": _tame, "norm": _norm, "norm-descend": _norm_descend, "preimage": _preimage,
    "prescribe": _prescribe, "gabber": _gabber, "feasible": _feasible, "eq": _eq, "rho": _rho,
    "rho-inverse": _rho_inverse, "boundary": _boundary, "suslin": _suslin, "reciprocity": _reciprocity,
}


def _error(exc):
    err = {"code": getattr(exc, "code", "error"), "type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        err.update(line=exc.line, column=exc.column, expected=exc.expected)
    if hasattr(exc, "attempts"):
        err["attempts"] = exc.attempts
    return err


def run(req):
    """Execute a request; returns ``(report, exit_code)``."""
    start = time.perf_counter()
    out = {"command": req.command, "seed": req.seed, "inputs": {"domain": domain_text(req.domain)},
           "result": None, "verification": [], "choices": []}
    try:
        D = build_domain(req.domain)
        out["inputs"]["domain"] = D.describe()
        code = _HANDLERS[req.command](req, D, out)
    except (MilnorChowError, ZeroDivisionError, ValueError) as exc:
        out["error"] = _error(exc)
        code = 2
    if code == 0 and any(c.get("verdict") == "nonzero" for c in out["verification"]):
        code = 1
    out["exit_code"] = code
    out["timing_us"] = int((time.perf_counter() - start) * 1e6)
    return out, code


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def _summary(report):
    if "error" in report:
        return f"{report['command']}: error {report['error']['code']}: {report['error']['message']}"
    res = report["result"] or {}
    main = res.get("symbol") or res.get("cycle") or res.get("verdict") or res.get("sum") or ""
    if "x1" in res:
        main = f"{res['x1']} * {res['x2']}"
    elif "violation" in res:
        main = f"violation {json.dumps(res['violation'], sort_keys=True)}"
    elif res.get("feasible"):
        main = "feasible"
    return f"{report['command']}: {main} (exit {report['exit_code']})"


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        req = request_from_args(argv)
    except (ParseError, OSError, json.JSONDecodeError) as exc:
        report = {"command": argv[0] if argv else None, "error": _error(exc), "exit_code": 2}
        print(dumps(report))
        print(_summary(report), file=sys.stderr)
        return 2
    report, code = run(req)
    print(dumps(report))
    print(_summary(report), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
