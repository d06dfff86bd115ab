"""Conversions into sympy, used as an independent oracle."""

from fractions import Fraction

import sympy

from milnorchow.algebra import PrimeField, RationalFunctionField, SimpleExtension


def scalar(F, c):
    if isinstance(F, PrimeField):
        return sympy.Integer(c)
    if isinstance(F, RationalFunctionField):
        return expr(c.num) / expr(c.den)
    if isinstance(F, SimpleExtension):
        return expr(c)
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def expr(p):
    x = sympy.Symbol(p.var)
    return sum((scalar(p.field, c) * x ** i for i, c in enumerate(p.coeffs)), sympy.Integer(0))


def modulus(F):
    while not isinstance(F, PrimeField):
        if F.characteristic == 0:
            return None
        F = F.base
    return F.p


def spoly(p):
    """sympy Poly in the variable of ``p`` (ground field F_p or QQ only)."""
    m = modulus(p.field)
    x = sympy.Symbol(p.var)
    if m is None:
        return sympy.Poly(expr(p), x, domain="QQ")
    return sympy.Poly(expr(p), x, modulus=m)
