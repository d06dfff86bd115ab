"""Generators and discrete logarithms in small finite fields."""

from __future__ import annotations

import math
from functools import lru_cache

from sympy import factorint

from ..errors import FieldTooLarge, UnsupportedDomain

DLOG_LIMIT = 10 ** 6


def _order_divisors(q):
    return [(q - 1) // r for r in factorint(q - 1)]


@lru_cache(maxsize=None)
def field_generator(F):
    """Least primitive element in the field's enumeration order."""
    if not F.is_finite:
        raise UnsupportedDomain(f"{F} is not finite")
    q = F.order
    if q == 2:
        return F.one
    exps = _order_divisors(q)
    for g in F.elements():
        if g == F.zero:
            continue
        if all(F.pow(g, e) != F.one for e in exps):
            return g
    raise AssertionError("finite field without a generator")


@lru_cache(maxsize=64)
def _bsgs_table(F):
    g = field_generator(F)
    m = math.isqrt(F.order - 1) + 1
    table = {}
    x = F.one
    for j in range(m):
        table.setdefault(x, j)
        x = F.mul(x, g)
    return m, table, F.pow(F.inv(g), m)


def discrete_log(F, x, limit=DLOG_LIMIT):
    """Exponent ``e`` in ``[0, q-1)`` with ``generator**e == x`` (baby-step giant-step)."""
    if x == F.zero:
        raise ValueError("discrete log of zero")
    if F.order > limit:
        raise FieldTooLarge(f"field of order {F.order} exceeds discrete-log limit {limit}")
    if F.order == 2:
        return 0
    m, table, giant = _bsgs_table(F)
    y = x
    for i in range(m + 1):
        j = table.get(y)
        if j is not None:
            return (i * m + j) % (F.order - 1)
        y = F.mul(y, giant)
    raise AssertionError("discrete log not found")
