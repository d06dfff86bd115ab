"""Small dense linear algebra over an exact field (raw values)."""

from __future__ import annotations

from ..errors import NotCoprime
from .poly import Poly, poly_gcd


def det(F, matrix):
    """Determinant by Gaussian elimination; ``matrix`` is a list of rows."""
    m = [list(row) for row in matrix]
    n = len(m)
    result = F.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != F.zero), None)
        if pivot is None:
            return F.zero
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = F.neg(result)
        pv = m[col][col]
        result = F.mul(result, pv)
        inv = F.inv(pv)
        for r in range(col + 1, n):
            if m[r][col] == F.zero:
                continue
            factor = F.mul(m[r][col], inv)
            row, prow = m[r], m[col]
            for c in range(col, n):
                row[c] = F.sub(row[c], F.mul(factor, prow[c]))
    return result


def sylvester_matrix(a, b):
    """Sylvester matrix of ``a`` (degree m) and ``b`` (degree n), size m+n."""
    F = a.field
    m, n = a.degree, b.degree
    size = m + n
    rows = []
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([F.zero] * i + ac + [F.zero] * (size - i - len(ac)))
    for i in range(m):
        rows.append([F.zero] * i + bc + [F.zero] * (size - i - len(bc)))
    return rows


def sylvester_resultant(a, b):
    F = a.field
    if a.degree == 0 and b.degree == 0:
        return F.one
    return det(F, sylvester_matrix(a, b))


def mult_matrix(pi, x):
    """Matrix of multiplication by ``x`` on ``F[t]/(pi)`` in the power basis."""
    F = pi.field
    d = pi.degree
    cols = []
    basis = Poly.constant(F, F.one, pi.var)
    t = Poly.gen(F, pi.var)
    for _ in range(d):
        img = (x * basis) % pi
        cols.append([img.coeff(i) for i in range(d)])
        basis = (basis * t) % pi
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def mult_matrix_det(pi, x):
    """Field norm of ``x`` from ``F[t]/(pi)`` to ``F`` as a determinant."""
    if poly_gcd(x, pi).degree != 0:
        raise NotCoprime(f"{x.format()} is not coprime to {pi.format()}")
    return det(pi.field, mult_matrix(pi, x))
