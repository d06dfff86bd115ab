"""Exact arithmetic: fields, polynomials, factorization."""

from .factor import Factorization, coprime_base, factor, is_irreducible, poly_factor, squarefree_decomposition
from .fields import QQ, PrimeField, RatFunc, RationalFunctionField, Rationals, SimpleExtension
from .linalg import det, mult_matrix_det, sylvester_resultant
from .poly import DEG_ZERO, Poly, crt_combine, poly_gcd, poly_invmod, poly_xgcd, resultant

__all__ = [
    "DEG_ZERO", "QQ", "Factorization", "Poly", "PrimeField", "RatFunc", "RationalFunctionField",
    "Rationals", "SimpleExtension", "coprime_base", "crt_combine", "det", "factor", "is_irreducible",
    "mult_matrix_det", "poly_factor", "poly_gcd", "poly_invmod", "poly_xgcd", "resultant",
    "squarefree_decomposition", "sylvester_resultant",
]
