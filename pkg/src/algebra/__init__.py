"""Exact polynomial and differential-polynomial algebra.

This package contains the polynomial substrate, the Gröbner kernel and the differential rings.
"""

from src.algebra.diffalg import DiffContext, DiffFraction, DiffPoly, sigma_rank, sigma_unrank, theta_derive
from src.algebra.groebner import EliminationProblem, Ideal, eliminate, groebner_basis, ideal_member, saturate
from src.algebra.polyring import MonomialOrder, Poly, Variable, make_table, poly_normalize

__all__ = [
    "DiffContext",
    "DiffFraction",
    "DiffPoly",
    "EliminationProblem",
    "Ideal",
    "MonomialOrder",
    "Poly",
    "Variable",
    "eliminate",
    "groebner_basis",
    "ideal_member",
    "make_table",
    "poly_normalize",
    "saturate",
    "sigma_rank",
    "sigma_unrank",
    "theta_derive",
]
