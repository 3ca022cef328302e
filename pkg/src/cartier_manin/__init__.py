"""Cartier-Manin matrices, a-numbers and p-ranks of plane curves over prime fields."""

from .curves import CurveModel, Family, fermat_expansion, hurwitz_expansion, make_fermat, make_general, make_hurwitz
from .engine import CartierMatrix, InvariantReport, build_cartier_matrix, compute_invariants, scan_singular_points
from .formulas import (
    a_fermat_char2,
    closed_form_fermat,
    closed_form_hurwitz,
    count_fermat_pairs,
    count_hurwitz_pairs,
)
from .modp import MatrixFp, lucas_binomial, mat_mul, mat_rank, stable_rank_and_index
from .poly import Monomial, SparseBivarPoly, nabla, poly_mul, poly_pow, root_p

__all__ = [
    "CartierMatrix", "CurveModel", "Family", "InvariantReport", "MatrixFp", "Monomial", "SparseBivarPoly",
    "a_fermat_char2", "build_cartier_matrix", "closed_form_fermat", "closed_form_hurwitz", "compute_invariants",
    "count_fermat_pairs", "count_hurwitz_pairs", "fermat_expansion", "hurwitz_expansion", "lucas_binomial",
    "make_fermat", "make_general", "make_hurwitz", "mat_mul", "mat_rank", "nabla", "poly_mul", "poly_pow",
    "root_p", "scan_singular_points", "stable_rank_and_index",
]
