"""Exact computer algebra for determinants of coefficient matrices of powers
of formal power series."""

from .arith import PolyZ, parse_rat, poly_arith, poly_eval, poly_scalar_div, rat_make
from .expr import eval_ast, parse, parse_polynomial, parse_series
from .identities import VERIFIERS, PolyFamily, Report, stirling_oracle
from .matrix import (
    ExactMatrix,
    binomial_sign_matrix,
    coeff_matrix,
    det_bareiss,
    det_cofactor,
    mina_matrix_at_point,
    mina_matrix_origin,
    vandermonde_product,
)
from .series import Series, SeriesError, series_builders

__version__ = "0.1.0"
