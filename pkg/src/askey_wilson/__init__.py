"""Rank-one double affine Hecke algebra and Askey-Wilson polynomials.

Exact rational and arbitrary precision computations with the
difference-reflection operators ``T0, T1``, the Cherednik operator ``Y``,
the non-symmetric and symmetric Askey-Wilson polynomials, their bilinear
forms and the associated transforms.
"""

from .errors import AskeyWilsonError
from .laurent import LaurentPoly
from .operators import OperatorExpr, apply_expr, apply_word, named_expr, verify_relations
from .params import (
    ParameterSet,
    dual_params,
    fixture_f1,
    gamma,
    inverse_params,
    make_params,
    shifted_params,
    xval,
)
from .polys import AWPolynomial, nonsym, renormalize, symmetrize
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AWPolynomial",
    "AskeyWilsonError",
    "LaurentPoly",
    "OperatorExpr",
    "ParameterSet",
    "VerificationReport",
    "apply_expr",
    "apply_word",
    "dual_params",
    "fixture_f1",
    "gamma",
    "inverse_params",
    "make_params",
    "named_expr",
    "nonsym",
    "renormalize",
    "shifted_params",
    "symmetrize",
    "verify_relations",
    "xval",
]
