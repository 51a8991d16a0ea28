"""Numerical Clifford analysis: geometric algebra, monogenic polynomials,
Cauchy boundary integrals and spin-character recovery."""
from .algebra import (
    Algebra,
    Multivector,
    Signature,
    algebra,
    dual,
    euclidean,
    geometric_product,
    grade_project,
    interior,
    left_contract,
    mv_inner,
    mv_norm,
    mv_norm_sq,
    project_blade,
    reverse,
    wedge,
)

__version__ = "0.1.0"
