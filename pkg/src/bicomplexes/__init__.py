"""Exact computations with bounded double complexes.

Linear algebra is over cyclotomic fields Q(z_n) and always exact.  The main
entry points:

* :class:`Bicomplex` and the structural operations (direct sums, shifts,
  tensor products, blow-up models);
* :func:`fss` and :func:`purity_table` for the Froelicher spectral sequences
  and the Hodge-filtration b-numbers;
* :func:`multiplicities_from_ranks`, :func:`decompose` and
  :func:`check_property` for zigzag decompositions and the ddbar-type
  properties;
* :class:`DbaSpec` and :func:`parse_dsl` for algebras given by generators and
  structure equations;
* :mod:`bicomplexes.fixtures` for the built-in examples.
"""
from __future__ import annotations

from .complex import (
    Bicomplex,
    RealStructure,
    TotalCohomology,
    ValidationReport,
    blowup_model,
    direct_sum,
    dot,
    dots,
    mirror,
    shift,
    tensor,
    total_cohomology,
    validate,
)
from .cyclotomic import CyclotomicScalar, format_scalar, parse_scalar
from .dba import (
    AlgebraExpression,
    BicomplexAction,
    DbaError,
    DbaSpec,
    Generator,
    MonomialAutomorphism,
    Weight,
    complement_direct_summand_check,
    compile_spec,
    eval_dd_bar,
    induced_action,
    isotypic,
    real_structure,
)
from .dsl import DslError, parse_dsl
from .linalg import SparseMatrix, Subspace, field
from .oracle import OracleInconclusive, brute_force_decompose
from .spectral import PurityTable, SpectralReport, degeneration_page, fss, purity_table
from .zigzag import (
    PropertyResult,
    ZigzagMultiset,
    ZigzagShape,
    bigraded_quasi_iso_type_equal,
    check_property,
    decompose,
    looks_like_manifold,
    multiplicities_from_ranks,
    square_model,
    zigzag_model,
)

__version__ = "0.1.0"

__all__ = [
    "Bicomplex", "RealStructure", "TotalCohomology", "ValidationReport", "blowup_model", "direct_sum",
    "dot", "dots", "mirror", "shift", "tensor", "total_cohomology", "validate",
    "CyclotomicScalar", "format_scalar", "parse_scalar",
    "AlgebraExpression", "BicomplexAction", "DbaError", "DbaSpec", "Generator", "MonomialAutomorphism",
    "Weight", "complement_direct_summand_check", "compile_spec", "eval_dd_bar", "induced_action",
    "isotypic", "real_structure",
    "DslError", "parse_dsl",
    "SparseMatrix", "Subspace", "field",
    "OracleInconclusive", "brute_force_decompose",
    "PurityTable", "SpectralReport", "degeneration_page", "fss", "purity_table",
    "PropertyResult", "ZigzagMultiset", "ZigzagShape", "bigraded_quasi_iso_type_equal", "check_property",
    "decompose", "looks_like_manifold", "multiplicities_from_ranks", "square_model", "zigzag_model",
]
