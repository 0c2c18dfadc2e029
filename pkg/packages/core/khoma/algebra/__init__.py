"""Exact algebra kernel: coefficient rings, A_{h,t}, sparse matrices, Smith forms"""

from .frobenius import ONE, X, FrobeniusAlgebra
from .linalg import (
    EchelonBasis,
    LinearDecomposition,
    SparseMatrix,
    add_scaled,
    rank,
    rank_kernel_image,
)
from .ring import QQ, ZZ, CoefficientRing, RingKind, prime_field
from .snf import (
    GeneratorLift,
    GradedSNFResult,
    IntegerSmithForm,
    graded_snf,
    smith_normal_form,
    string_counts_by_rank,
    verify_smith,
)

__all__ = [
    "ONE",
    "X",
    "FrobeniusAlgebra",
    "EchelonBasis",
    "LinearDecomposition",
    "SparseMatrix",
    "add_scaled",
    "rank",
    "rank_kernel_image",
    "QQ",
    "ZZ",
    "CoefficientRing",
    "RingKind",
    "prime_field",
    "GeneratorLift",
    "GradedSNFResult",
    "IntegerSmithForm",
    "graded_snf",
    "smith_normal_form",
    "string_counts_by_rank",
    "verify_smith",
]
