"""Exact construction and verification of factorizing twists for rational sl2 spin chains."""

__version__ = "0.1.0"

from .chain import ChainSpec, NonGenericSpecError, SpecError, monodromy, quantum_determinant
from .exact import OperatorPolynomial, ScalarPolynomial, TensorOperator, TensorShape, scalar
from .fba import reconstruct_bc, separated_operators, spectrum
from .permutation import SitePermutation
from .rmatrix import fundamental_r, generalized_r, higher_spin_r
from .spin import SiteSpec, spin_matrices
from .twist import f_matrix, q_factor_left, q_factor_right, tilde_ops

__all__ = [
    "ChainSpec",
    "NonGenericSpecError",
    "OperatorPolynomial",
    "ScalarPolynomial",
    "SiteSpec",
    "SitePermutation",
    "SpecError",
    "TensorOperator",
    "TensorShape",
    "f_matrix",
    "fundamental_r",
    "generalized_r",
    "higher_spin_r",
    "monodromy",
    "q_factor_left",
    "q_factor_right",
    "quantum_determinant",
    "reconstruct_bc",
    "scalar",
    "separated_operators",
    "spectrum",
    "spin_matrices",
    "tilde_ops",
]
