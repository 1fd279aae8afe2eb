"""
Generalized Hermitian-definite eigenproblem reduction.
"""

from .reduction import (
    ReductionResult,
    eigencheck_2x2,
    reconstruction_residual,
    recover_generalized_eigenvector,
    reduce,
    standard_eigenvalues_2x2,
)

__all__ = [
    'ReductionResult', 'eigencheck_2x2', 'reconstruction_residual',
    'recover_generalized_eigenvector', 'reduce', 'standard_eigenvalues_2x2',
]
