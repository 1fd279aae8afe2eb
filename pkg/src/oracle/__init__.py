"""
Independent ground truth for the two-sided operations.
"""

from .reference import (
    condition_estimate,
    error_bound,
    explicit_inverse,
    oracle_generalized_eigenvalues_2x2,
    oracle_two_sided_trmm,
    oracle_two_sided_trsm,
    quadratic_roots,
)

__all__ = [
    'condition_estimate', 'error_bound', 'explicit_inverse',
    'oracle_generalized_eigenvalues_2x2', 'oracle_two_sided_trmm',
    'oracle_two_sided_trsm', 'quadratic_roots',
]
