"""
Matrix value types, quadrant partitioning, norms, seeded generators and
Matrix Market exchange.
"""

from .core import (
    DenseMatrix,
    Field,
    HermitianLowerView,
    Quadrants,
    TriangularFactor,
    as_dense,
    dense_matrix,
    frobenius_norm,
    leading_dimension,
    materialize,
    partition_schedule,
    quadrant_views,
    relative_distance,
)
from .generators import random_hermitian, random_hpd, random_well_conditioned_lower
from .market import read_hermitian, read_matrix, write_hermitian, write_matrix

__all__ = [
    'DenseMatrix', 'Field', 'HermitianLowerView', 'Quadrants', 'TriangularFactor',
    'as_dense', 'dense_matrix', 'frobenius_norm', 'leading_dimension', 'materialize',
    'partition_schedule', 'quadrant_views', 'relative_distance',
    'random_hermitian', 'random_hpd', 'random_well_conditioned_lower',
    'read_hermitian', 'read_matrix', 'write_hermitian', 'write_matrix',
]
