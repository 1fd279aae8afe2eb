from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Tuple, Union
import logging

import numpy as np

from ..errors import InvalidArgumentError, SingularFactorError

# Set up logging
logger = logging.getLogger(__name__)

# Column-major scalar grid. Shape gives rows/cols, strides[1] the leading dimension.
DenseMatrix = np.ndarray


class Field(str, Enum):
    """Scalar field the matrices live in"""
    REAL = "real"
    COMPLEX = "complex"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128

    @classmethod
    def of(cls, array: np.ndarray) -> "Field":
        return cls.COMPLEX if np.iscomplexobj(array) else cls.REAL


def dense_matrix(rows: int, cols: int, dtype=np.float64) -> DenseMatrix:
    """Allocate a zeroed column-major matrix"""
    if rows < 0 or cols < 0:
        raise InvalidArgumentError(f"Matrix dimensions must be nonnegative, got {rows}x{cols}")
    return np.zeros((rows, cols), dtype=dtype, order="F")


def as_dense(values, dtype=None) -> DenseMatrix:
    """Copy any 2-D array-like into a fresh column-major matrix"""
    array = np.array(values, dtype=dtype, order="F", copy=True)
    if array.ndim != 2:
        raise InvalidArgumentError(f"Expected a 2-D matrix, got {array.ndim} dimensions")
    if not np.iscomplexobj(array):
        array = array.astype(np.float64, order="F", copy=False)
    return array


def leading_dimension(M: DenseMatrix) -> int:
    """Distance in elements between consecutive columns"""
    if M.shape[1] <= 1:
        return max(M.shape[0], 1)
    return M.strides[1] // M.itemsize


def materialize(lower: np.ndarray) -> np.ndarray:
    """Full Hermitian matrix from the lower triangle of a square buffer"""
    full = np.tril(lower) + np.tril(lower, -1).conj().T
    if np.iscomplexobj(full):
        idx = np.arange(full.shape[0])
        full[idx, idx] = full[idx, idx].real
    return np.asfortranarray(full)


@dataclass
class HermitianLowerView:
    """Square buffer of which only the lower triangle is significant"""
    base: DenseMatrix

    def __post_init__(self):
        if self.base.ndim != 2 or self.base.shape[0] != self.base.shape[1]:
            raise InvalidArgumentError(f"Hermitian view needs a square buffer, got shape {self.base.shape}")

    @property
    def n(self) -> int:
        return self.base.shape[0]

    @property
    def dtype(self):
        return self.base.dtype

    def lower(self) -> np.ndarray:
        return np.tril(self.base)

    def materialize(self) -> np.ndarray:
        return materialize(self.base)

    def copy(self) -> "HermitianLowerView":
        return HermitianLowerView(np.array(self.base, order="F", copy=True))

    def block(self, start: int, stop: int) -> "HermitianLowerView":
        """Diagonal block as an aliasing view"""
        return HermitianLowerView(self.base[start:stop, start:stop])


@dataclass
class TriangularFactor:
    """Lower-triangular factor; strictly upper entries are treated as zero"""
    base: DenseMatrix
    unit_diagonal: bool = False

    def __post_init__(self):
        if self.base.ndim != 2 or self.base.shape[0] != self.base.shape[1]:
            raise InvalidArgumentError(f"Triangular factor needs a square buffer, got shape {self.base.shape}")

    @property
    def n(self) -> int:
        return self.base.shape[0]

    @property
    def dtype(self):
        return self.base.dtype

    def diagonal(self) -> np.ndarray:
        if self.unit_diagonal:
            return np.ones(self.n, dtype=self.dtype)
        return np.diagonal(self.base).copy()

    def dense(self) -> np.ndarray:
        """Materialize with explicit zeros above the diagonal"""
        full = np.tril(self.base)
        if self.unit_diagonal:
            np.fill_diagonal(full, 1.0)
        return np.asfortranarray(full)

    def block(self, start: int, stop: int) -> "TriangularFactor":
        """Diagonal block as an aliasing view (inherits the diagonal tag)"""
        return TriangularFactor(self.base[start:stop, start:stop], self.unit_diagonal)

    def check_nonsingular(self):
        if self.unit_diagonal:
            return
        zeros = np.flatnonzero(np.diagonal(self.base) == 0)
        if zeros.size:
            raise SingularFactorError(int(zeros[0]))

    def copy(self) -> "TriangularFactor":
        return TriangularFactor(np.array(self.base, order="F", copy=True), self.unit_diagonal)


class Quadrants(NamedTuple):
    TL: DenseMatrix
    TR: DenseMatrix
    BL: DenseMatrix
    BR: DenseMatrix


def partition_schedule(n: int, b: int) -> List[Tuple[int, int]]:
    """Boundaries k = 0, b, 2b, ... paired with the exposed block size min(b, n - k)"""
    if b is None or b < 1:
        raise InvalidArgumentError(f"Block size must be at least 1, got {b}")
    if n < 0:
        raise InvalidArgumentError(f"Matrix dimension must be nonnegative, got {n}")
    return [(k, min(b, n - k)) for k in range(0, n, b)]


def quadrant_views(M: DenseMatrix, k: int) -> Quadrants:
    """TL/TR/BL/BR views split at row and column k; all alias M"""
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentError(f"Quadrant views need a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if k < 0 or k > n:
        raise InvalidArgumentError(f"Partition boundary k={k} outside [0, {n}]")
    return Quadrants(TL=M[:k, :k], TR=M[:k, k:], BL=M[k:, :k], BR=M[k:, k:])


def frobenius_norm(M: Union[DenseMatrix, HermitianLowerView, TriangularFactor]) -> float:
    """Square root of the sum of squared magnitudes"""
    if isinstance(M, HermitianLowerView):
        M = M.materialize()
    elif isinstance(M, TriangularFactor):
        M = M.dense()
    if M.size == 0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(M) ** 2)))


def relative_distance(X: np.ndarray, R: np.ndarray) -> float:
    """||X - R||_F / ||R||_F, or the absolute distance when R vanishes"""
    if X.shape != R.shape:
        raise InvalidArgumentError(f"Cannot compare shapes {X.shape} and {R.shape}")
    diff = frobenius_norm(np.asarray(X) - np.asarray(R))
    scale = frobenius_norm(np.asarray(R))
    return diff / scale if scale > 0 else diff
