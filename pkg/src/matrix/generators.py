"""
Seeded test-matrix generation.

All generators draw from numpy's PCG64 bit generator, seeded with the pair
[seed, stream] where stream is a fixed per-generator constant, so the three
generators never share a random stream for the same seed.
"""

from typing import Union
import logging

import numpy as np

from .core import Field, HermitianLowerView, TriangularFactor
from ..errors import InvalidArgumentError

# Set up logging
logger = logging.getLogger(__name__)

HERMITIAN_STREAM = 101
LOWER_STREAM = 202
HPD_STREAM = 303


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), stream])


def _uniform(rng: np.random.Generator, shape, low: float, high: float, field: Field) -> np.ndarray:
    values = rng.uniform(low, high, size=shape)
    if field is Field.COMPLEX:
        values = values + 1j * rng.uniform(low, high, size=shape)
    return values


def _check_dim(n: int):
    if n < 0:
        raise InvalidArgumentError(f"Matrix dimension must be nonnegative, got {n}")


def random_hermitian(n: int, seed: int, field: Union[Field, str] = Field.REAL) -> HermitianLowerView:
    """(M + M^H) / 2 with entries of M uniform in [-1, 1]"""
    _check_dim(n)
    field = Field(field)
    rng = _rng(seed, HERMITIAN_STREAM)
    M = _uniform(rng, (n, n), -1.0, 1.0, field)
    H = (M + M.conj().T) / 2
    if field is Field.COMPLEX:
        idx = np.arange(n)
        H[idx, idx] = H[idx, idx].real
    return HermitianLowerView(np.asfortranarray(H.astype(field.dtype)))


def random_well_conditioned_lower(n: int, seed: int, field: Union[Field, str] = Field.REAL) -> TriangularFactor:
    """Strictly lower entries uniform in [-0.5, 0.5]; real diagonal uniform in [1, 2]"""
    _check_dim(n)
    field = Field(field)
    rng = _rng(seed, LOWER_STREAM)
    strict = np.tril(_uniform(rng, (n, n), -0.5, 0.5, field), -1)
    diagonal = rng.uniform(1.0, 2.0, size=n)
    L = strict + np.diag(diagonal)
    return TriangularFactor(np.asfortranarray(L.astype(field.dtype)))


def random_hpd(n: int, seed: int, field: Union[Field, str] = Field.REAL) -> HermitianLowerView:
    """M M^H + n I for M uniform in [-1, 1]; positive definite by construction"""
    _check_dim(n)
    field = Field(field)
    rng = _rng(seed, HPD_STREAM)
    M = _uniform(rng, (n, n), -1.0, 1.0, field)
    B = M @ M.conj().T + n * np.eye(n)
    if field is Field.COMPLEX:
        idx = np.arange(n)
        B[idx, idx] = B[idx, idx].real
    return HermitianLowerView(np.asfortranarray(B.astype(field.dtype)))
