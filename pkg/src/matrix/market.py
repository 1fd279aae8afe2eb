from pathlib import Path
from typing import Union
import logging

import numpy as np
import scipy.io
import scipy.sparse

from .core import HermitianLowerView, as_dense
from ..errors import MatrixFileError

# Set up logging
logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_matrix(path: PathLike) -> np.ndarray:
    """Read a dense matrix from a Matrix Market file (array or coordinate format)"""
    try:
        data = scipy.io.mmread(str(path))
    except (OSError, ValueError) as e:
        logger.error(f"Could not read Matrix Market file {path}: {str(e)}")
        raise MatrixFileError(f"Could not read Matrix Market file {path}: {e}") from e

    if scipy.sparse.issparse(data):
        data = data.toarray()
    matrix = as_dense(data)
    logger.debug(f"Read {matrix.shape[0]}x{matrix.shape[1]} matrix from {path}")
    return matrix


def read_hermitian(path: PathLike) -> HermitianLowerView:
    """Read a square matrix; only its lower triangle is used"""
    matrix = read_matrix(path)
    if matrix.shape[0] != matrix.shape[1]:
        raise MatrixFileError(f"Expected a square matrix in {path}, got shape {matrix.shape}")
    return HermitianLowerView(matrix)


def write_matrix(path: PathLike, matrix: np.ndarray, comment: str = ""):
    """Write a dense matrix in Matrix Market array format"""
    try:
        scipy.io.mmwrite(str(path), np.asarray(matrix), comment=comment, field=None, symmetry="general")
    except OSError as e:
        logger.error(f"Could not write Matrix Market file {path}: {str(e)}")
        raise MatrixFileError(f"Could not write Matrix Market file {path}: {e}") from e
    logger.debug(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")


def write_hermitian(path: PathLike, H: HermitianLowerView, comment: str = ""):
    """Write the materialized full form of a Hermitian matrix"""
    write_matrix(path, H.materialize(), comment=comment)
