"""
Brute-force reference computations.

Nothing here goes through the instrumented kernels: inverses come from
scipy's triangular solver against the identity and products are plain numpy
matrix multiplication on fully materialized operands.
"""

from typing import Tuple, Union
import logging
import math

import numpy as np
from scipy.linalg import solve_triangular

from ..config import ERROR_BOUND_CONSTANT
from ..errors import InvalidArgumentError, SingularFactorError
from ..matrix.core import HermitianLowerView, TriangularFactor

# Set up logging
logger = logging.getLogger(__name__)

HermitianLike = Union[HermitianLowerView, np.ndarray]
FactorLike = Union[TriangularFactor, np.ndarray]


def _full_hermitian(A: HermitianLike) -> np.ndarray:
    if isinstance(A, HermitianLowerView):
        return A.materialize()
    return HermitianLowerView(np.asarray(A)).materialize()


def _dense_factor(L: FactorLike) -> np.ndarray:
    if isinstance(L, TriangularFactor):
        return L.dense()
    return TriangularFactor(np.asarray(L)).dense()


def explicit_inverse(L: FactorLike) -> np.ndarray:
    """L^-1 by forward substitution against the identity, one column per right-hand side"""
    dense = _dense_factor(L)
    n = dense.shape[0]
    zeros = np.flatnonzero(np.diagonal(dense) == 0)
    if zeros.size:
        raise SingularFactorError(int(zeros[0]))
    if n == 0:
        return np.zeros((0, 0), dtype=dense.dtype)
    identity = np.eye(n, dtype=dense.dtype)
    return solve_triangular(dense, identity, lower=True)


def _hermitian_part(C: np.ndarray) -> np.ndarray:
    return np.asfortranarray((C + C.conj().T) / 2)


def oracle_two_sided_trsm(A_hat: HermitianLike, L: FactorLike) -> np.ndarray:
    """Full dense C = L^-1 A_hat L^-H"""
    full = _full_hermitian(A_hat)
    dense = _dense_factor(L)
    if full.shape != dense.shape:
        raise InvalidArgumentError(f"Shape mismatch: A {full.shape}, L {dense.shape}")
    inverse = explicit_inverse(dense)
    return _hermitian_part(inverse @ full @ inverse.conj().T)


def oracle_two_sided_trmm(A_hat: HermitianLike, L: FactorLike) -> np.ndarray:
    """Full dense C = L^H A_hat L"""
    full = _full_hermitian(A_hat)
    dense = _dense_factor(L)
    if full.shape != dense.shape:
        raise InvalidArgumentError(f"Shape mismatch: A {full.shape}, L {dense.shape}")
    return _hermitian_part(dense.conj().T @ full @ dense)


def quadratic_roots(qa: float, qb: float, qc: float) -> Tuple[float, float]:
    """Sorted real roots of qa x^2 + qb x + qc; a slightly negative discriminant is clamped"""
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        scale = max(qb * qb, abs(4.0 * qa * qc), 1.0)
        if disc < -1e-12 * scale:
            raise InvalidArgumentError(f"Quadratic has complex roots (discriminant {disc:.3e})")
        disc = 0.0
    q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
    if q == 0:
        return (0.0, 0.0)
    first, second = q / qa, qc / q
    return tuple(sorted((first, second)))


def oracle_generalized_eigenvalues_2x2(A: HermitianLike, B: HermitianLike) -> Tuple[float, float]:
    """Sorted roots of det(A - lambda B) = 0 for 2x2 Hermitian A and HPD B"""
    a = _full_hermitian(A)
    b = _full_hermitian(B)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise InvalidArgumentError(f"Expected 2x2 inputs, got {a.shape} and {b.shape}")

    b00, b11, b10 = b[0, 0].real, b[1, 1].real, b[1, 0]
    det_b = b00 * b11 - abs(b10) ** 2
    if not (b00 > 0 and det_b > 0):
        raise InvalidArgumentError("B must be Hermitian positive definite")

    a00, a11, a10 = a[0, 0].real, a[1, 1].real, a[1, 0]
    qb = -(a00 * b11 + a11 * b00 - 2.0 * (a10 * np.conj(b10)).real)
    qc = a00 * a11 - abs(a10) ** 2
    return quadratic_roots(det_b, float(qb), float(qc))


def condition_estimate(L: FactorLike) -> float:
    """||L||_2 * ||L^-1||_2"""
    dense = _dense_factor(L)
    if dense.size == 0:
        return 1.0
    return float(np.linalg.norm(dense, 2) * np.linalg.norm(explicit_inverse(dense), 2))


def error_bound(n: int, kappa: float = 1.0) -> float:
    """c n eps kappa^2 with c = ERROR_BOUND_CONSTANT"""
    return ERROR_BOUND_CONSTANT * max(n, 1) * np.finfo(np.float64).eps * kappa ** 2
