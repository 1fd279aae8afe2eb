"""
Reference level-3 kernels.

Every kernel is a plain loop over rows or columns whose body is a numpy vector
operation, and reports its flop count (in scalar multiply-add units, identical for
real and complex fields) to an optional FlopLedger:

    gemm   2mnk        hemm   2 m^2 n (m = Hermitian dimension)
    her2k  2 n^2 k     herk   n^2 k
    trsm   m^2 r       trmm   m^2 r  (m = triangular dimension, r = right-hand sides)
    chol   n^3 / 3     axpy   m n (class OTHER)

Hermitian operands are read through their lower triangle only, and Hermitian
results (her2k, herk) are written to the lower triangle only.
"""

from typing import Optional
import logging
import math

import numpy as np

from .ledger import FlopLedger, KernelClass
from ..errors import InvalidArgumentError, NotPositiveDefiniteError
from ..matrix.core import HermitianLowerView, TriangularFactor

# Set up logging
logger = logging.getLogger(__name__)

TRANS_FLAGS = ("N", "T", "C")
SIDES = ("left", "right")


def _op(M: np.ndarray, trans: str) -> np.ndarray:
    if trans == "N":
        return M
    if trans == "T":
        return M.T
    if trans == "C":
        return M.conj().T
    raise InvalidArgumentError(f"Unknown transpose flag {trans!r}; expected one of {TRANS_FLAGS}")


def _check_side(side: str):
    if side not in SIDES:
        raise InvalidArgumentError(f"Unknown side {side!r}; expected one of {SIDES}")


def _scale(block: np.ndarray, beta):
    if beta == 0:
        block[...] = 0
    elif beta != 1:
        block *= beta


def _record(ledger: Optional[FlopLedger], kernel_class: KernelClass, flops: int, written, operands, label: str):
    if ledger is not None:
        ledger.record(kernel_class, flops, tuple(written), tuple(tuple(s) for s in operands), label)


def gemm_update(C: np.ndarray, alpha, A: np.ndarray, B: np.ndarray, beta=1.0, *,
                trans_a: str = "N", trans_b: str = "N",
                ledger: Optional[FlopLedger] = None, label: str = "") -> np.ndarray:
    """C := alpha op(A) op(B) + beta C"""
    opA = _op(A, trans_a)
    opB = _op(B, trans_b)
    m, n = C.shape
    if opA.shape[0] != m or opB.shape[1] != n or opA.shape[1] != opB.shape[0]:
        raise InvalidArgumentError(
            f"gemm dimension mismatch: C {C.shape}, op(A) {opA.shape}, op(B) {opB.shape}"
        )
    k = opA.shape[1]

    _scale(C, beta)
    if alpha != 0 and k > 0:
        for j in range(n):
            C[:, j] += alpha * (opA @ opB[:, j])

    _record(ledger, KernelClass.GEMM, 2 * m * n * k, C.shape, (A.shape, B.shape), label)
    return C


def hemm_update(C: np.ndarray, alpha, H: HermitianLowerView, B: np.ndarray, beta=1.0, *,
                side: str = "left", ledger: Optional[FlopLedger] = None, label: str = "") -> np.ndarray:
    """C := alpha H B + beta C (left) or alpha B H + beta C (right)"""
    _check_side(side)
    m = H.n
    if B.shape != C.shape:
        raise InvalidArgumentError(f"hemm dimension mismatch: C {C.shape}, B {B.shape}")
    if side == "left" and B.shape[0] != m or side == "right" and B.shape[1] != m:
        raise InvalidArgumentError(f"hemm dimension mismatch: H is {m}x{m}, B {B.shape}, side {side}")
    other = B.shape[1] if side == "left" else B.shape[0]

    full = H.materialize()
    _scale(C, beta)
    if alpha != 0 and other > 0:
        if side == "left":
            for j in range(C.shape[1]):
                C[:, j] += alpha * (full @ B[:, j])
        else:
            for j in range(m):
                C[:, j] += alpha * (B @ full[:, j])

    _record(ledger, KernelClass.HEMM, 2 * m * m * other, C.shape, ((m, m), B.shape), label)
    return C


def her2k_update(C: HermitianLowerView, alpha, A: np.ndarray, B: np.ndarray, beta=1.0, *,
                 trans: str = "N", ledger: Optional[FlopLedger] = None, label: str = "") -> HermitianLowerView:
    """Lower triangle of C := alpha A B^H + conj(alpha) B A^H + beta C ("N"),
    or alpha A^H B + conj(alpha) B^H A + beta C ("C")"""
    if np.imag(beta) != 0:
        raise InvalidArgumentError(f"her2k needs a real beta, got {beta}")
    n = C.n
    if trans == "N":
        rows, k = A.shape
        left_a, left_b = A, B
        right_a, right_b = B.conj(), A.conj()
    elif trans == "C":
        k, rows = A.shape
        left_a, left_b = A.conj().T, B.conj().T
        right_a, right_b = B, A
    else:
        raise InvalidArgumentError(f"her2k transpose flag must be 'N' or 'C', got {trans!r}")
    if rows != n or A.shape != B.shape:
        raise InvalidArgumentError(f"her2k dimension mismatch: C {n}x{n}, A {A.shape}, B {B.shape}")

    base = C.base
    complex_result = np.iscomplexobj(base)
    beta = np.real(beta)
    conj_alpha = np.conj(alpha)
    for j in range(n):
        column = base[j:, j]
        _scale(column, beta)
        if alpha != 0 and k > 0:
            if trans == "N":
                column += alpha * (left_a[j:, :] @ right_a[j, :]) + conj_alpha * (left_b[j:, :] @ right_b[j, :])
            else:
                column += alpha * (left_a[j:, :] @ right_a[:, j]) + conj_alpha * (left_b[j:, :] @ right_b[:, j])
        if complex_result:
            base[j, j] = base[j, j].real

    _record(ledger, KernelClass.HER2K, 2 * n * n * k, (n, n), (A.shape, B.shape), label)
    return C


def herk_update(C: HermitianLowerView, alpha, A: np.ndarray, beta=1.0, *,
                trans: str = "N", ledger: Optional[FlopLedger] = None, label: str = "") -> HermitianLowerView:
    """Lower triangle of C := alpha A A^H + beta C ("N") or alpha A^H A + beta C ("C")"""
    if np.imag(alpha) != 0 or np.imag(beta) != 0:
        raise InvalidArgumentError(f"herk needs real alpha and beta, got {alpha}, {beta}")
    n = C.n
    if trans == "N":
        rows, k = A.shape
        left, right = A, A.conj()
    elif trans == "C":
        k, rows = A.shape
        left, right = A.conj().T, A
    else:
        raise InvalidArgumentError(f"herk transpose flag must be 'N' or 'C', got {trans!r}")
    if rows != n:
        raise InvalidArgumentError(f"herk dimension mismatch: C {n}x{n}, A {A.shape}")

    base = C.base
    complex_result = np.iscomplexobj(base)
    alpha, beta = np.real(alpha), np.real(beta)
    for j in range(n):
        column = base[j:, j]
        _scale(column, beta)
        if alpha != 0 and k > 0:
            if trans == "N":
                column += alpha * (left[j:, :] @ right[j, :])
            else:
                column += alpha * (left[j:, :] @ right[:, j])
        if complex_result:
            base[j, j] = base[j, j].real

    _record(ledger, KernelClass.HERK, n * n * k, (n, n), (A.shape,), label)
    return C


def _triangular_shapes(B: np.ndarray, L: TriangularFactor, side: str, name: str) -> int:
    _check_side(side)
    m = L.n
    if side == "left" and B.shape[0] != m or side == "right" and B.shape[1] != m:
        raise InvalidArgumentError(f"{name} dimension mismatch: L is {m}x{m}, B {B.shape}, side {side}")
    return B.shape[1] if side == "left" else B.shape[0]


def trsm_apply(B: np.ndarray, L: TriangularFactor, *, side: str = "left", conjugate_transpose: bool = False,
               ledger: Optional[FlopLedger] = None, label: str = "") -> np.ndarray:
    """B := L^-1 B, B L^-1, L^-H B or B L^-H by substitution"""
    r = _triangular_shapes(B, L, side, "trsm")
    L.check_nonsingular()
    m = L.n
    T = L.base
    unit = L.unit_diagonal

    if r > 0:
        if side == "left" and not conjugate_transpose:
            for i in range(m):
                if i:
                    B[i, :] -= T[i, :i] @ B[:i, :]
                if not unit:
                    B[i, :] /= T[i, i]
        elif side == "left":
            for i in reversed(range(m)):
                if i + 1 < m:
                    B[i, :] -= T[i + 1:, i].conj() @ B[i + 1:, :]
                if not unit:
                    B[i, :] /= np.conj(T[i, i])
        elif not conjugate_transpose:
            for j in reversed(range(m)):
                if j + 1 < m:
                    B[:, j] -= B[:, j + 1:] @ T[j + 1:, j]
                if not unit:
                    B[:, j] /= T[j, j]
        else:
            for j in range(m):
                if j:
                    B[:, j] -= B[:, :j] @ T[j, :j].conj()
                if not unit:
                    B[:, j] /= np.conj(T[j, j])

    _record(ledger, KernelClass.TRSM, m * m * r, B.shape, ((m, m), B.shape), label)
    return B


def trmm_apply(B: np.ndarray, L: TriangularFactor, *, side: str = "left", conjugate_transpose: bool = False,
               ledger: Optional[FlopLedger] = None, label: str = "") -> np.ndarray:
    """B := L B, B L, L^H B or B L^H"""
    r = _triangular_shapes(B, L, side, "trmm")
    m = L.n
    T = L.base
    diagonal = L.diagonal()

    if r > 0:
        if side == "left" and not conjugate_transpose:
            for i in reversed(range(m)):
                row = diagonal[i] * B[i, :]
                if i:
                    row = row + T[i, :i] @ B[:i, :]
                B[i, :] = row
        elif side == "left":
            for i in range(m):
                row = np.conj(diagonal[i]) * B[i, :]
                if i + 1 < m:
                    row = row + T[i + 1:, i].conj() @ B[i + 1:, :]
                B[i, :] = row
        elif not conjugate_transpose:
            for j in range(m):
                column = diagonal[j] * B[:, j]
                if j + 1 < m:
                    column = column + B[:, j + 1:] @ T[j + 1:, j]
                B[:, j] = column
        else:
            for j in reversed(range(m)):
                column = np.conj(diagonal[j]) * B[:, j]
                if j:
                    column = column + B[:, :j] @ T[j, :j].conj()
                B[:, j] = column

    _record(ledger, KernelClass.TRMM, m * m * r, B.shape, ((m, m), B.shape), label)
    return B


def axpy_update(Y: np.ndarray, alpha, X: np.ndarray, *,
                ledger: Optional[FlopLedger] = None, label: str = "") -> np.ndarray:
    """Y := Y + alpha X"""
    if X.shape != Y.shape:
        raise InvalidArgumentError(f"axpy dimension mismatch: Y {Y.shape}, X {X.shape}")
    if alpha != 0 and Y.size:
        Y += alpha * X
    _record(ledger, KernelClass.OTHER, Y.shape[0] * Y.shape[1], Y.shape, (X.shape,), label)
    return Y


def cholesky_lower(B: HermitianLowerView, *, ledger: Optional[FlopLedger] = None,
                   label: str = "") -> TriangularFactor:
    """Lower-triangular L with L L^H = B, read from the lower triangle of B"""
    n = B.n
    source = B.base
    L = np.zeros((n, n), dtype=source.dtype, order="F")

    for j in range(n):
        row = L[j, :j]
        pivot = float(np.real(source[j, j]) - np.sum(np.abs(row) ** 2))
        if not pivot > 0:
            logger.debug(f"Cholesky failed at index {j} with pivot {pivot}")
            raise NotPositiveDefiniteError(j, pivot)
        diagonal = math.sqrt(pivot)
        L[j, j] = diagonal
        if j + 1 < n:
            L[j + 1:, j] = (source[j + 1:, j] - L[j + 1:, :j] @ row.conj()) / diagonal

    _record(ledger, KernelClass.CHOL, round(n ** 3 / 3), (n, n), ((n, n),), label)
    return TriangularFactor(L)
