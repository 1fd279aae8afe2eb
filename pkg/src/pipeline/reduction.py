"""
End-to-end reduction of A x = lambda B x to the standard problem C z = lambda z:
Cholesky of B, the two-sided solve of A, and the back-transform x = L^-H z.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union
import logging

import numpy as np

from ..config import DEFAULT_BLOCK_SIZE, DEFAULT_TRSM_VARIANT
from ..errors import InvalidArgumentError
from ..kernels import FlopLedger, cholesky_lower, trsm_apply
from ..matrix.core import HermitianLowerView, TriangularFactor, frobenius_norm
from ..oracle import oracle_generalized_eigenvalues_2x2, quadratic_roots
from ..twosided import TrsmVariant, two_sided_trsm

# Set up logging
logger = logging.getLogger(__name__)


@dataclass
class ReductionResult:
    C: HermitianLowerView
    L: TriangularFactor
    residual: float
    ledger: FlopLedger
    variant: str = DEFAULT_TRSM_VARIANT
    b: int = DEFAULT_BLOCK_SIZE


def _view(M: Union[HermitianLowerView, np.ndarray]) -> HermitianLowerView:
    return M if isinstance(M, HermitianLowerView) else HermitianLowerView(np.asarray(M))


def reconstruction_residual(C: HermitianLowerView, L: TriangularFactor, A: HermitianLowerView) -> float:
    """||L C L^H - A||_F / ||A||_F (absolute when A vanishes)"""
    dense = L.dense()
    target = A.materialize()
    diff = frobenius_norm(dense @ C.materialize() @ dense.conj().T - target)
    scale = frobenius_norm(target)
    return diff / scale if scale > 0 else diff


def reduce(A: Union[HermitianLowerView, np.ndarray], B: Union[HermitianLowerView, np.ndarray],
           variant: Union[str, TrsmVariant] = DEFAULT_TRSM_VARIANT, b: int = DEFAULT_BLOCK_SIZE, *,
           ledger: Optional[FlopLedger] = None) -> ReductionResult:
    """Reduce the pair (A, B) to standard form; A and B are left untouched"""
    A = _view(A)
    B = _view(B)
    if A.n != B.n:
        raise InvalidArgumentError(f"A is {A.n}x{A.n} but B is {B.n}x{B.n}")
    variant = TrsmVariant.parse(variant)
    ledger = ledger if ledger is not None else FlopLedger()

    L = cholesky_lower(B, ledger=ledger, label="B = L L^H")
    dtype = np.result_type(A.dtype, L.dtype)
    C = HermitianLowerView(np.array(A.base, dtype=dtype, order="F", copy=True))
    two_sided_trsm(C, L, variant, b, ledger=ledger)

    residual = reconstruction_residual(C, L, A)
    logger.info(f"Reduced n={A.n} pair with variant {variant.value}, b={b}: residual {residual:.3e}")
    return ReductionResult(C=C, L=L, residual=residual, ledger=ledger, variant=variant.value, b=b)


def recover_generalized_eigenvector(z: np.ndarray, L: TriangularFactor, *,
                                    ledger: Optional[FlopLedger] = None) -> np.ndarray:
    """x = L^-H z, so that A x = lambda B x whenever C z = lambda z"""
    z = np.asarray(z)
    vector = z.ndim == 1
    dtype = np.result_type(z.dtype, L.dtype, np.float64)
    x = np.array(z.reshape(-1, 1) if vector else z, dtype=dtype, order="F", copy=True)
    trsm_apply(x, L, side="left", conjugate_transpose=True, ledger=ledger, label="x := L^-H z")
    return x[:, 0] if vector else x


def standard_eigenvalues_2x2(C: Union[HermitianLowerView, np.ndarray]) -> Tuple[float, float]:
    """Sorted roots of det(C - lambda I) for a 2x2 Hermitian C"""
    full = _view(C).materialize()
    if full.shape != (2, 2):
        raise InvalidArgumentError(f"Expected a 2x2 matrix, got {full.shape}")
    c00, c11, c10 = full[0, 0].real, full[1, 1].real, full[1, 0]
    return quadratic_roots(1.0, -(c00 + c11), c00 * c11 - abs(c10) ** 2)


def eigencheck_2x2(A: Union[HermitianLowerView, np.ndarray], B: Union[HermitianLowerView, np.ndarray],
                   variant: Union[str, TrsmVariant] = DEFAULT_TRSM_VARIANT,
                   b: int = DEFAULT_BLOCK_SIZE) -> Tuple[Tuple[float, float], Tuple[float, float], float]:
    """(eigenvalues of the reduced C, generalized eigenvalues of (A, B), max deviation)"""
    result = reduce(A, B, variant, b)
    reduced = standard_eigenvalues_2x2(result.C)
    expected = oracle_generalized_eigenvalues_2x2(A, B)
    deviation = max(abs(r - e) for r, e in zip(reduced, expected))
    logger.debug(f"2x2 eigencheck: reduced {reduced}, generalized {expected}, deviation {deviation:.3e}")
    return reduced, expected, deviation
