"""
Instrumented level-3 building blocks and the flop ledger they report to.
"""

from .ledger import FlopLedger, KernelCall, KernelClass
from .blas import (
    axpy_update,
    cholesky_lower,
    gemm_update,
    hemm_update,
    her2k_update,
    herk_update,
    trmm_apply,
    trsm_apply,
)

__all__ = [
    'FlopLedger', 'KernelCall', 'KernelClass',
    'axpy_update', 'cholesky_lower', 'gemm_update', 'hemm_update',
    'her2k_update', 'herk_update', 'trmm_apply', 'trsm_apply',
]
