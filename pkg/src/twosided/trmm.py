"""
Two-sided triangular product A := L^H A L, in place on the lower triangle.

    MV1  TL = L_TL^H A_TL L_TL, BL and BR original
    MV2  TL as MV1, BL = A_BL L_TL, BR original

MV1 reads the whole finished TL block with a trmm per iteration; MV2 keeps the BL
panel right-multiplied so that work becomes a gemm over A20.
"""

from enum import Enum
from functools import partial
from typing import Collection, List, Optional, Union
import logging

import numpy as np

from ..config import DEFAULT_BLOCK_SIZE, DEFAULT_TRMM_VARIANT
from ..errors import InvalidArgumentError
from ..kernels import FlopLedger, KernelClass, gemm_update, hemm_update, her2k_update, trmm_apply
from ..matrix.core import HermitianLowerView, TriangularFactor, partition_schedule
from .blocked import (
    BoundaryHook,
    Step,
    as_factor,
    as_hermitian,
    check_operands,
    check_skip_steps,
    hermitian,
    perform,
    repartition,
    triangular,
)

# Set up logging
logger = logging.getLogger(__name__)


class TrmmVariant(str, Enum):
    MV1 = "m1"
    MV2 = "m2"

    @classmethod
    def parse(cls, name: Union[str, "TrmmVariant"]) -> "TrmmVariant":
        if isinstance(name, cls):
            return name
        text = str(name).strip().lower()
        if text.startswith("mv"):
            text = "m" + text[2:]
        try:
            return cls(text)
        except ValueError:
            raise InvalidArgumentError(f"unknown variant {name!r} for two-sided trmm; expected m1 or m2")


STEP_COUNTS = {
    TrmmVariant.MV1: 6,
    TrmmVariant.MV2: 7,
}


def two_sided_trmm_unblocked(A: Union[HermitianLowerView, np.ndarray], L: Union[TriangularFactor, np.ndarray], *,
                             ledger: Optional[FlopLedger] = None, label: str = "") -> HermitianLowerView:
    """Base case: row-by-row sweep computing L^H A L in place.

    Flops are reported as n^3 to TWO_SIDED_BASE.
    """
    A = as_hermitian(A)
    L = as_factor(L)
    check_operands(A, L)
    n = A.n
    M = A.base
    T = L.base
    diagonal = L.diagonal()

    for i in range(n):
        a11 = np.real(M[i, i])
        if i:
            l10 = T[i, :i]
            # a10 := a10 L00
            a10 = M[i, :i] @ TriangularFactor(T[:i, :i], L.unit_diagonal).dense()
            a10 = a10 + 0.5 * a11 * l10

            rows, cols = np.tril_indices(i)
            update = np.outer(a10.conj(), l10) + np.outer(l10.conj(), a10)
            top = M[:i, :i]
            top[rows, cols] += update[rows, cols]
            if np.iscomplexobj(M):
                idx = np.arange(i)
                top[idx, idx] = top[idx, idx].real

            a10 = a10 + 0.5 * a11 * l10
            M[i, :i] = np.conj(diagonal[i]) * a10
        M[i, i] = a11 * abs(diagonal[i]) ** 2

    if ledger is not None:
        ledger.record(KernelClass.TWO_SIDED_BASE, n ** 3, (n, n), ((n, n), (n, n)), label)
    return A


def _variant1_steps(a, l, L) -> List[Step]:
    l00, l11 = triangular(l.m00, L), triangular(l.m11, L)
    return [
        ("A10 := A10 L00", partial(trmm_apply, a.m10, l00, side="right")),
        ("A10 += 1/2 A11 L10", partial(hemm_update, a.m10, 0.5, hermitian(a.m11), l.m10, side="left")),
        ("A00 += A10^H L10 + L10^H A10", partial(her2k_update, hermitian(a.m00), 1.0, a.m10, l.m10, trans="C")),
        ("A10 += 1/2 A11 L10", partial(hemm_update, a.m10, 0.5, hermitian(a.m11), l.m10, side="left")),
        ("A10 := L11^H A10", partial(trmm_apply, a.m10, l11, side="left", conjugate_transpose=True)),
        ("A11 := base(A11, L11)", partial(two_sided_trmm_unblocked, hermitian(a.m11), l11)),
    ]


def _variant2_steps(a, l, L) -> List[Step]:
    l11 = triangular(l.m11, L)
    return _variant1_steps(a, l, L)[1:] + [
        ("A20 += A21 L10", partial(gemm_update, a.m20, 1.0, a.m21, l.m10)),
        ("A21 := A21 L11", partial(trmm_apply, a.m21, l11, side="right")),
    ]


_SEQUENCES = {
    TrmmVariant.MV1: _variant1_steps,
    TrmmVariant.MV2: _variant2_steps,
}


def two_sided_trmm(A: Union[HermitianLowerView, np.ndarray], L: Union[TriangularFactor, np.ndarray],
                   variant: Union[str, TrmmVariant] = DEFAULT_TRMM_VARIANT, b: int = DEFAULT_BLOCK_SIZE, *,
                   ledger: Optional[FlopLedger] = None, trace: Optional[BoundaryHook] = None,
                   skip_steps: Collection[int] = ()) -> HermitianLowerView:
    """Overwrite the lower triangle of A with L^H A L.

    Same calling conventions as two_sided_trsm; the workspace passed to the trace hook is None.
    """
    A = as_hermitian(A)
    L = as_factor(L)
    variant = TrmmVariant.parse(variant)
    schedule = partition_schedule(A.n, b)
    check_operands(A, L)
    check_skip_steps(skip_steps, STEP_COUNTS[variant], variant.value)

    n = A.n
    build_steps = _SEQUENCES[variant]
    logger.debug(f"Two-sided trmm variant {variant.value}: n={n}, b={b}, {len(schedule)} iterations")

    for k, kb in schedule:
        if trace is not None:
            trace(k, A.base, None)
        a = repartition(A.base, k, kb)
        l = repartition(L.base, k, kb)
        perform(build_steps(a, l, L), skip_steps, ledger)

    if trace is not None:
        trace(n, A.base, None)
    return A
