"""
Two-sided triangular solve A := L^-1 A L^-H, in place on the lower triangle.

Five blocked variants march a partition boundary k through A and L. Each keeps a
different loop invariant over the quadrants of A at every boundary:

    V1  TL final, BL and BR original
    V2  TL final, BL = A_BL L_TL^-H, BR original
    V3  as V2 with BL shifted by -1/2 Y_BL, where Y_BL = L_BL C_TL is kept in a panel
    V4  TL final, BL = L_BR C_BL, BR = A_BR - L_BL W^H - W L_BL^H
    V5  TL and BL final, BR as V4

with W = L_BR C_BL + 1/2 L_BL C_TL. The strictly upper part of the buffer is never read
or written.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Collection, List, Optional, Union
import logging

import numpy as np

from ..config import DEFAULT_BLOCK_SIZE, DEFAULT_TRSM_VARIANT
from ..errors import InvalidArgumentError
from ..kernels import (
    FlopLedger,
    KernelClass,
    axpy_update,
    gemm_update,
    hemm_update,
    her2k_update,
    trsm_apply,
)
from ..matrix.core import HermitianLowerView, TriangularFactor, dense_matrix, partition_schedule
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


class TrsmVariant(str, Enum):
    V1 = "1"
    V2 = "2"
    V3 = "3"
    V4 = "4"
    V5 = "5"

    @classmethod
    def parse(cls, name: Union[str, int, "TrsmVariant"]) -> "TrsmVariant":
        if isinstance(name, cls):
            return name
        text = str(name).strip().upper().lstrip("V")
        try:
            return cls(text)
        except ValueError:
            raise InvalidArgumentError(f"unknown variant {name!r} for two-sided trsm; expected one of 1-5")


STEP_COUNTS = {
    TrsmVariant.V1: 7,
    TrsmVariant.V2: 8,
    TrsmVariant.V3: 12,
    TrsmVariant.V4: 7,
    TrsmVariant.V5: 6,
}


@dataclass
class TrsmWorkspace:
    """Scratch storage for one run.

    panel is a b x n row panel shared by all variants (V1 and V2 keep Y10 = L10 C00 there).
    V3 additionally keeps Y_BL = L_BL C_TL, (n - k) x k at boundary k. Its rows are stored at
    their global row index in one buffer allocated at first need, so moving the boundary
    never copies; y is a view of the live part.
    """
    n: int
    b: int
    dtype: np.dtype
    panel: np.ndarray = field(init=False)
    buffer: Optional[np.ndarray] = None
    boundary: int = 0
    high_water: int = 0

    def __post_init__(self):
        self.panel = dense_matrix(min(self.b, self.n), self.n, self.dtype)

    @property
    def first_row(self) -> int:
        # Y rows above the first block never carry a column
        return min(self.b, self.n)

    @property
    def y(self) -> Optional[np.ndarray]:
        if self.buffer is None:
            return None
        k = self.boundary
        if k == 0:
            return dense_matrix(self.n, 0, self.dtype)
        return self.buffer[k - self.first_row:, :k]

    def reset(self):
        """Forget the previous run; the Y buffer is kept for reuse"""
        self.boundary = 0
        self.high_water = 0

    def scratch(self, rows: int, cols: int) -> np.ndarray:
        return self.panel[:rows, :cols]

    def begin_y(self, k: int, kb: int):
        """Views of Y10, Y20 and Y21 for the iteration that moves the boundary from k to k + kb"""
        if self.buffer is None:
            self.buffer = dense_matrix(self.n - self.first_row, self.n, self.dtype)
        start = k + kb - self.first_row
        if k:
            y10 = self.buffer[k - self.first_row:start, :k]
        else:
            y10 = dense_matrix(kb, 0, self.dtype)
        held = (self.n - k - kb) * (k + kb)
        if held > self.high_water:
            self.high_water = held
            logger.debug(f"Y panel high-water mark now {held} scalars at k={k}")
        return y10, self.buffer[start:, :k], self.buffer[start:, k:k + kb]

    def finish_y(self, k: int, kb: int):
        self.boundary = k + kb


def two_sided_trsm_unblocked(A: Union[HermitianLowerView, np.ndarray], L: Union[TriangularFactor, np.ndarray], *,
                             ledger: Optional[FlopLedger] = None, label: str = "") -> HermitianLowerView:
    """Base case: row-by-row sweep that solves L C L^H = A in place.

    Row i finishes a10 against the already computed C00 (solve with L00^H from the right,
    fold in Y10 = l10 C00 in two halves around the rank-2 update of a11) then divides by l11.
    Flops are reported as n^3 to TWO_SIDED_BASE.
    """
    A = as_hermitian(A)
    L = as_factor(L)
    check_operands(A, L)
    L.check_nonsingular()
    n = A.n
    M = A.base
    T = L.base
    diagonal = L.diagonal()

    for i in range(n):
        a10 = M[i, :i].copy()
        l10 = T[i, :i]

        # a10 := a10 L00^-H
        for j in range(i):
            if j:
                a10[j] -= a10[:j] @ T[j, :j].conj()
            a10[j] /= np.conj(diagonal[j])

        a11 = M[i, i]
        if i:
            y10 = l10 @ HermitianLowerView(M[:i, :i]).materialize()
            a10 -= 0.5 * y10
            a11 = a11 - 2.0 * np.real(a10 @ l10.conj())
            a10 -= 0.5 * y10
        a10 /= diagonal[i]
        a11 = np.real(a11) / abs(diagonal[i]) ** 2

        M[i, :i] = a10
        M[i, i] = a11

    if ledger is not None:
        ledger.record(KernelClass.TWO_SIDED_BASE, n ** 3, (n, n), ((n, n), (n, n)), label)
    return A


def _variant1_steps(a, l, L, ws: TrsmWorkspace) -> List[Step]:
    y10 = ws.scratch(a.kb, a.k)
    l00, l11 = triangular(l.m00, L), triangular(l.m11, L)
    return [
        ("A10 := A10 L00^-H", partial(trsm_apply, a.m10, l00, side="right", conjugate_transpose=True)),
        ("Y10 := L10 A00", partial(hemm_update, y10, 1.0, hermitian(a.m00), l.m10, 0.0, side="right")),
        ("A10 -= 1/2 Y10", partial(axpy_update, a.m10, -0.5, y10)),
        ("A11 -= A10 L10^H + L10 A10^H", partial(her2k_update, hermitian(a.m11), -1.0, a.m10, l.m10)),
        ("A10 -= 1/2 Y10", partial(axpy_update, a.m10, -0.5, y10)),
        ("A10 := L11^-1 A10", partial(trsm_apply, a.m10, l11, side="left")),
        ("A11 := base(A11, L11)", partial(two_sided_trsm_unblocked, hermitian(a.m11), l11)),
    ]


def _variant2_steps(a, l, L, ws: TrsmWorkspace) -> List[Step]:
    l11 = triangular(l.m11, L)
    return _variant1_steps(a, l, L, ws)[1:] + [
        ("A21 -= A20 L10^H", partial(gemm_update, a.m21, -1.0, a.m20, l.m10, trans_b="C")),
        ("A21 := A21 L11^-H", partial(trsm_apply, a.m21, l11, side="right", conjugate_transpose=True)),
    ]


def _variant3_steps(a, l, L, ws: TrsmWorkspace) -> List[Step]:
    y10, y20, y21 = ws.begin_y(a.k, a.kb)
    l11 = triangular(l.m11, L)
    return [
        ("A11 -= A10 L10^H + L10 A10^H", partial(her2k_update, hermitian(a.m11), -1.0, a.m10, l.m10)),
        ("A10 -= 1/2 Y10", partial(axpy_update, a.m10, -0.5, y10)),
        ("A10 := L11^-1 A10", partial(trsm_apply, a.m10, l11, side="left")),
        ("A11 := base(A11, L11)", partial(two_sided_trsm_unblocked, hermitian(a.m11), l11)),
        ("A20 += 1/2 Y20", partial(axpy_update, a.m20, 0.5, y20)),
        ("A21 -= A20 L10^H", partial(gemm_update, a.m21, -1.0, a.m20, l.m10, trans_b="C")),
        ("A21 := A21 L11^-H", partial(trsm_apply, a.m21, l11, side="right", conjugate_transpose=True)),
        ("Y20 += L21 A10", partial(gemm_update, y20, 1.0, l.m21, a.m10)),
        ("Y21 := L20 A10^H", partial(gemm_update, y21, 1.0, l.m20, a.m10, 0.0, trans_b="C")),
        ("Y21 += L21 A11", partial(hemm_update, y21, 1.0, hermitian(a.m11), l.m21, side="right")),
        ("A20 -= 1/2 Y20", partial(axpy_update, a.m20, -0.5, y20)),
        ("A21 -= 1/2 Y21", partial(axpy_update, a.m21, -0.5, y21)),
    ]


def _variant4_steps(a, l, L, ws: TrsmWorkspace) -> List[Step]:
    l11 = triangular(l.m11, L)
    return [
        ("A10 := L11^-1 A10", partial(trsm_apply, a.m10, l11, side="left")),
        ("A11 := base(A11, L11)", partial(two_sided_trsm_unblocked, hermitian(a.m11), l11)),
        ("A20 -= L21 A10", partial(gemm_update, a.m20, -1.0, l.m21, a.m10)),
        ("A21 := A21 L11^-H", partial(trsm_apply, a.m21, l11, side="right", conjugate_transpose=True)),
        ("A21 -= 1/2 L21 A11", partial(hemm_update, a.m21, -0.5, hermitian(a.m11), l.m21, side="right")),
        ("A22 -= L21 A21^H + A21 L21^H", partial(her2k_update, hermitian(a.m22), -1.0, l.m21, a.m21)),
        ("A21 -= 1/2 L21 A11", partial(hemm_update, a.m21, -0.5, hermitian(a.m11), l.m21, side="right")),
    ]


def _variant5_steps(a, l, L, ws: TrsmWorkspace) -> List[Step]:
    l11, l22 = triangular(l.m11, L), triangular(l.m22, L)
    return [
        ("A11 := base(A11, L11)", partial(two_sided_trsm_unblocked, hermitian(a.m11), l11)),
        ("A21 := A21 L11^-H", partial(trsm_apply, a.m21, l11, side="right", conjugate_transpose=True)),
        ("A21 -= 1/2 L21 A11", partial(hemm_update, a.m21, -0.5, hermitian(a.m11), l.m21, side="right")),
        ("A22 -= L21 A21^H + A21 L21^H", partial(her2k_update, hermitian(a.m22), -1.0, l.m21, a.m21)),
        ("A21 -= 1/2 L21 A11", partial(hemm_update, a.m21, -0.5, hermitian(a.m11), l.m21, side="right")),
        ("A21 := L22^-1 A21", partial(trsm_apply, a.m21, l22, side="left")),
    ]


_SEQUENCES = {
    TrsmVariant.V1: _variant1_steps,
    TrsmVariant.V2: _variant2_steps,
    TrsmVariant.V3: _variant3_steps,
    TrsmVariant.V4: _variant4_steps,
    TrsmVariant.V5: _variant5_steps,
}


def two_sided_trsm(A: Union[HermitianLowerView, np.ndarray], L: Union[TriangularFactor, np.ndarray],
                   variant: Union[str, TrsmVariant] = DEFAULT_TRSM_VARIANT, b: int = DEFAULT_BLOCK_SIZE, *,
                   ledger: Optional[FlopLedger] = None, trace: Optional[BoundaryHook] = None,
                   workspace: Optional[TrsmWorkspace] = None,
                   skip_steps: Collection[int] = ()) -> HermitianLowerView:
    """Overwrite the lower triangle of A with C, where L C L^H equals the original A.

    Args:
        A: Hermitian matrix, lower triangle significant
        L: Non-singular lower-triangular factor
        variant: One of 1-5
        b: Block size; b >= n means a single unblocked call
        ledger: Receives the flop count of every kernel call
        trace: Called at every boundary k (including k = 0 and k = n) with (k, A, workspace)
        workspace: Pre-built workspace, e.g. to inspect the Y panel high-water mark afterwards
        skip_steps: 1-based update steps to leave out (fault injection)

    Returns:
        A, overwritten
    """
    A = as_hermitian(A)
    L = as_factor(L)
    variant = TrsmVariant.parse(variant)
    schedule = partition_schedule(A.n, b)
    check_operands(A, L)
    check_skip_steps(skip_steps, STEP_COUNTS[variant], variant.value)
    L.check_nonsingular()

    n = A.n
    if workspace is None:
        workspace = TrsmWorkspace(n, b, A.dtype)
    elif (workspace.n, workspace.b) != (n, b):
        raise InvalidArgumentError(f"workspace built for n={workspace.n}, b={workspace.b}; run has n={n}, b={b}")
    workspace.reset()
    build_steps = _SEQUENCES[variant]
    logger.debug(f"Two-sided trsm variant {variant.value}: n={n}, b={b}, {len(schedule)} iterations")

    for k, kb in schedule:
        if trace is not None:
            trace(k, A.base, workspace)
        a = repartition(A.base, k, kb)
        l = repartition(L.base, k, kb)
        perform(build_steps(a, l, L, workspace), skip_steps, ledger)
        if variant is TrsmVariant.V3:
            workspace.finish_y(k, kb)

    if trace is not None:
        trace(n, A.base, workspace)
    return A
