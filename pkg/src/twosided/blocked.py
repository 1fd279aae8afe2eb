"""
Shared plumbing for the blocked two-sided algorithms: the 3x3 repartitioning of
a lower-stored operand at boundary k with current block kb, and the step runner
that executes an iteration's update sequence.
"""

from dataclasses import dataclass
from typing import Callable, Collection, List, Optional, Tuple, Union
import logging

import numpy as np

from ..errors import InvalidArgumentError
from ..kernels import FlopLedger
from ..matrix.core import HermitianLowerView, TriangularFactor

# Set up logging
logger = logging.getLogger(__name__)

# (label, call) where call accepts the ledger and label keywords
Step = Tuple[str, Callable[..., object]]

# Called with (k, A buffer, workspace) at every iteration boundary
BoundaryHook = Callable[[int, np.ndarray, object], None]


@dataclass
class Repartition:
    """Lower blocks of a square buffer around rows/columns [k, k + kb)"""
    k: int
    kb: int
    m00: np.ndarray
    m10: np.ndarray
    m11: np.ndarray
    m20: np.ndarray
    m21: np.ndarray
    m22: np.ndarray

    @property
    def trailing(self) -> int:
        """Order of the block still ahead of the current one"""
        return self.m22.shape[0]


def repartition(M: np.ndarray, k: int, kb: int) -> Repartition:
    e = k + kb
    return Repartition(k, kb, M[:k, :k], M[k:e, :k], M[k:e, k:e], M[e:, :k], M[e:, k:e], M[e:, e:])


def hermitian(block: np.ndarray) -> HermitianLowerView:
    return HermitianLowerView(block)


def triangular(block: np.ndarray, L: TriangularFactor) -> TriangularFactor:
    return TriangularFactor(block, L.unit_diagonal)


def as_hermitian(A: Union[HermitianLowerView, np.ndarray]) -> HermitianLowerView:
    return A if isinstance(A, HermitianLowerView) else HermitianLowerView(A)


def as_factor(L: Union[TriangularFactor, np.ndarray]) -> TriangularFactor:
    return L if isinstance(L, TriangularFactor) else TriangularFactor(L)


def check_operands(A: HermitianLowerView, L: TriangularFactor):
    if A.n != L.n:
        raise InvalidArgumentError(f"A is {A.n}x{A.n} but L is {L.n}x{L.n}")
    if A.dtype != L.dtype and not np.iscomplexobj(A.base):
        raise InvalidArgumentError(f"Cannot apply a {L.dtype} factor to a {A.dtype} matrix in place")


def check_skip_steps(skip_steps: Collection[int], step_count: int, variant: str):
    bad = [s for s in skip_steps if not 1 <= s <= step_count]
    if bad:
        raise InvalidArgumentError(f"Variant {variant} has steps 1..{step_count}; cannot skip {bad}")


def perform(steps: List[Step], skip_steps: Collection[int], ledger: Optional[FlopLedger]):
    """Run an iteration's steps in order, leaving out the 1-based numbers in skip_steps"""
    for number, (label, call) in enumerate(steps, start=1):
        if number in skip_steps:
            logger.debug(f"Skipping step {number}: {label}")
            continue
        call(ledger=ledger, label=label)
