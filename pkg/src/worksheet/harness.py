from dataclasses import dataclass, field
from typing import List, Optional, Union
import logging

import numpy as np
import pandas as pd

from ..config import DEFAULT_TOLERANCE
from ..errors import InvariantViolationError
from ..matrix.core import HermitianLowerView, TriangularFactor
from .invariants import (
    BoundaryCheck,
    InvariantSpec,
    ReferenceQuantities,
    check_boundary,
    check_termination,
    invariant_for,
)

# Set up logging
logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["variant", "n", "b", "seed", "k", "quadrant", "residual", "bitwise_ok"]


@dataclass
class WorksheetTrace:
    """Per-boundary residual records of one traced run"""
    variant: str
    n: int
    b: Optional[int] = None
    seed: Optional[int] = None
    tolerance: float = DEFAULT_TOLERANCE
    records: List[BoundaryCheck] = field(default_factory=list)
    final_residual: Optional[float] = None
    terminated: bool = False

    @property
    def passed(self) -> bool:
        """Every non-bitwise residual within tolerance and every bitwise flag set"""
        boundaries_ok = all(record.passed for record in self.records)
        final_ok = self.final_residual is None or self.final_residual <= self.tolerance
        return boundaries_ok and final_ok

    def failures(self) -> List[BoundaryCheck]:
        return [record for record in self.records if not record.passed]

    def describe_failure(self) -> Optional[str]:
        for record in self.records:
            bad = record.first_failure()
            if bad is not None:
                return f"boundary k={record.k} quadrant {bad.quadrant} ({bad.state}) residual {bad.residual:.3e}"
        if self.final_residual is not None and self.final_residual > self.tolerance:
            return f"termination residual {self.final_residual:.3e}"
        return None

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for record in self.records:
            for q in record.quadrants:
                rows.append({
                    "variant": self.variant, "n": self.n, "b": self.b, "seed": self.seed,
                    "k": record.k, "quadrant": q.quadrant, "residual": q.residual,
                    "bitwise_ok": q.bitwise_ok,
                })
        if self.final_residual is not None:
            rows.append({
                "variant": self.variant, "n": self.n, "b": self.b, "seed": self.seed,
                "k": self.n, "quadrant": "C", "residual": self.final_residual, "bitwise_ok": None,
            })
        return pd.DataFrame(rows, columns=TRACE_COLUMNS)

    def to_csv(self, path=None) -> Optional[str]:
        return self.to_frame().to_csv(path, index=False)


class WorksheetHarness:
    """Boundary hook that evaluates a variant's invariant at every iteration.

    Snapshots the original matrix and factor on construction, so damage done to either
    during the run shows up at the next check or at termination. In strict mode the
    first failing boundary raises InvariantViolationError; otherwise the full trace is
    collected.
    """

    def __init__(self, variant: Union[str, InvariantSpec], A: Union[HermitianLowerView, np.ndarray],
                 L: Union[TriangularFactor, np.ndarray], *, tolerance: float = DEFAULT_TOLERANCE,
                 strict: bool = False, b: Optional[int] = None, seed: Optional[int] = None):
        self.spec = variant if isinstance(variant, InvariantSpec) else invariant_for(variant)
        A_base = A.base if isinstance(A, HermitianLowerView) else A
        self.A_hat = np.array(A_base, order="F", copy=True)
        self.L = L.copy() if isinstance(L, TriangularFactor) else TriangularFactor(np.array(L, order="F", copy=True))
        self.references = ReferenceQuantities(self.spec.op, self.A_hat, self.L)
        self.tolerance = tolerance
        self.strict = strict
        self.trace = WorksheetTrace(self.spec.variant, self.A_hat.shape[0], b, seed, tolerance)

    def __call__(self, k: int, A: np.ndarray, workspace=None):
        check = check_boundary(self.spec, A, self.A_hat, self.L, workspace, k,
                               references=self.references, tolerance=self.tolerance)
        self.trace.records.append(check)
        bad = check.first_failure()
        if bad is None:
            logger.debug(f"Variant {self.spec.variant}: invariant holds at k={k}")
            return
        logger.warning(
            f"Variant {self.spec.variant}: invariant fails at k={k} in {bad.quadrant} "
            f"({bad.state}), residual {bad.residual:.3e}"
        )
        if self.strict:
            raise InvariantViolationError(self.spec.variant, k, bad.quadrant, bad.residual)

    def finish(self, A: Union[HermitianLowerView, np.ndarray]) -> WorksheetTrace:
        """Termination check: the whole result against the oracle"""
        A_base = A.base if isinstance(A, HermitianLowerView) else A
        passed, residual = check_termination(self.spec, A_base, self.A_hat, self.L,
                                             references=self.references, tolerance=self.tolerance)
        self.trace.final_residual = residual
        self.trace.terminated = True
        if not passed:
            logger.warning(f"Variant {self.spec.variant}: result differs from oracle, residual {residual:.3e}")
            if self.strict:
                raise InvariantViolationError(self.spec.variant, self.trace.n, "C", residual)
        return self.trace
