from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple
import logging

# Set up logging
logger = logging.getLogger(__name__)

Shape = Tuple[int, int]


class KernelClass(str, Enum):
    """Kernel classes flops are reported to"""
    GEMM = "gemm"
    HEMM = "hemm"
    HER2K = "her2k"
    HERK = "herk"
    TRSM = "trsm"
    TRMM = "trmm"
    CHOL = "chol"
    TWO_SIDED_BASE = "base"
    OTHER = "other"


@dataclass(frozen=True)
class KernelCall:
    """One instrumented kernel invocation"""
    kernel_class: KernelClass
    flops: int
    written_shape: Shape
    operand_shapes: Tuple[Shape, ...] = ()
    label: str = ""

    @property
    def written_extent(self) -> int:
        """Smallest dimension of the operand the call wrote"""
        return min(self.written_shape) if self.written_shape else 0


@dataclass
class FlopLedger:
    """Per-kernel-class flop counters, with an optional call log"""
    counts: Counter = field(default_factory=Counter)
    calls: Optional[List[KernelCall]] = None

    @classmethod
    def with_call_log(cls) -> "FlopLedger":
        return cls(calls=[])

    def record(self, kernel_class: KernelClass, flops: int, written_shape: Shape,
               operand_shapes: Tuple[Shape, ...] = (), label: str = ""):
        if flops < 0:
            raise ValueError(f"Flop counts are nonnegative, got {flops}")
        self.counts[kernel_class] += int(flops)
        if self.calls is not None:
            self.calls.append(KernelCall(kernel_class, int(flops), tuple(written_shape),
                                         tuple(operand_shapes), label))

    def __getitem__(self, kernel_class: KernelClass) -> int:
        return self.counts.get(kernel_class, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "FlopLedger") -> "FlopLedger":
        """Element-wise sum of two ledgers; call logs are concatenated"""
        merged = FlopLedger(counts=Counter(self.counts) + Counter(other.counts))
        if self.calls is not None or other.calls is not None:
            merged.calls = list(self.calls or []) + list(other.calls or [])
        return merged

    def fractions(self) -> Optional[Dict[KernelClass, float]]:
        """Fraction of all flops per class, or None for an empty ledger"""
        total = self.total
        if total == 0:
            return None
        return {kc: self[kc] / total for kc in KernelClass}

    def as_dict(self) -> Dict[str, int]:
        return {kc.value: self[kc] for kc in KernelClass}
