"""
Flop-fraction analysis of variant runs.

analyze() turns a measured ledger (and its call log) into a CostReport;
predict_ledger() rebuilds the same ledger from closed-form per-iteration recipes
without touching any matrix, so the two can be compared class by class.
"""

from typing import Callable, Dict, List, Optional, Tuple, Union
import logging

import pandas as pd
from pydantic import BaseModel

from ..config import BIG_KERNEL_FACTOR, TRMM_VARIANT_NAMES, TRSM_VARIANT_NAMES
from ..errors import InvalidArgumentError
from ..kernels import FlopLedger, KernelCall, KernelClass
from ..matrix.core import partition_schedule

# Set up logging
logger = logging.getLogger(__name__)

G, H, R2K, TS, TM, BASE, OTHER = (
    KernelClass.GEMM, KernelClass.HEMM, KernelClass.HER2K, KernelClass.TRSM,
    KernelClass.TRMM, KernelClass.TWO_SIDED_BASE, KernelClass.OTHER,
)

# (class, flops, written shape) of one kernel call
Entry = Tuple[KernelClass, int, Tuple[int, int]]


class CostReport(BaseModel):
    op: str
    variant: str
    n: int
    b: int
    total_flops: int
    flops_per_class: Dict[str, int]
    fraction_per_class: Optional[Dict[str, float]] = None
    fractions_defined: bool = True
    scalable_fraction: Optional[float] = None
    big_kernel_threshold: int
    largest_written_extent_of_big_kernels: Optional[int] = None

    def fraction(self, kernel_class: Union[KernelClass, str]) -> Optional[float]:
        if self.fraction_per_class is None:
            return None
        key = kernel_class.value if isinstance(kernel_class, KernelClass) else kernel_class
        return self.fraction_per_class[key]


def op_for_variant(variant: str) -> str:
    name = str(variant).strip().lower()
    if name in TRSM_VARIANT_NAMES:
        return "trsm"
    if name in TRMM_VARIANT_NAMES:
        return "trmm"
    raise InvalidArgumentError(f"unknown variant {variant!r}")


def big_kernel_threshold(n: int, b: int) -> int:
    return BIG_KERNEL_FACTOR * n * b * b


def analyze(ledger: FlopLedger, call_log: Optional[List[KernelCall]], n: int, b: int, variant: str) -> CostReport:
    """Fractions, scalability proxy and written extent of the big kernels of one run"""
    variant = str(variant).strip().lower()
    threshold = big_kernel_threshold(n, b)
    fractions = ledger.fractions()

    extent = None
    if call_log is not None:
        big = [call.written_extent for call in call_log if call.flops > threshold]
        extent = max(big) if big else 0

    if fractions is None:
        logger.warning(f"Empty ledger for variant {variant} at n={n}, b={b}; fractions undefined")

    return CostReport(
        op=op_for_variant(variant),
        variant=variant,
        n=n,
        b=b,
        total_flops=ledger.total,
        flops_per_class=ledger.as_dict(),
        fraction_per_class={kc.value: f for kc, f in fractions.items()} if fractions else None,
        fractions_defined=fractions is not None,
        scalable_fraction=1.0 - fractions[TS] if fractions else None,
        big_kernel_threshold=threshold,
        largest_written_extent_of_big_kernels=extent,
    )


# Per-iteration recipes; n2 is the order of the trailing block A22.

def _v1(k: int, kb: int, n2: int) -> List[Entry]:
    return [
        (TS, k * k * kb, (kb, k)),
        (H, 2 * k * k * kb, (kb, k)),
        (OTHER, kb * k, (kb, k)),
        (R2K, 2 * kb * kb * k, (kb, kb)),
        (OTHER, kb * k, (kb, k)),
        (TS, kb * kb * k, (kb, k)),
        (BASE, kb ** 3, (kb, kb)),
    ]


def _v2(k: int, kb: int, n2: int) -> List[Entry]:
    return _v1(k, kb, n2)[1:] + [
        (G, 2 * n2 * kb * k, (n2, kb)),
        (TS, kb * kb * n2, (n2, kb)),
    ]


def _v3(k: int, kb: int, n2: int) -> List[Entry]:
    return [
        (R2K, 2 * kb * kb * k, (kb, kb)),
        (OTHER, kb * k, (kb, k)),
        (TS, kb * kb * k, (kb, k)),
        (BASE, kb ** 3, (kb, kb)),
        (OTHER, n2 * k, (n2, k)),
        (G, 2 * n2 * kb * k, (n2, kb)),
        (TS, kb * kb * n2, (n2, kb)),
        (G, 2 * n2 * k * kb, (n2, k)),
        (G, 2 * n2 * kb * k, (n2, kb)),
        (H, 2 * kb * kb * n2, (n2, kb)),
        (OTHER, n2 * k, (n2, k)),
        (OTHER, n2 * kb, (n2, kb)),
    ]


def _v4(k: int, kb: int, n2: int) -> List[Entry]:
    return [
        (TS, kb * kb * k, (kb, k)),
        (BASE, kb ** 3, (kb, kb)),
        (G, 2 * n2 * k * kb, (n2, k)),
        (TS, kb * kb * n2, (n2, kb)),
        (H, 2 * kb * kb * n2, (n2, kb)),
        (R2K, 2 * n2 * n2 * kb, (n2, n2)),
        (H, 2 * kb * kb * n2, (n2, kb)),
    ]


def _v5(k: int, kb: int, n2: int) -> List[Entry]:
    return [
        (BASE, kb ** 3, (kb, kb)),
        (TS, kb * kb * n2, (n2, kb)),
        (H, 2 * kb * kb * n2, (n2, kb)),
        (R2K, 2 * n2 * n2 * kb, (n2, n2)),
        (H, 2 * kb * kb * n2, (n2, kb)),
        (TS, n2 * n2 * kb, (n2, kb)),
    ]


def _m1(k: int, kb: int, n2: int) -> List[Entry]:
    return [
        (TM, k * k * kb, (kb, k)),
        (H, 2 * kb * kb * k, (kb, k)),
        (R2K, 2 * k * k * kb, (k, k)),
        (H, 2 * kb * kb * k, (kb, k)),
        (TM, kb * kb * k, (kb, k)),
        (BASE, kb ** 3, (kb, kb)),
    ]


def _m2(k: int, kb: int, n2: int) -> List[Entry]:
    return _m1(k, kb, n2)[1:] + [
        (G, 2 * n2 * k * kb, (n2, k)),
        (TM, kb * kb * n2, (n2, kb)),
    ]


RECIPES: Dict[str, Callable[[int, int, int], List[Entry]]] = {
    "1": _v1, "2": _v2, "3": _v3, "4": _v4, "5": _v5, "m1": _m1, "m2": _m2,
}


def predict_ledger(variant: str, n: int, b: int) -> FlopLedger:
    """The ledger (with call log) a run of this variant would produce"""
    variant = str(variant).strip().lower()
    if variant not in RECIPES:
        raise InvalidArgumentError(f"unknown variant {variant!r}")
    ledger = FlopLedger.with_call_log()
    for k, kb in partition_schedule(n, b):
        for kernel_class, flops, written in RECIPES[variant](k, kb, n - k - kb):
            ledger.record(kernel_class, flops, written)
    return ledger


def predict_fractions(variant: str, n: int, b: int) -> CostReport:
    """Closed-form CostReport summed exactly over the partition schedule"""
    ledger = predict_ledger(variant, n, b)
    return analyze(ledger, ledger.calls, n, b, variant)


def compare(predicted: CostReport, measured: CostReport) -> Dict[str, int]:
    """measured - predicted flops per class"""
    classes = sorted(set(predicted.flops_per_class) | set(measured.flops_per_class))
    return {
        name: measured.flops_per_class.get(name, 0) - predicted.flops_per_class.get(name, 0)
        for name in classes
    }


def report_table(*reports: CostReport) -> str:
    """Aligned plain-text table, one column per report"""
    columns = {}
    for report in reports:
        column = {"total_flops": report.total_flops}
        for kc in KernelClass:
            fraction = report.fraction(kc)
            column[f"frac_{kc.value}"] = round(fraction, 6) if fraction is not None else None
        column["scalable_fraction"] = report.scalable_fraction
        column["largest_big_extent"] = report.largest_written_extent_of_big_kernels
        columns[f"{report.op} {report.variant} n={report.n} b={report.b}"] = column
    return pd.DataFrame(columns).to_string()
