"""
Kernel-class cost analysis of variant runs.
"""

from .model import (
    RECIPES,
    CostReport,
    analyze,
    big_kernel_threshold,
    compare,
    op_for_variant,
    predict_fractions,
    predict_ledger,
    report_table,
)

__all__ = [
    'RECIPES', 'CostReport', 'analyze', 'big_kernel_threshold', 'compare',
    'op_for_variant', 'predict_fractions', 'predict_ledger', 'report_table',
]
