"""
Runtime loop-invariant checking for the two-sided algorithm families.
"""

from .invariants import (
    INVARIANTS,
    BoundaryCheck,
    InvariantSpec,
    QuadrantResidual,
    QuadrantState,
    ReferenceQuantities,
    StateTag,
    check_boundary,
    check_initialization,
    check_termination,
    invariant_for,
)
from .harness import TRACE_COLUMNS, WorksheetHarness, WorksheetTrace

__all__ = [
    'INVARIANTS', 'BoundaryCheck', 'InvariantSpec', 'QuadrantResidual', 'QuadrantState',
    'ReferenceQuantities', 'StateTag', 'check_boundary', 'check_initialization',
    'check_termination', 'invariant_for',
    'TRACE_COLUMNS', 'WorksheetHarness', 'WorksheetTrace',
]
