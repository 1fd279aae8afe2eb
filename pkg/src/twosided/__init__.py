"""
Blocked algorithm families for A := L^-1 A L^-H and A := L^H A L.
"""

from .blocked import Repartition, repartition
from .trsm import TrsmVariant, TrsmWorkspace, two_sided_trsm, two_sided_trsm_unblocked
from .trmm import TrmmVariant, two_sided_trmm, two_sided_trmm_unblocked
from . import trmm, trsm

TRSM_STEP_COUNTS = trsm.STEP_COUNTS
TRMM_STEP_COUNTS = trmm.STEP_COUNTS

__all__ = [
    'Repartition', 'repartition',
    'TrsmVariant', 'TrsmWorkspace', 'two_sided_trsm', 'two_sided_trsm_unblocked',
    'TrmmVariant', 'two_sided_trmm', 'two_sided_trmm_unblocked',
    'TRSM_STEP_COUNTS', 'TRMM_STEP_COUNTS',
]
