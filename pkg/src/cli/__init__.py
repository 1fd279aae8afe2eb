"""
Command-line surface: verify, bench, flops and reduce.
"""

from .main import cmd_bench, cmd_flops, cmd_reduce, cmd_verify, main
from .models import BENCH_COLUMNS, BenchRecord, RunConfig, VerifyRecord, expand_variants

__all__ = [
    'cmd_bench', 'cmd_flops', 'cmd_reduce', 'cmd_verify', 'main',
    'BENCH_COLUMNS', 'BenchRecord', 'RunConfig', 'VerifyRecord', 'expand_variants',
]
