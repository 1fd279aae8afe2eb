from typing import List, Literal, Optional

from pydantic import BaseModel, Field as PydanticField, field_validator

from ..config import DEFAULT_BLOCK_SIZE, DEFAULT_SEED, DEFAULT_TOLERANCE, TRMM_VARIANT_NAMES, TRSM_VARIANT_NAMES
from ..errors import InvalidArgumentError
from ..matrix.core import Field

BENCH_COLUMNS = [
    "op", "variant", "n", "b", "seed", "rep", "elapsed_seconds", "gflops",
    "frac_gemm", "frac_hemm", "frac_her2k", "frac_herk", "frac_trsm", "frac_trmm", "frac_chol", "frac_base",
]


def expand_variants(op: str, names: List[str]) -> List[str]:
    """Validate variant names for an op; 'all' expands to the op's full family"""
    known = TRMM_VARIANT_NAMES if op == "trmm" else TRSM_VARIANT_NAMES
    expanded: List[str] = []
    for name in names:
        name = str(name).strip().lower()
        if not name:
            continue
        candidates = known if name == "all" else [name]
        for candidate in candidates:
            if candidate not in known:
                raise InvalidArgumentError(f"unknown variant {candidate!r} for {op}; expected one of {', '.join(known)} or all")
            if candidate not in expanded:
                expanded.append(candidate)
    if not expanded:
        raise InvalidArgumentError("no variants selected")
    return expanded


class RunConfig(BaseModel):
    op: Literal["trsm", "trmm", "reduce"] = "trsm"
    variants: List[str] = PydanticField(default_factory=lambda: ["all"])
    sizes: List[int] = PydanticField(default_factory=lambda: [64])
    block_sizes: List[int] = PydanticField(default_factory=lambda: [DEFAULT_BLOCK_SIZE])
    seeds: List[int] = PydanticField(default_factory=lambda: [DEFAULT_SEED])
    field: Field = Field.REAL
    reps: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    check_invariants: bool = False
    strict: bool = False
    inject_fault: Optional[int] = None
    parallel_configs: int = 1
    out: Optional[str] = None
    trace_out: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("sizes")
    @classmethod
    def _sizes_nonnegative(cls, sizes: List[int]) -> List[int]:
        if any(n < 0 for n in sizes):
            raise ValueError(f"sizes must be nonnegative, got {sizes}")
        return sizes

    @field_validator("block_sizes")
    @classmethod
    def _block_sizes_positive(cls, block_sizes: List[int]) -> List[int]:
        if any(b < 1 for b in block_sizes):
            raise ValueError(f"block sizes must be at least 1, got {block_sizes}")
        return block_sizes

    @field_validator("reps", "parallel_configs")
    @classmethod
    def _at_least_one(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be at least 1, got {value}")
        return value

    def resolved_variants(self) -> List[str]:
        return expand_variants(self.op, self.variants)


class BenchRecord(BaseModel):
    op: str
    variant: str
    n: int
    b: int
    seed: int
    rep: int
    elapsed_seconds: float
    gflops: float
    frac_gemm: float = 0.0
    frac_hemm: float = 0.0
    frac_her2k: float = 0.0
    frac_herk: float = 0.0
    frac_trsm: float = 0.0
    frac_trmm: float = 0.0
    frac_chol: float = 0.0
    frac_base: float = 0.0
    frac_other: float = 0.0

    def csv_row(self) -> dict:
        return {column: getattr(self, column) for column in BENCH_COLUMNS}


class VerifyRecord(BaseModel):
    op: str
    variant: str
    n: int
    b: int
    seed: int
    field: str
    residual: float
    invariants: Optional[bool] = None
    failure: Optional[str] = None
    passed: bool
