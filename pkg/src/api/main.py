from fastapi import FastAPI, HTTPException
from pydantic import BaseModel
from typing import Optional, List, Dict, Literal
import logging
import traceback

import numpy as np

from ..config import (
    DEFAULT_BLOCK_SIZE,
    DEFAULT_TRMM_VARIANT,
    DEFAULT_TRSM_VARIANT,
    LOG_LEVEL,
    MAX_API_DIMENSION,
    TRMM_VARIANT_NAMES,
    TRSM_VARIANT_NAMES,
)
from ..cost import CostReport, predict_fractions
from ..errors import InvalidArgumentError, TwoSidedError
from ..kernels import FlopLedger
from ..matrix import HermitianLowerView, TriangularFactor, as_dense, relative_distance
from ..oracle import oracle_two_sided_trmm, oracle_two_sided_trsm
from ..pipeline import reduce
from ..twosided import two_sided_trmm, two_sided_trsm

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

app = FastAPI(title="Two-sided triangular solve service")

# Schedules longer than this are refused by /flops
MAX_PREDICTED_ITERATIONS = 65536

Matrix = List[List[float]]


class ReduceRequest(BaseModel):
    A: Matrix
    B: Matrix
    variant: str = DEFAULT_TRSM_VARIANT
    block_size: int = DEFAULT_BLOCK_SIZE


class ReduceResponse(BaseModel):
    C: Matrix
    L: Matrix
    residual: float
    ledger: Dict[str, int]


class TwoSidedRequest(BaseModel):
    op: Literal["trsm", "trmm"] = "trsm"
    A: Matrix
    L: Matrix
    variant: Optional[str] = None
    block_size: int = DEFAULT_BLOCK_SIZE


class TwoSidedResponse(BaseModel):
    op: str
    variant: str
    result: Matrix
    residual: float
    ledger: Dict[str, int]


def _square(values: Matrix, name: str) -> np.ndarray:
    """Real square matrix from nested lists, within the size accepted over HTTP"""
    try:
        matrix = as_dense(values) if values else np.zeros((0, 0), order="F")
    except (ValueError, TypeError) as e:
        raise InvalidArgumentError(f"{name} is not a rectangular matrix: {e}")
    if matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {matrix.shape}")
    if matrix.shape[0] > MAX_API_DIMENSION:
        raise InvalidArgumentError(f"{name} is {matrix.shape[0]}x{matrix.shape[0]}; the limit is {MAX_API_DIMENSION}")
    return matrix


def _lower_list(M: np.ndarray) -> Matrix:
    return np.tril(M).tolist()


@app.get("/variants")
async def list_variants():
    """Variant names per operation"""
    return {"trsm": TRSM_VARIANT_NAMES, "trmm": TRMM_VARIANT_NAMES}


@app.get("/flops", response_model=CostReport)
async def predicted_flops(variant: str = DEFAULT_TRSM_VARIANT, n: int = 1024, b: int = DEFAULT_BLOCK_SIZE):
    """Closed-form cost report for a variant at (n, b)"""
    logger.debug(f"predicted_flops called with variant={variant}, n={n}, b={b}")
    try:
        if n < 0 or b < 1:
            raise InvalidArgumentError(f"need n >= 0 and b >= 1, got n={n}, b={b}")
        if -(-n // b) > MAX_PREDICTED_ITERATIONS:
            raise InvalidArgumentError(f"n/b exceeds {MAX_PREDICTED_ITERATIONS} iterations")
        return predict_fractions(variant, n, b)
    except TwoSidedError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error in predicted_flops: {str(e)}")
        logger.error(traceback.format_exc())
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/reduce", response_model=ReduceResponse)
async def reduce_pair(request: ReduceRequest):
    """Cholesky of B and the two-sided solve of A"""
    try:
        A = _square(request.A, "A")
        B = _square(request.B, "B")
        result = reduce(HermitianLowerView(A), HermitianLowerView(B), request.variant, request.block_size)
        logger.info(f"Reduced n={A.shape[0]} pair, residual {result.residual:.3e}")
        return ReduceResponse(
            C=_lower_list(result.C.base),
            L=_lower_list(result.L.base),
            residual=result.residual,
            ledger=result.ledger.as_dict(),
        )
    except TwoSidedError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error in reduce_pair: {str(e)}")
        logger.error(traceback.format_exc())
        raise HTTPException(status_code=500, detail=str(e))


@app.post("/two-sided", response_model=TwoSidedResponse)
async def two_sided(request: TwoSidedRequest):
    """Run one variant on the given A and L and compare with the oracle"""
    try:
        A = _square(request.A, "A")
        L = _square(request.L, "L")
        variant = request.variant or (DEFAULT_TRSM_VARIANT if request.op == "trsm" else DEFAULT_TRMM_VARIANT)
        ledger = FlopLedger()
        result = HermitianLowerView(A.copy(order="F"))
        factor = TriangularFactor(L)
        if request.op == "trsm":
            two_sided_trsm(result, factor, variant, request.block_size, ledger=ledger)
            expected = oracle_two_sided_trsm(HermitianLowerView(A), factor)
        else:
            two_sided_trmm(result, factor, variant, request.block_size, ledger=ledger)
            expected = oracle_two_sided_trmm(HermitianLowerView(A), factor)
        residual = relative_distance(np.tril(result.base), np.tril(expected))
        return TwoSidedResponse(
            op=request.op,
            variant=str(variant),
            result=_lower_list(result.base),
            residual=residual,
            ledger=ledger.as_dict(),
        )
    except TwoSidedError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error in two_sided: {str(e)}")
        logger.error(traceback.format_exc())
        raise HTTPException(status_code=500, detail=str(e))
