from typing import Optional


class TwoSidedError(Exception):
    """Base exception for the two-sided library"""
    pass


class InvalidArgumentError(TwoSidedError, ValueError):
    """Bad sizes, block sizes, flags or variant names"""
    pass


class SingularFactorError(TwoSidedError):
    """Triangular factor has a zero diagonal entry"""

    def __init__(self, index: int, message: Optional[str] = None):
        self.index = index
        super().__init__(message or f"Singular triangular factor: zero diagonal at index {index}")


class NotPositiveDefiniteError(TwoSidedError):
    """Cholesky factorization met a non-positive pivot"""

    def __init__(self, index: int, pivot: Optional[float] = None):
        self.index = index
        self.pivot = pivot
        detail = f" (pivot {pivot:.3e})" if pivot is not None else ""
        super().__init__(f"Matrix is not positive definite: failing pivot at index {index}{detail}")


class InvariantViolationError(TwoSidedError):
    """A loop invariant failed at an iteration boundary (strict worksheet mode)"""

    def __init__(self, variant: str, k: int, quadrant: str, residual: float):
        self.variant = variant
        self.k = k
        self.quadrant = quadrant
        self.residual = residual
        super().__init__(
            f"Invariant violated for variant {variant} at boundary k={k}: "
            f"quadrant {quadrant} residual {residual:.3e}"
        )


class MatrixFileError(TwoSidedError):
    """Matrix Market input could not be read or has the wrong shape"""
    pass
