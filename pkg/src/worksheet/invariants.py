"""
Loop invariants of every variant, and the checks that evaluate them on a live matrix.

An InvariantSpec names the expected state of the TL, BL and BR quadrants (plus the
Y panel for V3) at a boundary k. Expected values are assembled from the oracle's
explicit inverse and dense products on the snapshot of the original matrix, never
from the kernels under test.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union
import logging

import numpy as np

from ..errors import InvalidArgumentError
from ..matrix.core import HermitianLowerView, TriangularFactor, relative_distance
from ..oracle import explicit_inverse, oracle_two_sided_trmm, oracle_two_sided_trsm
from ..twosided import TrmmVariant, TrsmVariant

# Set up logging
logger = logging.getLogger(__name__)

QUADRANTS = ("TL", "BL", "BR", "Y")
# Quadrants compared on their lower triangle only
TRIANGULAR_QUADRANTS = ("TL", "BR")


class QuadrantState(str, Enum):
    ORIGINAL = "original"
    FINAL = "final"
    HALF_SOLVED = "half_solved"
    HALF_SOLVED_MINUS_HALF_Y = "half_solved_minus_half_y"
    L_BR_TIMES_C = "l_br_times_c"
    RANK2K_UPDATED = "rank2k_updated"
    CUSTOM = "custom"


@dataclass(frozen=True)
class StateTag:
    """Expected state of one quadrant; CUSTOM states carry their own reference"""
    state: QuadrantState
    label: str = ""
    reference: Optional[Callable[["ReferenceQuantities", int], np.ndarray]] = None

    def __str__(self):
        return self.label or self.state.value


@dataclass(frozen=True)
class InvariantSpec:
    op: str
    variant: str
    TL: StateTag
    BL: StateTag
    BR: StateTag
    Y: Optional[StateTag] = None

    def quadrant_states(self) -> Dict[str, StateTag]:
        states = {"TL": self.TL, "BL": self.BL, "BR": self.BR}
        if self.Y is not None:
            states["Y"] = self.Y
        return states


class ReferenceQuantities:
    """Oracle-derived values for an original matrix and factor, cached per boundary"""

    def __init__(self, op: str, A_hat: np.ndarray, L: Union[TriangularFactor, np.ndarray]):
        self.op = op
        self.A_hat_buffer = np.array(A_hat, copy=True)
        self.A_hat = HermitianLowerView(self.A_hat_buffer).materialize()
        # dense() honours an implicit unit diagonal
        factor = L if isinstance(L, TriangularFactor) else TriangularFactor(np.asarray(L))
        self.L = factor.dense()
        self.n = self.A_hat.shape[0]
        self._inverse = None
        self._final = None
        self._leading: Dict[int, np.ndarray] = {}

    @property
    def inverse(self) -> np.ndarray:
        if self._inverse is None:
            self._inverse = explicit_inverse(self.L)
        return self._inverse

    @property
    def final(self) -> np.ndarray:
        """Oracle result over the whole matrix"""
        if self._final is None:
            oracle = oracle_two_sided_trsm if self.op == "trsm" else oracle_two_sided_trmm
            self._final = oracle(self.A_hat, self.L)
        return self._final

    def leading(self, k: int) -> np.ndarray:
        """Oracle applied to the k x k leading subproblem"""
        if k not in self._leading:
            oracle = oracle_two_sided_trsm if self.op == "trsm" else oracle_two_sided_trmm
            self._leading[k] = oracle(self.A_hat[:k, :k], self.L[:k, :k])
        return self._leading[k]

    def half_solved(self, k: int) -> np.ndarray:
        return self.A_hat[k:, :k] @ self.inverse[:k, :k].conj().T

    def y(self, k: int) -> np.ndarray:
        return self.L[k:, :k] @ self.leading(k)

    def w(self, k: int) -> np.ndarray:
        return self.L[k:, k:] @ self.final[k:, :k] + 0.5 * self.y(k)

    def rank2k_updated(self, k: int) -> np.ndarray:
        L_BL = self.L[k:, :k]
        W = self.w(k)
        return self.A_hat[k:, k:] - L_BL @ W.conj().T - W @ L_BL.conj().T

    def right_multiplied(self, k: int) -> np.ndarray:
        return self.A_hat[k:, :k] @ self.L[:k, :k]

    def expected(self, tag: StateTag, quadrant: str, k: int) -> np.ndarray:
        state = tag.state
        if state is QuadrantState.ORIGINAL:
            return _quadrant(self.A_hat, quadrant, k)
        if state is QuadrantState.FINAL:
            if quadrant == "TL":
                return self.leading(k)
            return _quadrant(self.final, quadrant, k)
        if state is QuadrantState.HALF_SOLVED:
            return self.half_solved(k)
        if state is QuadrantState.HALF_SOLVED_MINUS_HALF_Y:
            return self.half_solved(k) - 0.5 * self.y(k)
        if state is QuadrantState.L_BR_TIMES_C:
            return self.L[k:, k:] @ self.final[k:, :k]
        if state is QuadrantState.RANK2K_UPDATED:
            return self.rank2k_updated(k)
        return tag.reference(self, k)


def _quadrant(M: np.ndarray, quadrant: str, k: int) -> np.ndarray:
    if quadrant == "TL":
        return M[:k, :k]
    if quadrant == "BL":
        return M[k:, :k]
    if quadrant == "BR":
        return M[k:, k:]
    raise InvalidArgumentError(f"No quadrant {quadrant!r} in a Hermitian matrix")


def _workspace_y(workspace, n: int, k: int) -> np.ndarray:
    y = getattr(workspace, "y", None)
    if y is None:
        return np.zeros((n - k, k))
    return y


@dataclass
class QuadrantResidual:
    quadrant: str
    state: str
    residual: float
    bitwise: bool = False
    bitwise_ok: Optional[bool] = None

    def passed(self, tolerance: float) -> bool:
        if self.bitwise:
            return bool(self.bitwise_ok)
        return self.residual <= tolerance


@dataclass
class BoundaryCheck:
    """Residuals of every quadrant at one boundary"""
    k: int
    quadrants: List[QuadrantResidual] = field(default_factory=list)
    tolerance: float = 1e-10

    @property
    def passed(self) -> bool:
        return all(q.passed(self.tolerance) for q in self.quadrants)

    def first_failure(self) -> Optional[QuadrantResidual]:
        return next((q for q in self.quadrants if not q.passed(self.tolerance)), None)


def _compare(current: np.ndarray, expected: np.ndarray, quadrant: str, bitwise_against: Optional[np.ndarray]):
    if quadrant in TRIANGULAR_QUADRANTS:
        current, expected = np.tril(current), np.tril(expected)
        if bitwise_against is not None:
            bitwise_against = np.tril(bitwise_against)
    residual = relative_distance(current, expected)
    if bitwise_against is None:
        return residual, None
    return residual, bool(np.array_equal(current, bitwise_against))


def _check(spec: InvariantSpec, A: np.ndarray, refs: ReferenceQuantities, workspace, k: int,
           tolerance: float, all_bitwise: bool) -> BoundaryCheck:
    n = refs.n
    if k < 0 or k > n:
        raise InvalidArgumentError(f"Boundary k={k} outside [0, {n}]")
    check = BoundaryCheck(k=k, tolerance=tolerance)
    for quadrant, tag in spec.quadrant_states().items():
        if quadrant == "Y":
            current = _workspace_y(workspace, n, k)
            original = np.zeros((n - k, k), dtype=current.dtype)
        else:
            current = _quadrant(A, quadrant, k)
            original = _quadrant(refs.A_hat_buffer, quadrant, k)
        bitwise = all_bitwise or tag.state is QuadrantState.ORIGINAL
        expected = original if all_bitwise else refs.expected(tag, quadrant, k)
        residual, bitwise_ok = _compare(current, expected, quadrant, original if bitwise else None)
        check.quadrants.append(QuadrantResidual(quadrant, str(tag), residual, bitwise, bitwise_ok))
    return check


def check_initialization(spec: InvariantSpec, A: np.ndarray, A_hat: np.ndarray,
                         L: Union[TriangularFactor, np.ndarray], *,
                         references: Optional[ReferenceQuantities] = None,
                         tolerance: float = 1e-10) -> BoundaryCheck:
    """At k = 0 every invariant reduces to A being bitwise equal to its snapshot"""
    refs = references or ReferenceQuantities(spec.op, A_hat, L)
    return _check(spec, A, refs, None, 0, tolerance, all_bitwise=True)


def check_boundary(spec: InvariantSpec, A: np.ndarray, A_hat: np.ndarray,
                   L: Union[TriangularFactor, np.ndarray], workspace, k: int, *,
                   references: Optional[ReferenceQuantities] = None,
                   tolerance: float = 1e-10) -> BoundaryCheck:
    """Residual per quadrant against the expected state at boundary k"""
    refs = references or ReferenceQuantities(spec.op, A_hat, L)
    if k == 0:
        return _check(spec, A, refs, workspace, 0, tolerance, all_bitwise=True)
    return _check(spec, A, refs, workspace, k, tolerance, all_bitwise=False)


def check_termination(spec: InvariantSpec, A: np.ndarray, A_hat: np.ndarray,
                      L: Union[TriangularFactor, np.ndarray], *,
                      references: Optional[ReferenceQuantities] = None,
                      tolerance: float = 1e-10) -> Tuple[bool, float]:
    """Full-matrix comparison with the oracle; (passed, residual)"""
    refs = references or ReferenceQuantities(spec.op, A_hat, L)
    residual = relative_distance(np.tril(A), np.tril(refs.final))
    return residual <= tolerance, residual


_ORIGINAL = StateTag(QuadrantState.ORIGINAL)
_FINAL = StateTag(QuadrantState.FINAL)
_RANK2K = StateTag(QuadrantState.RANK2K_UPDATED)

INVARIANTS: Dict[str, InvariantSpec] = {
    "1": InvariantSpec("trsm", "1", _FINAL, _ORIGINAL, _ORIGINAL),
    "2": InvariantSpec("trsm", "2", _FINAL, StateTag(QuadrantState.HALF_SOLVED), _ORIGINAL),
    "3": InvariantSpec(
        "trsm", "3", _FINAL, StateTag(QuadrantState.HALF_SOLVED_MINUS_HALF_Y), _ORIGINAL,
        Y=StateTag(QuadrantState.CUSTOM, "L_BL C_TL", lambda refs, k: refs.y(k)),
    ),
    "4": InvariantSpec("trsm", "4", _FINAL, StateTag(QuadrantState.L_BR_TIMES_C), _RANK2K),
    "5": InvariantSpec("trsm", "5", _FINAL, _FINAL, _RANK2K),
    "m1": InvariantSpec("trmm", "m1", _FINAL, _ORIGINAL, _ORIGINAL),
    "m2": InvariantSpec(
        "trmm", "m2", _FINAL,
        StateTag(QuadrantState.CUSTOM, "A_hat_BL L_TL", lambda refs, k: refs.right_multiplied(k)),
        _ORIGINAL,
    ),
}


def invariant_for(variant: Union[str, TrsmVariant, TrmmVariant]) -> InvariantSpec:
    """InvariantSpec bound to a variant name (1-5, m1, m2)"""
    if isinstance(variant, (TrsmVariant, TrmmVariant)):
        return INVARIANTS[variant.value]
    name = str(variant).strip().lower()
    if name.startswith("m"):
        return INVARIANTS[TrmmVariant.parse(name).value]
    return INVARIANTS[TrsmVariant.parse(name).value]
