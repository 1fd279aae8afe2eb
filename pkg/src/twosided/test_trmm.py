import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import InvalidArgumentError
from src.kernels import FlopLedger, KernelClass
from src.matrix import (
    Field,
    HermitianLowerView,
    TriangularFactor,
    random_hermitian,
    random_well_conditioned_lower,
    relative_distance,
)
from src.oracle import oracle_two_sided_trmm
from src.twosided import TrmmVariant, two_sided_trmm, two_sided_trmm_unblocked

VARIANTS = ["m1", "m2"]
A2 = np.array([[1.0, 0.0], [0.0, 2.0]])
L2 = np.array([[2.0, 0.0], [1.0, 1.0]])


def _inputs(n, seed, field=Field.REAL):
    return random_hermitian(n, seed, field), random_well_conditioned_lower(n, seed, field)


def _lower_distance(A, reference):
    return relative_distance(np.tril(A.base), np.tril(reference))


def test_unblocked_example():
    A = two_sided_trmm_unblocked(HermitianLowerView(A2.copy()), TriangularFactor(L2))
    assert_allclose(np.tril(A.base), [[6.0, 0.0], [2.0, 2.0]])


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_unblocked_matches_oracle(field):
    A_hat, L = _inputs(19, 6, field)
    A = two_sided_trmm_unblocked(A_hat.copy(), L)
    assert _lower_distance(A, oracle_two_sided_trmm(A_hat, L)) <= 1e-12


@pytest.mark.parametrize("variant, b", itertools.product(VARIANTS, [1, 2, 3]))
def test_worked_example(variant, b):
    A = two_sided_trmm(HermitianLowerView(A2.copy()), TriangularFactor(L2), variant, b)
    assert_allclose(np.tril(A.base), [[6.0, 0.0], [2.0, 2.0]])


@pytest.mark.parametrize("variant, n, b, field", itertools.product(
    VARIANTS, [0, 1, 5, 13, 33], [1, 4, 8], [Field.REAL, Field.COMPLEX]))
def test_variants_match_oracle(variant, n, b, field):
    A_hat, L = _inputs(n, 2, field)
    A = two_sided_trmm(A_hat.copy(), L, variant, b)
    assert _lower_distance(A, oracle_two_sided_trmm(A_hat, L)) <= 1e-10


@pytest.mark.parametrize("variant", VARIANTS)
def test_strictly_upper_buffer_is_never_touched(variant):
    A_hat, L = _inputs(21, 5, Field.COMPLEX)
    buffer = A_hat.base.copy()
    buffer[np.triu_indices(21, 1)] = np.nan
    A = two_sided_trmm(HermitianLowerView(buffer), L, variant, 4)
    assert np.all(np.isnan(A.base[np.triu_indices(21, 1)]))
    assert _lower_distance(A, oracle_two_sided_trmm(A_hat, L)) <= 1e-10


def test_variants_agree():
    A_hat, L = _inputs(64, 1, Field.COMPLEX)
    first = two_sided_trmm(A_hat.copy(), L, "m1", 8).base
    second = two_sided_trmm(A_hat.copy(), L, "m2", 8).base
    assert relative_distance(np.tril(first), np.tril(second)) <= 1e-11


def test_block_at_least_n_is_one_unblocked_call():
    A_hat, L = _inputs(9, 1)
    ledger = FlopLedger()
    two_sided_trmm(A_hat.copy(), L, "m2", 9, ledger=ledger)
    assert ledger.total == ledger[KernelClass.TWO_SIDED_BASE] == 9 ** 3


def test_no_trsm_flops():
    A_hat, L = _inputs(32, 1)
    ledger = FlopLedger()
    two_sided_trmm(A_hat.copy(), L, "m1", 8, ledger=ledger)
    assert ledger[KernelClass.TRSM] == 0
    assert ledger[KernelClass.TRMM] > 0


def test_variant_names():
    assert TrmmVariant.parse("MV1") is TrmmVariant.MV1
    assert TrmmVariant.parse("m2") is TrmmVariant.MV2
    with pytest.raises(InvalidArgumentError, match="unknown variant"):
        TrmmVariant.parse("m3")


def test_bad_arguments():
    A_hat, L = _inputs(4, 1)
    with pytest.raises(InvalidArgumentError):
        two_sided_trmm(A_hat.copy(), L, "m1", 0)
    with pytest.raises(InvalidArgumentError):
        two_sided_trmm(A_hat.copy(), L, "m2", 2, skip_steps=[0])


def test_trace_receives_no_workspace():
    A_hat, L = _inputs(6, 1)
    seen = []
    two_sided_trmm(A_hat.copy(), L, "m1", 4, trace=lambda k, A, ws: seen.append((k, ws)))
    assert seen == [(0, None), (4, None), (6, None)]
