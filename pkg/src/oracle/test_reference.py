import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.errors import InvalidArgumentError, SingularFactorError
from src.matrix import (
    Field,
    HermitianLowerView,
    TriangularFactor,
    random_hermitian,
    random_hpd,
    random_well_conditioned_lower,
    relative_distance,
)
from src.oracle import (
    condition_estimate,
    explicit_inverse,
    oracle_generalized_eigenvalues_2x2,
    oracle_two_sided_trmm,
    oracle_two_sided_trsm,
)
from src.pipeline import standard_eigenvalues_2x2

L2 = np.array([[2.0, 0.0], [1.0, 1.0]])


def test_trsm_oracle_examples():
    assert_allclose(oracle_two_sided_trsm(np.array([[4.0, 2.0], [2.0, 3.0]]), L2), [[1.0, 0.0], [0.0, 2.0]],
                    atol=1e-15)
    A = np.array([[3.0, 1.0], [1.0, 5.0]])
    assert_allclose(oracle_two_sided_trsm(A, np.eye(2)), A)
    assert_allclose(oracle_two_sided_trsm(np.array([[4.0]]), np.array([[2.0]])), [[1.0]])


def test_trmm_oracle_examples():
    assert_allclose(oracle_two_sided_trmm(np.array([[1.0, 0.0], [0.0, 2.0]]), L2), [[6.0, 2.0], [2.0, 2.0]])
    A = np.array([[3.0, 1.0], [1.0, 5.0]])
    assert_allclose(oracle_two_sided_trmm(A, np.eye(2)), A)
    assert_allclose(oracle_two_sided_trmm(np.array([[3.0]]), np.array([[2.0]])), [[12.0]])


def test_singular_factor_rejected():
    with pytest.raises(SingularFactorError):
        oracle_two_sided_trsm(np.eye(2), np.array([[1.0, 0.0], [1.0, 0.0]]))


def test_shape_mismatch_rejected():
    with pytest.raises(InvalidArgumentError):
        oracle_two_sided_trmm(np.eye(3), np.eye(2))


def test_explicit_inverse():
    L = random_well_conditioned_lower(20, 1)
    assert_allclose(explicit_inverse(L) @ L.dense(), np.eye(20), atol=1e-13)


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
@pytest.mark.parametrize("n", [1, 16, 128, 512])
def test_trsm_oracle_reconstructs_input(n, field):
    A = random_hermitian(n, 3, field)
    L = TriangularFactor(np.asfortranarray(np.linalg.cholesky(random_hpd(n, 3, field).materialize())))
    assert condition_estimate(L) <= 1e2
    C = oracle_two_sided_trsm(A, L)
    dense = L.dense()
    assert relative_distance(dense @ C @ dense.conj().T, A.materialize()) <= 1e-10
    assert relative_distance(C, C.conj().T) <= 1e-13


def test_trmm_oracle_is_hermitian():
    A = random_hermitian(40, 2, Field.COMPLEX)
    C = oracle_two_sided_trmm(A, random_well_conditioned_lower(40, 2, Field.COMPLEX))
    assert relative_distance(C, C.conj().T) <= 1e-13


def test_generalized_eigenvalues_examples():
    A = np.array([[4.0, 2.0], [2.0, 3.0]])
    B = np.array([[4.0, 2.0], [2.0, 2.0]])
    assert_allclose(oracle_generalized_eigenvalues_2x2(A, B), (1.0, 2.0), rtol=1e-14)
    assert_allclose(oracle_generalized_eigenvalues_2x2(B, B), (1.0, 1.0), rtol=1e-12)
    assert oracle_generalized_eigenvalues_2x2(np.zeros((2, 2)), B) == (0.0, 0.0)


def test_generalized_eigenvalues_need_definite_b():
    with pytest.raises(InvalidArgumentError):
        oracle_generalized_eigenvalues_2x2(np.eye(2), np.array([[1.0, 2.0], [2.0, 1.0]]))


@pytest.mark.parametrize("seed", range(10))
def test_reduced_2x2_preserves_eigenvalues(seed):
    A = random_hermitian(2, seed, Field.COMPLEX)
    B = random_hpd(2, seed, Field.COMPLEX)
    dense = B.materialize()
    L = TriangularFactor(np.linalg.cholesky(dense))
    C = oracle_two_sided_trsm(A, L)
    assert_allclose(standard_eigenvalues_2x2(HermitianLowerView(C)), oracle_generalized_eigenvalues_2x2(A, B),
                    atol=1e-10)
