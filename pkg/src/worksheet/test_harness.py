import numpy as np
import pytest

from src.errors import InvariantViolationError
from src.matrix import Field, TriangularFactor, random_hermitian, random_well_conditioned_lower
from src.twosided import TRMM_STEP_COUNTS, TRSM_STEP_COUNTS, TrsmWorkspace, two_sided_trmm, two_sided_trsm
from src.worksheet import (
    INVARIANTS,
    TRACE_COLUMNS,
    QuadrantState,
    WorksheetHarness,
    check_initialization,
    invariant_for,
)

STEP_COUNTS = {variant.value: count for variant, count in {**TRSM_STEP_COUNTS, **TRMM_STEP_COUNTS}.items()}


def _run(variant, n, b, seed=1, field=Field.REAL, skip_steps=(), strict=False):
    A_hat = random_hermitian(n, seed, field)
    L = random_well_conditioned_lower(n, seed, field)
    A = A_hat.copy()
    harness = WorksheetHarness(variant, A, L, strict=strict, b=b, seed=seed)
    if variant.startswith("m"):
        two_sided_trmm(A, L, variant, b, trace=harness, skip_steps=skip_steps)
    else:
        two_sided_trsm(A, L, variant, b, trace=harness, skip_steps=skip_steps,
                       workspace=TrsmWorkspace(n, b, A.dtype))
    return harness.finish(A)


@pytest.mark.parametrize("variant", sorted(INVARIANTS))
@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_every_variant_keeps_its_invariant(variant, field):
    trace = _run(variant, 64, 8, field=field)
    assert trace.passed, trace.describe_failure()
    assert [record.k for record in trace.records] == list(range(0, 64, 8)) + [64]
    assert trace.terminated


@pytest.mark.parametrize("variant, step", [
    (variant, step) for variant, count in STEP_COUNTS.items() for step in range(1, count + 1)
])
def test_skipping_any_step_is_caught(variant, step):
    trace = _run(variant, 24, 4, skip_steps=[step])
    assert not trace.passed
    assert trace.describe_failure() is not None


def test_skipped_step_raises_in_strict_mode():
    with pytest.raises(InvariantViolationError) as excinfo:
        _run("4", 24, 4, skip_steps=[3], strict=True)
    assert excinfo.value.variant == "4"
    assert excinfo.value.k > 0


def test_corrupted_entry_fails_initialization():
    A_hat = random_hermitian(8, 2)
    L = random_well_conditioned_lower(8, 2)
    A = A_hat.base.copy()
    A[5, 2] = np.nextafter(A[5, 2], np.inf)
    check = check_initialization(invariant_for("1"), A, A_hat.base, L.base)
    assert not check.passed
    assert check.first_failure().quadrant in ("BL", "BR")

    check = check_initialization(invariant_for("1"), A_hat.base.copy(), A_hat.base, L.base)
    assert check.passed


def test_damaged_factor_is_caught_at_termination():
    n, b = 24, 4
    A_hat = random_hermitian(n, 3)
    L = random_well_conditioned_lower(n, 3)
    A = A_hat.copy()
    harness = WorksheetHarness("5", A, L, b=b)

    def hook(k, buffer, workspace):
        harness(k, buffer, workspace)
        if k == 12:
            L.base[20, 16] += 1.0

    two_sided_trsm(A, L, "5", b, trace=hook)
    trace = harness.finish(A)
    assert not trace.passed
    assert trace.final_residual > trace.tolerance


@pytest.mark.parametrize("variant", sorted(INVARIANTS))
def test_unit_diagonal_factor_uses_implicit_ones(variant):
    n, b = 12, 4
    A_hat = random_hermitian(n, 5)
    stored = random_well_conditioned_lower(n, 5).base.copy()
    np.fill_diagonal(stored, 7.0)
    L = TriangularFactor(stored, unit_diagonal=True)
    A = A_hat.copy()
    harness = WorksheetHarness(variant, A, L, strict=True, b=b)
    if variant.startswith("m"):
        two_sided_trmm(A, L, variant, b, trace=harness)
    else:
        two_sided_trsm(A, L, variant, b, trace=harness, workspace=TrsmWorkspace(n, b, A.dtype))
    trace = harness.finish(A)
    assert trace.passed, trace.describe_failure()
    assert np.all(np.diagonal(harness.references.L) == 1.0)


def test_empty_matrix_passes():
    trace = _run("3", 0, 4)
    assert trace.passed
    assert [record.k for record in trace.records] == [0]


def test_variant_three_tracks_y_panel():
    spec = invariant_for("V3")
    assert "Y" in spec.quadrant_states()
    assert spec.quadrant_states()["Y"].state is QuadrantState.CUSTOM
    assert str(spec.quadrant_states()["Y"]) == "L_BL C_TL"
    assert "Y" not in invariant_for("4").quadrant_states()


def test_trace_csv_layout():
    trace = _run("m2", 10, 4, seed=7)
    text = trace.to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    frame = trace.to_frame()
    assert set(frame["variant"]) == {"m2"}
    assert set(frame["seed"]) == {7}
    assert frame.iloc[-1]["quadrant"] == "C"
    # three quadrants at each of k = 0, 4, 8, 10 plus the termination row
    assert len(frame) == 4 * 3 + 1


def test_trace_csv_written_to_file(tmp_path):
    trace = _run("2", 12, 4)
    path = tmp_path / "trace.csv"
    trace.to_csv(path)
    assert path.read_text().splitlines()[0].split(",") == TRACE_COLUMNS
