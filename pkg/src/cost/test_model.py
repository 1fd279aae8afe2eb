import json

import pytest

from src.cost import CostReport, analyze, compare, predict_fractions, predict_ledger, report_table
from src.errors import InvalidArgumentError
from src.kernels import FlopLedger, KernelClass
from src.matrix import Field, random_hermitian, random_well_conditioned_lower
from src.twosided import two_sided_trmm, two_sided_trsm

VARIANTS = ["1", "2", "3", "4", "5", "m1", "m2"]


def _measure(variant, n, b, field=Field.REAL):
    A = random_hermitian(n, 1, field)
    L = random_well_conditioned_lower(n, 1, field)
    ledger = FlopLedger.with_call_log()
    if variant.startswith("m"):
        two_sided_trmm(A, L, variant, b, ledger=ledger)
    else:
        two_sided_trsm(A, L, variant, b, ledger=ledger)
    return analyze(ledger, ledger.calls, n, b, variant)


@pytest.mark.parametrize("variant", VARIANTS)
@pytest.mark.parametrize("n, b", [(256, 32), (100, 7), (5, 8)])
def test_prediction_matches_measurement(variant, n, b):
    measured = _measure(variant, n, b)
    predicted = predict_fractions(variant, n, b)
    assert set(compare(predicted, measured).values()) == {0}
    assert predicted.largest_written_extent_of_big_kernels == measured.largest_written_extent_of_big_kernels


def test_block_covering_matrix_is_all_base():
    report = predict_fractions("1", 16, 16)
    assert report.total_flops == 16 ** 3
    assert report.fraction(KernelClass.TWO_SIDED_BASE) == 1.0
    assert report.scalable_fraction == 1.0


def test_totals_near_n_cubed():
    # trsm variants without the extra solves cost n^3 plus lower order terms
    for variant in ("1", "2", "3"):
        assert predict_fractions(variant, 512, 32).total_flops / 512 ** 3 == pytest.approx(1.0, abs=0.02)
    for variant in ("4", "5", "m1", "m2"):
        assert predict_fractions(variant, 512, 32).total_flops / 512 ** 3 == pytest.approx(1.0, abs=0.13)


def test_trmm_variants_never_solve():
    for variant in ("m1", "m2"):
        report = predict_fractions(variant, 256, 16)
        assert report.fraction(KernelClass.TRSM) == 0.0
        assert report.scalable_fraction == 1.0


def test_empty_ledger_gives_undefined_fractions(caplog):
    report = analyze(FlopLedger(), [], 0, 8, "4")
    assert report.total_flops == 0
    assert not report.fractions_defined
    assert report.fraction_per_class is None
    assert report.fraction(KernelClass.GEMM) is None
    assert report.scalable_fraction is None
    assert "Empty ledger" in caplog.text


def test_report_serializes():
    report = predict_fractions("4", 64, 8)
    data = json.loads(report.model_dump_json())
    assert data["op"] == "trsm"
    assert data["flops_per_class"]["her2k"] == report.flops_per_class["her2k"]
    assert CostReport.model_validate(data) == report


def test_report_table_lists_each_report():
    table = report_table(predict_fractions("1", 64, 8), predict_fractions("m2", 64, 8))
    assert "trsm 1 n=64 b=8" in table
    assert "trmm m2 n=64 b=8" in table
    assert "frac_her2k" in table


def test_unknown_variant():
    with pytest.raises(InvalidArgumentError):
        predict_ledger("7", 8, 2)


def test_complex_field_counts_the_same():
    assert _measure("3", 40, 6, Field.COMPLEX).flops_per_class == predict_fractions("3", 40, 6).flops_per_class
