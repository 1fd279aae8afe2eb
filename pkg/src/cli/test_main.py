import io
import json

import numpy as np
import pandas as pd
import pytest

from src.cli.main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from src.cli.models import BENCH_COLUMNS, RunConfig, expand_variants
from src.errors import InvalidArgumentError
from src.matrix import read_hermitian, write_matrix


def test_verify_all_trsm_variants(capsys):
    code = main(["verify", "--op", "trsm", "--variants", "all", "--sizes", "33,64",
                 "--block-sizes", "8", "--check-invariants"])
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert len(frame) == 5 * 2
    assert frame["passed"].all()
    assert frame["invariants"].all()


def test_verify_trmm_json(capsys):
    code = main(["verify", "--op", "trmm", "--variants", "m1,m2", "--sizes", "13", "--block-sizes", "4",
                 "--field", "complex", "--format", "json"])
    assert code == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert [r["variant"] for r in records] == ["m1", "m2"]
    assert all(r["field"] == "complex" for r in records)


def test_verify_unknown_variant(capsys):
    assert main(["verify", "--op", "trsm", "--variants", "6"]) == EXIT_USAGE
    assert "unknown variant" in capsys.readouterr().err


def test_verify_bad_flag_is_usage_error():
    assert main(["verify", "--block-sizes", "0"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE


def test_injected_fault_names_the_boundary(capsys, tmp_path):
    trace_path = tmp_path / "trace.csv"
    code = main(["verify", "--op", "trsm", "--variants", "4", "--sizes", "24", "--block-sizes", "4",
                 "--check-invariants", "--inject-fault", "3", "--trace-out", str(trace_path)])
    assert code == EXIT_FAILURE
    err = capsys.readouterr().err
    assert "FAIL trsm variant 4 n=24 b=4 seed=1" in err
    assert "boundary k=" in err
    trace = pd.read_csv(trace_path)
    assert not trace.empty


def test_injected_fault_in_strict_mode(capsys):
    code = main(["verify", "--op", "trmm", "--variants", "m2", "--sizes", "24", "--block-sizes", "4",
                 "--check-invariants", "--strict", "--inject-fault", "6"])
    assert code == EXIT_FAILURE
    assert "boundary k=" in capsys.readouterr().err


def test_inject_fault_zero_is_not_ignored(capsys):
    code = main(["verify", "--op", "trsm", "--variants", "4", "--sizes", "8", "--block-sizes", "4",
                 "--inject-fault", "0"])
    assert code == EXIT_USAGE
    assert "cannot skip [0]" in capsys.readouterr().err


def test_verify_reduce_pipeline(capsys):
    assert main(["verify", "--op", "reduce", "--variants", "2,4", "--sizes", "20", "--block-sizes", "6"]) == EXIT_OK


def test_bench_header_and_rows(capsys):
    code = main(["bench", "--op", "trsm", "--variants", "1,4", "--sizes", "16,24", "--block-sizes", "8",
                 "--seeds", "1,2", "--reps", "2"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == ",".join(BENCH_COLUMNS)
    assert len(lines) == 1 + 2 * 2 * 2 * 2


def _bench_without_timings(capsys, extra=()):
    main(["bench", "--op", "trmm", "--variants", "all", "--sizes", "20", "--block-sizes", "4", *extra])
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    return frame.drop(columns=["elapsed_seconds", "gflops"]).to_csv(index=False)


def test_bench_is_deterministic(capsys):
    first = _bench_without_timings(capsys)
    assert first == _bench_without_timings(capsys)
    assert first == _bench_without_timings(capsys, ["--parallel-configs", "2"])


def test_verify_is_deterministic(capsys):
    args = ["verify", "--variants", "3", "--sizes", "17", "--block-sizes", "5", "--seeds", "4"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_bench_to_file(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--variants", "2", "--sizes", "8", "--block-sizes", "8", "--out", str(out)]) == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == BENCH_COLUMNS
    assert frame.loc[0, "frac_base"] == 1.0


def test_flops_report(capsys):
    assert main(["flops", "--op", "trsm", "--variant", "1", "--n", "64", "--b", "64"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["measured"]["fraction_per_class"]["base"] == 1.0
    assert set(report["difference"].values()) == {0}


def test_flops_text(capsys):
    assert main(["flops", "--op", "trmm", "--variant", "m2", "--n", "40", "--b", "8", "--format", "text"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Name: measured - predicted" in out


def test_flops_unknown_variant():
    assert main(["flops", "--op", "trmm", "--variant", "3", "--n", "8"]) == EXIT_USAGE


def test_reduce_files(tmp_path, capsys):
    a_path, b_path, c_path = tmp_path / "a.mtx", tmp_path / "b.mtx", tmp_path / "c.mtx"
    write_matrix(a_path, np.array([[4.0, 2.0], [2.0, 3.0]]))
    write_matrix(b_path, np.array([[4.0, 2.0], [2.0, 2.0]]))
    code = main(["reduce", "--a-in", str(a_path), "--b-in", str(b_path), "--block-size", "1",
                 "--out", str(c_path)])
    assert code == EXIT_OK
    assert capsys.readouterr().out.startswith("residual ")
    C = read_hermitian(c_path).materialize()
    np.testing.assert_allclose(C, [[1.0, 0.0], [0.0, 2.0]], atol=1e-14)


def test_reduce_random(capsys):
    assert main(["reduce", "--random", "30", "2", "--variant", "5", "--block-size", "7"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "e-" in out.split()[1]


def test_reduce_indefinite_b(tmp_path, capsys):
    a_path, b_path = tmp_path / "a.mtx", tmp_path / "b.mtx"
    write_matrix(a_path, np.eye(2))
    write_matrix(b_path, np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert main(["reduce", "--a-in", str(a_path), "--b-in", str(b_path)]) == EXIT_FAILURE
    assert "index 1" in capsys.readouterr().err


def test_reduce_missing_file(tmp_path):
    assert main(["reduce", "--a-in", str(tmp_path / "nope.mtx"), "--b-in", str(tmp_path / "nope.mtx")]) == EXIT_USAGE
    assert main(["reduce"]) == EXIT_USAGE


def test_config_file_overrides_flags(tmp_path, capsys):
    config = RunConfig(op="trmm", variants=["m1"], sizes=[9], block_sizes=[3], format="json")
    path = tmp_path / "config.json"
    path.write_text(config.model_dump_json())
    assert main(["verify", "--op", "trsm", "--variants", "1", "--config", str(path)]) == EXIT_OK
    records = json.loads(capsys.readouterr().out)
    assert [(r["op"], r["variant"], r["n"], r["b"]) for r in records] == [("trmm", "m1", 9, 3)]


def test_expand_variants():
    assert expand_variants("trsm", ["all"]) == ["1", "2", "3", "4", "5"]
    assert expand_variants("trmm", ["all", "m1"]) == ["m1", "m2"]
    with pytest.raises(InvalidArgumentError, match="unknown variant"):
        expand_variants("trmm", ["1"])
