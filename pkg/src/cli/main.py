"""
Command-line entry point: verify, bench, flops and reduce.

Exit codes: 0 success, 1 verification or numerical failure, 2 usage error.
Results go to stdout (or --out); logs go to stderr.
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple
import argparse
import itertools
import json
import logging
import sys
import time

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..config import (
    DEFAULT_BLOCK_SIZE,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRSM_VARIANT,
    LOG_LEVEL,
)
from ..cost import analyze, compare, predict_fractions, report_table
from ..errors import (
    InvalidArgumentError,
    InvariantViolationError,
    MatrixFileError,
    NotPositiveDefiniteError,
    SingularFactorError,
)
from ..kernels import FlopLedger, KernelClass
from ..matrix import (
    Field,
    HermitianLowerView,
    TriangularFactor,
    random_hermitian,
    random_hpd,
    random_well_conditioned_lower,
    read_hermitian,
    relative_distance,
    write_hermitian,
)
from ..oracle import oracle_two_sided_trmm, oracle_two_sided_trsm
from ..pipeline import reduce
from ..twosided import two_sided_trmm, two_sided_trsm
from ..worksheet import WorksheetHarness, WorksheetTrace
from .models import BENCH_COLUMNS, BenchRecord, RunConfig, VerifyRecord, expand_variants

# Set up logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

Cell = Tuple[str, int, int, int]


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise InvalidArgumentError(f"expected a comma-separated list of integers, got {text!r}")


def grid_inputs(n: int, seed: int, field: Field) -> Tuple[HermitianLowerView, TriangularFactor]:
    """Test matrices of one grid cell"""
    return random_hermitian(n, seed, field), random_well_conditioned_lower(n, seed, field)


def run_variant(op: str, variant: str, A: HermitianLowerView, L: TriangularFactor, b: int, **options):
    if op == "trmm":
        options.pop("workspace", None)
        return two_sided_trmm(A, L, variant, b, **options)
    return two_sided_trsm(A, L, variant, b, **options)


def _cells(config: RunConfig) -> List[Cell]:
    return list(itertools.product(config.resolved_variants(), config.sizes, config.block_sizes, config.seeds))


def _write(frame: pd.DataFrame, records: Sequence, config: RunConfig, columns: Optional[List[str]] = None):
    """CSV (selected columns) or a JSON array of the full records, to --out or stdout"""
    if config.format == "json":
        text = json.dumps([record.model_dump(mode="json") for record in records], indent=2) + "\n"
    else:
        text = frame.to_csv(index=False, columns=columns)
    if config.out:
        Path(config.out).write_text(text)
        logger.info(f"Wrote {len(records)} records to {config.out}")
    else:
        sys.stdout.write(text)


def verify_cell(config: RunConfig, cell: Cell) -> Tuple[VerifyRecord, Optional[WorksheetTrace]]:
    """Oracle comparison (and optionally the invariant harness) for one grid cell"""
    variant, n, b, seed = cell
    op = config.op
    A_hat, L = grid_inputs(n, seed, config.field)
    skip = (config.inject_fault,) if config.inject_fault is not None else ()

    if op == "reduce":
        B = random_hpd(n, seed, config.field)
        result = reduce(A_hat, B, variant, b)
        passed = result.residual <= config.tolerance
        record = VerifyRecord(op=op, variant=variant, n=n, b=b, seed=seed, field=config.field.value,
                              residual=result.residual, passed=passed,
                              failure=None if passed else f"residual {result.residual:.3e}")
        return record, None

    A = A_hat.copy()
    harness = None
    if config.check_invariants:
        harness = WorksheetHarness(variant, A_hat, L, tolerance=config.tolerance, strict=config.strict,
                                   b=b, seed=seed)
    failure = None
    try:
        run_variant(op, variant, A, L, b, trace=harness, skip_steps=skip)
        trace = harness.finish(A) if harness is not None else None
    except InvariantViolationError as e:
        trace = harness.trace
        failure = f"boundary k={e.k} quadrant {e.quadrant} residual {e.residual:.3e}"

    oracle = oracle_two_sided_trsm if op == "trsm" else oracle_two_sided_trmm
    residual = relative_distance(np.tril(A.base), np.tril(oracle(A_hat, L)))
    upper_ok = bool(np.array_equal(np.triu(A.base, 1), np.triu(A_hat.base, 1)))
    invariants = None
    if failure is not None:
        invariants = False
    elif trace is not None:
        invariants = trace.passed
        if not trace.passed:
            failure = trace.describe_failure()
    if failure is None and residual > config.tolerance:
        failure = f"oracle residual {residual:.3e}"
    if failure is None and not upper_ok:
        failure = "strictly upper buffer modified"

    record = VerifyRecord(op=op, variant=variant, n=n, b=b, seed=seed, field=config.field.value,
                          residual=residual, invariants=invariants, failure=failure, passed=failure is None)
    return record, trace


def cmd_verify(config: RunConfig) -> int:
    """Run the oracle-equivalence grid; exit 0 iff every cell passes"""
    cells = _cells(config)
    logger.info(f"Verifying {len(cells)} configurations for {config.op}")
    results = [verify_cell(config, cell) for cell in cells]
    records = [record for record, _ in results]

    if config.trace_out:
        frames = [trace.to_frame() for _, trace in results if trace is not None]
        if frames:
            pd.concat(frames, ignore_index=True).to_csv(config.trace_out, index=False)

    frame = pd.DataFrame([record.model_dump(mode="json") for record in records])
    _write(frame, records, config)

    failed = [record for record in records if not record.passed]
    for record in failed:
        message = (f"FAIL {record.op} variant {record.variant} n={record.n} b={record.b} "
                   f"seed={record.seed}: {record.failure}")
        logger.error(message)
        print(message, file=sys.stderr)
    return EXIT_FAILURE if failed else EXIT_OK


def bench_cell(config: RunConfig, cell: Cell) -> List[BenchRecord]:
    """Time every repetition of one (variant, n, b, seed) cell"""
    variant, n, b, seed = cell
    op = config.op
    A_hat, L = grid_inputs(n, seed, config.field)
    B = random_hpd(n, seed, config.field) if op == "reduce" else None
    records = []
    for rep in range(config.reps):
        ledger = FlopLedger()
        A = A_hat.copy()
        start = time.perf_counter()
        if op == "reduce":
            reduce(A, B, variant, b, ledger=ledger)
        else:
            run_variant(op, variant, A, L, b, ledger=ledger)
        elapsed = time.perf_counter() - start

        fractions = ledger.fractions() or {}
        gflops = ledger.total / elapsed / 1e9 if elapsed > 0 and ledger.total else 0.0
        records.append(BenchRecord(
            op=op, variant=variant, n=n, b=b, seed=seed, rep=rep,
            elapsed_seconds=elapsed, gflops=gflops,
            **{f"frac_{kc.value}": fractions.get(kc, 0.0) for kc in KernelClass},
        ))
        logger.debug(f"bench {op} {variant} n={n} b={b} rep={rep}: {elapsed:.4f}s, {gflops:.3f} GFLOP/s")
    return records


def cmd_bench(config: RunConfig) -> int:
    """One BenchRecord per (variant, n, b, seed, rep)"""
    cells = _cells(config)
    logger.info(f"Benchmarking {len(cells)} configurations x {config.reps} reps")
    if config.parallel_configs > 1:
        with ThreadPoolExecutor(max_workers=config.parallel_configs) as pool:
            per_cell = list(pool.map(lambda cell: bench_cell(config, cell), cells))
    else:
        per_cell = [bench_cell(config, cell) for cell in cells]
    records = [record for batch in per_cell for record in batch]

    frame = pd.DataFrame([record.csv_row() for record in records], columns=BENCH_COLUMNS)
    _write(frame, records, config, columns=BENCH_COLUMNS)
    return EXIT_OK


def cmd_flops(op: str, variant: str, n: int, b: int, *, seed: int = DEFAULT_SEED, field: Field = Field.REAL,
              output_format: str = "json") -> int:
    """Predicted and measured cost reports for one run, plus their difference"""
    variant = expand_variants(op, [variant])[0]
    if n < 0 or b < 1:
        raise InvalidArgumentError(f"need n >= 0 and b >= 1, got n={n}, b={b}")
    A, L = grid_inputs(n, seed, field)
    ledger = FlopLedger.with_call_log()
    run_variant(op, variant, A, L, b, ledger=ledger)

    measured = analyze(ledger, ledger.calls, n, b, variant)
    predicted = predict_fractions(variant, n, b)
    difference = compare(predicted, measured)

    if output_format == "text":
        print(report_table(predicted, measured))
        print(pd.Series(difference, name="measured - predicted").to_string(name=True))
    else:
        print(json.dumps({
            "predicted": predicted.model_dump(mode="json"),
            "measured": measured.model_dump(mode="json"),
            "difference": difference,
        }, indent=2))

    if any(difference.values()):
        logger.error(f"Measured ledger differs from prediction: {difference}")
        return EXIT_FAILURE
    return EXIT_OK


def _load_hermitian(path: str) -> HermitianLowerView:
    """Read a matrix whose upper triangle is either empty or the conjugate mirror of the lower"""
    view = read_hermitian(path)
    strictly_upper = np.triu(view.base, 1)
    if np.any(strictly_upper):
        full = view.base
        if relative_distance(full, full.conj().T) > 1e-12:
            raise InvalidArgumentError(f"Matrix in {path} is not Hermitian")
    return view


def cmd_reduce(a_in: Optional[str], b_in: Optional[str], random: Optional[Sequence[int]],
               variant: str, block_size: int, out: Optional[str], tolerance: float,
               field: Field = Field.REAL) -> int:
    """Reduce (A, B) to standard form, write C and report the reconstruction residual"""
    variant = expand_variants("trsm", [variant])[0]
    if random:
        n, seed = random
        A, B = random_hermitian(n, seed, field), random_hpd(n, seed, field)
    elif a_in and b_in:
        A, B = _load_hermitian(a_in), _load_hermitian(b_in)
    else:
        raise InvalidArgumentError("reduce needs --a-in and --b-in, or --random N SEED")

    result = reduce(A, B, variant, block_size)
    if out:
        write_hermitian(out, result.C, comment=f"reduced with variant {variant}, b={block_size}")
    print(f"residual {result.residual:.3e}")
    if result.residual > tolerance:
        logger.error(f"Residual {result.residual:.3e} exceeds tolerance {tolerance:.1e}")
        return EXIT_FAILURE
    return EXIT_OK


def _add_grid_options(parser: argparse.ArgumentParser):
    parser.add_argument("--op", choices=["trsm", "trmm", "reduce"], default="trsm")
    parser.add_argument("--variants", default="all", help="comma-separated: 1-5 for trsm, m1,m2 for trmm, or all")
    parser.add_argument("--sizes", default="64", help="comma-separated matrix orders")
    parser.add_argument("--block-sizes", default=str(DEFAULT_BLOCK_SIZE))
    parser.add_argument("--seeds", default=str(DEFAULT_SEED))
    parser.add_argument("--field", choices=[f.value for f in Field], default=Field.REAL.value)
    parser.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default="csv")
    parser.add_argument("--config", help="JSON RunConfig whose fields override these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twosided", description="Two-sided triangular solve and product variants")
    parser.add_argument("--log-level", default=LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="oracle equivalence and loop-invariant checks")
    _add_grid_options(verify)
    verify.add_argument("--check-invariants", action="store_true")
    verify.add_argument("--strict", action="store_true", help="stop a run at its first failing boundary")
    verify.add_argument("--inject-fault", type=int, metavar="STEP", help="leave out update step STEP")
    verify.add_argument("--trace-out", help="CSV file for the per-boundary worksheet trace")

    bench = sub.add_parser("bench", help="time variants and report flop fractions")
    _add_grid_options(bench)
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--parallel-configs", type=int, default=1)

    flops = sub.add_parser("flops", help="predicted vs measured cost report")
    flops.add_argument("--op", choices=["trsm", "trmm"], default="trsm")
    flops.add_argument("--variant", default=DEFAULT_TRSM_VARIANT)
    flops.add_argument("--n", type=int, required=True)
    flops.add_argument("--b", type=int, default=DEFAULT_BLOCK_SIZE)
    flops.add_argument("--seed", type=int, default=DEFAULT_SEED)
    flops.add_argument("--field", choices=[f.value for f in Field], default=Field.REAL.value)
    flops.add_argument("--format", choices=["json", "text"], default="json")

    red = sub.add_parser("reduce", help="reduce A x = lambda B x to standard form")
    red.add_argument("--a-in")
    red.add_argument("--b-in")
    red.add_argument("--random", nargs=2, type=int, metavar=("N", "SEED"))
    red.add_argument("--variant", default=DEFAULT_TRSM_VARIANT)
    red.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    red.add_argument("--field", choices=[f.value for f in Field], default=Field.REAL.value)
    red.add_argument("--out", help="Matrix Market file for C")
    red.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """RunConfig from grid flags, with --config file fields taking precedence"""
    config = RunConfig(
        op=args.op,
        variants=args.variants.split(","),
        sizes=_int_list(args.sizes),
        block_sizes=_int_list(args.block_sizes),
        seeds=_int_list(args.seeds),
        field=args.field,
        reps=getattr(args, "reps", 1),
        tolerance=args.tolerance,
        check_invariants=getattr(args, "check_invariants", False),
        strict=getattr(args, "strict", False),
        inject_fault=getattr(args, "inject_fault", None),
        parallel_configs=getattr(args, "parallel_configs", 1),
        out=args.out,
        trace_out=getattr(args, "trace_out", None),
        format=args.format,
    )
    if args.config:
        try:
            loaded = RunConfig.model_validate_json(Path(args.config).read_text())
        except OSError as e:
            raise InvalidArgumentError(f"Could not read config {args.config}: {e}") from e
        config = config.model_copy(update={name: getattr(loaded, name) for name in loaded.model_fields_set})
    config.resolved_variants()
    return config


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "verify":
        return cmd_verify(config_from_args(args))
    if args.command == "bench":
        return cmd_bench(config_from_args(args))
    if args.command == "flops":
        return cmd_flops(args.op, args.variant, args.n, args.b, seed=args.seed, field=Field(args.field),
                         output_format=args.format)
    return cmd_reduce(args.a_in, args.b_in, args.random, args.variant, args.block_size, args.out,
                      args.tolerance, Field(args.field))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(level=str(args.log_level).upper(), stream=sys.stderr,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    try:
        return _dispatch(args)
    except (InvalidArgumentError, MatrixFileError, ValidationError) as e:
        logger.error(f"Usage error: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NotPositiveDefiniteError, SingularFactorError) as e:
        logger.error(f"Numerical failure: {str(e)}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
