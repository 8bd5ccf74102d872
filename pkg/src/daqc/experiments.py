"""Total analog time of random problems versus system size.

Each sample ``(seed, N, index)`` gets its own generator seeded from
``numpy.random.SeedSequence([seed, N, index])``, so samples are independent
of evaluation order and can run in worker processes.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .decomposer import decompose, total_analog_time
from .hamiltonian import gauge_fix_psd, random_coupling_ratio_matrix

log = logging.getLogger(__name__)

__all__ = ["SampleResult", "ScalingRow", "run_sample", "run_scaling_experiment", "emit_csv"]

BOUND_SLACK = 1e-9
CSV_HEADER = "n,samples,mean_ta,min_ta,max_ta,mean_bound,mean_blocks"


@dataclass(frozen=True)
class SampleResult:
    n_qubits: int
    index: int
    t_a: float
    bound: float
    blocks: int

    @property
    def within_bound(self) -> bool:
        return self.t_a <= self.bound + BOUND_SLACK


@dataclass(frozen=True)
class ScalingRow:
    n_qubits: int
    samples: int
    mean_tA: float
    min_tA: float
    max_tA: float
    mean_bound: float
    mean_blocks: float
    bound_violations: int = 0

    def csv_line(self) -> str:
        fields = [self.mean_tA, self.min_tA, self.max_tA, self.mean_bound, self.mean_blocks]
        return ",".join([str(self.n_qubits), str(self.samples)] + [f"{x:.10g}" for x in fields])


def sample_seed(seed: int, n_qubits: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, n_qubits, index])


def run_sample(seed: int, n_qubits: int, index: int, discard_threshold: float = 0.0) -> SampleResult:
    b = gauge_fix_psd(random_coupling_ratio_matrix(n_qubits, sample_seed(seed, n_qubits, index)))
    d = decompose(b, discard_threshold)
    return SampleResult(
        n_qubits,
        index,
        total_analog_time(d),
        3 * n_qubits * abs(b.lambda_tilde_min),
        len(d),
    )


def _run_sample_args(args):
    return run_sample(*args)


def aggregate(n_qubits: int, results: list[SampleResult]) -> ScalingRow:
    ta = [r.t_a for r in results]
    return ScalingRow(
        n_qubits,
        len(results),
        math.fsum(ta) / len(ta),
        min(ta),
        max(ta),
        math.fsum(r.bound for r in results) / len(results),
        math.fsum(r.blocks for r in results) / len(results),
        sum(not r.within_bound for r in results),
    )


def run_scaling_experiment(
    n_min: int,
    n_max: int,
    samples_per_n: int,
    seed: int,
    discard_threshold: float = 0.0,
    n_step: int = 1,
    workers: int = 1,
    progress: Callable[[ScalingRow], None] | None = None,
    collect: list | None = None,
) -> list[ScalingRow]:
    """One :class:`ScalingRow` per ``N`` in ``range(n_min, n_max + 1, n_step)``.

    Pass a list as ``collect`` to receive the per-sample results as well.
    """
    if not 2 <= n_min <= n_max:
        raise ValueError(f"need 2 <= n_min <= n_max, got n_min={n_min}, n_max={n_max}")
    if samples_per_n < 1 or n_step < 1:
        raise ValueError("samples_per_n and n_step must be positive")
    rows = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for n in range(n_min, n_max + 1, n_step):
            jobs = [(seed, n, k, discard_threshold) for k in range(samples_per_n)]
            if pool is None:
                results = [_run_sample_args(j) for j in jobs]
            else:
                results = list(pool.map(_run_sample_args, jobs))
            row = aggregate(n, results)
            if row.bound_violations:
                log.warning("N=%d: %d samples exceed the analog-time bound", n, row.bound_violations)
            if collect is not None:
                collect.extend(results)
            if progress is not None:
                progress(row)
            rows.append(row)
    finally:
        if pool is not None:
            pool.shutdown()
    return rows


def emit_csv(rows: Iterable[ScalingRow], path) -> None:
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    text = "\n".join([CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
