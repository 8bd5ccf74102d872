"""Command-line front end: ``daqc compile | verify | experiment``.

Exit codes: 0 success, 1 bad input or arguments, 2 numerical failure or
size guard, 3 Trotter convergence not reached (``verify`` only).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .circuit import compile_schedule, load_schedule, save_schedule
from .decomposer import total_analog_time
from .errors import (
    DAQCError,
    HamiltonianFormatError,
    IncompatibleTopology,
    NoConvergence,
    NotSymmetric,
    NotUnit,
    TooLarge,
    ZeroEigenvector,
)
from .experiments import emit_csv, run_scaling_experiment
from .hamiltonian import load_hamiltonian
from .verifier import MAX_TROTTER_QUBITS, schedule_convergence

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_NOT_CONVERGED = 0, 1, 2, 3
NUMERIC_ERRORS = (NoConvergence, NotSymmetric, NotUnit, ZeroEigenvector)
CONVERGED_DISTANCE = 0.1
DEFAULT_STEPS = (1, 2, 4, 8, 16)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _steps(text: str) -> tuple[int, ...]:
    try:
        steps = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid step list {text!r}") from None
    if not steps or any(s < 1 for s in steps) or list(steps) != sorted(set(steps)):
        raise argparse.ArgumentTypeError("steps must be strictly increasing positive integers")
    return steps


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _err(message: str) -> None:
    print(f"daqc: {message}", file=sys.stderr)


def _require_files(*paths) -> bool:
    for p in paths:
        if not Path(p).is_file():
            _err(f"no such file: {p}")
            return False
    return True


def _require_out_dir(path) -> bool:
    parent = Path(path).resolve().parent
    if not parent.is_dir():
        _err(f"output directory does not exist: {parent}")
        return False
    return True


def cmd_compile(problem_path, source_path, sim_time, threshold, out_path) -> int:
    if not (_require_files(problem_path, source_path) and _require_out_dir(out_path)):
        return EXIT_INPUT
    try:
        problem = load_hamiltonian(problem_path)
        source = load_hamiltonian(source_path)
        schedule, decomposition, matrix = compile_schedule(problem, source, sim_time, threshold)
    except NUMERIC_ERRORS as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    except IncompatibleTopology as exc:
        _err(f"incompatible topology: {exc}")
        return EXIT_INPUT
    except (DAQCError, ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if not schedule.blocks:
        _err("warning: every eigenvalue was discarded; the schedule is empty")
    save_schedule(schedule, out_path)
    print(
        f"n_qubits={schedule.n_qubits} blocks={len(schedule)} "
        f"t_A={total_analog_time(decomposition):.10g} "
        f"discarded_weight={decomposition.discarded_weight:.10g} "
        f"lambda_min={matrix.lambda_tilde_min:.10g}"
    )
    return EXIT_OK


def cmd_verify(schedule_path, problem_path, steps_list, verbose: bool = False) -> int:
    if not _require_files(schedule_path, problem_path):
        return EXIT_INPUT
    try:
        schedule = load_schedule(schedule_path)
        problem = load_hamiltonian(problem_path)
    except NUMERIC_ERRORS as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    except (HamiltonianFormatError, ValueError, OSError) as exc:
        _err(str(exc))
        return EXIT_INPUT
    if schedule.n_qubits > MAX_TROTTER_QUBITS:
        _err(f"verification is limited to {MAX_TROTTER_QUBITS} qubits; schedule has {schedule.n_qubits}")
        return EXIT_NUMERIC
    if problem.n_qubits != schedule.n_qubits:
        _err("schedule and problem disagree on qubit count")
        return EXIT_INPUT
    try:
        report = schedule_convergence(schedule, problem, steps_list, verbose=verbose)
    except TooLarge as exc:
        _err(str(exc))
        return EXIT_NUMERIC
    except DAQCError as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    print(json.dumps(report.to_json_dict(verbose), indent=2))
    if min(report.distances) <= CONVERGED_DISTANCE:
        return EXIT_OK
    _err(f"distance {min(report.distances):.3g} above {CONVERGED_DISTANCE} at the requested steps")
    return EXIT_NOT_CONVERGED


def cmd_experiment(n_min, n_max, samples, seed, out_csv, n_step=4, threshold=0.0, workers=1) -> int:
    if not 2 <= n_min <= n_max:
        _err(f"need 2 <= --n-min <= --n-max (got {n_min}, {n_max})")
        return EXIT_INPUT
    if samples < 1:
        _err("--samples must be at least 1")
        return EXIT_INPUT
    if not _require_out_dir(out_csv):
        return EXIT_INPUT

    def progress(row):
        print(
            f"N={row.n_qubits:3d} mean_tA={row.mean_tA:.4g} mean_bound={row.mean_bound:.4g}",
            file=sys.stderr,
            flush=True,
        )

    try:
        rows = run_scaling_experiment(
            n_min, n_max, samples, seed, threshold, n_step=n_step, workers=workers, progress=progress
        )
        emit_csv(rows, out_csv)
    except OSError as exc:
        _err(str(exc))
        return EXIT_INPUT
    except DAQCError as exc:
        _err(f"numerical failure: {exc}")
        return EXIT_NUMERIC
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="daqc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"daqc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compile", help="compile a problem Hamiltonian into a schedule")
    p.add_argument("--problem", required=True, help="problem Hamiltonian JSON")
    p.add_argument("--source", required=True, help="zz source Hamiltonian JSON")
    p.add_argument("--time", type=_positive, required=True, help="simulation time T")
    p.add_argument("--threshold", type=_non_negative, default=0.0, help="discard eigenpairs with per-block time <= this")
    p.add_argument("--out", required=True, help="schedule JSON to write")

    p = sub.add_parser("verify", help="compare a schedule against the exact evolution")
    p.add_argument("--schedule", required=True)
    p.add_argument("--problem", required=True)
    p.add_argument("--steps", type=_steps, default=DEFAULT_STEPS, help="comma-separated Trotter step counts")
    p.add_argument("--verbose", action="store_true", help="also report phase-aligned Frobenius distances")

    p = sub.add_parser("experiment", help="t_A scaling study over random problems")
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--n-step", type=int, default=4)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=_non_negative, default=0.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV to write")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "compile":
        return cmd_compile(args.problem, args.source, args.time, args.threshold, args.out)
    if args.command == "verify":
        return cmd_verify(args.schedule, args.problem, args.steps, args.verbose)
    if args.n_step < 1 or args.workers < 1:
        _err("--n-step and --workers must be positive")
        return EXIT_INPUT
    return cmd_experiment(
        args.n_min, args.n_max, args.samples, args.seed, args.out, args.n_step, args.threshold, args.workers
    )


if __name__ == "__main__":
    sys.exit(main())
