"""Acceptance suite: one PASS/FAIL line per criterion, printed in the terminal summary.

Run with ``pytest tests/test_acceptance.py -v``.  Tolerances are fixed here
and never adapted to the observed numbers.
"""
import math
import time

import numpy as np
import pytest
from conftest import (
    dense_oracle,
    kron_all,
    random_problem,
    random_unit_vectors,
    random_zz_problem,
    random_zz_source,
)
from test_circuit import pauli_components

from daqc.circuit import SQGParams, compile_schedule, effective_couplings, gamma_to_rotation, rotation_to_gamma
from daqc.decomposer import decompose, perturbation_vectors, reconstruct_off_diagonal
from daqc.experiments import run_scaling_experiment, sample_seed
from daqc.hamiltonian import CouplingRatioMatrix, gauge_fix_psd, random_coupling_ratio_matrix
from daqc.verifier import phase_invariant_distance, schedule_unitary, exact_unitary, trotter_convergence

pytestmark = pytest.mark.acceptance

SEED = 2024
RECON_TOL = 1e-9
BOUND_SLACK = 1e-9
RATIO_MAX = 3.0
LINEAR_TOL = 0.20
TROTTER_STEPS = (1, 2, 4, 8, 16, 32)
TROTTER_TIME = 0.5
CONVERGED = 0.1
RATIO_BAND = (1.5, 2.5)
EXACT_TOL = 1e-8
ROUND_TRIP_TOL = 1e-12
RESIDUAL_TOL = 1e-10
EFFECTIVE_TOL = 1e-12
COMPILE_LIMIT_S = 30.0


@pytest.fixture(scope="module")
def gauge_fixed_samples():
    out = {}
    for n in (2, 5, 10, 25, 50):
        out[n] = [gauge_fix_psd(random_coupling_ratio_matrix(n, sample_seed(SEED, n, k))) for k in range(100)]
    return out


@pytest.fixture(scope="module")
def scaling():
    samples = []
    rows = run_scaling_experiment(2, 50, 100, seed=SEED, n_step=4, collect=samples)
    return rows, samples


def test_criterion_1_reconstruction(gauge_fixed_samples, report):
    worst = 0.0
    for n, mats in gauge_fixed_samples.items():
        for b in mats:
            err = np.max(np.abs(reconstruct_off_diagonal(decompose(b)) - b.off_diagonal()))
            worst = max(worst, float(err))
    ok = worst <= RECON_TOL
    report(1, ok, f"max reconstruction error {worst:.2e} (tol {RECON_TOL:g}) over 500 matrices, N in 2,5,10,25,50")
    assert ok


def test_criterion_2_block_count(gauge_fixed_samples, report):
    bad = 0
    checked = 0
    for n, mats in gauge_fixed_samples.items():
        for b in mats[:20]:
            checked += 1
            bad += len(decompose(b)) > 12 * n * n
    exact = []
    rng = np.random.default_rng(SEED)
    for n in (2, 3, 5, 8):
        off = random_coupling_ratio_matrix(n, int(rng.integers(2**32))).entries
        shifted = CouplingRatioMatrix(n, off + (0.5 - np.linalg.eigvalsh(off).min()) * np.eye(3 * n))
        exact.append(len(decompose(shifted)) == 12 * n * n)
    ok = bad == 0 and all(exact)
    report(
        2,
        ok,
        f"{bad}/{checked} gauge-fixed schedules exceed 12N^2; "
        f"{sum(exact)}/{len(exact)} strictly positive spectra give exactly 12N^2",
    )
    assert ok


def test_criterion_3_analog_time_bound(scaling, report):
    _, samples = scaling
    over = [s for s in samples if not s.t_a <= s.bound + BOUND_SLACK]
    worst = max(s.t_a - s.bound for s in samples)
    ok = not over and len(samples) >= 1000
    report(3, ok, f"{len(over)}/{len(samples)} samples above 3N|lambda_min|; max t_A - bound = {worst:.3g}")
    assert ok


def test_criterion_4_scaling_shape(scaling, report):
    rows, _ = scaling
    n = np.array([r.n_qubits for r in rows], dtype=float)
    mean_ta = np.array([r.mean_tA for r in rows])
    bound = np.array([r.mean_bound for r in rows])
    ratio = mean_ta.max() / mean_ta.min()
    slope = np.sum(n * bound) / np.sum(n * n)  # least-squares line through the origin
    linear_dev = float(np.max(np.abs(bound - slope * n) / (slope * n)))
    ok = ratio <= RATIO_MAX and linear_dev <= LINEAR_TOL
    report(
        4,
        ok,
        f"mean t_A max/min = {ratio:.2f} (limit {RATIO_MAX:g}); "
        f"bound max deviation from linear = {linear_dev:.1%} (limit {LINEAR_TOL:.0%}); "
        f"mean t_A {mean_ta[0]:.3g} at N=2 -> {mean_ta[-1]:.3g} at N=50",
    )
    assert ok


def _converges(distances) -> tuple[bool, list[float]]:
    d = list(distances)
    below = [k for k, x in enumerate(d) if x < CONVERGED]
    if not below:
        return False, []
    tail = d[below[0]:]
    monotone = all(b < a for a, b in zip(tail, tail[1:]))
    ratios = [d[k] / d[k + 1] for k in range(len(d) - 4, len(d) - 1)]  # n_T = 4 .. 32
    in_band = all(RATIO_BAND[0] <= r <= RATIO_BAND[1] for r in ratios)
    return monotone and in_band, ratios


def test_criterion_5_trotter_convergence(report):
    rng = np.random.default_rng(SEED)
    exact, first_order, failures = 0, 0, []
    all_ratios = []
    for k in range(20):
        n = 2 if k < 10 else 3
        r = trotter_convergence(random_problem(rng, n), random_zz_source(rng, n), TROTTER_TIME, TROTTER_STEPS)
        if max(r.distances) <= EXACT_TOL:
            exact += 1  # no Trotter error to converge
            continue
        ok, ratios = _converges(r.distances)
        all_ratios += ratios
        first_order += ok
        if not ok:
            failures.append((n, [f"{x:.3g}" for x in r.distances]))
    ok = not failures
    span = f"[{min(all_ratios):.2f}, {max(all_ratios):.2f}]" if all_ratios else "n/a"
    report(
        5,
        ok,
        f"{first_order} instances first-order with final-decade ratios in {span}, "
        f"{exact} Trotter-exact (distance <= {EXACT_TOL:g}), {len(failures)} failing",
    )
    assert ok, failures


def test_criterion_6_commuting_exactness(report):
    rng = np.random.default_rng(SEED + 6)
    worst = {}
    for k in range(20):
        n = 2 + k % 3
        problem, source = random_zz_problem(rng, n), random_zz_source(rng, n)
        schedule, _, _ = compile_schedule(problem, source, 1.0)
        d = phase_invariant_distance(exact_unitary(problem, 1.0), schedule_unitary(schedule, 1))
        worst[n] = max(worst.get(n, 0.0), d)
    ok = max(worst.values()) <= EXACT_TOL
    detail = ", ".join(f"N={n}: {d:.2e}" for n, d in sorted(worst.items()))
    report(6, ok, f"max distance at n_T=1 by N: {detail} (tol {EXACT_TOL:g})")
    assert ok


def test_criterion_7_round_trip(report):
    rng = np.random.default_rng(SEED + 7)
    gammas = np.vstack([random_unit_vectors(rng, 10_000), [[0, 0, 1.0], [0, 0, -1.0]]])
    worst = max(float(np.max(np.abs(rotation_to_gamma(gamma_to_rotation(g)) - g))) for g in gammas)
    ok = worst <= ROUND_TRIP_TOL
    report(7, ok, f"max round-trip error {worst:.2e} over {len(gammas)} vectors incl. both poles")
    assert ok


def test_criterion_8_residual_identity(report):
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for n in range(2, 11):
        for _ in range(100):
            v = rng.normal(size=3 * n)
            eps = perturbation_vectors(v / np.linalg.norm(v), n)
            cross = np.einsum("lia,ljb->ijab", eps, eps)
            cross[np.arange(n), np.arange(n)] = 0.0
            worst = max(worst, float(np.max(np.abs(cross))))
    ok = worst <= RESIDUAL_TOL
    report(8, ok, f"max |sum_l e_i e_j^T| over i != j = {worst:.2e} (tol {RESIDUAL_TOL:g}), N = 2..10")
    assert ok


def test_criterion_9_effective_hamiltonian(report):
    rng = np.random.default_rng(SEED + 9)
    worst = 0.0
    for k in range(100):
        n = 2 + k % 2
        source = random_zz_source(rng, n)
        rots = [SQGParams(rng.uniform(0, math.pi), a) for a in random_unit_vectors(rng, n)]
        u = kron_all([r.matrix() for r in rots])
        dense = pauli_components(n, u @ dense_oracle(source) @ u.conj().T)
        formula = effective_couplings(source, [rotation_to_gamma(r) for r in rots]).couplings
        worst = max(worst, max(abs(formula.get(key, 0.0) - c) for key, c in dense.items()))
    ok = worst <= EFFECTIVE_TOL
    report(9, ok, f"max coupling difference vs dense conjugation {worst:.2e} over 100 blocks, N = 2..3")
    assert ok


def test_criterion_10_compile_time(report):
    rng = np.random.default_rng(SEED + 10)
    problem, source = random_problem(rng, 50), random_zz_source(rng, 50)
    start = time.perf_counter()
    schedule, _, _ = compile_schedule(problem, source, 1.0)
    elapsed = time.perf_counter() - start
    ok = elapsed < COMPILE_LIMIT_S
    report(10, ok, f"N=50 compile took {elapsed:.1f} s for {len(schedule)} blocks (limit {COMPILE_LIMIT_S:g} s)")
    assert ok
