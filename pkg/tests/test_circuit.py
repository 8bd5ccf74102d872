import itertools
import math

import numpy as np
import pytest
from conftest import (
    PAULI,
    dense_oracle,
    kron_all,
    pauli_string,
    random_problem,
    random_unit_vectors,
    random_zz_source,
)
from hypothesis import given, settings
from hypothesis import strategies as st

from daqc.circuit import (
    DigitalAnalogBlock,
    SQGParams,
    Schedule,
    assemble_schedule,
    compile_schedule,
    dumps_schedule,
    effective_couplings,
    exponent_sum,
    gamma_to_rotation,
    load_schedule,
    loads_schedule,
    rotation_to_gamma,
    save_schedule,
)
from daqc.decomposer import Decomposition, decompose, total_analog_time
from daqc.errors import HamiltonianFormatError, NonZZSource, NotUnit
from daqc.hamiltonian import CouplingRatioMatrix, TwoBodyHamiltonian, coupling_ratio_from_terms, gauge_fix_psd

ZZ = TwoBodyHamiltonian(2, {(0, 1, "z", "z"): 1.0})


def conjugated_gamma(params: SQGParams) -> np.ndarray:
    """Pauli components of ``R sigma^z R^dagger`` from the 2x2 matrices."""
    r = params.matrix()
    m = r @ PAULI[2] @ r.conj().T
    return np.array([np.trace(p @ m).real / 2 for p in PAULI])


def pauli_components(n, mat):
    """Two-body coefficients of a dense operator, by trace projection."""
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        for mu in range(3):
            for nu in range(3):
                c = np.trace(pauli_string(n, {i: mu, j: nu}) @ mat) / 2**n
                out[(i, j, mu, nu)] = c.real
    return out


class TestRotations:
    @pytest.mark.parametrize("axis", [(1, 0, 0), (0, 1, 0), (0.6, 0, 0.8)])
    def test_identity_angle(self, axis):
        np.testing.assert_allclose(rotation_to_gamma(SQGParams(0.0, axis)), [0, 0, 1], atol=1e-15)

    @pytest.mark.parametrize(
        "angle, axis, gamma",
        [(math.pi / 2, (0, 1, 0), (1, 0, 0)), (math.pi, (1, 0, 0), (0, 0, -1))],
    )
    def test_forward_examples(self, angle, axis, gamma):
        np.testing.assert_allclose(rotation_to_gamma(SQGParams(angle, axis)), gamma, atol=1e-15)

    @pytest.mark.parametrize(
        "gamma, angle, axis",
        [((0, 0, 1), 0.0, (1, 0, 0)), ((1, 0, 0), math.pi / 2, (0, 1, 0)), ((0, 0, -1), math.pi, (1, 0, 0))],
    )
    def test_inverse_examples(self, gamma, angle, axis):
        p = gamma_to_rotation(gamma)
        assert p.angle == pytest.approx(angle, abs=1e-15)
        np.testing.assert_allclose(p.axis, axis, atol=1e-15)

    def test_forward_matches_matrix_conjugation(self, rng):
        for _ in range(50):
            axis = random_unit_vectors(rng, 1)[0]
            p = SQGParams(rng.uniform(-2 * np.pi, 2 * np.pi), axis)
            np.testing.assert_allclose(rotation_to_gamma(p), conjugated_gamma(p), atol=1e-14)

    def test_round_trip_random(self, rng):
        for g in random_unit_vectors(rng, 500):
            np.testing.assert_allclose(rotation_to_gamma(gamma_to_rotation(g)), g, atol=1e-12)

    def test_emitted_gauge(self, rng):
        for g in random_unit_vectors(rng, 50):
            p = gamma_to_rotation(g)
            assert p.axis[2] == 0.0
            assert 0.0 <= p.angle <= math.pi

    def test_near_pole(self):
        g = np.array([1e-13, 0.0, -1.0])
        g /= np.linalg.norm(g)
        np.testing.assert_allclose(rotation_to_gamma(gamma_to_rotation(g)), g, atol=1e-12)

    def test_not_unit(self):
        with pytest.raises(NotUnit):
            gamma_to_rotation([1, 1, 0])
        with pytest.raises(NotUnit):
            SQGParams(0.1, (1, 1, 0))

    def test_matrix_is_unitary(self, rng):
        p = SQGParams(1.3, random_unit_vectors(rng, 1)[0])
        np.testing.assert_allclose(p.matrix() @ p.matrix().conj().T, np.eye(2), atol=1e-15)


class TestEffectiveCouplings:
    def test_identity(self, rng):
        source = random_zz_source(rng, 3)
        g = np.tile([0.0, 0.0, 1.0], (3, 1))
        assert effective_couplings(source, g) == source

    def test_xz_example(self):
        out = effective_couplings(TwoBodyHamiltonian(2, {(0, 1, "z", "z"): 0.7}), [[1, 0, 0], [0, 0, 1]])
        assert out == TwoBodyHamiltonian(2, {(0, 1, "x", "z"): 0.7})

    def test_non_zz_source(self):
        with pytest.raises(NonZZSource):
            effective_couplings(TwoBodyHamiltonian(2, {(0, 1, "x", "x"): 1.0}), np.zeros((2, 3)))

    @pytest.mark.parametrize("n", [2, 3])
    def test_dense_conjugation(self, rng, n):
        source = random_zz_source(rng, n)
        hs = dense_oracle(source)
        for _ in range(20):
            rots = [SQGParams(rng.uniform(0, np.pi), a) for a in random_unit_vectors(rng, n)]
            u = kron_all([r.matrix() for r in rots])
            dense = pauli_components(n, u @ hs @ u.conj().T)
            formula = effective_couplings(source, [rotation_to_gamma(r) for r in rots]).couplings
            for key, c in dense.items():
                assert abs(formula.get(key, 0.0) - c) <= 1e-12


class TestSchedule:
    def zz_decomposition(self):
        b = gauge_fix_psd(CouplingRatioMatrix(2, coupling_ratio_from_terms(2, [(0, 1, 2, 2, 1.0)])))
        return decompose(b)

    def test_empty(self):
        s = assemble_schedule(Decomposition.empty(2), ZZ, 1.0)
        assert len(s) == 0 and s.total_analog_time == 0.0

    def test_forty_blocks(self):
        d = self.zz_decomposition()
        s = assemble_schedule(d, ZZ, 1.0)
        assert len(s) == 40
        assert all(len(b.rotations) == 2 for b in s.blocks)
        assert abs(s.total_analog_time - total_analog_time(d)) <= 1e-12

    def test_source_must_be_zz(self):
        with pytest.raises(NonZZSource):
            assemble_schedule(self.zz_decomposition(), TwoBodyHamiltonian(2, {(0, 1, "x", "z"): 1.0}), 1.0)

    def test_block_validation(self):
        with pytest.raises(ValueError):
            DigitalAnalogBlock(0.0, (SQGParams(0.0),))
        with pytest.raises(ValueError):
            Schedule(2, ZZ, 1.0, (DigitalAnalogBlock(1.0, (SQGParams(0.0),)),))

    @pytest.mark.parametrize("n, t", [(2, 1.0), (3, 0.4), (4, 2.5)])
    def test_exponent_sum_equals_problem(self, rng, n, t):
        problem, source = random_problem(rng, n), random_zz_source(rng, n)
        schedule, _, _ = compile_schedule(problem, source, t)
        total = exponent_sum(schedule).to_matrix()
        np.testing.assert_allclose(total, t * problem.to_matrix(), atol=1e-9)

    def test_serialization_round_trip(self, rng, tmp_path):
        schedule, _, _ = compile_schedule(random_problem(rng, 3), random_zz_source(rng, 3), 0.7)
        path = tmp_path / "s.json"
        save_schedule(schedule, path)
        again = load_schedule(path)
        assert again == schedule
        assert dumps_schedule(again) == path.read_text()
        assert again.generator.startswith("daqc ")

    def test_floats_exact_after_round_trip(self, rng):
        schedule, _, _ = compile_schedule(random_problem(rng, 2), random_zz_source(rng, 2), 1.3)
        again = loads_schedule(dumps_schedule(schedule))
        for a, b in zip(schedule.blocks, again.blocks):
            assert a.analog_time == b.analog_time
            assert [r.angle for r in a.rotations] == [r.angle for r in b.rotations]

    @pytest.mark.parametrize(
        "text", ["not json", "{}", '{"n_qubits": 2, "sim_time": 1.0, "blocks": []}']
    )
    def test_malformed_schedule(self, text):
        with pytest.raises(HamiltonianFormatError):
            loads_schedule(text)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1, 1), st.floats(0, 2 * math.pi))
def test_round_trip_property(z, phi):
    r = math.sqrt(max(0.0, 1 - z * z))
    g = np.array([r * math.cos(phi), r * math.sin(phi), z])
    g /= np.linalg.norm(g)
    assert np.max(np.abs(rotation_to_gamma(gamma_to_rotation(g)) - g)) <= 1e-12
