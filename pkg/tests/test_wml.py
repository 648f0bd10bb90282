import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scripts.errors import ConfigInvalid, EmptyEnsemble, UnsupportedCavitySize, UnsupportedQ, WrongMode
from scripts.numkit import (expm_general, gamma_vector, is_unitary, pauli_string, permute_qubits,
                           random_density_matrix, swap_matrix, trace_distance)
from scripts.obs import populations_exact, populations_from_shots
from scripts.oracle import evolve_liouville, liouville_matrix
from scripts.qsim import Mode, RegisterState, ShotMode, channel_superoperator, kraus_superoperator, make_rng
from scripts.tcmodel import TcSystem, hamiltonian, initial_state, lindblad_terms
from scripts.wml import (EXACT_KRAUS, HYBRID_J, PROTOCOL1, PROTOCOL2, FixedInteractionImpl, c_bound, evolve_wml,
                         fixed_interaction, fixed_interaction_matrix, four_unitary_grouping, grouped_unitaries,
                         pauli_decomposition_m, program_term_kraus, sample_step, sample_steps, steps_for_delta,
                         success_amplitude, swap_exponential, tc_program_ensemble, wml_step_superoperator)


def unit_system(n=1, pump_amp=0.0, **changes):
    params = dict(n_emitters=n, omega_c=0.3, omega_e=(0.1,) * n, g=(0.4,) * n, kappa=0.5, gamma=0.2,
                  pump_amp=pump_amp)
    params.update(changes)
    return TcSystem(**params)


def resonant_system():
    return TcSystem(1, 245000.0, (245000.0,), (100.0,), 24.5, 0.4, frame_shift=245000.0)


def apply_ops(ops, rho):
    return sum(k @ rho @ k.conj().T for k in ops)


def lindbladian_of(m):
    dim = m.shape[0]
    eye = np.eye(dim)
    mdag_m = m.conj().T @ m
    return np.kron(m.conj(), m) - 0.5 * np.kron(eye, mdag_m) - 0.5 * np.kron(mdag_m.T, eye)


class TestFixedInteractionMatrix:
    @pytest.mark.parametrize('q, count', [(1, 16), (2, 256)])
    def test_pauli_decomposition_reconstructs(self, q, count):
        terms = pauli_decomposition_m(q)
        assert len(terms) == count
        total = sum(c * pauli_string(label).matrix for c, label in terms)
        assert_allclose(total, fixed_interaction_matrix(q), atol=1e-12)

    def test_mdag_m_projects_a_and_c(self):
        m = fixed_interaction_matrix(1)
        gamma = gamma_vector(1)
        expected = permute_qubits(np.kron(np.outer(gamma, gamma), np.eye(2)), [0, 2, 1])
        assert_allclose(m.conj().T @ m, expected, atol=1e-12)

    def test_grouping_unitaries(self):
        grouping = four_unitary_grouping()
        assert len(grouping) == 4
        assert all(u.is_unitary() for u in grouping)

    def test_grouping_identities(self):
        m = fixed_interaction_matrix(1)
        ones = [u.matrix for u in four_unitary_grouping()]
        assert_allclose(sum(ones) / (2 * math.sqrt(2)), m, atol=1e-12)
        swap = np.kron(swap_matrix(1), np.eye(2))
        zeros = [swap @ u for u in ones]
        assert all(is_unitary(u) for u in zeros)
        assert_allclose(sum(zeros) / 2, m.conj().T @ m, atol=1e-12)

    @pytest.mark.parametrize('q', [1, 2])
    def test_grouped_sum(self, q):
        unitaries = grouped_unitaries(q)
        assert len(unitaries) == 4 ** q
        assert all(is_unitary(u) for u in unitaries)
        assert_allclose(sum(unitaries), (2 * math.sqrt(2)) ** q * fixed_interaction_matrix(q), atol=1e-12)

    def test_decomposition_rejects_q(self):
        with pytest.raises(UnsupportedQ):
            pauli_decomposition_m(0)


class TestSwapExponential:
    @pytest.mark.parametrize('sign', [1, -1])
    def test_matches_matrix_exponential(self, sign):
        u = swap_exponential(sign, 0.3, 2)
        assert u.qubits == (0, 1, 2, 3)
        assert_allclose(u.matrix, expm_general(-1j * sign * 0.3 * swap_matrix(2)), atol=1e-12)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            swap_exponential(1, -0.1)
        with pytest.raises(ValueError):
            swap_exponential(2, 0.1)


class TestRealizations:
    def test_validation(self):
        with pytest.raises(UnsupportedQ):
            FixedInteractionImpl(PROTOCOL1, 2)
        with pytest.raises(UnsupportedQ):
            FixedInteractionImpl(PROTOCOL2, 3)
        with pytest.raises(ConfigInvalid):
            FixedInteractionImpl('Protocol9', 1)
        assert FixedInteractionImpl(HYBRID_J, 2).num_qubits == 6

    def test_exact_kraus_trace_increase(self):
        delta = 0.05
        ops = FixedInteractionImpl(EXACT_KRAUS, 1).kraus(delta)
        m = fixed_interaction_matrix(1)
        mdag_m = m.conj().T @ m
        completeness = sum(k.conj().T @ k for k in ops)
        assert_allclose(completeness, np.eye(8) + delta ** 2 / 4 * mdag_m @ mdag_m, atol=1e-12)
        rng = np.random.default_rng(2)
        for _ in range(5):
            increase = np.trace(apply_ops(ops, random_density_matrix(8, rng))).real - 1.0
            assert -1e-12 <= increase <= delta ** 2 * 2 ** 2 / 4 + 1e-12

    def test_exact_kraus_is_first_order_exponential(self):
        delta = 0.01
        m = fixed_interaction_matrix(1)
        channel = kraus_superoperator(FixedInteractionImpl(EXACT_KRAUS, 1).kraus(delta)).matrix
        exact = expm_general(lindbladian_of(m), delta)
        assert np.max(np.abs(channel - exact)) <= 10 * delta ** 2

    def test_hybrid_is_trace_preserving(self):
        ops = FixedInteractionImpl(HYBRID_J, 1).kraus(0.03)
        assert_allclose(sum(k.conj().T @ k for k in ops), np.eye(8), atol=1e-12)
        assert FixedInteractionImpl(HYBRID_J).trace_preserving

    @pytest.mark.parametrize('delta', [0.01, 0.05, 0.1])
    @pytest.mark.parametrize('kind, q', [(PROTOCOL1, 1), (PROTOCOL2, 1), (HYBRID_J, 1), (PROTOCOL2, 2)])
    def test_channel_matches_exact_kraus(self, kind, q, delta):
        n = 3 * q
        realized = channel_superoperator(fixed_interaction(FixedInteractionImpl(kind, q), delta), n).matrix
        exact = channel_superoperator(fixed_interaction(FixedInteractionImpl(EXACT_KRAUS, q), delta), n).matrix
        assert np.max(np.abs(realized - exact)) <= 10 * delta ** 2

    @pytest.mark.parametrize('kind, q', [(PROTOCOL1, 1), (PROTOCOL2, 1), (PROTOCOL2, 2)])
    def test_protocol_branches_match_exact_kraus(self, kind, q):
        delta = 0.02
        dim = 2 ** (3 * q)
        rng = np.random.default_rng(q)
        rho = random_density_matrix(dim, rng)
        protocol = FixedInteractionImpl(kind, q).kraus(delta)
        exact = FixedInteractionImpl(EXACT_KRAUS, q).kraus(delta)
        assert_allclose(apply_ops(protocol, rho), apply_ops(exact, rho), atol=1e-10)

    def test_success_amplitude(self):
        assert success_amplitude(PROTOCOL1, 1, 0.0) == 1.0
        assert success_amplitude(PROTOCOL1, 1, 0.1) == pytest.approx(1 / math.sqrt(1.21 + 0.8))
        assert success_amplitude(PROTOCOL2, 2, 0.1) == pytest.approx(1 / math.sqrt(1.44 + 0.4))
        assert success_amplitude(HYBRID_J, 1, 0.1) == 1.0

    def test_exact_kraus_has_no_shot_mode(self):
        channel = fixed_interaction(FixedInteractionImpl(EXACT_KRAUS, 1), 0.01)
        with pytest.raises(WrongMode):
            channel(RegisterState.basis('000', Mode.SHOT))

    def test_protocol_shot_branches_keep_norm(self):
        channel = fixed_interaction(FixedInteractionImpl(PROTOCOL1, 1), 0.05, rng=make_rng(4))
        plus = np.ones(8, dtype=complex) / math.sqrt(8)
        out = channel(RegisterState.from_vector(plus, shots=20))
        assert_allclose(np.linalg.norm(out.vectors, axis=1), 1.0)
        assert len(out.ancilla_outcomes) == 1


class TestProgramEnsemble:
    def test_hamiltonian_reconstructed(self):
        sys = unit_system(2, 0.25, frame_shift=0.05)
        for t in (0.0, 0.37):
            ens = tc_program_ensemble(sys, t)
            assert_allclose(ens.hamiltonian(sys.num_qubits), hamiltonian(sys, t).matrix, atol=1e-12)

    def test_lindblad_programs_recover_operators(self):
        sys = unit_system(1)
        ens = tc_program_ensemble(sys)
        for program, term in zip(ens.lindblad_terms, lindblad_terms(sys)):
            assert_allclose(program.operator(), term.scaled.matrix, atol=1e-12)
            assert np.linalg.norm(program.vector) == pytest.approx(1.0)
            assert program.qubits == term.operator.qubits

    def test_resonant_weight(self):
        ens = tc_program_ensemble(resonant_system())
        expected = 2 * 100.0 * (1 + math.sqrt(2) + math.sqrt(3)) + 24.5 * 6 + 0.4
        assert ens.c == pytest.approx(expected)
        assert all(term.kind == 'interaction' for term in ens.hamiltonian_terms)
        assert ens.probabilities.sum() == pytest.approx(1.0)

    @pytest.mark.parametrize('sys', [unit_system(1), unit_system(2, 0.3), resonant_system(),
                                     unit_system(3, 0.1, frame_shift=0.2)])
    def test_weight_below_bound(self, sys):
        assert tc_program_ensemble(sys).c <= c_bound(sys) + 1e-9

    def test_cavity_size(self):
        with pytest.raises(UnsupportedCavitySize):
            tc_program_ensemble(unit_system(1, cavity_qubits=3))

    def test_sampling_frequencies(self):
        ens = tc_program_ensemble(unit_system(2, 0.3))
        draws = 100000
        counts = np.bincount(sample_steps(ens, make_rng(99), draws), minlength=len(ens.terms))
        p = ens.probabilities
        assert np.all(np.abs(counts / draws - p) <= 5 * np.sqrt(p * (1 - p) / draws) + 1e-12)

    def test_sample_step(self):
        ens = tc_program_ensemble(unit_system(1, 0.3))
        first = [sample_step(ens, make_rng(5)) for _ in range(3)]
        assert first == [int(sample_steps(ens, make_rng(5), 1)[0])] * 3
        rng = make_rng(6)
        draws = [sample_step(ens, rng) for _ in range(4000)]
        assert all(isinstance(index, int) and 0 <= index < len(ens.terms) for index in draws)
        counts = np.bincount(draws, minlength=len(ens.terms))
        p = ens.probabilities
        assert np.all(np.abs(counts / 4000 - p) <= 5 * np.sqrt(p * (1 - p) / 4000) + 1e-12)

    def test_empty_ensemble(self):
        sys = TcSystem(0, 0.3, (), (), 0.0, 0.0, frame_shift=0.3)
        ens = tc_program_ensemble(sys)
        with pytest.raises(EmptyEnsemble):
            sample_steps(ens, make_rng(0), 1)
        with pytest.raises(EmptyEnsemble):
            evolve_wml(sys, initial_state(sys, 1), 1.0, 10)

    def test_term_kraus_are_trace_preserving(self):
        ens = tc_program_ensemble(unit_system(1, 0.2))
        for term in ens.terms:
            ops = program_term_kraus(term, 0.05)
            dim = 2 ** len(term.qubits)
            assert_allclose(sum(k.conj().T @ k for k in ops), np.eye(dim), atol=1e-10)


class TestSteps:
    def test_steps_for_delta(self):
        assert steps_for_delta(10.0, 2.0, 5) == 5
        assert steps_for_delta(10.0, 2.0, 5, max_delta=0.1) == 200
        assert steps_for_delta(10.0, 2.0, 500, max_delta=0.1) == 500

    @pytest.mark.parametrize('kind', [HYBRID_J, EXACT_KRAUS])
    def test_step_matches_generator(self, kind):
        sys = unit_system(1)
        c = tc_program_ensemble(sys).c
        generator = liouville_matrix(sys).matrix
        errors = []
        for delta in (0.02, 0.01):
            tau = delta / c
            step = wml_step_superoperator(sys, kind, tau).matrix
            errors.append(np.max(np.abs(step - (np.eye(sys.dim ** 2) + tau * generator))))
            assert errors[-1] <= 20 * delta ** 2
        assert 3.0 <= errors[0] / errors[1] <= 5.0


class TestEvolveWml:
    def test_exact_mode_follows_master_equation(self):
        sys = unit_system(1)
        initial = initial_state(sys, 1)
        state = evolve_wml(sys, initial, 0.3, 10, max_delta=0.005)
        assert state.check(1e-9) == []
        reference = evolve_liouville(sys, initial.dm, 0.3)
        assert trace_distance(state.dm, reference) < 0.03

    def test_exact_kraus_renormalizes(self):
        sys = unit_system(1)
        state = evolve_wml(sys, initial_state(sys, 1), 0.2, 20, impl=EXACT_KRAUS)
        assert np.trace(state.dm).real == pytest.approx(1.0)

    def test_protocol1_needs_single_qubit_operators(self):
        sys = unit_system(1)
        with pytest.raises(UnsupportedQ):
            evolve_wml(sys, initial_state(sys, 1), 0.2, 20, impl=PROTOCOL1)

    def test_protocol1_on_emitters_only(self):
        sys = unit_system(1, kappa=0.0)
        state = evolve_wml(sys, initial_state(sys, 0, (0,)), 0.2, 20, impl=PROTOCOL1)
        reference = evolve_wml(sys, initial_state(sys, 0, (0,)), 0.2, 20, impl=EXACT_KRAUS)
        assert_allclose(state.dm, reference.dm, atol=1e-10)

    def test_exact_kraus_rejects_shots(self):
        sys = unit_system(1)
        with pytest.raises(WrongMode):
            evolve_wml(sys, initial_state(sys, 1), 0.2, 20, impl=EXACT_KRAUS, mode=ShotMode(10, 1))

    def test_unknown_impl(self):
        sys = unit_system(1)
        with pytest.raises(ConfigInvalid):
            evolve_wml(sys, initial_state(sys, 1), 0.2, 20, impl='Protocol3')

    def test_shot_mode_is_seeded(self):
        sys = unit_system(1)
        first = evolve_wml(sys, initial_state(sys, 1), 0.2, 30, mode=ShotMode(100, 5))
        second = evolve_wml(sys, initial_state(sys, 1), 0.2, 30, mode=ShotMode(100, 5))
        assert [r.bitstring for r in first] == [r.bitstring for r in second]
        assert all(len(r.bitstring) == sys.num_qubits for r in first)

    def test_shot_mode_agrees_with_exact(self):
        sys = unit_system(1)
        initial = initial_state(sys, 1)
        exact = populations_exact(evolve_wml(sys, initial, 0.2, 40).dm, sys)
        sampled = populations_from_shots(evolve_wml(sys, initial, 0.2, 40, mode=ShotMode(1500, 12)), sys)
        assert abs(sampled.cavity - exact.cavity) < 5 * sampled.cavity_stderr + 1e-3
        assert abs(sampled.emitters[0] - exact.emitters[0]) < 5 * sampled.emitter_stderr[0] + 1e-3

    def test_protocol2_shot_mode_runs(self):
        sys = unit_system(1)
        records = evolve_wml(sys, initial_state(sys, 1), 0.1, 10, impl=PROTOCOL2, mode=ShotMode(50, 3))
        assert len(records) == 50


@pytest.mark.slow
class TestConvergence:
    def test_error_shrinks_with_delta(self):
        sys = unit_system(1)
        initial = initial_state(sys, 1)
        reference = evolve_liouville(sys, initial.dm, 0.5)
        errors = [trace_distance(evolve_wml(sys, initial, 0.5, 1, max_delta=d).dm, reference)
                  for d in (0.04, 0.02, 0.01)]
        assert errors[2] < errors[1] < errors[0]

    def test_first_order_error_in_steps(self):
        sys = unit_system(1)
        initial = initial_state(sys, 1)
        reference = evolve_liouville(sys, initial.dm, 0.2)
        steps = [50, 100, 200, 400]
        errors = [trace_distance(evolve_wml(sys, initial, 0.2, n).dm, reference) for n in steps]
        assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
        slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert -1.3 <= slope <= -0.7
