import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from scripts.errors import DimensionMismatch
from scripts.numkit import trace_distance
from scripts.obs import populations_exact, populations_from_shots
from scripts.oracle import evolve_liouville, liouville_matrix
from scripts.qsim import Mode, RegisterState, ShotMode, channel_superoperator
from scripts.splitj import (DilationUnitary, apply_step, build_step, dilation_unitary, evolve, full_j_channel,
                            lambda_max, plan_for_system, suggest_steps)
from scripts.tcmodel import TcSystem, initial_state, lindblad_terms


def unit_system(n=1, pump_amp=0.0, **changes):
    params = dict(n_emitters=n, omega_c=0.3, omega_e=(0.1,) * n, g=(0.4,) * n, kappa=0.5, gamma=0.2,
                  pump_amp=pump_amp)
    params.update(changes)
    return TcSystem(**params)


def resonant_system():
    return TcSystem(1, 245000.0, (245000.0,), (100.0,), 24.5, 0.4, frame_shift=245000.0)


class TestPlan:
    def test_order(self):
        with pytest.raises(ValueError):
            plan_for_system(unit_system(), 1.0, 10, order=3)

    def test_groups(self):
        plan = plan_for_system(unit_system(2, 0.1), 1.0, 10)
        assert len(plan.coherent_commuting) == 3
        assert len(plan.coherent_noncommuting) == 2
        assert len(plan.noncommuting_at(0.0)) == 3
        assert len(plan.dissipative) == 3
        assert plan.tau == pytest.approx(0.1)

    def test_lambda_max_resonant(self):
        plan = plan_for_system(resonant_system(), 0.25, 100)
        assert lambda_max(plan) == pytest.approx(math.sqrt(3) * 100.0)

    def test_suggest_steps(self):
        plan = plan_for_system(resonant_system(), 0.25, 100)
        # (K^2 + Q^2) lambda^2 t^2 / epsilon = 5 * 30000 * 0.0625 / 0.5
        assert suggest_steps(plan, 0.5) == 18750
        with pytest.raises(ValueError):
            suggest_steps(plan, 1.5)

    def test_build_step_bounds(self):
        plan = plan_for_system(unit_system(), 1.0, 4)
        with pytest.raises(IndexError):
            build_step(plan, 4)

    def test_first_order_gate_count(self):
        plan = plan_for_system(unit_system(1), 1.0, 4, order=1)
        assert len(build_step(plan, 0)) == 2 + 2 + 1

    def test_second_order_gate_count(self):
        gates = build_step(plan_for_system(unit_system(1), 1.0, 4), 0)
        # two dilations, then the palindrome 2 + 1 + 1 + 2
        assert [isinstance(gate, DilationUnitary) for gate in gates] == [True] * 2 + [False] * 6
        assert_allclose(gates[2].matrix, gates[7].matrix)
        assert_allclose(gates[4].matrix, gates[5].matrix)


class TestDilation:
    def test_channel_order_is_irrelevant(self):
        sys = unit_system(2, 0.1)
        gates = build_step(plan_for_system(sys, 0.01, 1), 0)
        dilations = [gate for gate in gates if isinstance(gate, DilationUnitary)]
        assert len(dilations) == 3
        coherent = gates[len(dilations):]
        state = evolve(sys, initial_state(sys, 1, (0,)), 0.3, 10)
        expected = apply_step(state, gates).dm
        for order in itertools.permutations(dilations):
            assert_allclose(apply_step(state, list(order) + coherent).dm, expected, atol=1e-10)

    def test_unitary(self):
        term = lindblad_terms(unit_system())[0]
        gate = dilation_unitary(term, 0.01, 3)
        assert gate.u.is_unitary()
        assert gate.u.qubits == (0, 1, 3)

    def test_channel_is_first_order_dissipator(self):
        sys = TcSystem(0, 0.0, (), (), 0.5, 0.0)
        tau = 1e-3
        gate = dilation_unitary(lindblad_terms(sys)[0], tau, 2)
        step = channel_superoperator(lambda s: apply_step(s, [gate]), 2).matrix
        generator = liouville_matrix(sys).matrix
        error = np.max(np.abs(step - (np.eye(16) + tau * generator)))
        assert error < 10 * tau ** 2

    def test_full_j_agrees_with_split_to_first_order(self):
        sys = unit_system(1)
        terms = lindblad_terms(sys)
        tau = 1e-3
        split = channel_superoperator(
            lambda s: apply_step(s, [dilation_unitary(term, tau, 3) for term in terms]), 3).matrix
        joint = channel_superoperator(lambda s: full_j_channel(s, terms, tau), 3).matrix
        assert np.max(np.abs(split - joint)) < 100 * tau ** 2


class TestEvolve:
    def test_one_step_matches_generator(self):
        sys = unit_system(1)
        tau = 1e-3
        gates = build_step(plan_for_system(sys, tau, 1), 0)
        step = channel_superoperator(lambda s: apply_step(s, gates), sys.num_qubits).matrix
        expected = np.eye(sys.dim ** 2) + tau * liouville_matrix(sys).matrix
        assert np.max(np.abs(step - expected)) <= 50 * tau ** 2

    def test_pure_decay(self):
        sys = TcSystem(0, 0.3, (), (), 0.5, 0.0)
        state = evolve(sys, initial_state(sys, 1), 1.0, 1000)
        assert populations_exact(state.dm, sys).cavity == pytest.approx(math.exp(-0.5), abs=1e-3)

    def test_zero_time(self):
        sys = unit_system()
        initial = initial_state(sys, 1)
        assert evolve(sys, initial, 0.0, 10) is initial

    def test_exact_mode_follows_master_equation(self):
        sys = unit_system(1, 0.2)
        initial = initial_state(sys, 1, (0,))
        state = evolve(sys, initial, 1.0, 200)
        assert state.check(1e-9) == []
        reference = populations_exact(evolve_liouville(sys, initial.dm, 1.0), sys)
        got = populations_exact(state.dm, sys)
        assert abs(got.cavity - reference.cavity) < 0.02
        assert abs(got.emitters[0] - reference.emitters[0]) < 0.02

    def test_shot_mode_is_seeded(self):
        sys = unit_system(1)
        initial = initial_state(sys, 1)
        first = evolve(sys, initial, 0.5, 20, ShotMode(200, 7))
        second = evolve(sys, initial, 0.5, 20, ShotMode(200, 7))
        assert len(first) == 200
        assert [r.bitstring for r in first] == [r.bitstring for r in second]
        assert all(len(r.bitstring) == sys.num_qubits for r in first)

    def test_shot_mode_agrees_with_exact(self):
        sys = unit_system(1)
        initial = initial_state(sys, 2)
        exact = populations_exact(evolve(sys, initial, 1.0, 50).dm, sys)
        records = evolve(sys, initial, 1.0, 50, ShotMode(2000, 3))
        sampled = populations_from_shots(records, sys)
        assert abs(sampled.cavity - exact.cavity) < 5 * sampled.cavity_stderr + 1e-3
        assert abs(sampled.emitters[0] - exact.emitters[0]) < 5 * sampled.emitter_stderr[0] + 1e-3

    def test_register_size(self):
        with pytest.raises(DimensionMismatch):
            evolve(unit_system(1), RegisterState.basis('00'), 1.0, 10)

    def test_exact_mode_result_type(self):
        sys = unit_system(1)
        assert evolve(sys, initial_state(sys, 1), 0.1, 5, Mode.EXACT).mode is Mode.EXACT


@pytest.mark.slow
class TestConvergence:
    def test_first_order_error_in_steps(self):
        sys = resonant_system()
        initial = initial_state(sys, 2)
        reference = evolve_liouville(sys, initial.dm, 0.05)
        steps = [25, 50, 100, 200, 400]
        errors = [trace_distance(evolve(sys, initial, 0.05, n).dm, reference) for n in steps]
        assert all(later < earlier for earlier, later in zip(errors, errors[1:]))
        slope = np.polyfit(np.log(steps), np.log(errors), 1)[0]
        assert -1.3 <= slope <= -0.7

    def test_resonant_decay_against_master_equation(self):
        sys = resonant_system()
        initial = initial_state(sys, 2)
        times = np.linspace(0.0, 0.25, 11)
        for t in times[1:]:
            state = evolve(sys, initial, float(t), 400)
            got = populations_exact(state.dm, sys)
            reference = populations_exact(evolve_liouville(sys, initial.dm, float(t)), sys)
            assert abs(got.cavity - reference.cavity) <= 0.05
            assert abs(got.emitters[0] - reference.emitters[0]) <= 0.05
