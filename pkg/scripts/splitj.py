'''Split J-Matrix evolution.

Each slice of length tau applies one dilation exp(-i J_L sqrt(tau)) per Lindblad operator,
each on a fresh ancilla, followed by the Trotterized coherent part. The rate is folded into
the dilated operator as sqrt(rate) L.
'''

import dataclasses
import math
import typing

import numpy as np

from scripts.errors import DimensionMismatch
from scripts.ilapfuncs import logfunc
from scripts.numkit import Operator, embed_matrix, expm_hermitian, schatten_norm
from scripts.qsim import (Mode, ShotMode, apply_dilated_channel, apply_unitary, make_rng,
                          measure_all, to_shot_state)
from scripts.tcmodel import hamiltonian_terms, lindblad_terms

KET0_BRA1 = np.array([[0, 1], [0, 0]], dtype=complex)
KET1_BRA0 = KET0_BRA1.T.copy()


@dataclasses.dataclass(frozen=True, eq=False)
class SplitJPlan:
    n_steps: int
    total_time: float
    num_qubits: int
    coherent_commuting: typing.Tuple[Operator, ...]
    coherent_noncommuting: typing.Tuple[Operator, ...]
    dissipative: tuple
    trotter_order: int = 2
    start_time: float = 0.0
    # time-dependent member of the non-commuting group, evaluated per slice
    drive: typing.Optional[typing.Callable[[float], Operator]] = None

    @property
    def tau(self):
        return self.total_time / self.n_steps

    def noncommuting_at(self, t):
        ops = list(self.coherent_noncommuting)
        if self.drive is not None:
            ops.append(self.drive(t))
        return ops


@dataclasses.dataclass(frozen=True, eq=False)
class DilationUnitary:
    u: Operator
    source: object
    sqrt_tau: float


def plan_for_system(sys, t, n, order=2, t0=0.0):
    if order not in (1, 2):
        raise ValueError(f'Trotter order must be 1 or 2, got {order}')
    terms = hamiltonian_terms(sys, t0)
    commuting = tuple(term.operator for term in terms if term.kind in ('cavity', 'emitter'))
    noncommuting = tuple(term.operator for term in terms if term.kind == 'interaction')
    drive = None
    if sys.pump_amp:
        def drive(time):
            return [term.operator for term in hamiltonian_terms(sys, time) if term.kind == 'pump'][0]
    return SplitJPlan(max(int(n), 1), t, sys.num_qubits, commuting, noncommuting,
                      tuple(lindblad_terms(sys)), order, t0, drive)


def lambda_max(plan):
    norms = [schatten_norm(h.matrix, np.inf) for h in plan.coherent_commuting]
    norms += [schatten_norm(h.matrix, np.inf) for h in plan.noncommuting_at(plan.start_time)]
    norms += [term.rate * schatten_norm(term.operator.matrix, np.inf) ** 2 for term in plan.dissipative]
    return max(norms, default=0.0)


def suggest_steps(plan, epsilon):
    '''Advisory step count ceil((K^2 + Q^2) lambda_max^2 t^2 / epsilon), at least 1'''
    if not 0 < epsilon < 1:
        raise ValueError(f'epsilon must lie in (0, 1), got {epsilon}')
    k = len(plan.dissipative)
    q = len(plan.noncommuting_at(plan.start_time))
    value = (k * k + q * q) * lambda_max(plan) ** 2 * plan.total_time ** 2 / epsilon
    return max(1, math.ceil(value - 1e-9))


def dilation_unitary(term, tau, ancilla):
    '''exp(-i J sqrt(tau)) with J = L^dagger (x) |0><1| + L (x) |1><0| and L = sqrt(rate) L_k'''
    l = np.sqrt(term.rate) * term.operator.matrix
    j = np.kron(l.conj().T, KET0_BRA1) + np.kron(l, KET1_BRA0)
    sqrt_tau = math.sqrt(tau)
    u = expm_hermitian(Operator(j, term.operator.qubits + (ancilla,)), sqrt_tau)
    return DilationUnitary(u, term, sqrt_tau)


def build_step(plan, slice_index, ancilla=None):
    if not 0 <= slice_index < plan.n_steps:
        raise IndexError(f'Slice {slice_index} outside 0..{plan.n_steps - 1}')
    tau = plan.tau
    ancilla = plan.num_qubits if ancilla is None else ancilla
    midpoint = plan.start_time + (slice_index + 0.5) * tau
    gates = [dilation_unitary(term, tau, ancilla) for term in plan.dissipative]
    noncommuting = plan.noncommuting_at(midpoint)
    if plan.trotter_order == 1:
        gates += [expm_hermitian(h, tau) for h in plan.coherent_commuting]
        gates += [expm_hermitian(h, tau) for h in noncommuting]
        return gates
    half = [expm_hermitian(h, tau / 2) for h in plan.coherent_commuting]
    inner = [expm_hermitian(h, tau / 2) for h in noncommuting]
    return gates + half + inner + inner[::-1] + half[::-1]


def apply_step(state, gates, rng=None):
    for gate in gates:
        if isinstance(gate, DilationUnitary):
            state = apply_dilated_channel(state, gate.u, 1, rng)
        else:
            state = apply_unitary(state, gate)
    return state


def evolve(sys, initial, t, n, mode=Mode.EXACT, order=2, t0=0.0):
    '''Exact mode returns the final RegisterState; ShotMode returns one ShotRecord per shot'''
    if initial.num_qubits != sys.num_qubits:
        raise DimensionMismatch(f'Initial state has {initial.num_qubits} qubits, system needs {sys.num_qubits}')
    rng = None
    state = initial
    if isinstance(mode, ShotMode):
        rng = make_rng(mode.seed)
        state = to_shot_state(initial, mode.shots)
    if t > 0:
        plan = plan_for_system(sys, t, n, order, t0)
        static_gates = build_step(plan, 0) if plan.drive is None else None
        for s in range(plan.n_steps):
            state = apply_step(state, static_gates or build_step(plan, s), rng)
    if isinstance(mode, ShotMode):
        return measure_all(state, rng, mode.seed)
    return state


def log_step_advice(sys, t, n, epsilon=0.05, order=2):
    plan = plan_for_system(sys, t, n, order)
    advised = suggest_steps(plan, epsilon)
    logfunc(f'Split J-Matrix: lambda_max = {lambda_max(plan):.4g} GHz, advisory n = {advised} '
            f'(epsilon {epsilon}), configured n = {n}')
    return advised


def full_j_unitary(terms, tau, num_qubits):
    '''Un-split dilation of all Lindblad operators at once on ceil(log2(K+1)) ancillas.

    Ancilla value 0 is the no-jump block; value k holds sqrt(rate_k) L_k. The ancillas are the
    trailing qubits num_qubits .. num_qubits + a - 1.
    '''
    count = len(terms)
    ancillas = max(1, math.ceil(math.log2(count + 1)))
    blocks = 2 ** ancillas
    j = np.zeros((2 ** num_qubits * blocks,) * 2, dtype=complex)
    for k, term in enumerate(terms, start=1):
        l = np.sqrt(term.rate) * embed_matrix(term.operator.matrix, term.operator.qubits, num_qubits)
        up = np.zeros((blocks, blocks), dtype=complex)
        up[0, k] = 1.0
        j += np.kron(l.conj().T, up) + np.kron(l, up.T)
    u = expm_hermitian(j, math.sqrt(tau))
    return Operator(u, tuple(range(num_qubits + ancillas))), ancillas


def full_j_channel(state, terms, tau, rng=None):
    u, ancillas = full_j_unitary(terms, tau, state.num_qubits)
    return apply_dilated_channel(state, u, ancillas, rng)
