'''Sampling-based Wave Matrix Lindbladization.

The generator of the open Tavis-Cummings model is encoded as an ensemble of program states.
Each step samples one term with probability proportional to its weight: a Hamiltonian term
is applied as a partial SWAP exponential against a copy of its state, a Lindblad term as the
fixed interaction map exp(M delta) against its program vector. The program register is
discarded after every step and delta = c t / n.

Register blocks of the fixed interaction are ordered A (system support), B, C (program).
'''

import dataclasses
import functools
import itertools
import math
import typing

import numpy as np

from scripts.errors import (ConfigInvalid, DimensionMismatch, EmptyEnsemble, UnsupportedCavitySize,
                            UnsupportedQ, WrongMode)
from scripts.ilapfuncs import logfunc
from scripts.numkit import (HADAMARD, PAULIS, Operator, apply_local, embed_matrix, gamma_vector,
                            pauli_string, permute_qubits, swap_matrix, unvec, vec)
from scripts.qsim import (Mode, RegisterState, ShotMode, append_qubits, apply_dilated_channel,
                          apply_kraus, apply_operator, channel_superoperator, kraus_superoperator,
                          make_rng, measure_all, measure_and_discard, to_shot_state)
from scripts.splitj import dilation_unitary
from scripts.tcmodel import EXCITED, LindbladTerm, lindblad_terms

EXACT_KRAUS = 'ExactKraus'
PROTOCOL1 = 'Protocol1'
PROTOCOL2 = 'Protocol2'
HYBRID_J = 'HybridJ'
IMPL_KINDS = (EXACT_KRAUS, PROTOCOL1, PROTOCOL2, HYBRID_J)

# coefficients of the six ladder program states, also used for the pump
LADDER_WEIGHTS = (1.0, -1.0, math.sqrt(2), -math.sqrt(2), math.sqrt(3), -math.sqrt(3))
# (lower ket, upper ket, qubit flipped by Z for the partner state)
INTERACTION_PAIRS = (('001', '010', 1), ('011', '100', 0), ('101', '110', 1))
PUMP_PAIRS = (('00', '01', 1), ('01', '10', 0), ('10', '11', 1))

PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)
PAULI_SIGN = {'I': 1, 'X': 1, 'Y': -1, 'Z': 1}

# four unitaries whose sum is 2 sqrt(2) M for one qubit factor;
# entries are (sign, A letter, B word, C letter), a B word is a matrix product
GROUPING = (
    ((1, 'X', 'X', 'I'), (-1, 'I', 'Y', 'Y'), (1, 'Z', 'Z', 'I'), (-1, 'Y', 'I', 'Y')),
    ((1, 'I', 'X', 'X'), (1, 'Y', 'XY', 'X'), (1, 'X', 'I', 'X'), (1, 'Z', 'XZ', 'X')),
    ((1, 'Y', 'ZY', 'Z'), (1, 'Z', 'I', 'Z'), (1, 'I', 'Z', 'Z'), (1, 'X', 'ZX', 'Z')),
    ((1, 'I', 'I', 'I'), (1, 'Y', 'Y', 'I'), (-1, 'X', 'YX', 'Y'), (-1, 'Z', 'YZ', 'Y')),
)


@dataclasses.dataclass(frozen=True, eq=False)
class HamiltonianProgram:
    '''Signed coefficient times a density matrix on the support qubits'''
    kind: str
    coefficient: float
    state: np.ndarray
    qubits: typing.Tuple[int, ...]

    @property
    def weight(self):
        return abs(self.coefficient)

    @property
    def sign(self):
        return 1 if self.coefficient > 0 else -1

    def components(self):
        '''Eigen-decomposition of the program state as (probability, vector) pairs'''
        eigvals, eigvecs = np.linalg.eigh(self.state)
        return [(float(w), eigvecs[:, i]) for i, w in enumerate(eigvals) if w > 1e-12]


@dataclasses.dataclass(frozen=True, eq=False)
class LindbladProgram:
    '''Unit program vector (L (x) I)|Gamma> / ||L||_2 on blocks B, C and its weight ||L||_2^2'''
    weight: float
    vector: np.ndarray
    qubits: typing.Tuple[int, ...]

    @classmethod
    def from_term(cls, term):
        l = term.scaled.matrix
        q = term.operator.num_qubits
        vector = np.kron(l, np.eye(l.shape[0])) @ gamma_vector(q)
        weight = float(np.vdot(vector, vector).real)
        return cls(weight, vector / math.sqrt(weight), term.operator.qubits)

    def operator(self):
        '''Recovers sqrt(rate) L from the program vector'''
        d = 2 ** len(self.qubits)
        return math.sqrt(self.weight) * self.vector.reshape(d, d)


@dataclasses.dataclass(frozen=True, eq=False)
class ProgramEnsemble:
    hamiltonian_terms: typing.Tuple[HamiltonianProgram, ...]
    lindblad_terms: typing.Tuple[LindbladProgram, ...]

    @property
    def terms(self):
        return self.hamiltonian_terms + self.lindblad_terms

    @property
    def weights(self):
        return np.array([term.weight for term in self.terms], dtype=float)

    @property
    def c(self):
        return float(np.sum(self.weights))

    @property
    def probabilities(self):
        return self.weights / self.c

    def hamiltonian(self, num_qubits):
        '''sum_j c_j sigma_j on the full register'''
        h = np.zeros((2 ** num_qubits,) * 2, dtype=complex)
        for term in self.hamiltonian_terms:
            h += term.coefficient * embed_matrix(term.state, term.qubits, num_qubits)
        return h


def _ket(bits):
    out = np.zeros(2 ** len(bits), dtype=complex)
    out[int(bits, 2)] = 1.0
    return out


def _ladder_states(pairs, phase):
    states = []
    for low, high, flip in pairs:
        plus = (_ket(low) + phase * _ket(high)) / math.sqrt(2)
        flip_word = ''.join('Z' if k == flip else 'I' for k in range(len(low)))
        states += [plus, pauli_string(flip_word).matrix @ plus]
    return states


def _append_term(terms, kind, coefficient, vector, qubits):
    if coefficient != 0:
        terms.append(HamiltonianProgram(kind, float(coefficient), np.outer(vector, vector.conj()), tuple(qubits)))


def tc_program_ensemble(sys, slice_time=0.0):
    if sys.cavity_qubits != 2:
        raise UnsupportedCavitySize(f'Program states exist for a 2-qubit cavity, got {sys.cavity_qubits}')
    cavity = sys.cavity_labels
    hamiltonian_terms = []
    for level, bits in enumerate(('01', '10', '11'), start=1):
        _append_term(hamiltonian_terms, 'cavity', level * (sys.omega_c - sys.frame_shift), _ket(bits), cavity)
    for j in range(sys.n_emitters):
        if sys.omega_e[j] != sys.frame_shift:
            hamiltonian_terms.append(HamiltonianProgram('emitter', sys.omega_e[j] - sys.frame_shift, EXCITED,
                                                        (sys.emitter_label(j),)))
    for j in range(sys.n_emitters):
        for weight, state in zip(LADDER_WEIGHTS, _ladder_states(INTERACTION_PAIRS, 1.0)):
            _append_term(hamiltonian_terms, 'interaction', sys.g[j] * weight, state,
                         cavity + (sys.emitter_label(j),))
    if sys.pump_amp:
        phase = np.conj(sys.pump_phase(slice_time))
        for weight, state in zip(LADDER_WEIGHTS, _ladder_states(PUMP_PAIRS, phase)):
            _append_term(hamiltonian_terms, 'pump', sys.pump_amp * weight, state, cavity)
    programs = tuple(LindbladProgram.from_term(term) for term in lindblad_terms(sys) if term.rate)
    return ProgramEnsemble(tuple(hamiltonian_terms), programs)


def c_bound(sys, R=None):
    '''Closed-form upper bound on the ensemble weight c for a cavity truncated at R excitations.

    The coupling term carries one copy of the interaction weight per emitter.
    '''
    R = sys.max_excitations if R is None else R
    n = sys.n_emitters
    emitter_freq = max((abs(w - sys.frame_shift) for w in sys.omega_e), default=0.0)
    coupling = max(sys.g, default=0.0)
    return ((sys.kappa + abs(sys.omega_c - sys.frame_shift)) * R * R
            + (sys.gamma + emitter_freq) * n
            + 2 * (n * coupling + sys.pump_amp) * R * math.sqrt(R))


def sample_step(ens, rng):
    '''Index into ens.terms drawn with probability weight / c'''
    return int(sample_steps(ens, rng, 1)[0])


def sample_steps(ens, rng, size):
    if not ens.terms or ens.c <= 0:
        raise EmptyEnsemble('Program ensemble has no terms with positive weight')
    return rng.choice(len(ens.terms), size=size, p=ens.probabilities)


def swap_exponential(sign, delta, q=1, qubits=None):
    '''exp(-i sign SWAP delta) between a q-qubit system block and a q-qubit program block'''
    if delta < 0:
        raise ValueError(f'delta must be non-negative, got {delta}')
    if sign not in (1, -1):
        raise ValueError(f'sign must be +1 or -1, got {sign}')
    swap = swap_matrix(q)
    u = math.cos(delta) * np.eye(swap.shape[0]) - 1j * sign * math.sin(delta) * swap
    return Operator(u, tuple(range(2 * q)) if qubits is None else tuple(qubits))


def fixed_interaction_matrix(q=1):
    '''M = (I_A (x) |Gamma><Gamma|_BC)(SWAP_AB (x) I_C) / sqrt(2**q)'''
    d = 2 ** q
    gamma = gamma_vector(q)
    projector = np.kron(np.eye(d), np.outer(gamma, gamma))
    return projector @ np.kron(swap_matrix(q), np.eye(d)) / math.sqrt(d)


def _pauli_product(left, right):
    product = PAULIS[left] @ PAULIS[right]
    for letter, matrix in PAULIS.items():
        overlap = np.trace(matrix.conj().T @ product) / 2
        if abs(overlap) > 0.5:
            return complex(overlap), letter
    raise ValueError(f'{left}{right} is not a Pauli product')


def _factor_terms():
    out = []
    for p in 'IXYZ':
        for q in 'IXYZ':
            phase, letter = _pauli_product(p, q)
            out.append((PAULI_SIGN[p] * phase / (4 * math.sqrt(2)), q, letter, p))
    return out


def pauli_decomposition_m(q=1):
    '''Pauli expansion of M; labels run over blocks A1..Aq B1..Bq C1..Cq'''
    if q < 1:
        raise UnsupportedQ(f'q must be at least 1, got {q}')
    terms = []
    for combo in itertools.product(_factor_terms(), repeat=q):
        coefficient = complex(np.prod([factor[0] for factor in combo]))
        label = ''.join(''.join(factor[k] for factor in combo) for k in (1, 2, 3))
        terms.append((coefficient, label))
    return terms


def _word(letters):
    matrix = np.eye(2, dtype=complex)
    for letter in letters:
        matrix = matrix @ PAULIS[letter]
    return matrix


def four_unitary_grouping():
    out = []
    for group in GROUPING:
        u = sum(sign * np.kron(np.kron(PAULIS[a], _word(b)), PAULIS[c]) for sign, a, b, c in group) / 2
        out.append(Operator(u, (0, 1, 2)))
    return out


@functools.lru_cache(maxsize=4)
def grouped_unitaries(q=1):
    '''The 4**q products of single-factor groupings, reordered to block layout'''
    base = [u.matrix for u in four_unitary_grouping()]
    order = [3 * k for k in range(q)] + [3 * k + 1 for k in range(q)] + [3 * k + 2 for k in range(q)]
    out = []
    for combo in itertools.product(base, repeat=q):
        product = functools.reduce(np.kron, combo)
        out.append(permute_qubits(product, order))
    return tuple(out)


def _preparation(a, b):
    '''Real rotation taking |0> to (a|0> + b|1>) / norm'''
    norm = math.hypot(a, b)
    return np.array([[a, -b], [b, a]], dtype=complex) / norm


def _bit_controls(labels, value):
    bits = format(value, f'0{len(labels)}b')
    return {label: int(bit) for label, bit in zip(labels, bits)}


def _apply_controlled(vectors, matrix, controls, targets, num_qubits):
    '''Applies matrix on targets to the component where every control qubit holds its bit'''
    rows = vectors.shape[0]
    psi = vectors.reshape((rows,) + (2,) * num_qubits).copy()
    index = [slice(None)] * (num_qubits + 1)
    for qubit, bit in controls.items():
        index[qubit + 1] = bit
    index = tuple(index)
    block = psi[index]
    free = [q for q in range(num_qubits) if q not in controls]
    local_targets = [free.index(t) for t in targets]
    flat = block.reshape(rows, -1)
    psi[index] = apply_local(flat, matrix, local_targets, len(free)).reshape(block.shape)
    return psi.reshape(vectors.shape)


def _circuit_kraus(num_system, num_ancillas, gates, bras):
    '''Runs the circuit on every system basis input with ancillas in |0...0>.

    Ancillas listed in bras are projected; the single remaining ancilla labels the branch.
    Returns the branch operators K_b.
    '''
    n = num_system + num_ancillas
    rows = 2 ** num_system
    psi = np.zeros((rows, 2 ** n), dtype=complex)
    psi[np.arange(rows), np.arange(rows) * 2 ** num_ancillas] = 1.0
    for matrix, targets, controls in gates:
        if controls:
            psi = _apply_controlled(psi, matrix, controls, targets, n)
        else:
            psi = apply_local(psi, matrix, targets, n)
    tensor = psi.reshape((rows, rows) + (2,) * num_ancillas)
    for label in sorted(bras, reverse=True):
        tensor = np.tensordot(tensor, np.conj(bras[label]), axes=([2 + label - num_system], [0]))
    return [tensor[:, :, b].T.copy() for b in range(2)]


def _protocol1_kraus(delta):
    a1, a2, a3, a4, a5, a6 = range(3, 9)
    xx = np.kron(PAULIS['X'], PAULIS['X'])
    zz = np.kron(PAULIS['Z'], PAULIS['Z'])
    root = math.sqrt(delta)
    gates = [(HADAMARD, (k,), None) for k in (a1, a2, a3, a4)]
    gates += [
        (_preparation(1.0, -root), (a5,), None),
        (_preparation(1.0 + delta, 2 * math.sqrt(2 * delta)), (a6,), None),
        (PAULIS['Z'], (a3,), {a4: 1, a6: 1}),
        (xx, (0, 1), {a4: 1, a6: 1}),
        (zz, (0, 1), {a3: 1, a6: 1}),
        (xx, (1, 2), {a2: 1, a6: 1}),
        (zz, (1, 2), {a1: 1, a6: 1}),
        (xx, (0, 2), {a4: 1, a5: 1, a6: 0}),
        (zz, (0, 2), {a3: 1, a5: 1, a6: 0}),
        (PAULIS['Z'], (a5,), {a6: 1}),
    ]
    bras = {k: PLUS for k in (a1, a2, a3, a4)}
    bras[a5] = np.array([1.0, root], dtype=complex) / math.sqrt(1 + delta)
    return _circuit_kraus(3, 6, gates, bras)


def _protocol2_kraus(q, delta):
    r = math.sqrt(delta * 2 ** (q - 1))
    ratio = math.sqrt(delta) * 2 ** (q / 2) / (1 + r * r)
    system = tuple(range(3 * q))
    index = tuple(range(3 * q, 5 * q))
    flag, branch = 5 * q, 5 * q + 1
    swap = np.kron(swap_matrix(q), np.eye(2 ** q))
    gates = [(HADAMARD, (k,), None) for k in index]
    gates.append((_preparation(1.0, -r), (flag,), None))
    gates.append((_preparation(1.0, ratio), (branch,), None))
    for i, u in enumerate(grouped_unitaries(q)):
        gates.append((u, system, {**_bit_controls(index, i), branch: 1}))
    for i, u in enumerate(grouped_unitaries(q)):
        gates.append((swap @ u, system, {**_bit_controls(index, i), flag: 1, branch: 0}))
    gates.append((PAULIS['Z'], (flag,), {branch: 1}))
    bras = {k: PLUS for k in index}
    bras[flag] = np.array([1.0, r], dtype=complex) / math.sqrt(1 + r * r)
    return _circuit_kraus(3 * q, 2 * q + 2, gates, bras)


def success_amplitude(kind, q, delta):
    '''Scalar by which a protocol's heralded branch operators undershoot A_0, A_1'''
    if kind == PROTOCOL1:
        return 1.0 / math.sqrt((1 + delta) ** 2 + 8 * delta)
    if kind == PROTOCOL2:
        return 1.0 / math.sqrt((1 + delta * 2 ** (q - 1)) ** 2 + 2 ** q * delta)
    return 1.0


@functools.lru_cache(maxsize=64)
def _hybrid_unitary(q, delta):
    m = Operator(fixed_interaction_matrix(q), tuple(range(3 * q)))
    return dilation_unitary(LindbladTerm(m, 1.0), delta, 3 * q).u.matrix


@functools.lru_cache(maxsize=256)
def _branch_kraus(kind, q, delta):
    if kind == PROTOCOL1:
        return tuple(_protocol1_kraus(delta))
    if kind == PROTOCOL2:
        return tuple(_protocol2_kraus(q, delta))
    if kind == HYBRID_J:
        d = 2 ** (3 * q)
        u = _hybrid_unitary(q, delta).reshape(d, 2, d, 2)
        return u[:, 0, :, 0].copy(), u[:, 1, :, 0].copy()
    m = fixed_interaction_matrix(q)
    return np.eye(m.shape[0]) - 0.5 * delta * (m.conj().T @ m), math.sqrt(delta) * m


@dataclasses.dataclass(frozen=True)
class FixedInteractionImpl:
    kind: str = HYBRID_J
    q: int = 1

    def __post_init__(self):
        if self.kind not in IMPL_KINDS:
            raise ConfigInvalid(f'Unknown fixed-interaction realization {self.kind!r}')
        if self.q < 1:
            raise UnsupportedQ(f'q must be at least 1, got {self.q}')
        if self.kind == PROTOCOL1 and self.q != 1:
            raise UnsupportedQ('Protocol1 acts on single-qubit Lindblad operators only')
        if self.kind == PROTOCOL2 and self.q not in (1, 2):
            raise UnsupportedQ(f'Protocol2 supports q in (1, 2), got {self.q}')

    @property
    def num_qubits(self):
        return 3 * self.q

    @property
    def trace_preserving(self):
        return self.kind == HYBRID_J

    def circuit_kraus(self, delta):
        '''Branch operators as realized, before rescaling by the success amplitude'''
        if delta < 0:
            raise ValueError(f'delta must be non-negative, got {delta}')
        return list(_branch_kraus(self.kind, self.q, float(delta)))

    def kraus(self, delta):
        scale = success_amplitude(self.kind, self.q, delta)
        return [k / scale for k in self.circuit_kraus(delta)]


def fixed_interaction(impl, delta, qubits=None, rng=None):
    '''Channel realizing exp(M delta) on the register qubits labelled A, B, C'''
    qubits = tuple(range(impl.num_qubits)) if qubits is None else tuple(qubits)
    if len(qubits) != impl.num_qubits:
        raise DimensionMismatch(f'{impl.kind} with q={impl.q} acts on {impl.num_qubits} qubits, got {qubits}')

    def channel(state):
        if impl.kind == EXACT_KRAUS and state.mode is Mode.SHOT:
            raise WrongMode('ExactKraus has no shot-mode realization')
        if impl.kind == HYBRID_J:
            u = Operator(_hybrid_unitary(impl.q, float(delta)), qubits + (state.num_qubits,))
            return apply_dilated_channel(state, u, 1, rng)
        ops = impl.kraus(delta) if state.mode is Mode.EXACT else impl.circuit_kraus(delta)
        return apply_kraus(state, ops, qubits, rng)

    return channel


def program_term_kraus(term, delta, kind=HYBRID_J):
    '''Kraus operators on term.qubits for one step of a single term, program register traced out'''
    if isinstance(term, HamiltonianProgram):
        d = 2 ** len(term.qubits)
        v = swap_exponential(term.sign, delta, len(term.qubits)).matrix.reshape(d, d, d, d)
        out = []
        for weight, phi in term.components():
            block = np.tensordot(v, phi, axes=([3], [0]))
            out += [math.sqrt(weight) * block[:, b, :] for b in range(d)]
        return out
    q = len(term.qubits)
    d = 2 ** q
    out = []
    for f in FixedInteractionImpl(kind, q).kraus(delta):
        block = np.tensordot(f.reshape(d, d * d, d, d * d), term.vector, axes=([3], [0]))
        out += [block[:, b, :] for b in range(d * d)]
    return out


def apply_program_term(state, term, delta, kind=HYBRID_J, rng=None):
    '''Appends the term's program register, applies the step interaction and discards the program'''
    n = state.num_qubits
    if isinstance(term, HamiltonianProgram):
        k = len(term.qubits)
        if state.mode is Mode.EXACT:
            program = term.state
        else:
            components = term.components()
            vectors = np.stack([phi for _, phi in components])
            picks = rng.choice(len(components), size=state.shots, p=[w for w, _ in components])
            program = vectors[picks]
        extended = append_qubits(state, program)
        v = swap_exponential(term.sign, delta, k, term.qubits + tuple(range(n, n + k)))
        extended = apply_operator(extended, v.matrix, v.qubits)
        return measure_and_discard(extended, k, rng)
    q = len(term.qubits)
    program = term.vector if state.mode is Mode.SHOT else np.outer(term.vector, term.vector.conj())
    extended = append_qubits(state, program)
    channel = fixed_interaction(FixedInteractionImpl(kind, q), delta, term.qubits + tuple(range(n, n + 2 * q)), rng)
    return measure_and_discard(channel(extended), 2 * q, rng)


def _step_blocks(ens, delta, kind, num_qubits):
    '''Probability-weighted local superoperators of every term, with the labels they act on in vec space'''
    blocks = []
    for term, p in zip(ens.terms, ens.probabilities):
        superop = kraus_superoperator(program_term_kraus(term, delta, kind)).matrix
        labels = list(term.qubits) + [num_qubits + q for q in term.qubits]
        blocks.append((labels, p * superop))
    return blocks


def _averaged_step(rho, num_qubits, blocks):
    v = vec(rho)
    out = np.zeros_like(v)
    for labels, superop in blocks:
        out += apply_local(v, superop, labels, 2 * num_qubits)
    return unvec(out, 2 ** num_qubits)


def wml_step_superoperator(sys, kind, tau, slice_time=0.0):
    '''Superoperator of one averaged step of length tau'''
    ens = tc_program_ensemble(sys, slice_time)
    blocks = _step_blocks(ens, ens.c * tau, kind, sys.num_qubits)
    return channel_superoperator(lambda state: state.replace(_averaged_step(state.data, sys.num_qubits, blocks)),
                                 sys.num_qubits)


def steps_for_delta(c, t, n, max_delta=None):
    '''Step count, raised when needed so that c t / n does not exceed max_delta'''
    n = max(int(n), 1)
    if max_delta:
        n = max(n, math.ceil(c * t / max_delta - 1e-9))
    return n


def log_wml_plan(sys, t, n, max_delta=None, kind=HYBRID_J):
    ens = tc_program_ensemble(sys)
    steps = steps_for_delta(ens.c, t, n, max_delta)
    logfunc(f'WML ({kind}): {len(ens.terms)} program terms, c = {ens.c:.4g} GHz '
            f'(bound {c_bound(sys):.4g}), n = {steps}, delta = {ens.c * t / steps:.3g}')
    return steps


def evolve_wml(sys, initial, t, n, impl=HYBRID_J, mode=Mode.EXACT, t0=0.0, max_delta=None):
    '''Exact mode applies the averaged step channel n times and returns the RegisterState;
    ShotMode samples one term per shot and step and returns one ShotRecord per shot'''
    kind = impl.kind if isinstance(impl, FixedInteractionImpl) else impl
    if kind not in IMPL_KINDS:
        raise ConfigInvalid(f'Unknown fixed-interaction realization {kind!r}')
    if initial.num_qubits != sys.num_qubits:
        raise DimensionMismatch(f'Initial state has {initial.num_qubits} qubits, system needs {sys.num_qubits}')
    shot = isinstance(mode, ShotMode)
    if shot and kind == EXACT_KRAUS:
        raise WrongMode('ExactKraus has no shot-mode realization')
    num_qubits = sys.num_qubits
    rng = make_rng(mode.seed) if shot else None
    state = to_shot_state(initial, mode.shots) if shot else initial
    if t > 0:
        ens = tc_program_ensemble(sys, t0)
        if not ens.terms:
            raise EmptyEnsemble('The system has no Hamiltonian or Lindblad terms to sample')
        for term in ens.lindblad_terms:
            FixedInteractionImpl(kind, len(term.qubits))
        n = steps_for_delta(ens.c, t, n, max_delta)
        tau = t / n
        delta = ens.c * tau
        static = sys.is_static()
        if shot:
            state = _evolve_shots(sys, state, ens, n, tau, delta, kind, t0, static, rng)
        else:
            blocks = _step_blocks(ens, delta, kind, num_qubits) if static else None
            rho = state.dm
            for s in range(n):
                step = blocks if static else _step_blocks(tc_program_ensemble(sys, t0 + (s + 0.5) * tau),
                                                          delta, kind, num_qubits)
                rho = _averaged_step(rho, num_qubits, step)
                if kind != HYBRID_J:
                    rho = rho / np.trace(rho).real
            state = state.replace(0.5 * (rho + rho.conj().T))
    if shot:
        return measure_all(state, rng, mode.seed)
    return state


def _evolve_shots(sys, state, ens, n, tau, delta, kind, t0, static, rng):
    num_qubits = sys.num_qubits
    for s in range(n):
        if not static:
            ens = tc_program_ensemble(sys, t0 + (s + 0.5) * tau)
        choice = sample_steps(ens, rng, state.shots)
        vectors = state.data.copy()
        for index in np.unique(choice):
            rows = np.flatnonzero(choice == index)
            group = RegisterState(Mode.SHOT, num_qubits, vectors[rows])
            vectors[rows] = apply_program_term(group, ens.terms[index], delta, kind, rng).data
        state = RegisterState(Mode.SHOT, num_qubits, vectors)
    return state
