'''Qubit register simulator.

Shot mode keeps a batch of statevectors, one row per shot, and realizes mid-circuit
measurement per row. Exact mode keeps a density matrix and applies channels directly.
'''

import dataclasses
import enum
import typing

import numpy as np

from scripts.errors import (AncillaBudgetExceeded, DimensionMismatch, LabelOutOfRange,
                            NotUnitary, WrongMode)
from scripts.numkit import (MAX_DENSITY_QUBITS, MAX_STATEVECTOR_QUBITS, Operator, Superoperator,
                            apply_local, conjugate_local, is_hermitian, is_unitary, partial_trace)

UNITARY_TOL = 1e-9
RandomSource = np.random.Generator


def make_rng(seed):
    return np.random.default_rng(np.random.SeedSequence(seed))


def split_rng(seed, count):
    '''Independent generators derived deterministically from one master seed'''
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def split_seeds(seed, count):
    '''Integer seeds for count independent runs, one per spawned child sequence'''
    return [int(child.generate_state(1, np.uint64)[0]) for child in np.random.SeedSequence(seed).spawn(count)]


class Mode(enum.Enum):
    SHOT = 'shot'
    EXACT = 'exact'


@dataclasses.dataclass(frozen=True)
class ShotMode:
    '''Run request for shot-mode evolution'''
    shots: int
    seed: int


@dataclasses.dataclass(frozen=True)
class ShotRecord:
    bitstring: str
    seed: typing.Optional[int] = None
    ancilla_outcomes: typing.Tuple[int, ...] = ()


@dataclasses.dataclass(frozen=True, eq=False)
class RegisterState:
    '''State of an ordered qubit register.

    Shot mode: data has shape (shots, 2**n) and each row is a normalized statevector.
    Exact mode: data is the 2**n x 2**n density matrix.
    '''
    mode: Mode
    num_qubits: int
    data: np.ndarray
    ancilla_outcomes: typing.Tuple[np.ndarray, ...] = ()

    @classmethod
    def basis(cls, bits, mode=Mode.EXACT, shots=1):
        index = int(bits, 2) if bits else 0
        dim = 2 ** len(bits)
        if mode is Mode.EXACT:
            rho = np.zeros((dim, dim), dtype=complex)
            rho[index, index] = 1.0
            return cls(mode, len(bits), rho)
        vectors = np.zeros((shots, dim), dtype=complex)
        vectors[:, index] = 1.0
        return cls(mode, len(bits), vectors)

    @classmethod
    def from_vector(cls, vector, shots=1):
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        n = int(round(np.log2(vector.size)))
        return cls(Mode.SHOT, n, np.tile(vector, (shots, 1)))

    @classmethod
    def from_density_matrix(cls, rho):
        rho = np.asarray(rho, dtype=complex)
        return cls(Mode.EXACT, int(round(np.log2(rho.shape[0]))), rho)

    @property
    def dim(self):
        return 2 ** self.num_qubits

    @property
    def shots(self):
        return self.data.shape[0] if self.mode is Mode.SHOT else None

    @property
    def dm(self):
        if self.mode is not Mode.EXACT:
            raise WrongMode('Density matrix requested from a shot-mode register')
        return self.data

    @property
    def vectors(self):
        if self.mode is not Mode.SHOT:
            raise WrongMode('Statevectors requested from an exact-mode register')
        return self.data

    def replace(self, data, num_qubits=None, outcomes=None):
        return RegisterState(self.mode, self.num_qubits if num_qubits is None else num_qubits, data,
                             self.ancilla_outcomes if outcomes is None else outcomes)

    def with_shots(self, shots):
        '''Tiles a single-row shot state to the requested number of rows'''
        if self.mode is not Mode.SHOT or self.shots == shots:
            return self
        if self.shots != 1:
            raise DimensionMismatch(f'Cannot retile {self.shots} shots to {shots}')
        return self.replace(np.tile(self.data, (shots, 1)))

    def empirical_density_matrix(self):
        if self.mode is Mode.EXACT:
            return self.data
        return self.data.T @ self.data.conj() / self.shots

    def check(self, tol=1e-9):
        '''Returns a list of violated invariants (empty when the state is valid)'''
        problems = []
        if self.data.shape[-1] != self.dim:
            problems.append(f'data width {self.data.shape[-1]} does not match {self.num_qubits} qubits')
            return problems
        if self.mode is Mode.SHOT:
            norms = np.sum(np.abs(self.data) ** 2, axis=1)
            if np.max(np.abs(norms - 1.0), initial=0.0) > tol:
                problems.append('statevector norm drifted')
        else:
            if not is_hermitian(self.data, tol):
                problems.append('density matrix not Hermitian')
            if abs(np.trace(self.data) - 1.0) > tol:
                problems.append(f'trace is {np.trace(self.data).real:.12f}')
            if np.min(np.linalg.eigvalsh(0.5 * (self.data + self.data.conj().T))) < -1e-8:
                problems.append('density matrix has a negative eigenvalue')
        return problems


def to_shot_state(state, shots):
    '''Shot-mode copy of a state; exact-mode input must be pure'''
    if state.mode is Mode.SHOT:
        return state.with_shots(shots)
    eigvals, eigvecs = np.linalg.eigh(state.data)
    if eigvals[-1] < 1.0 - 1e-9:
        raise WrongMode('Only pure exact-mode states can seed a shot-mode run')
    return RegisterState.from_vector(eigvecs[:, -1], shots)


def _check_labels(state, qubits):
    for q in qubits:
        if not 0 <= q < state.num_qubits:
            raise LabelOutOfRange(f'Qubit {q} is outside a {state.num_qubits}-qubit register')


def _check_budget(mode, num_qubits):
    cap = MAX_DENSITY_QUBITS if mode is Mode.EXACT else MAX_STATEVECTOR_QUBITS
    if num_qubits > cap:
        raise AncillaBudgetExceeded(f'Register of {num_qubits} qubits exceeds the {mode.value}-mode cap of {cap}')


def apply_operator(state, matrix, qubits):
    '''Applies a matrix to the labelled qubits without any unitarity check'''
    if state.mode is Mode.SHOT:
        return state.replace(apply_local(state.data, matrix, qubits, state.num_qubits))
    return state.replace(conjugate_local(state.data, matrix, qubits, state.num_qubits))


def apply_unitary(state, u):
    if not is_unitary(u.matrix, UNITARY_TOL):
        raise NotUnitary(f'Operator on qubits {u.qubits} is not unitary')
    _check_labels(state, u.qubits)
    return apply_operator(state, u.matrix, u.qubits)


def append_qubits(state, program):
    '''Extends the register with trailing qubits prepared in program.

    Exact mode takes a density matrix, shot mode a statevector (one per row or shared).
    '''
    program = np.asarray(program, dtype=complex)
    extra = int(round(np.log2(program.shape[-1])))
    total = state.num_qubits + extra
    _check_budget(state.mode, total)
    if state.mode is Mode.EXACT:
        return state.replace(np.kron(state.data, program), num_qubits=total)
    if program.ndim == 1:
        program = np.broadcast_to(program, (state.shots, program.size))
    data = np.einsum('si,sj->sij', state.data, program).reshape(state.shots, -1)
    return state.replace(data, num_qubits=total)


def measure_and_discard(state, count, rng=None):
    '''Removes the last count qubits: partial trace in exact mode, measurement per shot row otherwise'''
    keep = state.num_qubits - count
    if state.mode is Mode.EXACT:
        rho = partial_trace(state.data, [2 ** keep, 2 ** count], [0])
        return state.replace(rho, num_qubits=keep)
    shots = state.shots
    blocks = state.data.reshape(shots, 2 ** keep, 2 ** count)
    probs = np.sum(np.abs(blocks) ** 2, axis=1)
    probs = probs / np.sum(probs, axis=1, keepdims=True)
    outcomes = _sample_rows(probs, rng)
    picked = blocks[np.arange(shots), :, outcomes]
    picked = picked / np.linalg.norm(picked, axis=1, keepdims=True)
    return RegisterState(state.mode, keep, picked, state.ancilla_outcomes + (outcomes.astype(np.uint16),))


def _sample_rows(probs, rng):
    '''One categorical draw per row of a probability table'''
    cumulative = np.cumsum(probs, axis=1)
    draws = rng.random(probs.shape[0])[:, None]
    return np.minimum(np.sum(draws >= cumulative, axis=1), probs.shape[1] - 1)


def apply_dilated_channel(state, u, num_ancillas, rng=None):
    '''Applies u on system qubits plus num_ancillas fresh ancillas in |0...0>, then discards them.

    The ancillas carry the labels num_qubits .. num_qubits + num_ancillas - 1 inside u.
    '''
    n = state.num_qubits
    ancillas = tuple(range(n, n + num_ancillas))
    if not set(ancillas) <= set(u.qubits):
        raise LabelOutOfRange(f'Dilation on {u.qubits} must include ancillas {ancillas}')
    if not is_unitary(u.matrix, UNITARY_TOL):
        raise NotUnitary(f'Dilation on qubits {u.qubits} is not unitary')
    for q in u.qubits:
        if q not in ancillas and not 0 <= q < n:
            raise LabelOutOfRange(f'Qubit {q} is outside a {n}-qubit register')
    zero = np.zeros(2 ** num_ancillas, dtype=complex)
    zero[0] = 1.0
    program = zero if state.mode is Mode.SHOT else np.outer(zero, zero)
    extended = append_qubits(state, program)
    extended = apply_operator(extended, u.matrix, u.qubits)
    return measure_and_discard(extended, num_ancillas, rng)


def apply_kraus(state, kraus_ops, qubits, rng=None):
    '''Applies sum_b K_b rho K_b^dagger; shot mode picks branch b with probability ||K_b psi||^2 and renormalizes'''
    _check_labels(state, qubits)
    if state.mode is Mode.EXACT:
        rho = sum(conjugate_local(state.data, k, qubits, state.num_qubits) for k in kraus_ops)
        return state.replace(rho)
    branches = np.stack([apply_local(state.data, k, qubits, state.num_qubits) for k in kraus_ops], axis=1)
    weights = np.sum(np.abs(branches) ** 2, axis=2)
    probs = weights / np.sum(weights, axis=1, keepdims=True)
    outcomes = _sample_rows(probs, rng)
    picked = branches[np.arange(state.shots), outcomes]
    picked = picked / np.linalg.norm(picked, axis=1, keepdims=True)
    return RegisterState(state.mode, state.num_qubits, picked, state.ancilla_outcomes + (outcomes.astype(np.uint16),))


def measure_all(state, rng, seed=None):
    '''Samples one bitstring per shot row'''
    if state.mode is not Mode.SHOT:
        raise WrongMode('measure_all needs a shot-mode register')
    probs = np.abs(state.data) ** 2
    probs = probs / np.sum(probs, axis=1, keepdims=True)
    indices = _sample_rows(probs, rng)
    width = state.num_qubits
    records = []
    for row, index in enumerate(indices):
        bitstring = format(int(index), f'0{width}b') if width else ''
        records.append(ShotRecord(bitstring, seed, tuple(int(o[row]) for o in state.ancilla_outcomes)))
    return records


def channel_superoperator(channel, num_qubits):
    '''Column-stacked matrix of a linear exact-mode channel, built from the matrix units'''
    dim = 2 ** num_qubits
    out = np.zeros((dim * dim, dim * dim), dtype=complex)
    for j in range(dim):
        for i in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[i, j] = 1.0
            image = channel(RegisterState(Mode.EXACT, num_qubits, unit)).data
            out[:, i + j * dim] = image.reshape(-1, order='F')
    return Superoperator(out, dim)


def kraus_superoperator(kraus_ops):
    dim = kraus_ops[0].shape[0]
    return Superoperator(sum(np.kron(k.conj(), k) for k in kraus_ops), dim)
