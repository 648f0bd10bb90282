'''Open Tavis-Cummings model on the register [cavity qubits | emitter qubits].

The cavity holds up to 2**m - 1 excitations in binary encoding (bitstring value = excitation
count); emitter j sits on qubit m + j with |1> the excited state. Frequencies are angular GHz,
times are ns.
'''

import dataclasses
import typing

import numpy as np

from scripts.errors import ConfigInvalid, DimensionMismatch
from scripts.numkit import Operator, apply_local, conjugate_local, embed_matrix
from scripts.qsim import Mode, RegisterState

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()
EXCITED = np.array([[0, 0], [0, 1]], dtype=complex)


@dataclasses.dataclass(frozen=True)
class TcSystem:
    n_emitters: int
    omega_c: float
    omega_e: typing.Tuple[float, ...]
    g: typing.Tuple[float, ...]
    kappa: float
    gamma: float
    pump_amp: float = 0.0
    pump_freq: typing.Optional[float] = None
    frame_shift: float = 0.0
    cavity_qubits: int = 2

    def __post_init__(self):
        object.__setattr__(self, 'omega_e', tuple(float(w) for w in self.omega_e))
        object.__setattr__(self, 'g', tuple(float(x) for x in self.g))
        if self.n_emitters < 0:
            raise ConfigInvalid('n_emitters must be non-negative')
        if len(self.omega_e) != self.n_emitters or len(self.g) != self.n_emitters:
            raise ConfigInvalid(f'omega_e and g need {self.n_emitters} entries, '
                                f'got {len(self.omega_e)} and {len(self.g)}')
        if self.cavity_qubits < 1:
            raise ConfigInvalid('cavity_qubits must be at least 1')
        for name in ('kappa', 'gamma', 'pump_amp'):
            if getattr(self, name) < 0:
                raise ConfigInvalid(f'{name} must be non-negative')
        if any(x < 0 for x in self.g):
            raise ConfigInvalid('coupling strengths must be non-negative')

    @property
    def omega_p(self):
        return self.omega_c if self.pump_freq is None else self.pump_freq

    @property
    def num_qubits(self):
        return self.cavity_qubits + self.n_emitters

    @property
    def dim(self):
        return 2 ** self.num_qubits

    @property
    def max_excitations(self):
        return 2 ** self.cavity_qubits - 1

    @property
    def cavity_labels(self):
        return tuple(range(self.cavity_qubits))

    def emitter_label(self, j):
        return self.cavity_qubits + j

    def is_static(self):
        '''True when the Hamiltonian does not depend on time in the chosen frame'''
        return self.pump_amp == 0 or self.omega_p == self.frame_shift

    def pump_phase(self, t):
        return np.exp(1j * (self.omega_p - self.frame_shift) * t)


@dataclasses.dataclass(frozen=True, eq=False)
class LindbladTerm:
    operator: Operator
    rate: float

    @property
    def scaled(self):
        '''sqrt(rate) L, the operator that enters dilations and program states'''
        return self.operator.scaled(np.sqrt(self.rate))


@dataclasses.dataclass(frozen=True, eq=False)
class HamiltonianTerm:
    kind: str
    index: int
    operator: Operator


def cavity_annihilation(m=2):
    dim = 2 ** m
    a = np.zeros((dim, dim), dtype=complex)
    for level in range(1, dim):
        a[level - 1, level] = np.sqrt(level)
    return Operator(a, tuple(range(m)))


def cavity_number(m=2):
    return Operator(np.diag(np.arange(2 ** m)).astype(complex), tuple(range(m)))


def hamiltonian_terms(sys, t=0.0):
    '''Local pieces of H(t) labelled with register qubits, in the order
    cavity number, emitter numbers, interactions, pump'''
    m = sys.cavity_qubits
    a = cavity_annihilation(m).matrix
    cavity = sys.cavity_labels
    terms = [HamiltonianTerm('cavity', 0, Operator((sys.omega_c - sys.frame_shift) * a.conj().T @ a, cavity))]
    for j in range(sys.n_emitters):
        terms.append(HamiltonianTerm('emitter', j, Operator((sys.omega_e[j] - sys.frame_shift) * EXCITED,
                                                            (sys.emitter_label(j),))))
    for j in range(sys.n_emitters):
        coupling = sys.g[j] * (np.kron(a, SIGMA_PLUS) + np.kron(a.conj().T, SIGMA_MINUS))
        terms.append(HamiltonianTerm('interaction', j, Operator(coupling, cavity + (sys.emitter_label(j),))))
    if sys.pump_amp:
        phase = sys.pump_phase(t)
        drive = sys.pump_amp * (a * phase + a.conj().T * np.conj(phase))
        terms.append(HamiltonianTerm('pump', 0, Operator(drive, cavity)))
    return terms


def hamiltonian(sys, t=0.0):
    n = sys.num_qubits
    h = np.zeros((sys.dim, sys.dim), dtype=complex)
    for term in hamiltonian_terms(sys, t):
        h += embed_matrix(term.operator.matrix, term.operator.qubits, n)
    return Operator(h, tuple(range(n)))


def lindblad_terms(sys):
    terms = [LindbladTerm(cavity_annihilation(sys.cavity_qubits), sys.kappa)]
    for j in range(sys.n_emitters):
        terms.append(LindbladTerm(Operator(SIGMA_MINUS, (sys.emitter_label(j),)), sys.gamma))
    return terms


def excitation_number(sys):
    '''a^dagger a + sum_j sigma_j^+ sigma_j^- on the full register'''
    n = sys.num_qubits
    total = embed_matrix(cavity_number(sys.cavity_qubits).matrix, sys.cavity_labels, n)
    for j in range(sys.n_emitters):
        total = total + embed_matrix(EXCITED, (sys.emitter_label(j),), n)
    return total


def lindblad_rhs(sys, rho, t=0.0):
    rho = np.asarray(rho)
    if rho.shape != (sys.dim, sys.dim):
        raise DimensionMismatch(f'State of shape {rho.shape} does not fit a {sys.num_qubits}-qubit register')
    n = sys.num_qubits

    def left(matrix, qubits):
        return apply_local(rho.T, matrix, qubits, n).T

    def right(matrix, qubits):
        return apply_local(rho, matrix.T, qubits, n)

    out = np.zeros_like(rho, dtype=complex)
    for term in hamiltonian_terms(sys, t):
        h, qubits = term.operator.matrix, term.operator.qubits
        out += -1j * (left(h, qubits) - right(h, qubits))
    for term in lindblad_terms(sys):
        if term.rate == 0:
            continue
        l, qubits = term.operator.matrix, term.operator.qubits
        ldag_l = l.conj().T @ l
        out += term.rate * (conjugate_local(rho, l, qubits, n)
                            - 0.5 * (left(ldag_l, qubits) + right(ldag_l, qubits)))
    return out


def basis_bits(sys, cavity=0, emitters=()):
    '''Bitstring of the product state with the given cavity excitations and excited emitters'''
    if not 0 <= cavity <= sys.max_excitations:
        raise ConfigInvalid(f'{cavity} cavity excitations do not fit {sys.cavity_qubits} cavity qubits')
    bits = ['0'] * sys.n_emitters
    for j in emitters:
        if not 0 <= j < sys.n_emitters:
            raise ConfigInvalid(f'Emitter index {j} out of range')
        bits[j] = '1'
    return format(cavity, f'0{sys.cavity_qubits}b') + ''.join(bits)


def initial_state(sys, cavity=0, emitters=(), mode=Mode.EXACT, shots=1):
    return RegisterState.basis(basis_bits(sys, cavity, emitters), mode, shots)
