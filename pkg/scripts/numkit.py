'''Dense complex linear algebra shared by the simulator, the model builders and the oracles.

Conventions used everywhere in otcapp:
    qubit 0 is the most significant tensor factor (leftmost bit of a bitstring);
    density matrices are vectorized by stacking columns, so A rho B maps to (B^T kron A) vec(rho).
'''

import dataclasses
import string
import typing

import numpy as np
import scipy.linalg

from scripts.errors import DimensionMismatch, NotHermitian, Singular

HERMITIAN_TOL = 1e-10
MAX_STATEVECTOR_QUBITS = 14
MAX_DENSITY_QUBITS = 12

ComplexMatrix = np.ndarray

PAULIS = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclasses.dataclass(frozen=True, eq=False)
class Operator:
    '''Square matrix of dimension 2**len(qubits) acting on the labelled register qubits'''
    matrix: np.ndarray
    qubits: typing.Tuple[int, ...]

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        qubits = tuple(int(q) for q in self.qubits)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f'Operator matrix must be square, got shape {matrix.shape}')
        if matrix.shape[0] != 2 ** len(qubits):
            raise DimensionMismatch(f'Operator of dimension {matrix.shape[0]} cannot act on {len(qubits)} qubits')
        if len(set(qubits)) != len(qubits):
            raise DimensionMismatch(f'Qubit labels must be distinct: {qubits}')
        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'qubits', qubits)

    @classmethod
    def local(cls, matrix):
        '''Wraps a matrix as an operator on qubits 0..q-1'''
        matrix = np.asarray(matrix, dtype=complex)
        return cls(matrix, tuple(range(int(round(np.log2(matrix.shape[0]))))))

    @property
    def num_qubits(self):
        return len(self.qubits)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def dag(self):
        return Operator(self.matrix.conj().T, self.qubits)

    def relabel(self, qubits):
        return Operator(self.matrix, tuple(qubits))

    def scaled(self, factor):
        return Operator(factor * self.matrix, self.qubits)

    def is_hermitian(self, tol=HERMITIAN_TOL):
        return is_hermitian(self.matrix, tol)

    def is_unitary(self, tol=HERMITIAN_TOL):
        return is_unitary(self.matrix, tol)

    def embed(self, num_qubits):
        '''Returns the full 2**num_qubits matrix of this operator on a register'''
        return embed_matrix(self.matrix, self.qubits, num_qubits)


@dataclasses.dataclass(frozen=True, eq=False)
class Superoperator:
    '''Matrix acting on column-stacked density matrices of dimension dim'''
    matrix: np.ndarray
    dim: int

    def apply(self, rho):
        return unvec(self.matrix @ vec(rho), self.dim)


def pauli_string(labels, qubits=None):
    '''Operator for a Pauli word such as "XZI"; qubits default to 0..len-1'''
    matrix = np.ones((1, 1), dtype=complex)
    for letter in labels:
        matrix = np.kron(matrix, PAULIS[letter])
    if qubits is None:
        qubits = range(len(labels))
    return Operator(matrix, tuple(qubits))


def is_hermitian(matrix, tol=HERMITIAN_TOL):
    matrix = np.asarray(matrix)
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol)


def is_unitary(matrix, tol=HERMITIAN_TOL):
    matrix = np.asarray(matrix)
    return bool(np.max(np.abs(matrix.conj().T @ matrix - np.eye(matrix.shape[0])), initial=0.0) <= tol)


def kron(a, b):
    '''Tensor product of two operators.

    Disjoint label sets are concatenated (a's qubits first). Overlapping label
    sets are treated as local operators and the result acts on 0..qa+qb-1.
    '''
    matrix = np.kron(a.matrix, b.matrix)
    if set(a.qubits).isdisjoint(b.qubits):
        return Operator(matrix, a.qubits + b.qubits)
    return Operator.local(matrix)


def expm_hermitian(h, theta):
    '''Returns exp(-i h theta) from the eigendecomposition of the Hermitian h'''
    matrix = h.matrix if isinstance(h, Operator) else np.asarray(h, dtype=complex)
    if not is_hermitian(matrix):
        raise NotHermitian('expm_hermitian needs a Hermitian generator')
    eigvals, eigvecs = np.linalg.eigh(matrix)
    u = (eigvecs * np.exp(-1j * eigvals * theta)) @ eigvecs.conj().T
    if isinstance(h, Operator):
        return Operator(u, h.qubits)
    return u


def expm_general(m, t=1.0):
    '''exp(m t) by scaling and squaring with a degree-13 Pade approximant'''
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f'expm_general needs a square matrix, got shape {m.shape}')
    try:
        out = scipy.linalg.expm(m * t)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as ex:
        raise Singular(f'Pade solve failed: {ex}') from ex
    if not np.all(np.isfinite(out)):
        raise Singular('Matrix exponential overflowed')
    return out


def partial_trace(rho, dims, keep):
    '''Traces out every factor of rho whose index is not in keep'''
    rho = np.asarray(rho)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims)) if dims else 1
    if rho.shape != (total, total):
        raise DimensionMismatch(f'Density matrix of shape {rho.shape} does not match factors {dims}')
    keep = sorted(set(keep))
    n = len(dims)
    if 2 * n > len(string.ascii_letters):
        raise DimensionMismatch(f'Too many tensor factors for partial_trace: {n}')
    rows = list(string.ascii_letters[:n])
    cols = list(string.ascii_letters[n:2 * n])
    for i in range(n):
        if i not in keep:
            cols[i] = rows[i]
    out = ''.join(rows[i] for i in keep) + ''.join(cols[i] for i in keep)
    reduced = np.einsum(''.join(rows) + ''.join(cols) + '->' + out, rho.reshape(dims + dims))
    kept_dim = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(kept_dim, kept_dim)


def schatten_norm(x, p=2):
    singular_values = np.linalg.svd(np.asarray(x), compute_uv=False)
    if p == 1:
        return float(np.sum(singular_values))
    if p == 2:
        return float(np.sqrt(np.sum(singular_values ** 2)))
    if p in (np.inf, 'inf'):
        return float(np.max(singular_values, initial=0.0))
    raise ValueError(f'Unsupported Schatten order {p}')


def trace_distance(rho, sigma):
    rho, sigma = np.asarray(rho), np.asarray(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f'Cannot compare states of shapes {rho.shape} and {sigma.shape}')
    return 0.5 * schatten_norm(rho - sigma, 1)


def vec(rho):
    return np.asarray(rho).reshape(-1, order='F')


def unvec(v, dim):
    return np.asarray(v).reshape(dim, dim, order='F')


def apply_local(vectors, matrix, qubits, num_qubits):
    '''Applies matrix on the labelled qubits to the last axis of vectors.

    vectors has shape (..., 2**num_qubits); leading axes are batch axes.
    '''
    lead = vectors.shape[:-1]
    k = len(qubits)
    psi = vectors.reshape(lead + (2,) * num_qubits)
    axes = [len(lead) + q for q in qubits]
    op = np.asarray(matrix).reshape((2,) * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(vectors.shape)


def conjugate_local(rho, matrix, qubits, num_qubits):
    '''Returns K rho K^dagger for K acting on the labelled qubits of a register'''
    left = apply_local(np.asarray(rho).T, matrix, qubits, num_qubits).T
    return apply_local(left, np.conj(matrix), qubits, num_qubits)


def embed_matrix(matrix, qubits, num_qubits):
    return apply_local(np.eye(2 ** num_qubits, dtype=complex), matrix, qubits, num_qubits).T


def permute_qubits(matrix, order):
    '''Reorders tensor factors: qubit k of the result is qubit order[k] of the input'''
    n = len(order)
    tensor = np.asarray(matrix).reshape((2,) * (2 * n))
    axes = list(order) + [n + q for q in order]
    return tensor.transpose(axes).reshape(2 ** n, 2 ** n)


def swap_matrix(q=1):
    '''SWAP between two blocks of q qubits (block A first)'''
    d = 2 ** q
    out = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            out[j * d + i, i * d + j] = 1.0
    return out


def gamma_vector(q=1):
    '''Unnormalized maximally entangled vector sum_b |b>|b> over two q-qubit blocks'''
    d = 2 ** q
    return np.eye(d, dtype=complex).reshape(-1)


def random_density_matrix(dim, rng, rank=None):
    rank = rank or dim
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_unitary(dim, rng):
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
