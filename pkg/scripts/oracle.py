'''Classical reference solvers for the open Tavis-Cummings model.

Small registers are propagated with the dense Liouvillian exponential; registers above
DENSE_LIOUVILLE_QUBITS are integrated in matrix form with scipy's DOP853. The
Monte-Carlo wavefunction solver propagates all trajectories as one batch.
'''

import math

import numpy as np
import scipy.integrate

from scripts.errors import DimensionMismatch, StepTooLarge
from scripts.ilapfuncs import logfunc
from scripts.numkit import Superoperator, expm_general, schatten_norm, unvec, vec
from scripts.tcmodel import hamiltonian, hamiltonian_terms, lindblad_rhs, lindblad_terms

DENSE_LIOUVILLE_QUBITS = 6
SLICE_NORM = 0.1
MCWF_STEP_NORM = 0.1
STEADY_STATE_TOL = 1e-6


def _dissipator_matrix(l):
    dim = l.shape[0]
    eye = np.eye(dim)
    ldag_l = l.conj().T @ l
    return np.kron(l.conj(), l) - 0.5 * np.kron(eye, ldag_l) - 0.5 * np.kron(ldag_l.T, eye)


def liouville_matrix(sys, t=0.0):
    h = hamiltonian(sys, t).matrix
    eye = np.eye(sys.dim)
    generator = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for term in lindblad_terms(sys):
        if term.rate:
            generator = generator + term.rate * _dissipator_matrix(term.operator.embed(sys.num_qubits))
    return Superoperator(generator, sys.dim)


def _norm_bound(matrix):
    '''Cheap upper bound on the spectral norm: max of the induced 1- and inf-norms'''
    magnitudes = np.abs(matrix)
    return float(max(magnitudes.sum(axis=0).max(), magnitudes.sum(axis=1).max()))


def evolve_liouville(sys, rho0, t, time_steps_for_pump=1, t0=0.0):
    '''Propagates rho0 from t0 to t0 + t'''
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (sys.dim, sys.dim):
        raise DimensionMismatch(f'State of shape {rho0.shape} does not fit a {sys.num_qubits}-qubit register')
    if t == 0:
        return rho0.copy()
    if sys.num_qubits > DENSE_LIOUVILLE_QUBITS:
        return _integrate(sys, rho0, t, t0)
    if sys.is_static():
        rho = unvec(expm_general(liouville_matrix(sys, t0).matrix, t) @ vec(rho0), sys.dim)
    else:
        bound = _norm_bound(liouville_matrix(sys, t0).matrix)
        slices = max(int(time_steps_for_pump or 1), math.ceil(bound * t / SLICE_NORM))
        dt = t / slices
        state = vec(rho0)
        for s in range(slices):
            generator = liouville_matrix(sys, t0 + (s + 0.5) * dt).matrix
            state = expm_general(generator, dt) @ state
        rho = unvec(state, sys.dim)
    return 0.5 * (rho + rho.conj().T)


def _integrate(sys, rho0, t, t0):
    dim = sys.dim

    def rhs(time, y):
        return lindblad_rhs(sys, y.reshape(dim, dim), time).reshape(-1)

    solution = scipy.integrate.solve_ivp(rhs, (t0, t0 + t), rho0.reshape(-1), method='DOP853',
                                         rtol=1e-9, atol=1e-11)
    if not solution.success:
        logfunc(f'Master equation integration reported: {solution.message}')
    rho = solution.y[:, -1].reshape(dim, dim)
    return 0.5 * (rho + rho.conj().T)


def evolve_liouville_series(sys, rho0, times, t0=0.0, time_steps_for_pump=1):
    '''States at each of the sorted absolute times, chaining propagation between them'''
    out = []
    rho, current = np.asarray(rho0, dtype=complex), t0
    for time in times:
        rho = evolve_liouville(sys, rho, time - current, time_steps_for_pump, t0=current)
        current = time
        out.append(rho)
    return out


def steady_state_residual(sys, rho, t=0.0):
    '''Frobenius norm of d(rho)/dt; zero for a stationary state'''
    return float(np.linalg.norm(lindblad_rhs(sys, rho, t)))


def liouvillian_norm_bound(sys, t=0.0):
    '''Upper bound on the operator norm of the generator, summed over its local terms'''
    bound = sum(2 * schatten_norm(term.operator.matrix, np.inf) for term in hamiltonian_terms(sys, t))
    for term in lindblad_terms(sys):
        bound += 2 * term.rate * schatten_norm(term.operator.matrix, np.inf) ** 2
    return bound


def stationarity(sys, rho, t=0.0):
    '''Residual relative to the generator norm; a steady state sits at or below STEADY_STATE_TOL'''
    return steady_state_residual(sys, rho, t) / liouvillian_norm_bound(sys, t)


def effective_hamiltonian(sys, t=0.0):
    h = hamiltonian(sys, t).matrix.copy()
    for term in lindblad_terms(sys):
        if term.rate:
            l = term.operator.embed(sys.num_qubits)
            h -= 0.5j * term.rate * (l.conj().T @ l)
    return h


def mcwf_evolve(sys, psi0, t, dt, trajectories, rng, t0=0.0):
    '''Averaged density matrix of quantum-jump trajectories started from psi0.

    Per step the no-jump branch propagates with exp(-i H_eff dt); a jump happens with the
    norm lost by that branch (sum_k rate_k dt ||L_k psi||^2 to first order) and picks
    channel k with probability proportional to rate_k ||L_k psi||^2.
    '''
    psi0 = np.asarray(psi0, dtype=complex).reshape(-1)
    if psi0.size != sys.dim:
        raise DimensionMismatch(f'Statevector of size {psi0.size} does not fit a {sys.num_qubits}-qubit register')
    h_eff = effective_hamiltonian(sys, t0)
    if dt * schatten_norm(h_eff, np.inf) > MCWF_STEP_NORM:
        raise StepTooLarge(f'dt={dt} ns exceeds {MCWF_STEP_NORM}/||H_eff||')
    psi = np.tile(psi0 / np.linalg.norm(psi0), (trajectories, 1))
    if t == 0:
        return psi.T @ psi.conj() / trajectories
    steps = max(1, math.ceil(t / dt - 1e-9))
    dt = t / steps
    jumps = [(np.sqrt(term.rate) * term.operator.embed(sys.num_qubits)) for term in lindblad_terms(sys) if term.rate]
    propagator = expm_general(-1j * h_eff, dt)
    for step in range(steps):
        if not sys.is_static():
            propagator = expm_general(-1j * effective_hamiltonian(sys, t0 + (step + 0.5) * dt), dt)
        no_jump = psi @ propagator.T
        survival = np.sum(np.abs(no_jump) ** 2, axis=1)
        jumped = rng.random(trajectories) < np.clip(1.0 - survival, 0.0, 1.0)
        choice = rng.random(trajectories)
        following = no_jump / np.sqrt(survival)[:, None]
        if jumps and np.any(jumped):
            rows = np.flatnonzero(jumped)
            images = np.stack([psi[rows] @ l.T for l in jumps], axis=1)
            weights = np.sum(np.abs(images) ** 2, axis=2)
            live = np.sum(weights, axis=1) > 0
            rows, images, weights = rows[live], images[live], weights[live]
            cumulative = np.cumsum(weights, axis=1) / np.sum(weights, axis=1, keepdims=True)
            channel = np.minimum(np.sum(choice[rows, None] >= cumulative, axis=1), len(jumps) - 1)
            landed = images[np.arange(rows.size), channel]
            following[rows] = landed / np.linalg.norm(landed, axis=1, keepdims=True)
        psi = following
    return psi.T @ psi.conj() / trajectories
