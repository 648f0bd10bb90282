'''Observables: cavity and emitter populations, g2(0) and the median-of-means g2 estimator.

The cavity register encodes the photon number in binary, so every observable here is a
function of the diagonal of the density matrix (or of sampled bitstrings).
'''

import collections
import dataclasses
import math
import typing

import numpy as np

from scripts.errors import AllBatchesDegenerate, DimensionMismatch, ZeroDenominator


@dataclasses.dataclass(frozen=True)
class PopulationSample:
    time: float
    cavity: float
    emitters: typing.Tuple[float, ...]
    cavity_stderr: float = 0.0
    emitter_stderr: typing.Tuple[float, ...] = ()


@dataclasses.dataclass(frozen=True)
class BatchTally:
    '''Per-batch estimates of sum n(n-1)p_n and (sum n p_n)^2'''
    numerator: float
    denominator: float
    shots: int

    @property
    def ratio(self):
        return self.numerator / self.denominator if self.denominator > 0 else None


@dataclasses.dataclass(frozen=True)
class G2Estimate:
    numerator: float
    denominator: float
    ratio: float
    batches: typing.Tuple[typing.Optional[float], ...]
    running_median: typing.Tuple[typing.Optional[float], ...]
    excluded_batches: int = 0


def _diagonal(rho, sys):
    p = np.real(np.diag(np.asarray(rho)))
    if p.size != sys.dim:
        raise DimensionMismatch(f'State of dimension {p.size} does not fit a {sys.num_qubits}-qubit register')
    return p


def cavity_distribution(rho, sys=None):
    '''Probabilities p_n of n cavity excitations; without sys rho is the cavity alone'''
    p = np.real(np.diag(np.asarray(rho)))
    if sys is None:
        return p
    return _diagonal(rho, sys).reshape(2 ** sys.cavity_qubits, -1).sum(axis=1)


def populations_exact(rho, sys, time=0.0):
    p = _diagonal(rho, sys)
    levels = np.arange(2 ** sys.cavity_qubits)
    cavity = float(levels @ p.reshape(levels.size, -1).sum(axis=1))
    emitters = []
    for j in range(sys.n_emitters):
        marginal = p.reshape(2 ** (sys.cavity_qubits + j), 2, -1).sum(axis=(0, 2))
        emitters.append(float(marginal[1]))
    return PopulationSample(time, cavity, tuple(emitters), 0.0, (0.0,) * sys.n_emitters)


def _weighted_mean_stderr(values, weights, total):
    mean = float(np.dot(weights, values) / total)
    if total <= 1:
        return mean, 0.0
    variance = float(np.dot(weights, (values - mean) ** 2) / (total - 1))
    return mean, math.sqrt(variance / total)


def populations_from_counts(counts, sys, time=0.0):
    '''Populations from a bitstring tally; weights need not be integers'''
    if not counts:
        raise ValueError('No shot records to estimate populations from')
    m = sys.cavity_qubits
    bitstrings = list(counts)
    weights = np.array([counts[b] for b in bitstrings], dtype=float)
    total = float(weights.sum())
    cavity_values = np.array([int(b[:m], 2) for b in bitstrings], dtype=float)
    cavity, cavity_err = _weighted_mean_stderr(cavity_values, weights, total)
    emitters, emitter_err = [], []
    for j in range(sys.n_emitters):
        bits = np.array([int(b[m + j]) for b in bitstrings], dtype=float)
        mean, err = _weighted_mean_stderr(bits, weights, total)
        emitters.append(mean)
        emitter_err.append(err)
    return PopulationSample(time, cavity, tuple(emitters), cavity_err, tuple(emitter_err))


def populations_from_shots(records, sys, time=0.0):
    return populations_from_counts(collections.Counter(r.bitstring for r in records), sys, time)


def g2_exact(rho, sys=None):
    '''Tr[a^dag a^dag a a rho] / Tr[a^dag a rho]^2 from the cavity number distribution'''
    p = cavity_distribution(rho, sys)
    n = np.arange(p.size)
    denominator = float(n @ p) ** 2
    if denominator <= 0:
        raise ZeroDenominator('g2(0) is undefined for a state without cavity excitations')
    return float((n * (n - 1)) @ p) / denominator


def tally_batch(records, sys):
    m = sys.cavity_qubits
    n = np.array([int(r.bitstring[:m], 2) for r in records], dtype=float)
    if n.size == 0:
        return BatchTally(0.0, 0.0, 0)
    return BatchTally(float(np.mean(n * (n - 1))), float(np.mean(n)) ** 2, int(n.size))


def _lower_median(values):
    ordered = sorted(values)
    return ordered[(len(ordered) - 1) // 2]


def g2_median_of_means(batches):
    '''Median over batches of the per-batch g2 ratio; zero-denominator batches are excluded'''
    if not batches:
        raise AllBatchesDegenerate('No batches to estimate g2 from')
    ratios = [batch.ratio for batch in batches]
    running, seen = [], []
    for ratio in ratios:
        if ratio is not None:
            seen.append(ratio)
        running.append(_lower_median(seen) if seen else None)
    valid = [batch for batch in batches if batch.ratio is not None]
    if not valid:
        raise AllBatchesDegenerate(f'All {len(batches)} batches recorded no cavity excitations')
    median = _lower_median([batch.ratio for batch in valid])
    chosen = next(batch for batch in valid if batch.ratio == median)
    return G2Estimate(chosen.numerator, chosen.denominator, median, tuple(ratios), tuple(running),
                      len(batches) - len(valid))
