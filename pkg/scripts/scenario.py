'''Scenario files and the runner that turns one into a ResultSeries.

A scenario is a JSON document in the tool's envelope:

    {"leapp": "otcapp", "format_version": 1, "name": ..., "system": {...},
     "initial": {...}, "algorithm": {...}, "run": {...}, "seed": 0}
'''

import dataclasses
import hashlib
import json
import typing

import numpy as np

from scripts import oracle, splitj, wml
from scripts.errors import ConfigInvalid, RegisterTooLarge, ToleranceFailure
from scripts.ilapfuncs import logfunc, logruninfo
from scripts.numkit import MAX_DENSITY_QUBITS, MAX_STATEVECTOR_QUBITS
from scripts.obs import (g2_exact, g2_median_of_means, populations_exact, populations_from_shots,
                         tally_batch)
from scripts.qsim import Mode, ShotMode, ShotRecord, RegisterState, make_rng, split_seeds
from scripts.results import ResultSeries, git_describe
from scripts.tcmodel import TcSystem, basis_bits, initial_state

SCENARIO_LEAPP = 'otcapp'
FORMAT_VERSION = 1
ALGORITHM_KINDS = ('splitj', 'wml', 'hybrid', 'oracle', 'mcwf')
RUN_KINDS = ('timeseries', 'g2')
RUN_MODES = ('exact', 'shot')
SELF_CHECK_TOL = 1e-6
PROGRESS_EVERY = 10
REFERENCE_AGREEMENT = 0.02


@dataclasses.dataclass(frozen=True)
class InitialConfig:
    cavity: int = 0
    emitters: typing.Tuple[int, ...] = ()


@dataclasses.dataclass(frozen=True)
class AlgorithmConfig:
    kind: str = 'splitj'
    n: int = 100
    order: int = 2
    impl: str = wml.HYBRID_J
    max_delta: typing.Optional[float] = None
    dt: float = 1e-3
    trajectories: int = 1000


@dataclasses.dataclass(frozen=True)
class RunConfig:
    '''timeseries: num_points times in [t_start, t_end]; g2: batches of shots at steady_time'''
    kind: str = 'timeseries'
    t_start: float = 0.0
    t_end: float = 0.0
    num_points: int = 1
    mode: str = 'exact'
    shots: int = 1000
    steady_time: float = 0.0
    batches: int = 20
    shots_per_batch: int = 1000
    reference_g2: typing.Optional[float] = None


@dataclasses.dataclass(frozen=True)
class ScenarioConfig:
    name: str
    system: TcSystem
    initial: InitialConfig = InitialConfig()
    algorithm: AlgorithmConfig = AlgorithmConfig()
    run: RunConfig = RunConfig()
    seed: int = 0
    description: str = ''
    output_path: typing.Optional[str] = None

    def to_dict(self):
        return {
            'leapp': SCENARIO_LEAPP,
            'format_version': FORMAT_VERSION,
            'name': self.name,
            'description': self.description,
            'system': dataclasses.asdict(self.system),
            'initial': {'cavity': self.initial.cavity, 'emitters': list(self.initial.emitters)},
            'algorithm': dataclasses.asdict(self.algorithm),
            'run': dataclasses.asdict(self.run),
            'seed': self.seed,
            'output_path': self.output_path,
        }

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def _section(data, key, cls):
    values = data.get(key, {})
    if not isinstance(values, dict):
        raise ConfigInvalid(f'Section "{key}" must be an object')
    known = {field.name for field in dataclasses.fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigInvalid(f'Unknown keys in "{key}": {", ".join(unknown)}')
    return values


def _system(data):
    values = dict(_section(data, 'system', TcSystem))
    n = values.get('n_emitters')
    if not isinstance(n, int) or isinstance(n, bool):
        raise ConfigInvalid('system.n_emitters must be an integer')
    for name in ('omega_e', 'g'):
        if isinstance(values.get(name), (int, float)):
            values[name] = (float(values[name]),) * n
    try:
        return TcSystem(**values)
    except TypeError as ex:
        raise ConfigInvalid(f'Incomplete system section: {ex}') from ex


def scenario_from_dict(data):
    if not isinstance(data, dict) or data.get('leapp') != SCENARIO_LEAPP or data.get('format_version') != FORMAT_VERSION:
        raise ConfigInvalid('File was not a valid scenario file: incorrect LEAPP or version')
    known = {'leapp', 'format_version'} | {field.name for field in dataclasses.fields(ScenarioConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigInvalid(f'Unknown top-level keys: {", ".join(unknown)}')
    initial = dict(_section(data, 'initial', InitialConfig))
    initial['emitters'] = tuple(initial.get('emitters', ()))
    try:
        config = ScenarioConfig(
            name=str(data.get('name') or 'scenario'),
            description=str(data.get('description', '')),
            system=_system(data),
            initial=InitialConfig(**initial),
            algorithm=AlgorithmConfig(**_section(data, 'algorithm', AlgorithmConfig)),
            run=RunConfig(**_section(data, 'run', RunConfig)),
            seed=data.get('seed', 0),
            output_path=data.get('output_path'),
        )
        validate_scenario(config)
    except TypeError as ex:
        raise ConfigInvalid(f'Malformed scenario: {ex}') from ex
    return config


def load_scenario(path):
    '''Reads and validates a scenario file; OSError propagates for unreadable files'''
    with open(path, 'r', encoding='utf8') as config_file:
        try:
            data = json.load(config_file)
        except json.JSONDecodeError as ex:
            raise ConfigInvalid(f'File was not a valid scenario file: {ex}') from ex
    return scenario_from_dict(data)


def save_scenario(config, path):
    with open(path, 'w', encoding='utf8', newline='\n') as config_file:
        json.dump(config.to_dict(), config_file, indent=4, sort_keys=True)
        config_file.write('\n')


def validate_scenario(config):
    alg, run = config.algorithm, config.run
    if alg.kind not in ALGORITHM_KINDS:
        raise ConfigInvalid(f'algorithm.kind must be one of {", ".join(ALGORITHM_KINDS)}, got {alg.kind!r}')
    if run.kind not in RUN_KINDS:
        raise ConfigInvalid(f'run.kind must be one of {", ".join(RUN_KINDS)}, got {run.kind!r}')
    if run.mode not in RUN_MODES:
        raise ConfigInvalid(f'run.mode must be exact or shot, got {run.mode!r}')
    if alg.impl not in wml.IMPL_KINDS:
        raise ConfigInvalid(f'algorithm.impl must be one of {", ".join(wml.IMPL_KINDS)}, got {alg.impl!r}')
    if alg.kind == 'wml' and alg.impl == wml.EXACT_KRAUS and (run.mode == 'shot' or run.kind == 'g2'):
        raise ConfigInvalid('ExactKraus has no shot-mode realization')
    if alg.n < 1 or alg.order not in (1, 2) or alg.trajectories < 1 or alg.dt <= 0:
        raise ConfigInvalid('algorithm needs n >= 1, order 1 or 2, trajectories >= 1 and dt > 0')
    if alg.max_delta is not None and alg.max_delta <= 0:
        raise ConfigInvalid('algorithm.max_delta must be positive')
    if run.num_points < 1 or run.t_end < run.t_start or run.shots < 1:
        raise ConfigInvalid('run needs num_points >= 1, shots >= 1 and t_end >= t_start')
    if run.batches < 1 or run.shots_per_batch < 1 or run.steady_time < 0:
        raise ConfigInvalid('run needs batches >= 1, shots_per_batch >= 1 and steady_time >= 0')
    if not isinstance(config.seed, int) or isinstance(config.seed, bool) or not 0 <= config.seed < 2 ** 64:
        raise ConfigInvalid(f'seed must be an unsigned 64-bit integer, got {config.seed!r}')
    basis_bits(config.system, config.initial.cavity, config.initial.emitters)


def config_hash(config):
    '''Digest of everything that determines the numbers (the output path does not)'''
    data = config.to_dict()
    data.pop('output_path')
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode('utf8')).hexdigest()[:16]


def _shot_register_size(config):
    n = config.system.num_qubits
    if config.algorithm.kind == 'splitj':
        return n + 1
    if config.algorithm.kind in ('wml', 'hybrid'):
        # the cavity Lindblad program (blocks B and C) is the widest, plus the HybridJ ancilla
        impl = wml.HYBRID_J if config.algorithm.kind == 'hybrid' else config.algorithm.impl
        return n + 2 * config.system.cavity_qubits + (1 if impl == wml.HYBRID_J else 0)
    return n


def _uses_shots(config):
    if config.algorithm.kind in ('oracle', 'mcwf'):
        return False
    return config.run.kind == 'g2' or config.run.mode == 'shot'


def check_register(config, with_oracle=True):
    n = config.system.num_qubits
    if _uses_shots(config):
        width = _shot_register_size(config)
        if width > MAX_STATEVECTOR_QUBITS:
            raise RegisterTooLarge(f'Shot-mode run needs {width} qubits, the cap is {MAX_STATEVECTOR_QUBITS}')
    elif n > MAX_DENSITY_QUBITS:
        raise RegisterTooLarge(f'Exact-mode run needs a {n}-qubit density matrix, the cap is {MAX_DENSITY_QUBITS}')
    if with_oracle and n > MAX_DENSITY_QUBITS:
        logfunc(f'Oracle skipped: {n} qubits exceed the density-matrix cap of {MAX_DENSITY_QUBITS}')


def _oracle_allowed(config, with_oracle):
    return with_oracle and config.system.num_qubits <= MAX_DENSITY_QUBITS


def _final_state(config, duration, t0, shots, seed):
    '''Density matrix after duration, or one ShotRecord per shot when shots is set'''
    sys, alg = config.system, config.algorithm
    initial = initial_state(sys, config.initial.cavity, config.initial.emitters)
    if alg.kind == 'oracle':
        return oracle.evolve_liouville(sys, initial.dm, duration, t0=t0)
    if alg.kind == 'mcwf':
        psi0 = np.zeros(sys.dim, dtype=complex)
        psi0[int(basis_bits(sys, config.initial.cavity, config.initial.emitters), 2)] = 1.0
        return oracle.mcwf_evolve(sys, psi0, duration, alg.dt, alg.trajectories, make_rng(seed), t0)
    mode = ShotMode(shots, seed) if shots else Mode.EXACT
    if alg.kind == 'splitj':
        out = splitj.evolve(sys, initial, duration, alg.n, mode, alg.order, t0)
    else:
        impl = wml.HYBRID_J if alg.kind == 'hybrid' else alg.impl
        out = wml.evolve_wml(sys, initial, duration, alg.n, impl, mode, t0, alg.max_delta)
    return out if shots else out.dm


def sample_records(rho, shots, seed, num_qubits):
    '''Computational-basis measurement of a density matrix, one record per shot'''
    p = np.clip(np.real(np.diag(rho)), 0.0, None)
    indices = make_rng(seed).choice(p.size, size=shots, p=p / p.sum())
    return [ShotRecord(format(int(i), f'0{num_qubits}b'), seed) for i in indices]


def self_check(rho, sys, label):
    '''Raises ToleranceFailure when a final state is not a valid density matrix of the register'''
    problems = RegisterState.from_density_matrix(rho).check(SELF_CHECK_TOL)
    sample = populations_exact(rho, sys)
    if not -SELF_CHECK_TOL <= sample.cavity <= sys.max_excitations + SELF_CHECK_TOL:
        problems.append(f'cavity population {sample.cavity:.6g} out of range')
    if any(not -SELF_CHECK_TOL <= p <= 1 + SELF_CHECK_TOL for p in sample.emitters):
        problems.append('emitter population out of [0, 1]')
    if problems:
        raise ToleranceFailure(f'{label}: ' + '; '.join(problems))


def _plan_metadata(config, duration):
    sys, alg = config.system, config.algorithm
    meta = {'algorithm': alg.kind, 'num_qubits': sys.num_qubits, 'n_emitters': sys.n_emitters}
    if alg.kind == 'splitj':
        meta['steps'] = alg.n
        meta['trotter_order'] = alg.order
        if duration > 0:
            meta['advisory_steps'] = splitj.log_step_advice(sys, duration, alg.n, order=alg.order)
    elif alg.kind in ('wml', 'hybrid'):
        impl = wml.HYBRID_J if alg.kind == 'hybrid' else alg.impl
        meta['impl'] = impl
        meta['c'] = wml.tc_program_ensemble(sys).c
        if duration > 0:
            meta['steps'] = wml.log_wml_plan(sys, duration, alg.n, alg.max_delta, impl)
    elif alg.kind == 'mcwf':
        meta['dt'] = alg.dt
        meta['trajectories'] = alg.trajectories
    return meta


def run_scenario(config, with_oracle=True):
    '''Runs the scenario and returns its ResultSeries'''
    validate_scenario(config)
    check_register(config, with_oracle)
    sys = config.system
    logfunc(f'Scenario {config.name}: {sys.n_emitters} emitters, {sys.num_qubits} register qubits, '
            f'algorithm {config.algorithm.kind}, run {config.run.kind}')
    logruninfo(f'Scenario: {config.name}')
    logruninfo(f'Register qubits: {sys.num_qubits}')
    logruninfo(f'Seed: {config.seed}')
    series = ResultSeries(config.name, config.run.kind, config.seed, config_hash(config), sys.n_emitters)
    if config.run.kind == 'g2':
        _run_g2(config, series, with_oracle)
    else:
        _run_timeseries(config, series, with_oracle)
    series.metadata['git_describe'] = git_describe()
    return series


def _run_timeseries(config, series, with_oracle):
    sys, run = config.system, config.run
    times = np.linspace(run.t_start, run.t_end, run.num_points)
    shots = run.shots if _uses_shots(config) else None
    seeds = split_seeds(config.seed, len(times))
    series.metadata.update(_plan_metadata(config, run.t_end - run.t_start))
    series.metadata['mode'] = 'shot' if shots else 'exact'
    for k, time in enumerate(times):
        result = _final_state(config, float(time - run.t_start), run.t_start, shots, seeds[k])
        if shots:
            series.rows.append(populations_from_shots(result, sys, float(time)))
        else:
            self_check(result, sys, f'State at t = {time:.6g} ns')
            series.rows.append(populations_exact(result, sys, float(time)))
        if k % PROGRESS_EVERY == 0 or k == len(times) - 1:
            logfunc(f'Point {k + 1}/{len(times)} at t = {time:.6g} ns done')
    if _oracle_allowed(config, with_oracle):
        logfunc('Computing the master-equation reference')
        rho0 = initial_state(sys, config.initial.cavity, config.initial.emitters).dm
        references = oracle.evolve_liouville_series(sys, rho0, [float(t) for t in times], t0=run.t_start)
        series.oracle_rows = [populations_exact(rho, sys, float(t)) for rho, t in zip(references, times)]


def _run_g2(config, series, with_oracle):
    sys, run = config.system, config.run
    shots = run.shots_per_batch
    series.metadata.update(_plan_metadata(config, run.steady_time))
    series.metadata['steady_time'] = run.steady_time
    seeds = split_seeds(config.seed, run.batches)
    exact_state = None
    if config.algorithm.kind == 'oracle':
        # deterministic; every batch samples the same stationary state
        exact_state = _final_state(config, run.steady_time, run.t_start, None, config.seed)
        self_check(exact_state, sys, 'Master-equation state')
    tallies = []
    for b, seed in enumerate(seeds):
        if exact_state is not None:
            result = sample_records(exact_state, shots, seed, sys.num_qubits)
        else:
            result = _final_state(config, run.steady_time, run.t_start, shots if _uses_shots(config) else None, seed)
            if not isinstance(result, list):
                self_check(result, sys, f'State of batch {b + 1}')
                result = sample_records(result, shots, seed, sys.num_qubits)
        tallies.append(tally_batch(result, sys))
        logfunc(f'Batch {b + 1}/{run.batches}: g2 = {tallies[-1].ratio}')
    series.g2 = g2_median_of_means(tallies)
    logfunc(f'g2(0) median of {run.batches} batches: {series.g2.ratio:.6g} '
            f'({series.g2.excluded_batches} batches without cavity excitations)')
    if run.reference_g2 is not None:
        series.metadata['reference_g2'] = run.reference_g2
    if _oracle_allowed(config, with_oracle):
        _g2_reference(config, series, exact_state)


def _g2_reference(config, series, rho=None):
    '''Master-equation g2 at the steady time, with its stationarity and the target the estimate is held to'''
    sys, run = config.system, config.run
    t_end = run.t_start + run.steady_time
    if rho is None:
        rho0 = initial_state(sys, config.initial.cavity, config.initial.emitters).dm
        rho = oracle.evolve_liouville(sys, rho0, run.steady_time, t0=run.t_start)
    exact = g2_exact(rho, sys)
    meta = series.metadata
    meta['oracle_g2'] = exact
    meta['steady_state_residual'] = oracle.stationarity(sys, rho, t_end)
    logfunc(f'Master-equation g2(0) at {run.steady_time} ns: {exact:.6g} '
            f'(relative residual {meta["steady_state_residual"]:.3g})')
    if meta['steady_state_residual'] > oracle.STEADY_STATE_TOL:
        logfunc(f'Warning: state at {run.steady_time} ns is not stationary, '
                f'residual above {oracle.STEADY_STATE_TOL:g}')
    if sys.num_qubits <= oracle.DENSE_LIOUVILLE_QUBITS:
        later = oracle.evolve_liouville(sys, rho, run.steady_time, t0=t_end)
        meta['oracle_g2_drift'] = abs(g2_exact(later, sys) - exact)
    target = exact
    meta['g2_target'] = 'oracle'
    if run.reference_g2 is not None:
        meta['reference_deviation'] = abs(exact - run.reference_g2)
        if meta['reference_deviation'] <= REFERENCE_AGREEMENT:
            target = run.reference_g2
            meta['g2_target'] = 'reference'
        else:
            logfunc(f'Master-equation g2(0) differs from the reference {run.reference_g2:g} by '
                    f'{meta["reference_deviation"]:.3g}; estimate is held to the master-equation value')
    meta['target_deviation'] = abs(series.g2.ratio - target)
