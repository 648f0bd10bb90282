import json

import numpy as np
import pytest

from scripts import oracle
from scripts.errors import ConfigInvalid, RegisterTooLarge, ToleranceFailure
from scripts.scenario import (AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig, check_register,
                              config_hash, load_scenario, run_scenario, sample_records, save_scenario,
                              scenario_from_dict, self_check)
from scripts.tcmodel import TcSystem


def unit_system(n=1, pump_amp=0.0):
    return TcSystem(n, 0.3, (0.1,) * n, (0.4,) * n, 0.5, 0.2, pump_amp=pump_amp)


def small_config(**changes):
    params = dict(name='small', system=unit_system(), initial=InitialConfig(cavity=1),
                  algorithm=AlgorithmConfig(kind='splitj', n=50),
                  run=RunConfig(kind='timeseries', t_start=0.0, t_end=0.5, num_points=3), seed=11)
    params.update(changes)
    return ScenarioConfig(**params)


def scenario_dict(**changes):
    data = small_config().to_dict()
    data.update(changes)
    return data


class TestScenarioFile:
    def test_dict_round_trip(self):
        config = small_config(description='three points')
        assert scenario_from_dict(config.to_dict()) == config

    def test_save_and_load(self, tmp_path):
        config = small_config()
        path = str(tmp_path / 'small.json')
        save_scenario(config, path)
        assert load_scenario(path) == config

    def test_envelope(self):
        with pytest.raises(ConfigInvalid, match='incorrect LEAPP or version'):
            scenario_from_dict(scenario_dict(leapp='other'))
        with pytest.raises(ConfigInvalid, match='incorrect LEAPP or version'):
            scenario_from_dict(scenario_dict(format_version=2))
        with pytest.raises(ConfigInvalid):
            scenario_from_dict([])

    def test_unknown_keys(self):
        with pytest.raises(ConfigInvalid, match='foo'):
            scenario_from_dict(scenario_dict(foo=1))
        data = scenario_dict()
        data['system']['bar'] = 2
        with pytest.raises(ConfigInvalid, match='bar'):
            scenario_from_dict(data)

    def test_scalar_broadcast(self):
        data = scenario_dict()
        data['system'].update(n_emitters=2, omega_e=0.1, g=0.4)
        config = scenario_from_dict(data)
        assert config.system.omega_e == (0.1, 0.1)
        assert config.system.g == (0.4, 0.4)

    def test_missing_system_field(self):
        data = scenario_dict()
        del data['system']['kappa']
        with pytest.raises(ConfigInvalid):
            scenario_from_dict(data)

    @pytest.mark.parametrize('seed', [-1, 2 ** 64, 1.5, True, '3'])
    def test_bad_seed(self, seed):
        with pytest.raises(ConfigInvalid):
            scenario_from_dict(scenario_dict(seed=seed))

    def test_exact_kraus_has_no_shots(self):
        data = scenario_dict()
        data['algorithm'].update(kind='wml', impl='ExactKraus')
        data['run']['mode'] = 'shot'
        with pytest.raises(ConfigInvalid):
            scenario_from_dict(data)

    def test_bad_choices(self):
        data = scenario_dict()
        data['algorithm']['kind'] = 'trotter'
        with pytest.raises(ConfigInvalid):
            scenario_from_dict(data)
        data = scenario_dict()
        data['initial']['cavity'] = 4
        with pytest.raises(ConfigInvalid):
            scenario_from_dict(data)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'broken.json'
        path.write_text('{"leapp": ', encoding='utf8')
        with pytest.raises(ConfigInvalid):
            load_scenario(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(str(tmp_path / 'absent.json'))


class TestConfigHash:
    def test_ignores_output_path(self):
        config = small_config()
        assert config_hash(config) == config_hash(config.replace(output_path='/tmp/elsewhere'))

    def test_follows_seed(self):
        config = small_config()
        assert config_hash(config) != config_hash(config.replace(seed=12))

    def test_format(self):
        digest = config_hash(small_config())
        assert len(digest) == 16
        int(digest, 16)


class TestRegisterCaps:
    def test_exact_cap(self):
        config = small_config(system=unit_system(11), initial=InitialConfig())
        with pytest.raises(RegisterTooLarge):
            check_register(config)

    def test_shot_mode_fits(self):
        config = small_config(system=unit_system(9), initial=InitialConfig(),
                              run=RunConfig(kind='timeseries', t_end=0.1, mode='shot', shots=10))
        check_register(config)


class TestRunTimeseries:
    def test_exact_with_oracle(self):
        series = run_scenario(small_config())
        assert len(series.rows) == 3
        assert len(series.oracle_rows) == 3
        assert series.rows[0].cavity == pytest.approx(1.0)
        assert series.rows[0].emitters == (0.0,)
        for got, reference in zip(series.rows, series.oracle_rows):
            assert got.time == reference.time
            assert abs(got.cavity - reference.cavity) < 0.02
        assert series.metadata['mode'] == 'exact'
        assert series.metadata['steps'] == 50
        assert series.config_hash == config_hash(small_config())

    def test_without_oracle(self):
        assert run_scenario(small_config(), with_oracle=False).oracle_rows is None

    def test_shot_mode_is_deterministic(self):
        config = small_config(run=RunConfig(kind='timeseries', t_end=0.5, num_points=2, mode='shot', shots=200))
        first = run_scenario(config, with_oracle=False)
        second = run_scenario(config, with_oracle=False)
        assert first.rows == second.rows
        assert first.metadata['mode'] == 'shot'
        assert first.rows[0].cavity == 1.0
        assert first.rows[1].cavity_stderr > 0

    def test_oracle_kind_matches_reference(self):
        series = run_scenario(small_config(algorithm=AlgorithmConfig(kind='oracle')))
        for got, reference in zip(series.rows, series.oracle_rows):
            assert got.cavity == pytest.approx(reference.cavity, abs=1e-12)

    def test_mcwf(self):
        config = small_config(algorithm=AlgorithmConfig(kind='mcwf', dt=0.01, trajectories=400),
                              run=RunConfig(kind='timeseries', t_end=0.5, num_points=2))
        series = run_scenario(config)
        assert series.rows[0].cavity == pytest.approx(1.0)
        assert abs(series.rows[1].cavity - series.oracle_rows[1].cavity) < 0.1
        assert series.metadata['trajectories'] == 400

    def test_wml(self):
        config = small_config(algorithm=AlgorithmConfig(kind='hybrid', n=10, max_delta=0.005),
                              run=RunConfig(kind='timeseries', t_end=0.2, num_points=2))
        series = run_scenario(config)
        assert series.metadata['impl'] == 'HybridJ'
        assert series.metadata['steps'] >= 10
        assert abs(series.rows[1].cavity - series.oracle_rows[1].cavity) < 0.05


class TestRunG2:
    def oracle_config(self, reference_g2=0.5):
        return small_config(system=unit_system(1, 0.3), initial=InitialConfig(),
                            algorithm=AlgorithmConfig(kind='oracle'),
                            run=RunConfig(kind='g2', steady_time=2.0, batches=5, shots_per_batch=2000,
                                          reference_g2=reference_g2))

    def test_oracle_kind(self):
        series = run_scenario(self.oracle_config())
        assert series.kind == 'g2'
        assert len(series.g2.batches) == 5
        assert series.g2.ratio is not None
        meta = series.metadata
        assert meta['reference_deviation'] == pytest.approx(abs(meta['oracle_g2'] - 0.5))
        assert meta['g2_target'] == ('reference' if meta['reference_deviation'] <= 0.02 else 'oracle')
        assert meta['steady_state_residual'] >= 0
        assert meta['oracle_g2_drift'] >= 0

    def test_oracle_kind_evolves_once(self, monkeypatch):
        calls = []
        evolve = oracle.evolve_liouville

        def counted(*args, **kwargs):
            calls.append(args[2])
            return evolve(*args, **kwargs)

        monkeypatch.setattr(oracle, 'evolve_liouville', counted)
        series = run_scenario(self.oracle_config(), with_oracle=False)
        assert calls == [2.0]
        assert len(set(series.g2.batches)) > 1

    def test_target_follows_reference_agreement(self):
        exact = run_scenario(self.oracle_config(None)).metadata['oracle_g2']
        close = run_scenario(self.oracle_config(exact + 0.01))
        assert close.metadata['g2_target'] == 'reference'
        assert close.metadata['target_deviation'] == pytest.approx(abs(close.g2.ratio - exact - 0.01))
        far = run_scenario(self.oracle_config(exact + 0.5))
        assert far.metadata['g2_target'] == 'oracle'
        assert far.metadata['target_deviation'] == pytest.approx(abs(far.g2.ratio - exact))

    def test_stationary_state_is_reported(self):
        static = TcSystem(1, 0.3, (0.1,), (0.4,), 0.5, 0.2, pump_amp=0.3, frame_shift=0.3)
        series = run_scenario(self.oracle_config().replace(
            system=static, run=RunConfig(kind='g2', steady_time=200.0, batches=3, shots_per_batch=500)))
        assert series.metadata['steady_state_residual'] <= oracle.STEADY_STATE_TOL
        assert series.metadata['oracle_g2_drift'] < 1e-6
        assert series.metadata['g2_target'] == 'oracle'
        assert 'reference_deviation' not in series.metadata

    def test_splitj_shots(self):
        config = small_config(system=unit_system(1, 0.3), initial=InitialConfig(),
                              algorithm=AlgorithmConfig(kind='splitj', n=20),
                              run=RunConfig(kind='g2', steady_time=1.0, batches=3, shots_per_batch=300))
        first = run_scenario(config, with_oracle=False)
        second = run_scenario(config, with_oracle=False)
        assert first.g2 == second.g2
        assert len(first.g2.running_median) == 3
        assert 'oracle_g2' not in first.metadata


class TestSelfCheck:
    def test_rejects_negative_population(self):
        rho = np.diag([1.2, -0.2, 0, 0, 0, 0, 0, 0]).astype(complex)
        with pytest.raises(ToleranceFailure, match='final'):
            self_check(rho, unit_system(), 'final')

    def test_accepts_density_matrix(self):
        self_check(np.eye(8, dtype=complex) / 8, unit_system(), 'mixed')

    def test_sample_records(self):
        rho = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        first = sample_records(rho, 100, 4, 2)
        assert [r.bitstring for r in first] == [r.bitstring for r in sample_records(rho, 100, 4, 2)]
        assert {r.bitstring for r in first} <= {'00', '11'}


def test_scenario_json_is_sorted(tmp_path):
    path = tmp_path / 'small.json'
    save_scenario(small_config(), str(path))
    data = json.loads(path.read_text(encoding='utf8'))
    assert list(data) == sorted(data)
    assert data['leapp'] == 'otcapp'
