import glob
import os

import pytest

import otcapp
from scripts import scenario
from scripts.errors import ToleranceFailure
from scripts.results import parse_series
from scripts.scenario import AlgorithmConfig, InitialConfig, RunConfig, ScenarioConfig, load_scenario, save_scenario
from scripts.tcmodel import TcSystem


def write_config(folder):
    config = ScenarioConfig(name='cli small', system=TcSystem(1, 0.3, (0.1,), (0.4,), 0.5, 0.2),
                            initial=InitialConfig(cavity=1), algorithm=AlgorithmConfig(kind='splitj', n=20),
                            run=RunConfig(kind='timeseries', t_end=0.4, num_points=3), seed=2)
    path = os.path.join(folder, 'small.json')
    save_scenario(config, path)
    return path


def result_files(folder, name):
    return glob.glob(os.path.join(folder, 'OTCAPP_Reports_*', name))


class TestCommands:
    def test_list_presets(self, capsys):
        assert otcapp.main(['--list-presets']) == otcapp.EXIT_OK
        out = capsys.readouterr().out
        assert 'fig1' in out
        assert 'fig9' in out
        assert out.index('Population Series:') < out.index('fig1') < out.index('G2 Estimates:') < out.index('fig7')

    def test_export_preset(self, tmp_path):
        assert otcapp.main(['--export_preset', 'fig1', '-o', str(tmp_path)]) == otcapp.EXIT_OK
        assert load_scenario(str(tmp_path / 'fig1.json')).name == 'fig1'

    def test_unknown_preset(self):
        with pytest.raises(SystemExit) as exit_info:
            otcapp.main(['--preset', 'fig10'])
        assert exit_info.value.code == 2

    def test_nothing_to_run(self):
        with pytest.raises(SystemExit) as exit_info:
            otcapp.main([])
        assert exit_info.value.code == 2

    def test_invalid_config(self, tmp_path):
        path = tmp_path / 'bad.json'
        path.write_text('{"leapp": "otcapp", "format_version": 7}', encoding='utf8')
        assert otcapp.main(['run', str(path), '-o', str(tmp_path)]) == otcapp.EXIT_CONFIG


class TestRun:
    def test_output_is_byte_stable(self, tmp_path):
        config = write_config(str(tmp_path))
        contents = []
        for folder in ('first', 'second'):
            out = tmp_path / folder
            out.mkdir()
            assert otcapp.main(['run', config, '-o', str(out), '--format', 'json']) == otcapp.EXIT_OK
            files = result_files(str(out), 'cli small.json')
            assert len(files) == 1
            with open(files[0], 'rb') as data:
                contents.append(data.read())
        assert contents[0] == contents[1]

    def test_seed_override_and_csv(self, tmp_path):
        config = write_config(str(tmp_path))
        assert otcapp.main(['run', config, '-o', str(tmp_path), '--seed', '5', '--no-oracle']) == otcapp.EXIT_OK
        files = result_files(str(tmp_path), 'cli small.csv')
        assert len(files) == 1
        series = parse_series(files[0])
        assert len(series.rows) == 3
        assert series.oracle_rows is None

    def test_html_report(self, tmp_path):
        config = write_config(str(tmp_path))
        assert otcapp.main(['run', config, '-o', str(tmp_path), '--format', 'html']) == otcapp.EXIT_OK
        assert len(result_files(str(tmp_path), 'index.html')) == 1
        files = result_files(str(tmp_path), 'cli small.html')
        assert len(parse_series(files[0]).rows) == 3

    def test_tolerance_failure_exit_code(self, tmp_path, monkeypatch):
        def failing_check(rho, sys, label):
            raise ToleranceFailure(f'{label}: forced')

        monkeypatch.setattr(scenario, 'self_check', failing_check)
        config = write_config(str(tmp_path))
        assert otcapp.main(['run', config, '-o', str(tmp_path)]) == otcapp.EXIT_TOLERANCE
