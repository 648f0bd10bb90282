'''Result series and their CSV / JSON / HTML renderings.

Numbers are written with repr(float) and JSON keys are sorted, so equal runs give
byte-identical files. Wall-clock data only appears when the caller adds a timings block.
'''

import codecs
import csv
import dataclasses
import json
import os
import subprocess
import typing

from scripts.artifact_report import SeriesHtmlReport
from scripts.ilapfuncs import html_tables, logfunc, sanitize_file_name, tsv
from scripts.obs import G2Estimate, PopulationSample

FORMATS = ('csv', 'json', 'html')


@dataclasses.dataclass
class ResultSeries:
    name: str
    kind: str
    seed: int
    config_hash: str
    n_emitters: int
    rows: typing.List[PopulationSample] = dataclasses.field(default_factory=list)
    oracle_rows: typing.Optional[typing.List[PopulationSample]] = None
    g2: typing.Optional[G2Estimate] = None
    metadata: dict = dataclasses.field(default_factory=dict)


def git_describe():
    '''Source revision of this checkout, or "unknown" outside a git work tree'''
    try:
        completed = subprocess.run(['git', 'describe', '--always', '--dirty'], capture_output=True, text=True,
                                   cwd=os.path.dirname(os.path.abspath(__file__)), timeout=10)
    except (OSError, subprocess.SubprocessError):
        return 'unknown'
    return completed.stdout.strip() if completed.returncode == 0 and completed.stdout.strip() else 'unknown'


def format_value(value):
    if value is None:
        return ''
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _optional_float(text):
    return float(text) if text != '' else None


def timeseries_headers(n_emitters, with_oracle):
    headers = ['time_ns', 'cavity_pop', 'cavity_stderr']
    for j in range(1, n_emitters + 1):
        headers += [f'emitter_{j}', f'emitter_{j}_stderr']
    if with_oracle:
        headers.append('oracle_cavity_pop')
        headers += [f'oracle_emitter_{j}' for j in range(1, n_emitters + 1)]
    return headers


def series_table(series):
    '''Header list and rows of formatted cells'''
    if series.kind == 'g2':
        estimate = series.g2
        rows = [[str(k), format_value(ratio), format_value(median)]
                for k, (ratio, median) in enumerate(zip(estimate.batches, estimate.running_median), start=1)]
        return ['batch', 'ratio', 'running_median'], rows
    with_oracle = series.oracle_rows is not None
    rows = []
    for k, sample in enumerate(series.rows):
        row = [format_value(sample.time), format_value(sample.cavity), format_value(sample.cavity_stderr)]
        for value, err in zip(sample.emitters, sample.emitter_stderr):
            row += [format_value(value), format_value(err)]
        if with_oracle:
            reference = series.oracle_rows[k]
            row.append(format_value(reference.cavity))
            row += [format_value(value) for value in reference.emitters]
        rows.append(row)
    return timeseries_headers(series.n_emitters, with_oracle), rows


def _sample_dict(sample):
    return {'time': sample.time, 'cavity': sample.cavity, 'cavity_stderr': sample.cavity_stderr,
            'emitters': list(sample.emitters), 'emitter_stderr': list(sample.emitter_stderr)}


def _sample_from_dict(data):
    return PopulationSample(data['time'], data['cavity'], tuple(data['emitters']), data['cavity_stderr'],
                            tuple(data['emitter_stderr']))


def to_json(series):
    payload = {
        'name': series.name,
        'kind': series.kind,
        'seed': series.seed,
        'config_hash': series.config_hash,
        'n_emitters': series.n_emitters,
        'rows': [_sample_dict(s) for s in series.rows],
        'oracle_rows': None if series.oracle_rows is None else [_sample_dict(s) for s in series.oracle_rows],
        'g2': None if series.g2 is None else {
            'numerator': series.g2.numerator,
            'denominator': series.g2.denominator,
            'ratio': series.g2.ratio,
            'batches': list(series.g2.batches),
            'running_median': list(series.g2.running_median),
            'excluded_batches': series.g2.excluded_batches,
        },
        'metadata': series.metadata,
    }
    return json.dumps(payload, sort_keys=True, indent=1) + '\n'


def from_json(text):
    data = json.loads(text)
    g2 = data.get('g2')
    if g2 is not None:
        g2 = G2Estimate(g2['numerator'], g2['denominator'], g2['ratio'], tuple(g2['batches']),
                        tuple(g2['running_median']), g2['excluded_batches'])
    oracle_rows = data.get('oracle_rows')
    return ResultSeries(data['name'], data['kind'], data['seed'], data['config_hash'], data['n_emitters'],
                        [_sample_from_dict(s) for s in data['rows']],
                        None if oracle_rows is None else [_sample_from_dict(s) for s in oracle_rows],
                        g2, data.get('metadata', {}))


def series_from_table(name, headers, rows):
    '''Rebuilds a series from table cells; run metadata is not part of a table'''
    if headers[:1] == ['batch']:
        batches = tuple(_optional_float(row[1]) for row in rows)
        running = tuple(_optional_float(row[2]) for row in rows)
        excluded = sum(1 for ratio in batches if ratio is None)
        estimate = G2Estimate(None, None, running[-1] if running else None, batches, running, excluded)
        return ResultSeries(name, 'g2', None, '', 0, g2=estimate)
    n_emitters = sum(1 for h in headers if h.startswith('emitter_') and not h.endswith('_stderr'))
    with_oracle = 'oracle_cavity_pop' in headers
    samples, references = [], []
    for row in rows:
        values = [float(cell) for cell in row]
        time = values[0]
        emitters = tuple(values[3:3 + 2 * n_emitters:2])
        errors = tuple(values[4:4 + 2 * n_emitters:2])
        samples.append(PopulationSample(time, values[1], emitters, values[2], errors))
        if with_oracle:
            start = 3 + 2 * n_emitters
            references.append(PopulationSample(time, values[start], tuple(values[start + 1:start + 1 + n_emitters]),
                                               0.0, (0.0,) * n_emitters))
    return ResultSeries(name, 'timeseries', None, '', n_emitters, samples, references if with_oracle else None)


def emit(series, fmt, report_folder):
    '''Writes the series into report_folder and returns the path of the written file.

    html writes a report page that report.generate_report turns into <name>.html.
    '''
    if fmt not in FORMATS:
        raise ValueError(f'Unknown output format {fmt!r}')
    file_name = sanitize_file_name(series.name)
    headers, rows = series_table(series)
    if fmt == 'json':
        path = os.path.join(report_folder, f'{file_name}.json')
        with open(path, 'w', encoding='utf8', newline='\n') as output:
            output.write(to_json(series))
    elif fmt == 'csv':
        path = os.path.join(report_folder, f'{file_name}.csv')
        with codecs.open(path, 'w', 'utf-8') as output:
            writer = csv.writer(output, lineterminator='\n')
            writer.writerow(headers)
            writer.writerows(rows)
    else:
        category_folder = os.path.join(report_folder, 'G2 Estimates' if series.kind == 'g2' else 'Population Series')
        os.makedirs(category_folder, exist_ok=True)
        report = SeriesHtmlReport(series.name)
        report.start_series_report(category_folder, file_name, _description(series))
        report.write_series_table(headers, rows, series.metadata)
        report.end_series_report()
        path = report.get_report_file_path()
    tsv(report_folder, headers, rows, file_name)
    logfunc(f'{fmt.upper()} output written: {path}')
    return path


def _description(series):
    if series.kind == 'g2':
        return f'Median-of-means g2(0) estimate over {len(series.g2.batches)} batches (seed {series.seed})'
    return f'Populations of the cavity and {series.n_emitters} emitters at {len(series.rows)} times (seed {series.seed})'


def parse_series(path):
    name, ext = os.path.splitext(os.path.basename(path))
    ext = ext.lower()
    if ext == '.json':
        with open(path, 'r', encoding='utf8') as data:
            return from_json(data.read())
    if ext in ('.csv', '.tsv'):
        with codecs.open(path, 'r', 'utf-8-sig') as data:
            table = list(csv.reader(data, delimiter='\t' if ext == '.tsv' else ','))
        return series_from_table(name, table[0], table[1:])
    if ext == '.html':
        headers, rows = html_tables(path)[0]
        return series_from_table(name, headers, rows)
    raise ValueError(f'Cannot parse result file {path}')
