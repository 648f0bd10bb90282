import argparse
import io
import os.path
import sys
import traceback

import preset_loader
import scripts.report as report
from scripts import results
from scripts.errors import ConfigInvalid, OtcError, ToleranceFailure
from scripts.ilapfuncs import OutputParameters, logfunc, logruninfo
from scripts.scenario import config_hash, load_scenario, run_scenario, save_scenario
from scripts.version_info import otcapp_version
from time import process_time, gmtime, strftime, perf_counter

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3


def validate_args(args, loader):
    if args.list_presets:
        return  # Skip further validation if --list-presets is used

    if args.export_preset:
        if args.export_preset not in loader:
            raise argparse.ArgumentError(None, f'Unknown preset {args.export_preset}. Use --list-presets.')
        if args.output and not os.path.isdir(args.output):
            raise argparse.ArgumentError(None, 'OUTPUT folder does not exist! Run the program again.')
        return

    if args.command == 'run' and not args.config:
        raise argparse.ArgumentError(None, 'No configuration file provided after "run". Run the program again.')
    if not args.config and not args.preset:
        raise argparse.ArgumentError(None, 'Provide "run <config>" or --preset NAME. Run the program again.')
    if args.config and args.preset:
        raise argparse.ArgumentError(None, 'Use either a configuration file or --preset, not both.')
    if args.config and not os.path.exists(args.config):
        raise argparse.ArgumentError(None, 'Configuration file not found! Run the program again.')
    if args.preset and args.preset not in loader:
        raise argparse.ArgumentError(None, f'Unknown preset {args.preset}. Use --list-presets.')
    if args.output and not os.path.isdir(args.output):
        raise argparse.ArgumentError(None, 'OUTPUT folder does not exist! Run the program again.')


def list_presets(loader):
    for category in preset_loader.CATEGORIES:
        print(f'{category}:')
        for preset in loader.by_category(category):
            print(f'  {preset.name:8} {preset.description}')


def main(argv=None):
    parser = argparse.ArgumentParser(description='OTCAPP: open Tavis-Cummings simulation on a simulated quantum register.')
    parser.add_argument('command', nargs='?', choices=['run'], help='Run the scenario given by the configuration file')
    parser.add_argument('config', nargs='?', help='Path to a scenario configuration file (.json)')
    parser.add_argument('--preset', required=False, action="store", help='Run a built-in scenario (fig1 .. fig9)')
    parser.add_argument('--seed', required=False, type=int, action="store", help='Override the scenario seed')
    parser.add_argument('-o', '--output', required=False, action="store",
                        help='Path to base output folder (this must exist)')
    parser.add_argument('--format', choices=list(results.FORMATS), default='csv', type=str.lower,
                        help='Result file format')
    parser.add_argument('--no-oracle', required=False, action="store_true",
                        help='Skip the master-equation reference columns')
    parser.add_argument('--list-presets', required=False, action="store_true",
                        help='List the built-in scenarios and exit')
    parser.add_argument('--export_preset', required=False, action="store",
                        help='Write the named preset as an editable configuration file and exit')
    parser.add_argument('--timings', required=False, action="store_true",
                        help='Add processing times to the result metadata (output is no longer byte-stable)')

    loader = preset_loader.PresetLoader()
    args = parser.parse_args(argv)

    try:
        validate_args(args, loader)
    except argparse.ArgumentError as e:
        parser.error(str(e))

    if args.list_presets:
        list_presets(loader)
        return EXIT_OK

    if args.export_preset:
        filename = os.path.join(args.output or '.', f'{args.export_preset}.json')
        save_scenario(loader.build(args.export_preset), filename)
        print(f'Preset saved: {filename}')
        return EXIT_OK

    source = args.config or f'preset {args.preset}'
    try:
        config = load_scenario(args.config) if args.config else loader.build(args.preset)
    except (ConfigInvalid, OSError) as ex:
        print(f'Error was {ex}')
        return EXIT_CONFIG
    if args.seed is not None:
        config = config.replace(seed=args.seed)

    output_path = os.path.abspath(args.output or config.output_path or '.')
    if not os.path.isdir(output_path):
        print('OUTPUT folder does not exist! Run the program again.')
        return EXIT_CONFIG

    out_params = OutputParameters(output_path)
    return crunch_scenario(config, source, out_params, args.format, not args.no_oracle, args.timings)


def crunch_scenario(config, source, out_params, output_format, with_oracle, timings):
    start = process_time()
    start_wall = perf_counter()

    logfunc('Processing started. Please wait. This may take a few minutes...')
    logfunc('\n--------------------------------------------------------------------------------------')
    logfunc(f'OTCAPP v{otcapp_version}: Open Tavis-Cummings simulation')
    logfunc(f'Configuration: {source}')
    logfunc(f'Scenario hash: {config_hash(config)}, seed {config.seed}')
    logfunc('--------------------------------------------------------------------------------------')
    logruninfo(f'Configuration: {source}')

    try:
        series = run_scenario(config, with_oracle)
    except OtcError as ex:
        logfunc(f'Running {config.name} had errors!')
        logfunc(f'Error was {ex}')
        temp_file = io.StringIO()
        traceback.print_exc(file=temp_file)
        logfunc(f'Exception Traceback: {temp_file.getvalue()}')
        temp_file.close()
        return EXIT_TOLERANCE if isinstance(ex, ToleranceFailure) else EXIT_CONFIG

    logfunc('')
    logfunc('Processes completed.')
    end = process_time()
    end_wall = perf_counter()
    cpu_secs = end - start
    logfunc("Processing time = {}".format(strftime('%H:%M:%S', gmtime(cpu_secs))))
    run_time_secs = end_wall - start_wall
    run_time_HMS = strftime('%H:%M:%S', gmtime(run_time_secs))
    logfunc("Processing time (wall)= {}".format(run_time_HMS))
    if timings:
        series.metadata['timings'] = {'cpu_seconds': cpu_secs, 'wall_seconds': run_time_secs}

    path = results.emit(series, output_format, out_params.report_folder_base)
    if output_format == 'html':
        logfunc('Report generation started.')
        report.generate_report(out_params.report_folder_base, run_time_secs, run_time_HMS, config.name, source,
                               {'Seed': config.seed, 'Scenario hash': series.config_hash,
                                'Algorithm': config.algorithm.kind, 'Run kind': config.run.kind})
        logfunc('Report generation Completed.')
    logfunc('')
    logfunc(f'Result file: {path}')
    logfunc(f'Report location: {out_params.report_folder_base}')
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
