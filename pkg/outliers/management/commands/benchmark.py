"""
Management command to run a Monte-Carlo detection benchmark.

Usage:
    python manage.py benchmark --preset desk-hd --seed 1 --out report.csv
    python manage.py benchmark --method rssl-ld --n 1500 --p 30 40 --epsilon 0.1 \
        --eta 2 5 --gamma 2 5 --pair-eta-gamma --R 20 --B 100 --out report.md --format markdown
    python manage.py benchmark --preset desk-hd --export-datasets sims/ --out report.csv
    python manage.py benchmark --preset desk-hd --comparator pcout=preds/ --out report.csv
"""

from dataclasses import replace

from outliers.benchmark import METHODS, PRESETS, REPORT_FORMATS, BenchmarkSpec, ParameterGrid, preset, run_benchmark
from outliers.conf import detection_setting
from outliers.exceptions import UsageError
from outliers.management.base import (
    DetectionCommand,
    add_mcd_arguments,
    add_rssl_arguments,
    default_mcd_config,
    default_rssl_config,
    mcd_config_from,
    rssl_config_from,
)

GRID_AXES = ('p', 'epsilon', 'eta', 'gamma', 'rho')


def comparator(value: str):
    """Parse a NAME=DIR comparator flag."""
    name, sep, directory = value.partition('=')
    if not sep or not name or not directory:
        raise ValueError(value)
    return name, directory


class Command(DetectionCommand):
    help = 'Run a Monte-Carlo outlier detection benchmark and write the report'

    def add_arguments(self, parser):
        parser.add_argument('--preset', choices=sorted(PRESETS), help='Built-in benchmark definition')
        parser.add_argument('--method', choices=sorted(METHODS), help='Detector to benchmark')
        parser.add_argument('--n', type=int, help='Observations per dataset')
        parser.add_argument('--p', type=int, nargs='+', help='Dimensions to sweep')
        parser.add_argument('--epsilon', type=float, nargs='+', help='Contamination rates to sweep')
        parser.add_argument('--eta', type=float, nargs='+', help='Location shifts to sweep')
        parser.add_argument('--gamma', type=float, nargs='+', help='Scatter inflations to sweep')
        parser.add_argument('--rho', type=float, nargs='+', help='Equicorrelations to sweep')
        parser.add_argument('--pair-eta-gamma', action='store_true', default=None,
                            help='Zip the eta and gamma lists instead of crossing them')
        parser.add_argument('--R', type=int, help='Replications per grid cell')
        parser.add_argument('--seed', dest='master_seed', type=int, default=detection_setting('SEED'),
                            help='Master seed for every dataset and detector')
        parser.add_argument('--out', dest='output', required=True, help='Report destination')
        parser.add_argument('--format', dest='report_format', choices=REPORT_FORMATS, default='csv',
                            help='Report format')
        parser.add_argument('--workers', type=int, default=detection_setting('WORKERS'),
                            help='Processes running replications (report does not depend on it)')
        parser.add_argument('--timing', action='store_true', help='Record wall-clock time per replication')
        parser.add_argument('--export-datasets', dest='export_dir',
                            help='Write every replication dataset to this directory')
        parser.add_argument('--comparator', dest='comparators', type=comparator, action='append', default=[],
                            help='External predictions as NAME=DIR (repeatable)')
        add_rssl_arguments(parser)
        add_mcd_arguments(parser)

    def build_spec(self, options) -> BenchmarkSpec:
        if options['preset']:
            spec = preset(options['preset'])
        else:
            missing = [f"--{name}" for name in ('method', 'n', 'p', 'epsilon', 'eta', 'gamma')
                       if options[name] is None]
            if missing:
                raise UsageError(f"without --preset these flags are required: {' '.join(missing)}")
            spec = BenchmarkSpec(
                grid=ParameterGrid(
                    p=options['p'],
                    epsilon=options['epsilon'],
                    eta=options['eta'],
                    gamma=options['gamma'],
                    rho=options['rho'] or (detection_setting('RHO'),),
                ),
                n=options['n'],
                method=options['method'],
                R=options['R'] or 20,
                rssl=default_rssl_config(),
                mcd=default_mcd_config(),
            )

        grid_changes = {axis: tuple(options[axis]) for axis in GRID_AXES if options[axis]}
        if options['pair_eta_gamma'] is not None:
            grid_changes['pair_eta_gamma'] = True
        changes = {
            'grid': replace(spec.grid, **grid_changes),
            'rssl': rssl_config_from({**options, 'seed': None}, spec.rssl),
            'mcd': mcd_config_from({**options, 'seed': None}, spec.mcd),
            'master_seed': options['master_seed'],
            'output_path': options['output'],
            'report_format': options['report_format'],
            'comparators': tuple(options['comparators']),
            'export_dir': options['export_dir'],
            'record_timing': options['timing'],
        }
        for name in ('method', 'n', 'R'):
            if options[name] is not None:
                changes[name] = options[name]
        return replace(spec, **changes)

    def handle(self, *args, **options):
        spec = self.build_spec(options)
        report = run_benchmark(spec, workers=options['workers'])
        failures = sum(row.failures for row in report.rows)
        self.stdout.write(self.style.SUCCESS(
            f"✓ {len(report.rows)} report rows ({failures} failed replications) -> {options['output']}"
        ))
