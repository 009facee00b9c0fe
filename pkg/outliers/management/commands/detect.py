"""
Management command to flag outliers in a dataset CSV.

Writes ``index,distance,label`` rows and prints a summary line
(df, cutoff, flagged count).

Usage:
    python manage.py detect --mode hd --in data.csv --B 450 --alpha 0.05 --seed 7 --out labels.csv
    python manage.py detect --in data.csv --out labels.csv --score  # print the zero-one error
    python manage.py detect --in data.csv --out labels.csv --diagnostics diag.csv
"""

from outliers.benchmark import zero_one_loss
from outliers.conf import detection_setting
from outliers.datasets import read_dataset, write_detections, write_diagnostics
from outliers.detection import MODES, detect
from outliers.exceptions import ConfigurationError, DataFormatError
from outliers.management.base import (
    DetectionCommand,
    add_mcd_arguments,
    add_rssl_arguments,
    default_mcd_config,
    default_rssl_config,
    mcd_config_from,
    rssl_config_from,
)


class Command(DetectionCommand):
    help = 'Detect outliers with random subspace learning or MCD'

    def add_arguments(self, parser):
        parser.add_argument('--mode', choices=MODES, default='auto',
                            help='ld (n >> p), hd (n << p), mcd, or auto (hd iff n < p)')
        parser.add_argument('--in', dest='input', required=True, help='Dataset CSV')
        parser.add_argument('--out', dest='output', required=True, help='Destination CSV for distances and labels')
        parser.add_argument('--seed', type=int, help='Random seed')
        parser.add_argument('--workers', type=int, default=detection_setting('WORKERS'),
                            help='Threads for the ensemble (output does not depend on it)')
        parser.add_argument('--score', action='store_true',
                            help="Print the zero-one error against the dataset's label column")
        parser.add_argument('--diagnostics', metavar='PATH',
                            help='Write bootstrap log-determinants, variable votes and scan scores to this CSV')
        add_rssl_arguments(parser)
        add_mcd_arguments(parser)

    def handle(self, *args, **options):
        loaded = read_dataset(options['input'])
        if options['score'] and loaded.labels is None:
            raise DataFormatError("--score needs a 'label' column in the dataset", line=1)
        if options['diagnostics'] and options['mode'] == 'mcd':
            raise ConfigurationError('--diagnostics needs an ensemble mode (ld, hd or auto)')

        result = detect(
            loaded.data,
            mode=options['mode'],
            rssl=rssl_config_from(options, default_rssl_config()),
            mcd=mcd_config_from(options, default_mcd_config()),
            workers=options['workers'],
        )
        write_detections(options['output'], result.distances, result.labels)
        if options['diagnostics']:
            write_diagnostics(
                options['diagnostics'],
                [s.log_det for s in result.scores],
                result.frequencies.counts if result.frequencies is not None else None,
                result.scan.scores if result.scan is not None else None,
            )

        self.stdout.write(f"df={result.df} cutoff={result.cutoff:.6g} flagged={result.flagged}")
        if options['score']:
            self.stdout.write(f"zero_one_error={zero_one_loss(loaded.labels, result.labels):.6g}")
