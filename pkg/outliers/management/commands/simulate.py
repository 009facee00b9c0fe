"""
Management command to simulate an epsilon-contaminated Gaussian dataset.

Usage:
    python manage.py simulate --n 100 --p 1000 --epsilon 0.1 --eta 5 --gamma 5 \
        --rho 0.1 --seed 7 --out data.csv
"""

from outliers.conf import detection_setting
from outliers.datasets import write_dataset
from outliers.management.base import DetectionCommand
from outliers.simulation import ContaminationConfig, sample_dataset


class Command(DetectionCommand):
    help = 'Simulate a contaminated multivariate Gaussian dataset with ground-truth labels'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, required=True, help='Number of observations')
        parser.add_argument('--p', type=int, required=True, help='Number of variables')
        parser.add_argument('--epsilon', type=float, default=detection_setting('EPSILON'),
                            help='Contamination rate in [0, 0.5)')
        parser.add_argument('--eta', type=float, default=detection_setting('ETA'),
                            help='Outlier location shift, applied to every coordinate')
        parser.add_argument('--gamma', type=float, default=detection_setting('GAMMA'),
                            help='Outlier scatter inflation factor')
        parser.add_argument('--rho', type=float, default=detection_setting('RHO'),
                            help='Equicorrelation of the covariance, in [0, 1)')
        parser.add_argument('--seed', type=int, default=detection_setting('SEED'), help='Random seed')
        parser.add_argument('--out', dest='output', required=True, help='Destination CSV file')

    def handle(self, *args, **options):
        config = ContaminationConfig(
            n=options['n'],
            p=options['p'],
            epsilon=options['epsilon'],
            eta=options['eta'],
            gamma=options['gamma'],
            rho=options['rho'],
            seed=options['seed'],
        )
        dataset = sample_dataset(config)
        write_dataset(options['output'], dataset.data, dataset.labels)
        self.stdout.write(self.style.SUCCESS(
            f"✓ Simulated n={config.n} p={config.p} outliers={dataset.outlier_count} -> {options['output']}"
        ))
