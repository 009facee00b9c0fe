"""
Shared plumbing for the outlier detection management commands.

Maps toolkit errors onto Django's CommandError with the documented exit
codes and keeps every failure to a single diagnostic line.
"""

import sys
from dataclasses import replace
from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from outliers.conf import detection_setting
from outliers.exceptions import IO_EXIT_CODE, OutlierDetectionError, UsageError
from outliers.mcd import McdConfig
from outliers.rssl import RsslConfig

RSSL_OPTIONS = ('B', 'd', 'k_fraction', 'm', 'alpha', 'seed', 'normalized_scan', 'deduplicate')
MCD_OPTIONS = ('h', 'n_starts', 'max_iter', 'seed')


class DetectionCommand(BaseCommand):
    """
    Base class for the toolkit's commands.

    - Unknown or abbreviated flags are errors.
    - Parse failures exit 2 with one line on stderr.
    - OutlierDetectionError subclasses exit with their own exit_code,
      OSError with 3.
    """

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.allow_abbrev = False
        # Parse errors raise CommandError instead of printing usage.
        parser.called_from_command_line = False
        return parser

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except CommandError as e:
            self.stderr.write(f"UsageError: {e}")
            sys.exit(UsageError.exit_code)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except OutlierDetectionError as e:
            raise CommandError(f"{type(e).__name__}: {e}", returncode=e.exit_code) from e
        except OSError as e:
            raise CommandError(f"I/O error: {e}", returncode=IO_EXIT_CODE) from e


def add_rssl_arguments(parser):
    """Ensemble flags; every default is None so callers can layer templates."""
    parser.add_argument('--B', type=int, help='Bootstrap ensemble size')
    parser.add_argument('--d', type=int, help='Subspace dimension (0 = min(n/5, sqrt(p)) rule)')
    parser.add_argument('--k-fraction', type=float, help='Share of draws kept at the elbow, in [0.3, 0.8]')
    parser.add_argument('--m', type=int, help='Largest dimension of the nested determinant scan')
    parser.add_argument('--alpha', type=float, help='Tail probability of the chi-squared cutoff')
    parser.add_argument('--normalized-scan', action='store_true', default=None,
                        help='Compare per-dimension log-determinants in the nested scan')
    parser.add_argument('--deduplicate', action='store_true', default=None,
                        help='Estimate from the distinct rows of the winning draw')


def add_mcd_arguments(parser):
    parser.add_argument('--h', type=int, help='MCD subset size (default floor((n+p+1)/2))')
    parser.add_argument('--n-starts', type=int, help='MCD random starts')
    parser.add_argument('--max-iter', type=int, help='C-step cap per MCD start')


def default_rssl_config() -> RsslConfig:
    return RsslConfig(
        B=detection_setting('B'),
        k_fraction=detection_setting('K_FRACTION'),
        m=detection_setting('M'),
        alpha=detection_setting('ALPHA'),
        seed=detection_setting('SEED'),
    )


def default_mcd_config() -> McdConfig:
    return McdConfig(
        n_starts=detection_setting('MCD_STARTS'),
        max_iter=detection_setting('MCD_MAX_ITER'),
        seed=detection_setting('SEED'),
    )


def _given(options: Dict[str, Any], names) -> Dict[str, Any]:
    return {name: options[name] for name in names if options.get(name) is not None}


def rssl_config_from(options: Dict[str, Any], template: RsslConfig) -> RsslConfig:
    """Template with every explicitly passed ensemble flag applied."""
    return replace(template, **_given(options, RSSL_OPTIONS))


def mcd_config_from(options: Dict[str, Any], template: McdConfig) -> McdConfig:
    """Template with every explicitly passed MCD flag applied."""
    return replace(template, **_given(options, MCD_OPTIONS))
