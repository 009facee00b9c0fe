"""
Programmatic front door to the management commands.

``parse_args`` turns an argument list into a validated CliInvocation and
``run`` executes it, returning the process exit status:

    0  success
    2  usage or configuration error
    3  I/O error
    4  estimation error
    5  data format error
"""

import logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from django.core.management import load_command_class
from django.core.management.base import CommandError

from .exceptions import UsageError

logger = logging.getLogger(__name__)

APP_NAME = 'outliers'
PROG = 'outliers'
SUBCOMMANDS = ('simulate', 'detect', 'benchmark')


@dataclass
class CliInvocation:
    """A parsed command line: one subcommand and its options."""

    subcommand: str
    flags: Dict[str, Any] = field(default_factory=dict)

    @property
    def input_path(self) -> Optional[str]:
        return self.flags.get('input')

    @property
    def output_path(self) -> Optional[str]:
        return self.flags.get('output')


def usage() -> str:
    return f"usage: {PROG} {{{','.join(SUBCOMMANDS)}}} [options] (use '<subcommand> --help' for details)"


def parse_args(argv: List[str]) -> CliInvocation:
    """
    Parse and validate a command line.

    Args:
        argv: Arguments after the program name, subcommand first

    Returns:
        CliInvocation

    Raises:
        UsageError: On a missing or unknown subcommand, an unknown flag, a
            missing required flag or an unparseable value; the message
            names the offending token
        SystemExit: With status 0 after printing help for --help
    """
    if not argv:
        raise UsageError(f"missing subcommand; {usage()}")
    subcommand = argv[0]
    if subcommand in ('-h', '--help'):
        sys.stdout.write(usage() + '\n')
        raise SystemExit(0)
    if subcommand not in SUBCOMMANDS:
        raise UsageError(f"unknown subcommand '{subcommand}'; expected one of {', '.join(SUBCOMMANDS)}")

    command = load_command_class(APP_NAME, subcommand)
    parser = command.create_parser(PROG, subcommand)
    try:
        namespace = parser.parse_args(argv[1:])
    except CommandError as e:
        raise UsageError(str(e).removeprefix('Error: ')) from e

    flags = vars(namespace)
    flags.pop('args', None)
    return CliInvocation(subcommand=subcommand, flags=flags)


def run(invocation: CliInvocation) -> int:
    """
    Execute a parsed invocation.

    Returns:
        int: 0 on success, otherwise the exit code of the failure, after one
            diagnostic line on stderr
    """
    command = load_command_class(APP_NAME, invocation.subcommand)
    try:
        command.execute(**invocation.flags)
    except CommandError as e:
        command.stderr.write(str(e))
        return e.returncode
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse and run, returning the exit status."""
    argv = sys.argv[1:] if argv is None else argv
    try:
        invocation = parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"UsageError: {e}\n")
        return e.exit_code
    return run(invocation)
