"""Entry point for ``python -m outliers``."""

import os
import sys

import django


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    django.setup()
    from outliers.cli import main as cli_main
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
