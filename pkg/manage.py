#!/usr/bin/env python
"""
Command-line utility for the outlier detection toolkit.

    python manage.py simulate --n 100 --p 1000 --seed 7 --out data.csv
    python manage.py detect --in data.csv --out labels.csv
    python manage.py benchmark --preset desk-ld --out report.csv
"""
import os
import sys


def main():
    """Run a toolkit or Django management command."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the toolkit requirements "
            "with `pip install -r requirements.txt`."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
