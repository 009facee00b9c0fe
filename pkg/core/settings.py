"""
Django settings for the outlier detection toolkit.

The project has no database, URLs or middleware: Django provides settings,
logging configuration and the management-command front end.

Every tunable default lives in OUTLIER_DETECTION and can be overridden with
an OUTLIERS_* environment variable.
"""

import os
from pathlib import Path

from outliers.conf import DEFAULTS as DETECTION_DEFAULTS

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# No sessions, signing or auth are used; the key only satisfies Django.
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'outliers-toolkit-has-no-secrets')

DEBUG = os.environ.get('DJANGO_DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "outliers",
]

DATABASES = {}

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True


# ============================================================================
# Outlier detection defaults
# ============================================================================


def _env_override(name, default):
    value = os.environ.get(f"OUTLIERS_{name}")
    return type(default)(value) if value not in (None, '') else default


# Every OUTLIERS_<KEY> environment variable overrides the matching default.
OUTLIER_DETECTION = {name: _env_override(name, value) for name, value in DETECTION_DEFAULTS.items()}


# ============================================================================
# Logging
# ============================================================================
# Console only, on stderr; WARNING by default so command output stays clean.

LOG_LEVEL = os.environ.get('OUTLIERS_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'outliers': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
