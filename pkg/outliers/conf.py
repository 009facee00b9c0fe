"""
Access to the ``OUTLIER_DETECTION`` settings block.

``DEFAULTS`` is the single source of default values: the project settings
build ``OUTLIER_DETECTION`` from it plus environment overrides, and keys
missing from an overridden block fall back to it.
"""

from typing import Any, Dict

from django.conf import settings

DEFAULTS: Dict[str, Any] = {
    'B': 450,
    'K_FRACTION': 0.5,
    'M': 20,
    'ALPHA': 0.05,
    'RHO': 0.1,
    'EPSILON': 0.1,
    'ETA': 5.0,
    'GAMMA': 5.0,
    'MCD_STARTS': 10,
    'MCD_MAX_ITER': 100,
    'WORKERS': 1,
    'SEED': 0,
}


def detection_setting(name: str) -> Any:
    """
    Return a configured default.

    Args:
        name: Key of the OUTLIER_DETECTION block (e.g. 'B', 'ALPHA')

    Returns:
        The configured value, or the built-in default

    Raises:
        KeyError: If the name is not a known setting
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown outlier detection setting: {name}")
    configured = getattr(settings, 'OUTLIER_DETECTION', {}) or {}
    return configured.get(name, DEFAULTS[name])
