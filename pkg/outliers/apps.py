"""
Outlier detection app configuration.
"""

from django.apps import AppConfig


class OutliersConfig(AppConfig):
    """
    Configuration for the outlier detection application.

    The app has no models; it ships the numerical modules and the
    ``simulate``, ``detect`` and ``benchmark`` management commands.
    """

    name = "outliers"
    verbose_name = "Random subspace outlier detection"
