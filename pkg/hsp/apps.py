"""
This module houses the Configuration class for django app.
"""

from django.apps import AppConfig


class HspConfig(AppConfig):
    """
    Class to represent configuration of the hidden Borel subgroup app
    """
    name = 'hsp'
    verbose_name = 'Hidden Borel subgroup simulator'
