# ErgoCert markov/apps.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from django.apps import AppConfig


class MarkovConfig(AppConfig):
    name = 'markov'
    verbose_name = 'Markov semigroup ergodicity'
