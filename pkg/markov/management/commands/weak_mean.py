# ErgoCert markov/management/commands/weak_mean.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'weak_mean'
    help = 'Run a scenario file as "weak_mean": ' + ANALYSES['weak_mean'].description + '.'
