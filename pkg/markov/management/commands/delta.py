# ErgoCert markov/management/commands/delta.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'delta'
    help = 'Run a scenario file as "delta": ' + ANALYSES['delta'].description + '.'
