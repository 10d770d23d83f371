# ErgoCert markov/management/commands/ergodize.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'ergodize'
    help = 'Run a scenario file as "ergodize": ' + ANALYSES['ergodize'].description + '.'
