# ErgoCert markov/management/commands/doeblin.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'doeblin'
    help = 'Run a scenario file as "doeblin": ' + ANALYSES['doeblin'].description + '.'
