# ErgoCert markov/management/commands/rho.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'rho'
    help = 'Run a scenario file as "rho": ' + ANALYSES['rho'].description + '.'
