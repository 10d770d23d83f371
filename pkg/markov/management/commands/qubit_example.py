# ErgoCert markov/management/commands/qubit_example.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'qubit_example'
    config_optional = True
    help = 'Run a scenario file as "qubit_example": ' + ANALYSES['qubit_example'].description + '.'
