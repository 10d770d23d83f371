# ErgoCert markov/management/commands/spectral.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'spectral'
    help = 'Run a scenario file as "spectral": ' + ANALYSES['spectral'].description + '.'
