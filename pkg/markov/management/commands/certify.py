# ErgoCert markov/management/commands/certify.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import ANALYSES
from markov.management.base import ScenarioCommand


class Command(ScenarioCommand):
    analysis = 'certify'
    help = 'Run a scenario file as "certify": ' + ANALYSES['certify'].description + '.'
