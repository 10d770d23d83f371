# ErgoCert markov/management/commands/analyses.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from markov.analyses import list_analyses
from markov.management.base import MarkovCommand


class Command(MarkovCommand):
    help = 'List the available analyses with their parameters.'

    def handle(self, *args, **options):
        self.stdout.write(list_analyses())
