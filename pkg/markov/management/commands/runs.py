# ErgoCert markov/management/commands/runs.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from django.core.management.base import CommandError
from django.db import DatabaseError

from markov.management.base import MarkovCommand
from markov.models import ScenarioRun
from markov.scenario import EXIT_INPUT_ERROR


class Command(MarkovCommand):
    help = 'Show the most recent scenario runs from the ledger.'

    def add_arguments(self, parser):
        parser.add_argument('--limit', type=int, default=20, help='number of runs to show')
        parser.add_argument('--analysis', default=None, help='only runs of this analysis')

    def handle(self, *args, **options):
        if options['limit'] < 1:
            raise CommandError('--limit must be at least 1', returncode=EXIT_INPUT_ERROR)
        runs = ScenarioRun.objects.all()
        if options['analysis']:
            runs = runs.filter(analysis=options['analysis'])
        try:
            runs = list(runs[:options['limit']])
        except DatabaseError as e:
            raise CommandError('cannot read the run ledger: {}'.format(e),
                               returncode=EXIT_INPUT_ERROR)
        if not runs:
            self.stdout.write('No runs recorded.')
            return
        for run in runs:
            self.stdout.write('{:>5}  {}  {:<14} {:<15} exit {}  seed {}  {}  {}'.format(
                run.id, run.created.strftime('%Y-%m-%d %H:%M:%S'), run.analysis, run.status,
                run.exit_code, run.seed, run.digest[:12] or '-', run.out_dir))
