# ErgoCert markov/management/base.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import functools
import logging
import sys

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from markov.scenario import EXIT_INPUT_ERROR, EXIT_NO_CERTIFICATE, EXIT_OK, run_scenario


VERBOSITY_LEVELS = {0: logging.ERROR, 2: logging.INFO, 3: logging.DEBUG}


def _usage_error(parser, message):
    # argparse exits with status 2, which is reserved for "no certificate"
    if parser.called_from_command_line:
        parser.print_usage(sys.stderr)
        parser.exit(EXIT_INPUT_ERROR, '{}: error: {}\n'.format(parser.prog, message))
    raise CommandError('Error: {}'.format(message), returncode=EXIT_INPUT_ERROR)


class MarkovCommand(BaseCommand):
    """Base of the markov commands: usage errors exit 1, --verbosity drives the markov logger."""

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.error = functools.partial(_usage_error, parser)
        return parser

    def execute(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options.get('verbosity', 1))
        if level is not None:
            logging.getLogger('markov').setLevel(level)
        return super().execute(*args, **options)


class ScenarioCommand(MarkovCommand):
    """Runs scenario files; subclasses fix ``analysis`` to force the analysis of the file."""
    analysis = None
    config_optional = False

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument('--out', default=settings.ERGOCERT['REPORT_DIR'],
                            help='output directory for report.json and curve.csv')
        parser.add_argument('--seed', type=int, default=None,
                            help='random seed (overrides params.seed)')
        parser.add_argument('--tol', type=float, default=None,
                            help='numerical tolerance (overrides params.tol)')
        parser.add_argument('--oracle', action='store_true',
                            help='cross-check delta against vertex enumeration')

    def add_config_arguments(self, parser):
        parser.add_argument('config', nargs='?' if self.config_optional else None,
                            help='scenario file (JSON)')

    def check_options(self, options):
        if options['seed'] is not None and options['seed'] < 0:
            raise CommandError('--seed must be nonnegative', returncode=EXIT_INPUT_ERROR)
        if options['tol'] is not None and not options['tol'] > 0:
            raise CommandError('--tol must be positive', returncode=EXIT_INPUT_ERROR)

    def run_one(self, config, out_dir, options):
        return run_scenario(config, out_dir, analysis=self.analysis, seed=options['seed'],
                            tol=options['tol'], oracle=options['oracle'])

    def report(self, outcome, config, show_errors=False):
        label = config or '<{}>'.format(outcome.analysis)
        if outcome.exit_code == EXIT_OK:
            self.stdout.write('{}: {} ok, report in {}'.format(label, outcome.analysis,
                                                             outcome.out_dir))
        elif outcome.exit_code == EXIT_NO_CERTIFICATE:
            self.stdout.write('{}: {} found no certificate, report in {}'.format(
                label, outcome.analysis, outcome.out_dir))
        elif show_errors:
            self.stderr.write('{}: {}'.format(label, outcome.message))

    def finish(self, exit_code, message):
        if exit_code != EXIT_OK:
            raise CommandError(message, returncode=exit_code)

    def handle(self, *args, **options):
        self.check_options(options)
        outcome = self.run_one(options['config'], options['out'], options)
        self.report(outcome, options['config'])
        self.finish(outcome.exit_code, outcome.message)
