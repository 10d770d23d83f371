# ErgoCert markov/management/commands/run.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import os
from concurrent.futures import ProcessPoolExecutor

import django
from django.db import connections

from markov.management.base import ScenarioCommand
from markov.scenario import EXIT_INPUT_ERROR, EXIT_NO_CERTIFICATE, EXIT_OK, run_scenario


def _init_worker():
    # spawned workers start without the app registry
    django.setup()


def _run_worker(config, out_dir, seed, tol, oracle):
    return run_scenario(config, out_dir, seed=seed, tol=tol, oracle=oracle)


def combined_exit_code(codes):
    """1 if any scenario had an input error, else 2 if any found no certificate, else 0."""
    codes = set(codes)
    for code in (EXIT_INPUT_ERROR, EXIT_NO_CERTIFICATE):
        if code in codes:
            return code
    return EXIT_OK


class Command(ScenarioCommand):
    help = 'Run one or more scenario files.'

    def add_config_arguments(self, parser):
        parser.add_argument('configs', nargs='+', metavar='config', help='scenario files (JSON)')
        parser.add_argument('--jobs', type=int, default=1,
                            help='number of worker processes for several scenario files')

    def out_dir_for(self, config, out, count):
        if count == 1:
            return out
        return os.path.join(out, os.path.splitext(os.path.basename(config))[0])

    def handle(self, *args, **options):
        self.check_options(options)
        configs = options['configs']
        jobs = options['jobs']
        if jobs < 1:
            self.finish(EXIT_INPUT_ERROR, '--jobs must be at least 1')
        stems = [os.path.splitext(os.path.basename(c))[0] for c in configs]
        if len(configs) > 1 and len(set(stems)) != len(stems):
            self.finish(EXIT_INPUT_ERROR, 'scenario files must have distinct names')

        out_dirs = [self.out_dir_for(c, options['out'], len(configs)) for c in configs]
        if jobs == 1 or len(configs) == 1:
            outcomes = [self.run_one(c, d, options) for c, d in zip(configs, out_dirs)]
        else:
            # forked workers must not share the parent's database connection
            connections.close_all()
            with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker) as pool:
                futures = [pool.submit(_run_worker, c, d, options['seed'], options['tol'],
                                       options['oracle']) for c, d in zip(configs, out_dirs)]
                outcomes = [f.result() for f in futures]

        for config, outcome in zip(configs, outcomes):
            self.report(outcome, config, show_errors=len(configs) > 1)
        code = combined_exit_code(o.exit_code for o in outcomes)
        if len(configs) == 1:
            message = outcomes[0].message
        else:
            message = '{} of {} scenarios did not succeed'.format(
                sum(1 for o in outcomes if o.exit_code != EXIT_OK), len(outcomes))
        self.finish(code, message)
