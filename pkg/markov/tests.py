# ErgoCert markov/tests.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from unittest import mock

import numpy as np
from django.apps import apps
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, tag

from . import ergodicity
from .analyses import ANALYSES, get_analysis, list_analyses
from .exceptions import ScenarioError
from .management.commands.run import combined_exit_code
from .models import ScenarioRun
from .scenario import (EXIT_INPUT_ERROR, EXIT_NO_CERTIFICATE, EXIT_OK, Journal, build_scenario,
                       dumps_report, field_path, load_config, run_scenario, validate_report)


# ========== Utility Functions to Create Test Data ==========

TWO_STATE = {
    'analysis': 'certify',
    'space': {'classical': {'n': 2}},
    'semigroup': {'rate_matrix': [[-1.0, 1.0], [1.0, -1.0]]},
    'projection': {'blocks': [[0, 1]], 'weights': [[0.5, 0.5]]},
}

# two blocks with no transitions between them; symmetric rates keep each block uniform
FIVE_STATE = {
    'analysis': 'delta',
    'space': {'classical': {'n': 5}},
    'semigroup': {'rate_matrix': [[-1.0, 1.0, 0.0, 0.0, 0.0],
                                  [1.0, -1.0, 0.0, 0.0, 0.0],
                                  [0.0, 0.0, -2.0, 1.0, 1.0],
                                  [0.0, 0.0, 1.0, -2.0, 1.0],
                                  [0.0, 0.0, 1.0, 1.0, -2.0]]},
    'projection': {'blocks': [[0, 1], [2, 3, 4]],
                   'weights': [[0.5, 0.5], [1 / 3, 1 / 3, 1 / 3]]},
}

PAULI_PHI = {
    'analysis': 'certify',
    'space': 'qubit',
    'semigroup': {'pauli': [-1, 0, 1]},
    'projection': {'pauli_p': [0, 0, 1]},
}


def _create_workspace(test):
    workspace = tempfile.TemporaryDirectory()
    test.addCleanup(workspace.cleanup)
    return workspace.name


def _write_config(directory, name, config):
    path = os.path.join(directory, name)
    with open(path, 'w', encoding='utf-8') as f:
        if isinstance(config, str):
            f.write(config)
        else:
            json.dump(config, f, indent=2)
    return path


def _read_report(out_dir):
    with open(os.path.join(out_dir, 'report.json'), encoding='utf-8') as f:
        return json.load(f)


def _run_command(name, *args, **options):
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue()


# ========== Models and Project ==========

class ScenarioRunModelTest(TestCase):
    def test_string_representation(self):
        run = ScenarioRun.objects.create(digest='0' * 64, analysis='certify', status=ScenarioRun.OK,
                                         exit_code=0, out_dir='/tmp/reports')
        self.assertEqual(str(run), 'ScenarioRun {} (certify, ok)'.format(run.id))

    def test_ordering(self):
        first = ScenarioRun.objects.create(digest='1' * 64, analysis='delta', status=ScenarioRun.OK,
                                           exit_code=0, out_dir='a')
        second = ScenarioRun.objects.create(digest='2' * 64, analysis='mean',
                                            status=ScenarioRun.ERROR, exit_code=1, out_dir='b')
        self.assertEqual(list(ScenarioRun.objects.all()), [second, first])


class AppsTests(SimpleTestCase):
    def test_apps(self):
        config = apps.get_app_config('markov')
        self.assertEqual(config.name, 'markov')
        self.assertEqual(config.verbose_name, 'Markov semigroup ergodicity')


# ========== Scenario Files ==========

class FieldPathTests(SimpleTestCase):
    def test_paths(self):
        self.assertEqual(field_path(['semigroup', 'rate_matrix', 1, 0]), 'semigroup.rate_matrix[1][0]')
        self.assertEqual(field_path(['params', 't_grid']), 'params.t_grid')
        self.assertEqual(field_path([]), '(root)')


class LoadConfigTests(SimpleTestCase):
    def setUp(self):
        self.workspace = _create_workspace(self)

    def test_analysis_override(self):
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        raw, config = load_config(path, 'mean')
        self.assertEqual(config['analysis'], 'mean')
        with open(path, 'rb') as f:
            self.assertEqual(raw, f.read())

    def test_without_file(self):
        _, config = load_config(None, 'qubit_example')
        self.assertEqual(config, {'analysis': 'qubit_example'})
        with self.assertRaises(ScenarioError):
            load_config(None, None)
        # every other analysis needs a state space, semigroup and projection
        with self.assertRaises(ScenarioError):
            load_config(None, 'certify')

    def test_malformed_json(self):
        path = _write_config(self.workspace, 'bad.json', '{"analysis": "certify",\n  "space": }\n')
        with self.assertRaises(ScenarioError) as cm:
            load_config(path)
        self.assertIn('bad.json: line 2 column', str(cm.exception))

    def test_schema_diagnostics(self):
        config = dict(TWO_STATE, semigroup={'rate_matrix': [[-1.0, 1.0], ['x', -1.0]]})
        path = _write_config(self.workspace, 'typed.json', config)
        with self.assertRaises(ScenarioError) as cm:
            load_config(path)
        self.assertTrue(any(d.startswith('semigroup.rate_matrix[1][0]: ')
                            for d in cm.exception.diagnostics), msg=cm.exception.diagnostics)

    def test_missing_file(self):
        with self.assertRaises(ScenarioError):
            load_config(os.path.join(self.workspace, 'missing.json'))


class BuildScenarioTests(SimpleTestCase):
    def test_two_state(self):
        scenario = build_scenario(TWO_STATE)
        self.assertEqual(scenario.analysis, 'certify')
        self.assertEqual(scenario.seed, 0)
        self.assertEqual(scenario.tol, 1e-9)
        self.assertIs(scenario.semigroup.commuting_projection, scenario.projection)
        self.assertEqual(scenario.params['points'], 200)
        self.assertEqual(scenario.params['span'], 50.0)

    def test_overrides(self):
        config = dict(TWO_STATE, params={'seed': 4, 'tol': 1e-7})
        scenario = build_scenario(config)
        self.assertEqual((scenario.seed, scenario.tol), (4, 1e-7))
        scenario = build_scenario(config, seed=9, tol=1e-8)
        self.assertEqual((scenario.seed, scenario.tol), (9, 1e-8))

    def test_perturbation_semigroup(self):
        config = dict(TWO_STATE, semigroup={'perturbation': {
            'base': {'rate_matrix': [[0.0, 0.0], [0.0, 0.0]]},
            'q_operator': [[0.5, 0.5], [0.5, 0.5]],
            'lambda': 1.0,
        }})
        scenario = build_scenario(config)
        np.testing.assert_allclose(scenario.semigroup.generator, [[-0.5, 0.5], [0.5, -0.5]])

    def test_non_commuting_semigroup_is_logged(self):
        journal = Journal()
        config = dict(TWO_STATE, semigroup={'rate_matrix': [[-1.0, 2.0], [1.0, -2.0]]})
        scenario = build_scenario(config, journal)
        self.assertIsNone(scenario.semigroup.commuting_projection)
        self.assertEqual(journal.count('info'), 1)

    def test_invalid_parameters(self):
        cases = [
            ({'t_grid': [1, -2]}, 'params.t_grid: '),
            ({'bogus': 1}, "params: unknown parameter 'bogus'"),
            ({'points': 1}, 'params.points: '),
            ({'span': 0}, 'params.span: span must be positive'),
        ]
        for params, expected in cases:
            with self.subTest(params=params):
                with self.assertRaises(ScenarioError) as cm:
                    build_scenario(dict(TWO_STATE, params=params))
                self.assertTrue(any(d.startswith(expected) for d in cm.exception.diagnostics),
                                msg=cm.exception.diagnostics)

    def test_invalid_objects(self):
        cases = [
            (dict(TWO_STATE, semigroup={'rate_matrix': [[1.0, -1.0], [-1.0, 1.0]]}),
             'semigroup.rate_matrix: does not generate a Markov semigroup'),
            (dict(TWO_STATE, projection={'blocks': [[0]], 'weights': [[1.0]]}),
             'projection.blocks: '),
            (dict(TWO_STATE, projection={'pauli_p': [0, 0, 1]}),
             'projection.pauli_p: needs the qubit space'),
            (dict(TWO_STATE, semigroup={'discrete_operator': [[0.5, 0.5], [0.6, 0.5]]}),
             'semigroup.discrete_operator: '),
        ]
        for config, expected in cases:
            with self.subTest(expected=expected):
                with self.assertRaises(ScenarioError) as cm:
                    build_scenario(config)
                self.assertTrue(any(d.startswith(expected) for d in cm.exception.diagnostics),
                                msg=cm.exception.diagnostics)


class JournalTests(SimpleTestCase):
    def test_entries(self):
        journal = Journal()
        with self.assertLogs('markov.scenario', 'INFO'):
            journal.log('warn', 'no uniform certificate', 'grid exhausted')
            journal.log('info', 'started')
        self.assertEqual(journal.entries, [
            {'severity': 'warn', 'message': 'no uniform certificate: grid exhausted'},
            {'severity': 'info', 'message': 'started'},
        ])
        self.assertEqual(journal.count('warn'), 1)
        self.assertEqual(journal.count('error'), 0)
        with self.assertRaises(ValueError):
            journal.log('fatal', 'nope')


class ReportTests(SimpleTestCase):
    def test_dumps_report(self):
        text = dumps_report({'b': math.inf, 'a': np.float64(0.1), 'c': np.arange(2)})
        self.assertEqual(text, '{\n  "a": 0.1,\n  "b": "inf",\n  "c": [\n    0,\n    1\n  ]\n}\n')


# ========== Analyses ==========

class AnalysisCatalogTests(SimpleTestCase):
    def test_catalog(self):
        self.assertEqual(list(ANALYSES), ['delta', 'certify', 'mean', 'weak_mean', 'doeblin',
                                          'ergodize', 'rho', 'spectral', 'qubit_example'])
        self.assertEqual(get_analysis('weak_mean').required_params, ['t0'])
        self.assertIn('lambda', get_analysis('rho').optional_params)
        self.assertFalse(get_analysis('qubit_example').needs_semigroup)
        with self.assertRaises(ScenarioError):
            get_analysis('mixing')

    def test_listing(self):
        text = list_analyses()
        names = [line.split()[0] for line in text.splitlines() if not line.startswith(' ')]
        self.assertEqual(names, list(ANALYSES))
        self.assertIn('required: epsilon', text)


class CombinedExitCodeTests(SimpleTestCase):
    def test_combined_exit_code(self):
        self.assertEqual(combined_exit_code([0, 0]), EXIT_OK)
        self.assertEqual(combined_exit_code([0, 2]), EXIT_NO_CERTIFICATE)
        self.assertEqual(combined_exit_code([2, 1, 0]), EXIT_INPUT_ERROR)


# ========== Running Scenarios ==========

class RunScenarioTests(TestCase):
    def setUp(self):
        self.workspace = _create_workspace(self)

    def test_certify_two_state(self):
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        out_dir = os.path.join(self.workspace, 'out')
        outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_OK)
        self.assertEqual(outcome.status, ScenarioRun.OK)

        report = _read_report(out_dir)
        validate_report(report)
        result = report['result']
        self.assertTrue(result['certified'])
        self.assertEqual(result['t0'], 1.0)
        self.assertAlmostEqual(result['q'] / math.exp(-2), 1.0, places=12)
        self.assertAlmostEqual(result['alpha'], 2.0, places=12)
        self.assertAlmostEqual(result['C'] / (2 * math.exp(2)), 1.0, places=12)
        self.assertEqual(result['envelope_violations'], 0)
        self.assertTrue(all(row['holds'] for row in result['sandwich']))

        with open(path, 'rb') as f:
            digest = hashlib.sha256(f.read()).hexdigest()
        self.assertEqual(report['provenance']['config_sha256'], digest)
        self.assertEqual(report['provenance']['seed'], 0)

        with open(outcome.curve_path, 'rb') as f:
            raw = f.read()
        self.assertTrue(raw.startswith(b't,measured_norm,envelope_bound\r\n'))
        self.assertEqual(raw.count(b'\r\n'), 201)

        run = ScenarioRun.objects.get()
        self.assertEqual((run.analysis, run.status, run.exit_code), ('certify', 'ok', 0))
        self.assertEqual(run.digest, digest)

    def test_report_is_deterministic(self):
        path = _write_config(self.workspace, 'two.json', dict(TWO_STATE, analysis='mean'))
        texts = []
        for name in ('first', 'second'):
            out_dir = os.path.join(self.workspace, name)
            self.assertEqual(run_scenario(path, out_dir).exit_code, EXIT_OK)
            with open(os.path.join(out_dir, 'report.json'), 'rb') as f:
                texts.append(f.read())
        self.assertEqual(texts[0], texts[1])

    def test_no_certificate(self):
        path = _write_config(self.workspace, 'phi.json', PAULI_PHI)
        out_dir = os.path.join(self.workspace, 'out')
        outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_NO_CERTIFICATE)
        report = _read_report(out_dir)
        self.assertEqual(report['status'], 'no_certificate')
        self.assertFalse(report['result']['certified'])
        self.assertEqual(report['result']['values'], [1.0] * 64)
        self.assertEqual(report['journal'][0]['severity'], 'warn')
        self.assertFalse(os.path.exists(os.path.join(out_dir, 'curve.csv')))

    def test_input_error_writes_nothing(self):
        path = _write_config(self.workspace, 'bad.json', '{"analysis": ')
        out_dir = os.path.join(self.workspace, 'out')
        outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_INPUT_ERROR)
        self.assertFalse(os.path.exists(out_dir))
        run = ScenarioRun.objects.get()
        self.assertEqual((run.status, run.exit_code), (ScenarioRun.ERROR, 1))

    def test_numerical_failure_is_recorded(self):
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        out_dir = os.path.join(self.workspace, 'out')
        failure = np.linalg.LinAlgError('SVD did not converge')
        with mock.patch.object(ergodicity, 'certify_uniform', side_effect=failure):
            with self.assertLogs('markov.scenario', 'ERROR'):
                outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_INPUT_ERROR)
        self.assertEqual(outcome.message, 'SVD did not converge')
        self.assertFalse(os.path.exists(out_dir))
        run = ScenarioRun.objects.get()
        self.assertEqual((run.analysis, run.status, run.exit_code), ('certify', ScenarioRun.ERROR, 1))

    def test_unwritable_output_is_recorded(self):
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        # a plain file where the output directory should go
        out_dir = _write_config(self.workspace, 'out', '')
        with self.assertLogs('markov.scenario', 'ERROR'):
            outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_INPUT_ERROR)
        self.assertEqual(outcome.status, ScenarioRun.ERROR)
        run = ScenarioRun.objects.get()
        self.assertEqual((run.status, run.exit_code), (ScenarioRun.ERROR, 1))

    def test_mean_uses_q_projection(self):
        # the second block is frozen: A_t tends to the projection that keeps states 2, 3 and 4 apart
        rates = np.zeros((5, 5))
        rates[:2, :2] = [[-1.0, 1.0], [1.0, -1.0]]
        config = dict(FIVE_STATE, analysis='mean', semigroup={'rate_matrix': rates.tolist()})
        blocks = [[0, 1], [2], [3], [4]]
        weights = [[0.5, 0.5], [1.0], [1.0], [1.0]]

        path = _write_config(self.workspace, 'block.json', config)
        outcome = run_scenario(path, os.path.join(self.workspace, 'block'))
        self.assertEqual(outcome.exit_code, EXIT_NO_CERTIFICATE)

        config['q_projection'] = {'blocks': blocks, 'weights': weights}
        path = _write_config(self.workspace, 'split.json', config)
        out_dir = os.path.join(self.workspace, 'split')
        outcome = run_scenario(path, out_dir)
        self.assertEqual(outcome.exit_code, EXIT_OK)
        result = _read_report(out_dir)['result']
        self.assertTrue(result['certified'])
        self.assertEqual(result['projection'], {'blocks': blocks, 'weights': weights})
        self.assertEqual(result['bound_violations'], 0)


@tag('cli')
class CommandTests(TestCase):
    def setUp(self):
        self.workspace = _create_workspace(self)
        self.out_dir = os.path.join(self.workspace, 'out')

    def test_certify(self):
        path = _write_config(self.workspace, 'two.json', dict(TWO_STATE, analysis='mean'))
        output = _run_command('certify', path, out=self.out_dir, seed=5, tol=1e-8)
        self.assertIn('certify ok', output)
        report = _read_report(self.out_dir)
        self.assertEqual(report['analysis'], 'certify')
        self.assertEqual(report['provenance']['seed'], 5)
        self.assertEqual(report['provenance']['tol'], 1e-8)

    def test_certify_no_certificate(self):
        path = _write_config(self.workspace, 'phi.json', PAULI_PHI)
        with self.assertRaises(CommandError) as cm:
            _run_command('certify', path, out=self.out_dir)
        self.assertEqual(cm.exception.returncode, EXIT_NO_CERTIFICATE)
        self.assertTrue(os.path.exists(os.path.join(self.out_dir, 'report.json')))

    def test_mean_on_pauli_channel(self):
        path = _write_config(self.workspace, 'phi.json', PAULI_PHI)
        _run_command('mean', path, out=self.out_dir)
        result = _read_report(self.out_dir)['result']
        self.assertEqual((result['t0'], result['q'], result['C']), (2, 0.0, 4.0))

    def test_delta_with_oracle(self):
        path = _write_config(self.workspace, 'five.json', FIVE_STATE)
        _run_command('delta', path, out=self.out_dir, oracle=True)
        result = _read_report(self.out_dir)['result']
        self.assertEqual(result['t'], 1.0)
        self.assertAlmostEqual(result['upper'], math.exp(-2), places=12)
        self.assertTrue(result['oracle']['agrees'])
        self.assertLessEqual(result['oracle']['abs_diff'], 1e-10)

    def test_ergodize_with_neighbours(self):
        # the second block is frozen, so the scenario's own semigroup has no certificate
        rates = np.zeros((5, 5))
        rates[:2, :2] = [[-1.0, 1.0], [1.0, -1.0]]
        config = dict(FIVE_STATE, analysis='ergodize', semigroup={'rate_matrix': rates.tolist()},
                      params={'epsilon': 1.0, 'probes': 20})
        path = _write_config(self.workspace, 'frozen.json', config)
        _run_command('ergodize', path, out=self.out_dir)
        report = _read_report(self.out_dir)
        self.assertEqual(report['status'], 'ok')
        probes = report['result']['probes']
        self.assertEqual(len(probes['neighbours']), 20)
        self.assertTrue(probes['all_certified'])
        self.assertEqual([e for e in report['journal'] if e['severity'] == 'error'], [])

    def test_qubit_example_without_config(self):
        _run_command('qubit_example', out=self.out_dir)
        report = _read_report(self.out_dir)
        self.assertEqual(report['result']['n_max'], 100)
        self.assertTrue(report['result']['matches_closed_forms'])
        with open(os.path.join(self.out_dir, 'curve.csv'), encoding='utf-8', newline='') as f:
            rows = list(csv.reader(f))
        self.assertEqual(rows[0], ['n', 'norm_phi_n_minus_P', 'norm_cesaro_minus_P',
                                   'delta_P_cesaro', 'doeblin_holds_phi0_tau_0.5'])
        self.assertEqual(len(rows), 101)
        self.assertEqual(rows[1][0], '1')
        self.assertEqual(rows[1][4], 'false')
        self.assertEqual(rows[2][4], 'true')

    def test_input_errors(self):
        bad = _write_config(self.workspace, 'bad.json', '{"analysis": "certify",\n  "space": }\n')
        typed = _write_config(self.workspace, 'typed.json', dict(
            TWO_STATE, semigroup={'rate_matrix': [[-1.0, 1.0], ['x', -1.0]]}))
        cases = [
            (bad, 'line 2 column'),
            (typed, 'semigroup.rate_matrix[1][0]'),
        ]
        for path, expected in cases:
            with self.subTest(path=path):
                with self.assertRaises(CommandError) as cm:
                    _run_command('certify', path, out=self.out_dir)
                self.assertEqual(cm.exception.returncode, EXIT_INPUT_ERROR)
                self.assertIn(expected, str(cm.exception))

    def test_usage_errors(self):
        with self.assertRaises(CommandError) as cm:
            _run_command('certify')
        self.assertEqual(cm.exception.returncode, EXIT_INPUT_ERROR)
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        for options in ({'seed': -1}, {'tol': 0.0}):
            with self.subTest(options=options):
                with self.assertRaises(CommandError) as cm:
                    _run_command('certify', path, out=self.out_dir, **options)
                self.assertEqual(cm.exception.returncode, EXIT_INPUT_ERROR)

    def test_run_several(self):
        two = _write_config(self.workspace, 'two.json', TWO_STATE)
        phi = _write_config(self.workspace, 'phi.json', PAULI_PHI)
        with self.assertRaises(CommandError) as cm:
            _run_command('run', two, phi, out=self.out_dir)
        self.assertEqual(cm.exception.returncode, EXIT_NO_CERTIFICATE)
        self.assertEqual(_read_report(os.path.join(self.out_dir, 'two'))['status'], 'ok')
        self.assertEqual(_read_report(os.path.join(self.out_dir, 'phi'))['status'], 'no_certificate')

    def test_run_rejects_duplicate_names(self):
        two = _write_config(self.workspace, 'two.json', TWO_STATE)
        with self.assertRaises(CommandError) as cm:
            _run_command('run', two, two, out=self.out_dir)
        self.assertEqual(cm.exception.returncode, EXIT_INPUT_ERROR)

    def test_analyses(self):
        output = _run_command('analyses')
        for name in ANALYSES:
            self.assertIn(name, output)
        self.assertEqual(len([line for line in output.splitlines() if not line.startswith(' ')]), 9)

    def test_runs(self):
        self.assertIn('No runs recorded.', _run_command('runs'))
        path = _write_config(self.workspace, 'two.json', TWO_STATE)
        _run_command('run', path, out=self.out_dir)
        output = _run_command('runs')
        self.assertIn('certify', output)
        self.assertIn('ok', output)
        self.assertIn('No runs recorded.', _run_command('runs', analysis='delta'))
        with self.assertRaises(CommandError) as cm:
            _run_command('runs', limit=0)
        self.assertEqual(cm.exception.returncode, EXIT_INPUT_ERROR)
