# ErgoCert markov/scenario.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Scenario files: loading, validation, construction of the objects they describe, and runs.

A run writes ``report.json`` (and ``curve.csv`` where the analysis has a curve or table) into an
output directory and returns an exit code: 0 on success, 1 on input errors, 2 when the analysis
ran but no certificate exists. The report is byte-identical for identical input.
"""

import contextlib
import csv
import functools
import hashlib
import json
import logging
import math
import os
from dataclasses import dataclass

import jsonschema
import numpy as np
from django.conf import settings
from django.db import DatabaseError

import ergocert
from . import dobrushin
from .analyses import get_analysis
from .exceptions import ErgoCertError, InvarianceError, ScenarioError, VerificationError
from .markov_ops import (MarkovOperator, block_projection, projection_from_matrix,
                         require_markov)
from .models import ScenarioRun
from .perturbation import perturb
from .qubit_example import PauliChannel
from .semigroup import Semigroup, validate_generator
from .state_space import StateSpace


logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'schemas')
SCENARIO_SCHEMA = 'scenario.schema.json'
REPORT_SCHEMA = 'report.schema.json'
REPORT_FILE = 'report.json'
CURVE_FILE = 'curve.csv'

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NO_CERTIFICATE = 2

# numerical and filesystem failures end the run like input errors, with an ERROR row
RUNTIME_ERRORS = (np.linalg.LinAlgError, FloatingPointError, OSError)


# ========== Schemas and Loading ==========

@functools.lru_cache(maxsize=None)
def load_schema(name):
    with open(os.path.join(SCHEMA_DIR, name), encoding='utf-8') as f:
        return json.load(f)


def field_path(parts):
    """Render a JSON path as 'semigroup.rate_matrix[1][0]'."""
    path = ''
    for part in parts:
        if isinstance(part, int):
            path += '[{}]'.format(part)
        else:
            path += ('.' if path else '') + str(part)
    return path or '(root)'


def _schema_diagnostics(instance, schema_name):
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(instance), key=lambda e: [str(p) for p in e.absolute_path])
    return ['{}: {}'.format(field_path(e.absolute_path), e.message) for e in errors]


def parse_config(text, source='<config>'):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError('{}: line {} column {}: {}'.format(source, e.lineno, e.colno, e.msg)) \
            from None


def validate_config(config, source='<config>'):
    diagnostics = _schema_diagnostics(config, SCENARIO_SCHEMA)
    if diagnostics:
        raise ScenarioError('{}: invalid scenario'.format(source), diagnostics)
    return config


def read_config(path):
    """Return the raw bytes and the parsed (not yet validated) content of a scenario file."""
    try:
        with open(path, 'rb') as f:
            raw = f.read()
    except OSError as e:
        raise ScenarioError('cannot read {}: {}'.format(path, e.strerror)) from None
    try:
        text = raw.decode('utf-8')
    except UnicodeDecodeError:
        raise ScenarioError('{}: not UTF-8 text'.format(path)) from None
    return raw, parse_config(text, os.path.basename(path))


# ========== Journal ==========

class Journal:
    """Run log kept for report.json; each entry is also forwarded to the logger."""
    LEVELS = {'error': logging.ERROR, 'warn': logging.WARNING, 'info': logging.INFO}

    def __init__(self):
        self.entries = []

    def log(self, severity, message, text=''):
        """
        Parameters
        ----------
        severity : str
            One of 'error', 'warn' or 'info'.
        message : str
            What happened.
        text : str, optional
            The value or detail the message refers to.
        """
        if severity not in self.LEVELS:
            raise ValueError('unknown severity {!r}'.format(severity))
        if text:
            message = '{}: {}'.format(message, text)
        self.entries.append({'severity': severity, 'message': message})
        logger.log(self.LEVELS[severity], message)

    def count(self, severity):
        return sum(1 for entry in self.entries if entry['severity'] == severity)


# ========== Construction ==========

@contextlib.contextmanager
def at_path(path):
    """Re-raise library errors as ScenarioError diagnostics located at ``path``."""
    try:
        yield
    except ScenarioError:
        raise
    except (ErgoCertError, ValueError) as e:
        raise ScenarioError('invalid scenario', ['{}: {}'.format(path, e)]) from e


def build_space(node):
    if node == 'qubit':
        return StateSpace.qubit()
    with at_path('space.classical.n'):
        return StateSpace.classical(node['classical']['n'])


def build_projection(node, space, path='projection'):
    if 'blocks' in node:
        with at_path(path + '.blocks'):
            return block_projection(space, node['blocks'], node['weights'])
    if 'pauli_p' in node:
        if not space.is_qubit:
            raise ScenarioError('invalid scenario', [path + '.pauli_p: needs the qubit space'])
        with at_path(path + '.pauli_p'):
            return projection_from_matrix(space, np.diag([1.0] + [float(p) for p in node['pauli_p']]))
    with at_path(path + '.matrix'):
        return projection_from_matrix(space, node['matrix'])


def build_semigroup(node, space, tol, path='semigroup'):
    if 'rate_matrix' in node:
        with at_path(path + '.rate_matrix'):
            S = Semigroup.continuous(space, node['rate_matrix'])
            report = validate_generator(S, tol)
        if not report.passes:
            raise ScenarioError('invalid scenario', [
                '{}.rate_matrix: does not generate a Markov semigroup ({})'.format(path, report)])
        return S
    if 'discrete_operator' in node:
        with at_path(path + '.discrete_operator'):
            step = MarkovOperator(space, node['discrete_operator'])
            require_markov(step, tol, what='discrete operator')
            return Semigroup.discrete(step)
    if 'pauli' in node:
        if not space.is_qubit:
            raise ScenarioError('invalid scenario', [path + '.pauli: needs the qubit space'])
        with at_path(path + '.pauli'):
            return Semigroup.discrete(PauliChannel(*node['pauli']).as_operator())
    node = node['perturbation']
    base = build_semigroup(node['base'], space, tol, path + '.perturbation.base')
    with at_path(path + '.perturbation'):
        return perturb(base, MarkovOperator(space, node['q_operator']), node['lambda'], tol).semigroup


def _attach(S, P, journal, name):
    try:
        return S.with_projection(P)
    except InvarianceError:
        journal.log('info', '{} does not commute with the projection'.format(name))
        return S


@dataclass(eq=False)
class Scenario:
    analysis: str
    params: dict
    journal: Journal
    seed: int
    tol: float
    margin: float
    rho_tol: float
    oracle: bool = False
    space: StateSpace = None
    semigroup: Semigroup = None
    projection: object = None
    q_projection: object = None
    compare: Semigroup = None

    @property
    def delta_fn(self):
        return functools.partial(dobrushin.delta, seed=self.seed)


def _first(*values):
    return next(v for v in values if v is not None)


def build_scenario(config, journal=None, seed=None, tol=None, oracle=False):
    """Clean the parameters and build every object ``config`` names.

    ``seed`` and ``tol`` override the values in params, which override the ERGOCERT settings.
    """
    journal = journal if journal is not None else Journal()
    entry = get_analysis(config['analysis'])
    form = entry.form_class(config.get('params', {}))
    if not form.is_valid():
        raise ScenarioError('invalid parameters', form.diagnostics())
    params = form.cleaned_data
    defaults = settings.ERGOCERT
    scenario = Scenario(
        analysis=entry.name, params=params, journal=journal,
        seed=_first(seed, params.get('seed'), defaults['SEED']),
        tol=_first(tol, params.get('tol'), defaults['TOL']),
        margin=defaults['CERT_MARGIN'], rho_tol=defaults['RHO_TOL'], oracle=oracle)
    if not entry.needs_semigroup:
        return scenario

    space = build_space(config['space'])
    P = build_projection(config['projection'], space)
    S = build_semigroup(config['semigroup'], space, scenario.tol)
    scenario.space, scenario.projection = space, P
    scenario.semigroup = _attach(S, P, journal, 'semigroup')
    if 'q_projection' in config:
        scenario.q_projection = build_projection(config['q_projection'], space, 'q_projection')
    if 'compare' in config:
        scenario.compare = build_semigroup(config['compare'], space, scenario.tol, 'compare')
    return scenario


# ========== Output ==========

def to_jsonable(value):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf' and 'nan'."""
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return to_jsonable(value.item())
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    return to_jsonable(float(value))


def dumps_report(report):
    """Serialized report: sorted keys, shortest round-trip floats, trailing newline."""
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True, allow_nan=False) + '\n'


def validate_report(report):
    diagnostics = _schema_diagnostics(report, REPORT_SCHEMA)
    if diagnostics:
        raise VerificationError('report does not match its schema: ' + '; '.join(diagnostics))


def write_curve(path, header, rows):
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([float(v) if isinstance(v, np.floating) else v for v in row])


def record_run(**fields):
    """Add a ledger row; database trouble is logged and never fails a run."""
    if not settings.ERGOCERT.get('RECORD_RUNS', True):
        return None
    try:
        return ScenarioRun.objects.create(**fields)
    except DatabaseError as e:
        logger.warning('run not recorded in the ledger: %s', e)
        return None


# ========== Running ==========

@dataclass(frozen=True)
class ScenarioOutcome:
    exit_code: int
    status: str
    analysis: str = ''
    out_dir: str = ''
    report_path: str = None
    curve_path: str = None
    message: str = ''


def load_config(config_path, analysis=None):
    """(raw bytes, validated config); ``analysis`` replaces the file's analysis when given.

    Without a file the scenario is just ``{"analysis": analysis}``.
    """
    if config_path is None:
        if analysis is None:
            raise ScenarioError('no scenario file and no analysis given')
        config = {'analysis': analysis}
        raw = json.dumps(config, sort_keys=True).encode('utf-8')
        source = '<{}>'.format(analysis)
    else:
        raw, config = read_config(config_path)
        source = os.path.basename(config_path)
        if not isinstance(config, dict):
            raise ScenarioError('{}: invalid scenario'.format(source),
                                ['(root): a scenario is a JSON object'])
        if analysis is not None:
            config = dict(config, analysis=analysis)
    return raw, validate_config(config, source)


def run_scenario(config_path, out_dir, analysis=None, seed=None, tol=None, oracle=False):
    """Run one scenario into ``out_dir`` and return a :class:`ScenarioOutcome`."""
    journal = Journal()
    out_dir = os.path.abspath(out_dir)
    digest, name, used_seed = '', analysis or '', seed
    try:
        raw, config = load_config(config_path, analysis)
        digest = hashlib.sha256(raw).hexdigest()
        name = config['analysis']
        scenario = build_scenario(config, journal, seed, tol, oracle)
        used_seed = scenario.seed
        logger.info('running %s (config %s)', name, digest[:12])
        outcome = get_analysis(name).run(scenario, scenario.params)

        status = ScenarioRun.OK if outcome.certified else ScenarioRun.NO_CERTIFICATE
        report = to_jsonable({
            'schema_version': SCHEMA_VERSION,
            'analysis': name,
            'status': status,
            'result': outcome.result,
            'journal': journal.entries,
            'provenance': {
                'config_sha256': digest,
                'seed': scenario.seed,
                'tol': scenario.tol,
                'version': ergocert.__version__,
            },
        })
        validate_report(report)
        text = dumps_report(report)
        report_path, curve_path = _write_outputs(out_dir, text, outcome)
    except (ErgoCertError, *RUNTIME_ERRORS) as e:
        if isinstance(e, ErgoCertError):
            logger.error('%s', e)
        else:
            logger.exception('%s failed: %s', name or 'scenario', e)
        record_run(digest=digest, analysis=name, status=ScenarioRun.ERROR,
                   exit_code=EXIT_INPUT_ERROR, seed=used_seed or 0, out_dir=out_dir)
        return ScenarioOutcome(EXIT_INPUT_ERROR, ScenarioRun.ERROR, name, out_dir, message=str(e))

    exit_code = EXIT_OK if status == ScenarioRun.OK else EXIT_NO_CERTIFICATE
    record_run(digest=digest, analysis=name, status=status, exit_code=exit_code, seed=used_seed,
               out_dir=out_dir, report=text)
    message = 'no certificate' if exit_code == EXIT_NO_CERTIFICATE else 'ok'
    return ScenarioOutcome(exit_code, status, name, out_dir, report_path, curve_path, message)


def _write_outputs(out_dir, text, outcome):
    os.makedirs(out_dir, exist_ok=True)
    report_path = os.path.join(out_dir, REPORT_FILE)
    with open(report_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    curve_path = None
    if outcome.curve_header:
        curve_path = os.path.join(out_dir, CURVE_FILE)
        write_curve(curve_path, outcome.curve_header, outcome.curve_rows)
    return report_path, curve_path
