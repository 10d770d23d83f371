# ErgoCert markov/analyses.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""The analyses a scenario can request.

Each analysis pairs a parameter form with a runner ``run(scenario, params)`` that returns an
:class:`AnalysisOutcome`. ``certified=False`` marks a legitimate negative answer (no certificate
on the grid, Doeblin condition fails); input problems raise ErgoCertError subclasses instead.
"""

from dataclasses import dataclass, replace

from . import dobrushin, ergodicity, perturbation, qubit_example
from .exceptions import ScenarioError
from .forms import (CertifyForm, DeltaForm, DoeblinForm, ErgodizeForm, MeanForm,
                    QubitExampleForm, RhoForm, SpectralForm, WeakMeanForm)
from .semigroup import evaluate


ORACLE_TOL = 1e-10
CURVE_SLACK = 1e-9

CERTIFY_CURVE = ('t', 'measured_norm', 'envelope_bound')
MEAN_CURVE = ('t', 'measured_norm', 'ume_bound')


@dataclass(frozen=True, eq=False)
class AnalysisOutcome:
    result: dict
    certified: bool = True
    curve_header: tuple = ()
    curve_rows: tuple = ()


@dataclass(frozen=True)
class Analysis:
    name: str
    form_class: type
    run: object
    description: str
    needs_semigroup: bool = True

    def _params(self, required):
        return [self.form_class.aliases.get(name, name)
                for name, field in self.form_class.base_fields.items() if field.required == required]

    @property
    def required_params(self):
        return self._params(True)

    @property
    def optional_params(self):
        return self._params(False)


ANALYSES = {}


def analysis(name, form_class, description, needs_semigroup=True):
    def register(run):
        ANALYSES[name] = Analysis(name, form_class, run, description, needs_semigroup)
        return run
    return register


def get_analysis(name):
    try:
        return ANALYSES[name]
    except KeyError:
        raise ScenarioError('unknown analysis {!r}'.format(name),
                            ['analysis: must be one of {}'.format(', '.join(ANALYSES))]) from None


def list_analyses():
    """Catalog text: one entry per analysis with its required and optional parameters."""
    lines = []
    for entry in ANALYSES.values():
        lines.append('{:<14} {}'.format(entry.name, entry.description))
        lines.append('{:<14}   required: {}'.format('', ', '.join(entry.required_params) or '-'))
        lines.append('{:<14}   optional: {}'.format('', ', '.join(entry.optional_params)))
    return '\n'.join(lines)


def _grid(scenario, params):
    if params.get('t_grid'):
        return tuple(params['t_grid'])
    return ergodicity.default_grid(scenario.semigroup, params.get('t_unit') or 1.0)


def _violations(curve):
    return sum(1 for _, measured, bound in curve if measured > bound + CURVE_SLACK)


# ========== delta ==========

def _delta_by_method(method, T, P, restarts, seed):
    if method == 'exact':
        return dobrushin.delta_exact(T, P)
    if method == 'pair':
        return dobrushin.delta_pair_formula(T, P)
    if method == 'vertex':
        return dobrushin.delta_vertex_enum(T, P)
    if method == 'pauli':
        return dobrushin.delta_pauli_kernel(T, P)
    if method == 'bracket':
        return dobrushin.delta_bracket(T, P, restarts=restarts, seed=seed)
    return dobrushin.delta(T, P, restarts=restarts, seed=seed)


def _oracle(T, P, result, journal):
    space = P.space
    if not space.is_classical or space.n > dobrushin.VERTEX_ENUM_MAX_N:
        journal.log('warn', 'oracle skipped',
                    'vertex enumeration needs a classical space with n <= {}'.format(
                        dobrushin.VERTEX_ENUM_MAX_N))
        return None
    check = dobrushin.delta_vertex_enum(T, P)
    if result.is_exact:
        diff = abs(check.upper - result.upper)
    else:
        diff = max(result.lower - check.upper, check.upper - result.upper, 0.0)
    agrees = diff <= ORACLE_TOL
    if not agrees:
        journal.log('error', 'vertex enumeration disagrees with {}'.format(result.method),
                    '{!r} vs {!r}'.format(check.upper, result.upper))
    return {'method': check.method, 'value': check.upper, 'abs_diff': diff, 'agrees': agrees}


@analysis('delta', DeltaForm, 'generalized Dobrushin coefficient delta_P(T_t)')
def run_delta(scenario, params):
    T = evaluate(scenario.semigroup, params['t'])
    result = _delta_by_method(params['method'], T, scenario.projection, params['restarts'],
                              scenario.seed)
    out = result.to_dict()
    out['t'] = params['t']
    if result.note:
        scenario.journal.log('info', result.note)
    if scenario.oracle or params['oracle']:
        out['oracle'] = _oracle(T, scenario.projection, result, scenario.journal)
    return AnalysisOutcome(out)


# ========== certify / mean ==========

@analysis('certify', CertifyForm, 'uniform P-ergodicity certificate with exponential envelope')
def run_certify(scenario, params):
    S, P = scenario.semigroup, scenario.projection
    cert = ergodicity.certify_uniform(S, P, _grid(scenario, params), scenario.delta_fn,
                                      scenario.margin, scenario.tol)
    if not cert.certified:
        scenario.journal.log('warn', 'no uniform certificate', cert.reason)
        return AnalysisOutcome(cert.to_dict(), certified=False)

    curve = ergodicity.measure_curve(S, P, cert, params['points'], params['span'])
    cert = replace(cert, measured_curve=curve)
    result = cert.to_dict()
    result['certified'] = True
    result['envelope_violations'] = _violations(curve)
    result['sandwich'] = ergodicity.sandwich_check(S, P, (cert.t0, 2 * cert.t0, 4 * cert.t0),
                                                   scenario.delta_fn)
    if result['envelope_violations']:
        scenario.journal.log('error', 'measured |T_t - P| exceeds the envelope',
                             '{} points'.format(result['envelope_violations']))
    return AnalysisOutcome(result, True, CERTIFY_CURVE, curve)


@analysis('mean', MeanForm, 'uniform mean P-ergodicity certificate with 1/t rate')
def run_mean(scenario, params):
    S = scenario.semigroup
    Q = scenario.q_projection or scenario.projection
    cert = ergodicity.certify_mean(S, Q, _grid(scenario, params), scenario.delta_fn,
                                   scenario.margin, scenario.tol)
    if not cert.certified:
        scenario.journal.log('warn', 'no mean certificate', cert.reason)
        return AnalysisOutcome(cert.to_dict(), certified=False)

    curve = ergodicity.mean_curve(S, Q, cert, params['points'], params['span'])
    result = replace(cert, measured_curve=curve).to_dict()
    result['certified'] = True
    result['bound_violations'] = _violations(curve)
    if result['bound_violations']:
        scenario.journal.log('error', 'measured |A_t - Q| exceeds the 1/t bound',
                             '{} points'.format(result['bound_violations']))
    return AnalysisOutcome(result, True, MEAN_CURVE, curve)


@analysis('weak_mean', WeakMeanForm, 'weak mean P-ergodicity from delta_P(A_t0^n0) < 1')
def run_weak_mean(scenario, params):
    report = ergodicity.weak_mean_check(scenario.semigroup, scenario.projection, params['t0'],
                                        params['n0'], scenario.delta_fn, scenario.margin,
                                        params['steps'], scenario.tol)
    if not report.certifies:
        scenario.journal.log('warn', 'weak mean condition fails',
                             'delta_P(A_t0^n0) = {!r}'.format(report.q))
    return AnalysisOutcome(report.to_dict(), report.certifies)


@analysis('doeblin', DoeblinForm, 'Doeblin-type minorization of the Cesaro average by tau Q')
def run_doeblin(scenario, params):
    Q = scenario.q_projection or scenario.projection
    report = ergodicity.doeblin_check(scenario.semigroup, scenario.projection, Q, params['tau'],
                                      params['t0'], scenario.delta_fn, params['restarts'],
                                      scenario.seed, scenario.tol)
    if not report.exact:
        scenario.journal.log('info', 'compensator supremum found by optimization',
                             'result is heuristic')
    if report.holds and not report.cross_check_ok:
        scenario.journal.log('error', 'delta_P(A_t0) exceeds 1 - tau/2 although the condition holds',
                             repr(report.delta_direct))
    return AnalysisOutcome(report.to_dict(), report.holds)


# ========== perturbation ==========

@analysis('ergodize', ErgodizeForm, 'perturb by lambda(P - I) into a uniformly P-ergodic semigroup')
def run_ergodize(scenario, params):
    S, P = scenario.semigroup, scenario.projection
    res = perturbation.ergodize(S, P, params['epsilon'], params.get('t_grid') or None,
                                scenario.rho_tol, scenario.delta_fn)
    result = res.to_dict()
    if not res.certificate.certified:
        return AnalysisOutcome(result, certified=False)
    if not res.closeness_certified:
        scenario.journal.log('warn', 'rho_1 is below epsilon on the grid only',
                             'value + certified error = {!r}'.format(
                                 res.closeness.value + res.closeness.certified_error))
    if not res.cross_check_ok:
        scenario.journal.log('error', 'certificate q exceeds exp(-lambda t0)', repr(res.certificate.q))
    if params['probes']:
        probe = perturbation.probe_openness(res.perturbed.semigroup, P, res.certificate,
                                            params['probes'], scenario.seed,
                                            tol=scenario.rho_tol, delta_fn=scenario.delta_fn)
        result['probes'] = probe.to_dict()
        if not probe.all_certified:
            scenario.journal.log('error', 'a neighbour inside the openness radius failed to certify')
    return AnalysisOutcome(result)


@analysis('rho', RhoForm, 'distances rho_r and rho between two semigroups')
def run_rho(scenario, params):
    S = scenario.semigroup
    if scenario.compare is not None:
        other, against = scenario.compare, 'compare'
    elif params['lambda_'] is not None:
        other = perturbation.perturb(S, scenario.projection, params['lambda_'], scenario.tol).semigroup
        against = 'perturbation'
    else:
        raise ScenarioError('invalid parameters',
                            ['params.lambda: required when the scenario has no compare semigroup'])
    result = {'against': against}
    if params['r'] is not None:
        result['rho_r'] = perturbation.rho_r(S, other, params['r'], scenario.rho_tol).to_dict()
    if params['M'] is not None:
        result['rho'] = perturbation.rho_full(S, other, params['M'], scenario.rho_tol).to_dict()
    return AnalysisOutcome(result)


# ========== spectral ==========

@analysis('spectral', SpectralForm, 'delta_P(T_n)^(1/n) against the spectral radius r(T_1 - P)')
def run_spectral(scenario, params):
    S, P = scenario.semigroup, scenario.projection
    cert = ergodicity.certify_uniform(S, P, _grid(scenario, params), scenario.delta_fn,
                                      scenario.margin, scenario.tol)
    if not cert.certified:
        scenario.journal.log('warn', 'no uniform certificate', cert.reason)
        return AnalysisOutcome({'certificate': cert.to_dict()}, certified=False)
    report = ergodicity.spectral_check(S, P, params['n_max'], cert, params.get('fit_grid') or None,
                                       params['fit_tol'])
    if not report.equivalence_consistent:
        scenario.journal.log('warn', 'exponential and spectral fits disagree')
    result = report.to_dict()
    result['certificate'] = cert.to_dict()
    return AnalysisOutcome(result)


# ========== qubit example ==========

def _cell(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    return value


@analysis('qubit_example', QubitExampleForm,
          'Pauli channel Phi = Phi_{-1,0,1}: norms, Cesaro averages and Doeblin thresholds',
          needs_semigroup=False)
def run_qubit_example(scenario, params):
    report = qubit_example.example_report(params['n_max'], params['taus'])
    if not (report.exact_cesaro and report.matches_closed_forms):
        scenario.journal.log('error', 'example table deviates from the closed forms')
    if not report.sufficient_condition_respected:
        scenario.journal.log('error', 'phi = 0 fails above the sufficient threshold')
    rows = tuple(tuple(_cell(v) for v in row) for row in report.rows)
    return AnalysisOutcome(report.to_dict(), True, report.headers, rows)
