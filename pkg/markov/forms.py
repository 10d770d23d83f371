# ErgoCert markov/forms.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import math

from django import forms
from django.conf import settings
from django.core.exceptions import NON_FIELD_ERRORS


# ========== Base Form ==========

class ParamsForm(forms.Form):
    """Cleans the ``params`` object of a scenario.

    Missing keys take the field's ``initial`` value; keys that name no field are errors.
    """
    seed = forms.IntegerField(required=False, min_value=0)
    tol = forms.FloatField(required=False)

    # form field name -> scenario key, for keys that are not Python identifiers
    aliases = {}

    def __init__(self, params):
        keys = {alias: name for name, alias in self.aliases.items()}
        params = {keys.get(key, key): value for key, value in params.items()}
        data = {name: field.initial for name, field in self.base_fields.items()
                if field.initial is not None}
        data.update(params)
        super().__init__(data)
        self.unknown = sorted(set(params) - set(self.base_fields))

    def clean_tol(self):
        tol = self.cleaned_data['tol']
        if tol is not None and not tol > 0:
            raise forms.ValidationError('must be positive')
        return tol

    def clean(self):
        cleaned_data = super().clean()
        for name in self.unknown:
            self.add_error(None, 'unknown parameter {!r}'.format(name))
        return cleaned_data

    def diagnostics(self):
        """Form errors as 'params.<field>: <message>' lines."""
        lines = []
        for name, errors in self.errors.items():
            if name == NON_FIELD_ERRORS:
                prefix = 'params'
            else:
                prefix = 'params.' + self.aliases.get(name, name)
            lines.extend('{}: {}'.format(prefix, message) for message in errors)
        return lines


def _positive(value, name='value'):
    if value is not None and not value > 0:
        raise forms.ValidationError('{} must be positive'.format(name))
    return value


def _time_grid(value):
    if value is None:
        return None
    if not isinstance(value, list) or not value:
        raise forms.ValidationError('must be a nonempty list of times')
    for t in value:
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t) or t <= 0:
            raise forms.ValidationError('times must be positive numbers, got {!r}'.format(t))
    return value


class GridMixin(forms.Form):
    t_grid = forms.JSONField(required=False)
    t_unit = forms.FloatField(required=False, initial=1.0)

    def clean_t_grid(self):
        return _time_grid(self.cleaned_data['t_grid'])

    def clean_t_unit(self):
        return _positive(self.cleaned_data['t_unit'], 't_unit')


class CurveMixin(forms.Form):
    points = forms.IntegerField(required=False, min_value=2,
                                initial=settings.ERGOCERT['CURVE_POINTS'])


# ========== Analysis Forms ==========

class DeltaForm(ParamsForm):
    METHODS = ('auto', 'exact', 'pair', 'vertex', 'pauli', 'bracket')

    t = forms.FloatField(required=False, min_value=0.0, initial=1.0)
    method = forms.ChoiceField(required=False, choices=[(m, m) for m in METHODS], initial='auto')
    restarts = forms.IntegerField(required=False, min_value=0, initial=16)
    oracle = forms.BooleanField(required=False)


class CertifyForm(GridMixin, CurveMixin, ParamsForm):
    span = forms.FloatField(required=False, initial=50.0)

    def clean_span(self):
        return _positive(self.cleaned_data['span'], 'span')


class MeanForm(GridMixin, CurveMixin, ParamsForm):
    span = forms.FloatField(required=False, initial=100.0)

    def clean_span(self):
        return _positive(self.cleaned_data['span'], 'span')


class WeakMeanForm(ParamsForm):
    t0 = forms.FloatField()
    n0 = forms.IntegerField(required=False, min_value=1, initial=1)
    steps = forms.IntegerField(required=False, min_value=1, max_value=30, initial=7)

    def clean_t0(self):
        return _positive(self.cleaned_data['t0'], 't0')


class DoeblinForm(ParamsForm):
    t0 = forms.FloatField()
    tau = forms.FloatField()
    restarts = forms.IntegerField(required=False, min_value=1, initial=8)

    def clean_t0(self):
        return _positive(self.cleaned_data['t0'], 't0')

    def clean_tau(self):
        tau = self.cleaned_data['tau']
        if not 0.0 < tau <= 1.0:
            raise forms.ValidationError('tau must lie in (0, 1]')
        return tau


class ErgodizeForm(GridMixin, ParamsForm):
    epsilon = forms.FloatField()
    probes = forms.IntegerField(required=False, min_value=0, initial=0)

    def clean_epsilon(self):
        return _positive(self.cleaned_data['epsilon'], 'epsilon')


class RhoForm(ParamsForm):
    r = forms.FloatField(required=False)
    M = forms.IntegerField(required=False, min_value=1)
    # perturbation strength of the default comparison semigroup
    lambda_ = forms.FloatField(required=False)

    aliases = {'lambda_': 'lambda'}

    def clean_r(self):
        return _positive(self.cleaned_data['r'], 'r')

    def clean_lambda_(self):
        return _positive(self.cleaned_data['lambda_'], 'lambda')

    def clean(self):
        cleaned_data = super().clean()
        if cleaned_data.get('r') is None and cleaned_data.get('M') is None \
                and 'r' not in self.errors and 'M' not in self.errors:
            cleaned_data['r'] = 1.0
        return cleaned_data


class SpectralForm(GridMixin, ParamsForm):
    n_max = forms.IntegerField(required=False, min_value=1, max_value=100000, initial=200)
    fit_grid = forms.JSONField(required=False)
    fit_tol = forms.FloatField(required=False, initial=1e-8)

    def clean_fit_grid(self):
        return _time_grid(self.cleaned_data['fit_grid'])

    def clean_fit_tol(self):
        return _positive(self.cleaned_data['fit_tol'], 'fit_tol')


class QubitExampleForm(ParamsForm):
    n_max = forms.IntegerField(required=False, min_value=2, initial=100)
    taus = forms.JSONField(required=False, initial=[0.5])

    def clean_taus(self):
        taus = self.cleaned_data['taus']
        if not isinstance(taus, list) or not taus:
            raise forms.ValidationError('must be a nonempty list')
        for tau in taus:
            if isinstance(tau, bool) or not isinstance(tau, (int, float)) or not 0.0 < tau < 1.0:
                raise forms.ValidationError('each tau must lie in (0, 1), got {!r}'.format(tau))
        return taus
