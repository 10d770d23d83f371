# ErgoCert markov/qubit_example.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Pauli channels and the worked qubit example.

Phi_{l,m,k}(w0 1 + w.sigma) = w0 1 + l w1 sigma_1 + m w2 sigma_2 + k w3 sigma_3 has Bloch matrix
diag(1, l, m, k) and is Markov iff max(|l|, |m|, |k|) <= 1. For Phi = Phi_{-1,0,1} and
P = Phi_{0,0,1}:

    Phi^n = Phi_{(-1)^n, 0, 1} (n >= 1), never approaching P, so Phi is not uniformly ergodic;
    A_n(Phi) = diag(1, -chi_odd(n)/n, 0, 1) -> P, so Phi is uniformly mean P-ergodic.

The minorization A_n0 x >= tau P x holds with zero compensator iff
A_n0 x - tau P x = (1 - tau) w0 1 - (chi_odd(n0)/n0) w1 sigma_1 + (1 - tau) w3 sigma_3 is positive
for every state, i.e. iff n0 is even or n0 (1 - tau) >= 1 (Euclidean criterion |w| <= w0). This
refines the sufficient condition n0 > 1/(1 - tau).
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dobrushin import delta_pauli_kernel, induced_norm
from .exceptions import MarkovianityError, ParameterError
from .markov_ops import MarkovOperator, projection_from_matrix
from .semigroup import Semigroup
from .state_space import StateSpace


QUBIT = StateSpace.qubit()


def _exact(value):
    return value if isinstance(value, (int, Fraction)) else Fraction(value)


@dataclass(frozen=True)
class PauliChannel:
    lam: object
    mu: object
    kappa: object

    def __post_init__(self):
        if max(abs(self.lam), abs(self.mu), abs(self.kappa)) > 1:
            raise MarkovianityError('Phi_{{{}, {}, {}}} is not Markov: max(|l|, |m|, |k|) > 1'.format(
                self.lam, self.mu, self.kappa))

    @property
    def diagonal(self):
        return (1, self.lam, self.mu, self.kappa)

    @property
    def bloch_matrix(self):
        return np.diag([float(v) for v in self.diagonal])

    @property
    def exact_matrix(self):
        """Bloch matrix as an object array of Fractions."""
        m = np.full((4, 4), Fraction(0), dtype=object)
        for i, v in enumerate(self.diagonal):
            m[i, i] = _exact(v)
        return m

    def as_operator(self):
        return MarkovOperator(QUBIT, self.bloch_matrix)

    def __matmul__(self, other):
        return PauliChannel(self.lam * other.lam, self.mu * other.mu, self.kappa * other.kappa)


PHI = PauliChannel(-1, 0, 1)
P_CHANNEL = PauliChannel(0, 0, 1)
IDENTITY = PauliChannel(1, 1, 1)


def chi_odd(n):
    return n % 2


def example_projection():
    return projection_from_matrix(QUBIT, P_CHANNEL.bloch_matrix)


def example_semigroup():
    """The discrete semigroup n -> Phi^n, tagged with its commuting projection P."""
    return Semigroup.discrete(PHI.as_operator(), example_projection())


def phi_power(n):
    """Phi^n; Phi^0 is the identity, not Phi_{1,0,1}."""
    if int(n) != n or n < 0:
        raise ParameterError('n must be a nonnegative integer, got {}'.format(n))
    if n == 0:
        return IDENTITY
    return PauliChannel((-1) ** int(n), 0, 1)


def cesaro_phi(n):
    """A_n(Phi) = (1/n) sum_{k=1}^n Phi^k in exact rational arithmetic (object array)."""
    if int(n) != n or n < 1:
        raise ParameterError('n must be a positive integer, got {}'.format(n))
    total = np.full((4, 4), Fraction(0), dtype=object)
    for k in range(1, int(n) + 1):
        total = total + phi_power(k).exact_matrix
    return total * Fraction(1, int(n))


def cesaro_phi_closed(n):
    return PauliChannel(-Fraction(chi_odd(n), n), 0, 1).exact_matrix


def as_float(matrix):
    return np.asarray(matrix, dtype=float)


def doeblin_phi_zero(n0, tau):
    """Whether A_n0(Phi) x >= tau P x holds for every state x with compensator phi = 0."""
    return chi_odd(n0) == 0 or n0 * (1 - Fraction(tau)) >= 1


def doeblin_thresholds(tau):
    """Smallest n0 with phi = 0, smallest odd such n0, and the sufficient bound floor(1/(1-tau)) + 1."""
    if not (0 < tau < 1):
        raise ParameterError('tau must lie in (0, 1), got {}'.format(tau))
    bound = 1 / (1 - Fraction(tau))
    odd = math.ceil(bound)
    if odd % 2 == 0:
        odd += 1
    smallest = next(n for n in range(1, odd + 1) if doeblin_phi_zero(n, tau))
    return {'tau': tau, 'smallest_n0': smallest, 'smallest_odd_n0': odd,
            'sufficient_n0': math.floor(bound) + 1}


@dataclass(frozen=True)
class ExampleReport:
    n_max: int
    taus: tuple
    rows: tuple
    thresholds: tuple
    exact_cesaro: bool = True

    @property
    def headers(self):
        return ('n', 'norm_phi_n_minus_P', 'norm_cesaro_minus_P', 'delta_P_cesaro') + tuple(
            'doeblin_holds_phi0_tau_{}'.format(tau) for tau in self.taus)

    @property
    def matches_closed_forms(self):
        return all(abs(row[1] - 1.0) <= 1e-12
                   and abs(row[2] - chi_odd(row[0]) / row[0]) <= 1e-12
                   and abs(row[3] - chi_odd(row[0]) / row[0]) <= 1e-12 for row in self.rows)

    @property
    def sufficient_condition_respected(self):
        """No n0 above the sufficient bound fails the phi = 0 condition."""
        return all(row[4 + j] for row in self.rows for j, t in enumerate(self.thresholds)
                   if row[0] >= t['sufficient_n0'])

    def to_dict(self):
        return {
            'n_max': self.n_max,
            'taus': list(self.taus),
            'thresholds': list(self.thresholds),
            'exact_cesaro': self.exact_cesaro,
            'matches_closed_forms': self.matches_closed_forms,
            'sufficient_condition_respected': self.sufficient_condition_respected,
        }


def example_report(n_max, taus):
    if int(n_max) != n_max or n_max < 2:
        raise ParameterError('n_max must be an integer >= 2, got {}'.format(n_max))
    taus = tuple(float(t) for t in taus)
    for tau in taus:
        if not (0 < tau < 1):
            raise ParameterError('each tau must lie in (0, 1), got {}'.format(tau))

    p = P_CHANNEL.bloch_matrix
    rows = []
    exact_cesaro = True
    for n in range(1, int(n_max) + 1):
        exact = cesaro_phi(n)
        exact_cesaro = exact_cesaro and bool(np.all(exact == cesaro_phi_closed(n)))
        cesaro = as_float(exact)
        rows.append((
            n,
            induced_norm(phi_power(n).bloch_matrix - p, QUBIT),
            induced_norm(cesaro - p, QUBIT),
            delta_pauli_kernel(cesaro, p).upper,
        ) + tuple(doeblin_phi_zero(n, tau) for tau in taus))
    return ExampleReport(int(n_max), taus, tuple(rows), tuple(doeblin_thresholds(t) for t in taus),
                         exact_cesaro)
