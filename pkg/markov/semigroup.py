# ErgoCert markov/semigroup.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

"""Continuous and discrete Markov semigroups, point evaluation and Cesàro averages."""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .exceptions import InvarianceError, ParameterError
from .markov_ops import MarkovOperator, check_matrix, validate_markov


logger = logging.getLogger(__name__)

CONTINUOUS = 'continuous'
DISCRETE = 'discrete'

COMMUTATION_TOL = 1e-12
QUBIT_SAMPLE_TIMES = (0.01, 0.1, 1.0, 10.0)


@dataclass(frozen=True, eq=False)
class Semigroup:
    """T_t = exp(tA) for a generator A, or T_n = step^n for a Markov step.

    Build with :meth:`continuous` or :meth:`discrete`. When ``commuting_projection`` is given,
    the generator (or step) must commute with it.
    """
    space: object
    generator: np.ndarray = None
    step: MarkovOperator = None
    commuting_projection: object = None

    def __post_init__(self):
        if (self.generator is None) == (self.step is None):
            raise ParameterError('a semigroup needs exactly one of generator or step')
        if self.generator is not None:
            a = check_matrix(self.space, self.generator).copy()
            a.setflags(write=False)
            object.__setattr__(self, 'generator', a)
        P = self.commuting_projection
        if P is not None:
            p, m = P.matrix, self.base_matrix
            scale = max(1.0, float(np.abs(m).max()))
            if not np.allclose(m @ p, p @ m, rtol=0.0, atol=COMMUTATION_TOL * scale):
                raise InvarianceError('{} does not commute with the given projection'.format(
                    'generator' if self.is_continuous else 'step'))

    @classmethod
    def continuous(cls, space, generator, projection=None):
        return cls(space, generator=generator, commuting_projection=projection)

    @classmethod
    def discrete(cls, step, projection=None):
        return cls(step.space, step=step, commuting_projection=projection)

    @property
    def kind(self):
        return CONTINUOUS if self.generator is not None else DISCRETE

    @property
    def is_continuous(self):
        return self.generator is not None

    @property
    def base_matrix(self):
        """The generator of a continuous semigroup, the step matrix of a discrete one."""
        return self.generator if self.generator is not None else self.step.matrix

    def with_projection(self, projection):
        return Semigroup(self.space, self.generator, self.step, projection)

    def describe(self):
        key = 'rate_matrix' if self.is_continuous else 'discrete_operator'
        return {key: self.base_matrix.tolist()}


def _check_time(S, t, strictly_positive=False):
    if not math.isfinite(t) or t < 0 or (strictly_positive and t == 0):
        raise ParameterError('time must be {}, got {}'.format(
            'positive' if strictly_positive else 'nonnegative', t))
    if not S.is_continuous:
        if int(t) != t:
            raise ParameterError('discrete semigroups are evaluated at integer times, got {}'.format(t))
        return int(t)
    return float(t)


def evaluate_matrix(S, t):
    t = _check_time(S, t)
    if S.is_continuous:
        return linalg.expm(t * S.generator)
    return np.linalg.matrix_power(S.step.matrix, t)


def evaluate(S, t):
    """T_t: exp(tA) by scaling and squaring with a Padé approximant, or step^t by binary powers."""
    return MarkovOperator(S.space, evaluate_matrix(S, t))


def evaluate_many(S, times):
    """Stack of T_t matrices for the given times (batched expm for continuous semigroups)."""
    times = np.asarray(times, dtype=float)
    if S.is_continuous:
        if np.any(times < 0):
            raise ParameterError('times must be nonnegative')
        return linalg.expm(times[:, np.newaxis, np.newaxis] * S.generator[np.newaxis])
    return np.array([evaluate_matrix(S, t) for t in times])


def cesaro_matrix(S, t):
    t = _check_time(S, t, strictly_positive=True)
    if S.is_continuous:
        # exp(t [[A, I], [0, 0]]) has top-right block int_0^t exp(sA) ds
        d = S.space.coordinate_dim
        augmented = np.zeros((2 * d, 2 * d))
        augmented[:d, :d] = S.generator
        augmented[:d, d:] = np.eye(d)
        return linalg.expm(t * augmented)[:d, d:] / t
    step = S.step.matrix
    power = np.eye(step.shape[0])
    total = np.zeros_like(step)
    for _ in range(t):
        power = power @ step
        total += power
    return total / t


def cesaro(S, t):
    """The Cesàro average (1/t) int_0^t T_s ds, or (1/n) sum_{k=1}^n T^k for discrete S."""
    return MarkovOperator(S.space, cesaro_matrix(S, t))


@dataclass(frozen=True)
class GeneratorReport:
    kind: str
    passes: bool
    off_diagonal_nonnegative: bool = None
    column_sums_zero: bool = None
    sampled_markov: bool = None
    commutes_with_projection: bool = None


def validate_generator(S, tol=1e-9):
    """Report the structural conditions that make ``S`` a Markov semigroup; never raises."""
    commutes = None
    if S.commuting_projection is not None:
        p, m = S.commuting_projection.matrix, S.base_matrix
        commutes = bool(np.allclose(m @ p, p @ m, rtol=0.0, atol=tol))

    if not S.is_continuous:
        ok = validate_markov(S.step, tol).is_markov
        return GeneratorReport(DISCRETE, ok and commutes is not False, sampled_markov=ok,
                               commutes_with_projection=commutes)

    a = S.generator
    if S.space.is_classical:
        off = a - np.diag(np.diag(a))
        nonneg = bool(np.all(off >= -tol))
        sums = bool(np.allclose(a.sum(axis=0), 0.0, rtol=0.0, atol=tol))
        return GeneratorReport(CONTINUOUS, nonneg and sums and commutes is not False,
                               off_diagonal_nonnegative=nonneg, column_sums_zero=sums,
                               commutes_with_projection=commutes)

    sampled = all(validate_markov(evaluate(S, t), tol).is_markov for t in QUBIT_SAMPLE_TIMES)
    logger.debug('qubit generator sampled Markov check: %s', sampled)
    return GeneratorReport(CONTINUOUS, sampled and commutes is not False, sampled_markov=sampled,
                           commutes_with_projection=commutes)
