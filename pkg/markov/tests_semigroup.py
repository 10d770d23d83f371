# ErgoCert markov/tests_semigroup.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import math

import numpy as np
from django.test import SimpleTestCase, tag
from scipy import integrate

from .exceptions import InvarianceError, ParameterError
from .markov_ops import MarkovOperator, rank_one_projection, validate_markov
from .sampling import random_rate_matrix
from .semigroup import (CONTINUOUS, DISCRETE, Semigroup, cesaro, cesaro_matrix, evaluate,
                        evaluate_many, validate_generator)
from .state_space import StateSpace


CLASSICAL2 = StateSpace.classical(2)
TWO_STATE = np.array([[-1.0, 1.0], [1.0, -1.0]])
UNIFORM = rank_one_projection(CLASSICAL2, [0.5, 0.5])
SWAP = MarkovOperator(CLASSICAL2, [[0.0, 1.0], [1.0, 0.0]])


def _create_two_state():
    return Semigroup.continuous(CLASSICAL2, TWO_STATE, UNIFORM)


def _create_random_generator(rng, n):
    rates = rng.uniform(0.0, 2.0, (n, n))
    np.fill_diagonal(rates, 0.0)
    return rates - np.diag(rates.sum(axis=0))


class SemigroupTests(SimpleTestCase):
    def test_kinds(self):
        self.assertEqual(_create_two_state().kind, CONTINUOUS)
        self.assertEqual(Semigroup.discrete(SWAP).kind, DISCRETE)
        self.assertEqual(_create_two_state().describe(), {'rate_matrix': TWO_STATE.tolist()})
        self.assertEqual(Semigroup.discrete(SWAP).describe(),
                         {'discrete_operator': [[0.0, 1.0], [1.0, 0.0]]})

    def test_needs_exactly_one_definition(self):
        with self.assertRaises(ParameterError):
            Semigroup(CLASSICAL2)
        with self.assertRaises(ParameterError):
            Semigroup(CLASSICAL2, generator=TWO_STATE, step=SWAP)

    def test_projection_must_commute(self):
        skewed = np.array([[-1.0, 2.0], [1.0, -2.0]])
        with self.assertRaises(InvarianceError):
            Semigroup.continuous(CLASSICAL2, skewed, UNIFORM)
        with self.assertRaises(InvarianceError):
            Semigroup.continuous(CLASSICAL2, skewed).with_projection(UNIFORM)

    def test_two_state_closed_form(self):
        S = _create_two_state()
        p, eye = UNIFORM.matrix, np.eye(2)
        for t in (0.0, 0.25, 1.0, 3.0):
            with self.subTest(t=t):
                expected = p + math.exp(-2 * t) * (eye - p)
                np.testing.assert_allclose(evaluate(S, t).matrix, expected, atol=1e-14)

    def test_evaluate_many_matches_evaluate(self):
        S = _create_two_state()
        times = [0.5, 1.0, 2.0, 7.5]
        stack = evaluate_many(S, times)
        for t, m in zip(times, stack):
            np.testing.assert_allclose(m, evaluate(S, t).matrix, atol=1e-14)

    def test_semigroup_law(self):
        rng = np.random.default_rng(7)
        S = Semigroup.continuous(StateSpace.classical(4), _create_random_generator(rng, 4))
        s, t = 0.3, 1.1
        np.testing.assert_allclose(evaluate(S, s + t).matrix,
                                   evaluate(S, s).matrix @ evaluate(S, t).matrix, atol=1e-12)
        np.testing.assert_allclose(evaluate(S, 0).matrix, np.eye(4))

    def test_discrete_powers(self):
        S = Semigroup.discrete(SWAP)
        np.testing.assert_allclose(evaluate(S, 3).matrix, SWAP.matrix)
        np.testing.assert_allclose(evaluate(S, 4).matrix, np.eye(2))
        with self.assertRaises(ParameterError):
            evaluate(S, 1.5)
        with self.assertRaises(ParameterError):
            evaluate(_create_two_state(), -1.0)


class CesaroTests(SimpleTestCase):
    def test_two_state_cesaro(self):
        S = _create_two_state()
        p, eye = UNIFORM.matrix, np.eye(2)
        for t in (0.1, 1.0, 5.0):
            with self.subTest(t=t):
                expected = p + (1 - math.exp(-2 * t)) / (2 * t) * (eye - p)
                np.testing.assert_allclose(cesaro_matrix(S, t), expected, atol=1e-13)

    def test_discrete_cesaro(self):
        S = Semigroup.discrete(SWAP)
        np.testing.assert_allclose(cesaro(S, 2).matrix, np.full((2, 2), 0.5))
        np.testing.assert_allclose(cesaro(S, 3).matrix, [[1 / 3, 2 / 3], [2 / 3, 1 / 3]])

    def test_cesaro_needs_positive_time(self):
        with self.assertRaises(ParameterError):
            cesaro(_create_two_state(), 0.0)
        with self.assertRaises(ParameterError):
            cesaro(Semigroup.discrete(SWAP), 0)

    def test_cesaro_is_markov(self):
        rng = np.random.default_rng(11)
        S = Semigroup.continuous(StateSpace.classical(5), _create_random_generator(rng, 5))
        m = cesaro_matrix(S, 2.5)
        self.assertTrue(np.all(m >= -1e-14))
        np.testing.assert_allclose(m.sum(axis=0), np.ones(5), atol=1e-13)


class GeneratorValidationTests(SimpleTestCase):
    def test_classical_generators(self):
        report = validate_generator(_create_two_state())
        self.assertTrue(report.passes)
        self.assertTrue(report.commutes_with_projection)

        negative_rate = Semigroup.continuous(CLASSICAL2, [[1.0, -1.0], [-1.0, 1.0]])
        report = validate_generator(negative_rate)
        self.assertFalse(report.passes)
        self.assertFalse(report.off_diagonal_nonnegative)
        self.assertTrue(report.column_sums_zero)

        leaky = Semigroup.continuous(CLASSICAL2, [[-1.0, 1.0], [0.5, -1.0]])
        self.assertFalse(validate_generator(leaky).column_sums_zero)

    def test_qubit_generator(self):
        qubit = StateSpace.qubit()
        dephasing = Semigroup.continuous(qubit, np.diag([0.0, -1.0, -1.0, 0.0]))
        self.assertTrue(validate_generator(dephasing).passes)
        pumping = Semigroup.continuous(qubit, np.diag([0.0, 1.0, 0.0, 0.0]))
        self.assertFalse(validate_generator(pumping).passes)

    def test_discrete_step(self):
        self.assertTrue(validate_generator(Semigroup.discrete(SWAP)).passes)
        bad = Semigroup.discrete(MarkovOperator(CLASSICAL2, [[0.5, 0.5], [0.6, 0.5]]))
        self.assertFalse(validate_generator(bad).passes)


# ========== Random Chains ==========

@tag('property')
class SemigroupPropertyTests(SimpleTestCase):
    def test_cesaro_matches_simpson(self):
        rng = np.random.default_rng(31)
        for trial in range(10):
            S = Semigroup.continuous(StateSpace.classical(4), random_rate_matrix(4, rng))
            for t in (0.5, 1.0, 5.0):
                with self.subTest(trial=trial, t=t):
                    times = np.linspace(0.0, t, 2 ** 12 + 1)
                    average = integrate.simpson(evaluate_many(S, times), x=times, axis=0) / t
                    np.testing.assert_allclose(cesaro_matrix(S, t), average, rtol=0, atol=1e-10)

    def test_semigroup_law(self):
        rng = np.random.default_rng(32)
        S = Semigroup.continuous(StateSpace.classical(5), random_rate_matrix(5, rng, scale=2.0))
        for s, t in rng.uniform(0.0, 5.0, (100, 2)):
            np.testing.assert_allclose(evaluate(S, s + t).matrix,
                                       evaluate(S, s).matrix @ evaluate(S, t).matrix,
                                       rtol=0, atol=1e-12, err_msg='s={} t={}'.format(s, t))

    def test_evaluate_is_markov(self):
        rng = np.random.default_rng(33)
        for trial in range(50):
            n = int(rng.integers(1, 9))
            S = Semigroup.continuous(StateSpace.classical(n), random_rate_matrix(n, rng))
            for t in (0.1, 1.0, 10.0, 100.0):
                self.assertTrue(validate_markov(evaluate(S, t), tol=1e-10).is_markov,
                                msg='trial {} t={}'.format(trial, t))
