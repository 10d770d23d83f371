# ErgoCert markov/tests_state_space.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

import numpy as np
from django.test import SimpleTestCase, tag

from .exceptions import DimensionError, ParameterError
from .state_space import (StateSpace, base_norm, bloch_positive_part_norm, bloch_trace_norm,
                          fibonacci_sphere, functional_f, in_base, is_positive, pure_states,
                          sup_over_sphere)


CLASSICAL2 = StateSpace.classical(2)
QUBIT = StateSpace.qubit()


# ========== Test Cases ==========

NORM_CASES = [
    # space, element, expected base norm, description
    (CLASSICAL2, (0.3, -0.7), 1.0, 'classical l1 sum'),
    (QUBIT, (0.5, 0.0, 0.0, 0.0), 1.0, 'maximally mixed state'),
    (QUBIT, (0.0, 1.0, 0.0, 0.0), 2.0, 'sigma_1 has eigenvalues +-1'),
    (CLASSICAL2, (-1.0, 2.0), 3.0, 'classical element off the cone'),
]

POSITIVITY_CASES = [
    (CLASSICAL2, (0.2, 0.8), True, 'probability vector'),
    (QUBIT, (0.5, 0.0, 0.0, 0.5), True, 'pure state on the boundary of the cone'),
    (QUBIT, (0.4, 0.5, 0.0, 0.0), False, 'Bloch vector longer than w0'),
    (CLASSICAL2, (-0.1, 1.1), False, 'negative entry'),
]

FUNCTIONAL_CASES = [
    (CLASSICAL2, (0.25, 0.75), 1.0, 'simplex element'),
    (QUBIT, (0.5, 0.1, 0.2, 0.3), 1.0, 'unit-trace matrix'),
    (CLASSICAL2, (-1.0, 2.0), 1.0, 'mass differs from the norm off the cone'),
]


class StateSpaceTests(SimpleTestCase):
    def test_constructors(self):
        self.assertTrue(CLASSICAL2.is_classical)
        self.assertEqual(CLASSICAL2.coordinate_dim, 2)
        self.assertTrue(QUBIT.is_qubit)
        self.assertEqual(QUBIT.coordinate_dim, 4)
        self.assertEqual(StateSpace.classical(3), StateSpace.classical(3))

    def test_describe(self):
        self.assertEqual(StateSpace.classical(5).describe(), {'classical': {'n': 5}})
        self.assertEqual(QUBIT.describe(), 'qubit')
        self.assertEqual(str(StateSpace.classical(5)), 'Classical(5)')

    def test_invalid_spaces(self):
        with self.assertRaises(ParameterError):
            StateSpace.classical(0)
        with self.assertRaises(ParameterError):
            StateSpace('ququart')


class ElementTests(SimpleTestCase):
    def test_base_norm(self):
        for space, x, expected, message in NORM_CASES:
            self.assertAlmostEqual(base_norm(space, x), expected, places=14, msg=message)

    def test_is_positive(self):
        for space, x, expected, message in POSITIVITY_CASES:
            self.assertEqual(is_positive(space, x, tol=0.0), expected, msg=message)

    def test_functional_f(self):
        for space, x, expected, message in FUNCTIONAL_CASES:
            self.assertAlmostEqual(functional_f(space, x), expected, places=14, msg=message)

    def test_in_base(self):
        self.assertTrue(in_base(CLASSICAL2, (0.25, 0.75)))
        self.assertFalse(in_base(CLASSICAL2, (0.5, 0.75)))
        self.assertTrue(in_base(QUBIT, (0.5, 0.0, 0.3, 0.4)))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            base_norm(CLASSICAL2, (1.0, 0.0, 0.0))
        with self.assertRaises(DimensionError):
            is_positive(QUBIT, (0.5, 0.0))
        with self.assertRaises(ParameterError):
            base_norm(CLASSICAL2, (np.nan, 0.0))

    def test_trace_norm_matches_eigenvalues(self):
        """Closed-form trace norm against dense 2x2 eigensolves."""
        paulis = np.array([[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[0, -1j], [1j, 0]],
                           [[1, 0], [0, -1]]])
        w = np.random.default_rng(0).standard_normal((10000, 4))
        eigenvalues = np.linalg.eigvalsh(np.tensordot(w, paulis, axes=1))
        np.testing.assert_allclose(bloch_trace_norm(w), np.abs(eigenvalues).sum(axis=1),
                                   rtol=0, atol=1e-12)
        np.testing.assert_allclose(bloch_positive_part_norm(w),
                                   np.clip(eigenvalues, 0.0, None).sum(axis=1), rtol=0, atol=1e-12)


class SphereTests(SimpleTestCase):
    def test_pure_states_are_states(self):
        for x in pure_states(fibonacci_sphere(20)):
            self.assertTrue(in_base(QUBIT, x))
            self.assertAlmostEqual(base_norm(QUBIT, x), 1.0, places=12)

    def test_sup_over_sphere(self):
        target = np.array([1.0, 2.0, 2.0]) / 3.0
        value, u = sup_over_sphere(lambda p: p @ target, restarts=4, seed=1)
        self.assertAlmostEqual(value, 1.0, places=9)
        self.assertAlmostEqual(float(np.linalg.norm(u)), 1.0, places=12)

    def test_sup_over_sphere_is_deterministic(self):
        def objective(p):
            return np.abs(p[:, 0] * p[:, 1]) + 0.1 * p[:, 2]
        self.assertEqual(sup_over_sphere(objective, seed=3)[0], sup_over_sphere(objective, seed=3)[0])


# ========== Norm Axioms ==========

def _random_element(space, rng):
    return rng.standard_normal(space.coordinate_dim) * rng.uniform(0.1, 10.0)


def _random_positive_element(space, rng):
    if space.is_classical:
        return rng.random(space.n) * rng.uniform(0.1, 10.0)
    w0 = rng.uniform(0.0, 5.0)
    u = rng.standard_normal(3)
    return np.concatenate([[w0], u / np.linalg.norm(u) * w0 * rng.random()])


@tag('property')
class NormPropertyTests(SimpleTestCase):
    SPACES = (StateSpace.classical(1), StateSpace.classical(3), StateSpace.classical(8), QUBIT)

    def test_triangle_inequality_and_homogeneity(self):
        rng = np.random.default_rng(41)
        for space in self.SPACES:
            for trial in range(10000):
                x, y = _random_element(space, rng), _random_element(space, rng)
                c = rng.uniform(-5.0, 5.0)
                nx, ny = base_norm(space, x), base_norm(space, y)
                msg = '{} trial {}'.format(space, trial)
                self.assertLessEqual(base_norm(space, x + y), nx + ny + 1e-12 * (nx + ny), msg=msg)
                self.assertAlmostEqual(base_norm(space, c * x), abs(c) * nx,
                                       delta=1e-12 * (1.0 + abs(c) * nx), msg=msg)

    def test_functional_is_norm_on_cone(self):
        rng = np.random.default_rng(42)
        for space in self.SPACES:
            for trial in range(10000):
                x = _random_positive_element(space, rng)
                msg = '{} trial {}'.format(space, trial)
                self.assertTrue(is_positive(space, x, tol=1e-12), msg=msg)
                norm = base_norm(space, x)
                self.assertAlmostEqual(functional_f(space, x), norm, delta=1e-12 * (1.0 + norm),
                                       msg=msg)
