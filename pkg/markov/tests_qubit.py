# ErgoCert markov/tests_qubit.py
#
# Copyright © 2026 The ErgoCert developers.
# Released under the MIT license; see LICENSE.

from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase

from .ergodicity import certify_mean, certify_uniform, doeblin_check
from .exceptions import MarkovianityError, ParameterError
from .qubit_example import (IDENTITY, P_CHANNEL, PHI, PauliChannel, as_float, cesaro_phi,
                            cesaro_phi_closed, doeblin_phi_zero, doeblin_thresholds,
                            example_projection, example_report, example_semigroup, phi_power)
from .semigroup import cesaro_matrix, evaluate_matrix


def _diagonal(matrix):
    return [matrix[i, i] for i in range(4)]


# ========== Pauli Channels ==========

class PauliChannelTests(SimpleTestCase):
    def test_markov_condition(self):
        PauliChannel(-1, 0, 1)
        PauliChannel(Fraction(1, 2), -1, 0)
        with self.assertRaises(MarkovianityError):
            PauliChannel(1.5, 0, 0)

    def test_composition(self):
        self.assertEqual(PHI @ PHI, PauliChannel(1, 0, 1))
        self.assertEqual(PHI @ P_CHANNEL, P_CHANNEL)
        np.testing.assert_array_equal(PHI.bloch_matrix, np.diag([1.0, -1.0, 0.0, 1.0]))
        np.testing.assert_array_equal(PHI.as_operator().matrix, PHI.bloch_matrix)

    def test_phi_power(self):
        self.assertEqual(phi_power(0), IDENTITY)
        self.assertEqual(phi_power(1), PHI)
        self.assertEqual(phi_power(3), PHI)
        self.assertEqual(phi_power(4), PauliChannel(1, 0, 1))
        for bad in (-1, 1.5):
            with self.assertRaises(ParameterError):
                phi_power(bad)

    def test_semigroup_matches_powers(self):
        S = example_semigroup()
        self.assertEqual(S.commuting_projection.describe(), {'pauli_p': [0.0, 0.0, 1.0]})
        for n in range(6):
            np.testing.assert_array_equal(evaluate_matrix(S, n), phi_power(n).bloch_matrix)


# ========== Cesàro Averages ==========

CESARO_CASES = [
    # n, expected sigma_1 coefficient of A_n(Phi)
    (1, Fraction(-1)),
    (2, Fraction(0)),
    (3, Fraction(-1, 3)),
    (4, Fraction(0)),
    (7, Fraction(-1, 7)),
]


class CesaroPhiTests(SimpleTestCase):
    def test_exact_examples(self):
        for n, coefficient in CESARO_CASES:
            self.assertEqual(_diagonal(cesaro_phi(n)), [1, coefficient, 0, 1], msg='n = {}'.format(n))

    def test_closed_form(self):
        for n in range(1, 41):
            self.assertTrue(np.all(cesaro_phi(n) == cesaro_phi_closed(n)), msg='n = {}'.format(n))

    def test_float_average_matches(self):
        S = example_semigroup()
        for n in (1, 2, 5, 10):
            np.testing.assert_allclose(cesaro_matrix(S, n), as_float(cesaro_phi(n)), atol=1e-15)

    def test_invalid_n(self):
        with self.assertRaises(ParameterError):
            cesaro_phi(0)

    def test_certificates(self):
        S, P = example_semigroup(), example_projection()
        self.assertFalse(certify_uniform(S, P, t_grid=range(1, 9)).certified)
        cert = certify_mean(S, P, t_grid=range(1, 9))
        self.assertTrue(cert.certified)
        self.assertEqual(cert.t0, 2)
        self.assertEqual(cert.q, 0.0)


# ========== Doeblin Condition ==========

class DoeblinThresholdTests(SimpleTestCase):
    def test_thresholds(self):
        self.assertEqual(doeblin_thresholds(0.5),
                         {'tau': 0.5, 'smallest_n0': 2, 'smallest_odd_n0': 3, 'sufficient_n0': 3})
        self.assertEqual(doeblin_thresholds(0.75),
                         {'tau': 0.75, 'smallest_n0': 2, 'smallest_odd_n0': 5, 'sufficient_n0': 5})
        for bad in (0.0, 1.0, 1.5):
            with self.assertRaises(ParameterError):
                doeblin_thresholds(bad)

    def test_phi_zero_table(self):
        cases = [(1, 0.5, False), (2, 0.5, True), (3, 0.5, True), (3, 0.75, False),
                 (4, 0.75, True), (5, 0.75, True), (1, 0.25, False)]
        for n0, tau, expected in cases:
            self.assertEqual(doeblin_phi_zero(n0, tau), expected, msg='n0={} tau={}'.format(n0, tau))

    def test_agrees_with_doeblin_check(self):
        S, P = example_semigroup(), example_projection()
        for tau in (0.5, 0.75):
            for n0 in range(1, 8):
                with self.subTest(tau=tau, n0=n0):
                    report = doeblin_check(S, P, P, tau, n0)
                    self.assertTrue(report.exact)
                    self.assertEqual(report.max_phi_norm <= 1e-12, doeblin_phi_zero(n0, tau))
                    if doeblin_phi_zero(n0, tau):
                        self.assertTrue(report.holds)
                        self.assertTrue(report.cross_check_ok)

    def test_single_step_fails(self):
        report = doeblin_check(example_semigroup(), example_projection(), example_projection(), 0.5, 1)
        self.assertFalse(report.holds)
        self.assertAlmostEqual(report.max_phi_norm, 0.25, places=15)
        self.assertIsNone(report.certificate)


# ========== Report ==========

class ExampleReportTests(SimpleTestCase):
    def test_report(self):
        report = example_report(100, [0.5])
        self.assertEqual(len(report.rows), 100)
        self.assertTrue(report.exact_cesaro)
        self.assertTrue(report.matches_closed_forms)
        self.assertTrue(report.sufficient_condition_respected)
        self.assertEqual(report.headers, ('n', 'norm_phi_n_minus_P', 'norm_cesaro_minus_P',
                                          'delta_P_cesaro', 'doeblin_holds_phi0_tau_0.5'))
        for row, expected in zip(report.rows, [(1, 1.0, 1.0, 1.0, False), (2, 1.0, 0.0, 0.0, True)]):
            self.assertEqual(row[0], expected[0])
            np.testing.assert_allclose(row[1:4], expected[1:4], atol=1e-15)
            self.assertEqual(row[4], expected[4])
        n, norm_power, norm_cesaro, delta_cesaro, holds = report.rows[98]
        self.assertEqual(n, 99)
        self.assertAlmostEqual(norm_power, 1.0, places=15)
        self.assertAlmostEqual(norm_cesaro, 1 / 99, places=15)
        self.assertAlmostEqual(delta_cesaro, 1 / 99, places=15)
        self.assertTrue(holds)

    def test_to_dict(self):
        d = example_report(10, [0.5, 0.75]).to_dict()
        self.assertEqual(d['n_max'], 10)
        self.assertEqual(d['taus'], [0.5, 0.75])
        self.assertEqual([t['sufficient_n0'] for t in d['thresholds']], [3, 5])
        self.assertTrue(d['matches_closed_forms'])

    def test_invalid_arguments(self):
        with self.assertRaises(ParameterError):
            example_report(1, [0.5])
        with self.assertRaises(ParameterError):
            example_report(10, [1.0])
