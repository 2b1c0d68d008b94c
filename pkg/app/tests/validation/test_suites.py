from django.test import TestCase
from unittest import mock

from app.validation.suites import (
    SUITES, SuiteResult, backward_euler_ratios, kernels_suite, run_suites, select_suites,
)


class TestSelectSuites(TestCase):
    """ Test the `select_suites` method """

    def test_all(self):
        actual = select_suites('all')
        expected = ['oracle', 'thinning', 'jump_bound', 'omega_scaling', 'kernels', 'prefix']
        self.assertEqual(actual, expected)

    def test_list(self):
        actual = select_suites('kernels, prefix')
        expected = ['kernels', 'prefix']
        self.assertEqual(actual, expected)

    def test_unknown(self):
        with self.assertRaises(ValueError):
            select_suites('kernels,benchmarks')

        with self.assertRaises(ValueError):
            select_suites(',')


class TestRunSuites(TestCase):
    """ Test the `run_suites` method """

    def test_runs_selection_in_order(self):
        calls = []

        def fake(name):
            def suite(quick=False, seed=0):
                calls.append((name, quick, seed))
                return SuiteResult(name, True)
            return suite

        with mock.patch.dict(SUITES, {'oracle': fake('oracle'), 'prefix': fake('prefix')}):
            results = run_suites('prefix,oracle', quick=True, seed=4)

        self.assertEqual([result.name for result in results], ['prefix', 'oracle'])
        self.assertEqual(calls, [('prefix', True, 4), ('oracle', True, 4)])

    def test_kernels_quick(self):
        result = kernels_suite(quick=True)

        self.assertTrue(result.passed)
        self.assertEqual(result.to_dict()['name'], 'kernels')


class TestBackwardEulerRatios(TestCase):
    """ Test the `backward_euler_ratios` method """

    def test_first_order(self):
        ratios = backward_euler_ratios()

        self.assertEqual(len(ratios), 2)
        for ratio in ratios:
            self.assertGreaterEqual(ratio, 1.8)
            self.assertLessEqual(ratio, 2.2)
