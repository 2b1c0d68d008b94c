import math

from django.test import TestCase

from app.exceptions import DegenerateDenominatorError
from app.parareal.norms import error_norm, residual_norm


class TestResidualNorm(TestCase):
    """ Test the `residual_norm` method """

    def test_single_species(self):
        actual = residual_norm([[2.0]], [[1.0]])
        expected = 0.5
        self.assertEqual(actual, expected)

    def test_maximum_over_points(self):
        actual = residual_norm([[0.0], [2.0], [1.0]], [[0.0], [1.0], [1.0]])
        expected = 0.5
        self.assertEqual(actual, expected)

    def test_identical_rows(self):
        actual = residual_norm([[3.0, 4.0], [5.0, 6.0]], [[3.0, 4.0], [5.0, 6.0]])
        expected = 0.0
        self.assertEqual(actual, expected)

    def test_degenerate_denominator(self):
        with self.assertRaises(DegenerateDenominatorError):
            residual_norm([[1.0]], [[-1.0]])

    def test_shape_mismatch(self):
        with self.assertRaises(ValueError):
            residual_norm([[1.0, 2.0]], [[1.0]])


class TestErrorNorm(TestCase):
    """ Test the `error_norm` method """

    def test_two_species(self):
        """
        Test `v = (1, 3)` against `u = (1, 1)` gives `2^(-1/2) ||(0, 1)||`.
        """
        actual = error_norm([1.0, 3.0], [1.0, 1.0])
        expected = 1.0 / math.sqrt(2.0)
        self.assertAlmostEqual(actual, expected, places=15)
