import os
import unittest
from unittest import mock

import numpy as np

from segcertify import utils
from segcertify.exceptions import ConfigurationError, InvalidArgumentError


class TestWorkerCount(unittest.TestCase):
    def test_explicit_threads(self):
        self.assertEqual(4, utils.worker_count(4))

    def test_defaults_to_one_thread(self):
        with mock.patch.dict(os.environ, clear=True):
            self.assertEqual(1, utils.worker_count())

    def test_uses_environment_variable(self):
        with mock.patch.dict(os.environ, {utils.THREADS_VARIABLE: "3"}):
            self.assertEqual(3, utils.worker_count())

    def test_explicit_threads_override_environment_variable(self):
        with mock.patch.dict(os.environ, {utils.THREADS_VARIABLE: "3"}):
            self.assertEqual(2, utils.worker_count(2))

    def test_zero_threads_raise(self):
        with self.assertRaises(ConfigurationError):
            utils.worker_count(0)

    def test_non_integer_environment_variable_raises(self):
        with mock.patch.dict(os.environ, {utils.THREADS_VARIABLE: "many"}):
            with self.assertRaises(ConfigurationError):
                utils.worker_count()


class TestFormatNumber(unittest.TestCase):
    def test_integer(self):
        self.assertEqual("100", utils.format_number(100))

    def test_numpy_integer(self):
        self.assertEqual("7", utils.format_number(np.int64(7)))

    def test_float_has_shortest_representation(self):
        self.assertEqual("0.1", utils.format_number(0.1))
        self.assertEqual("0.75", utils.format_number(np.float64(0.75)))

    def test_float_reads_back_identically(self):
        value = 2 / 3
        self.assertEqual(value, float(utils.format_number(value)))


class TestParseNumber(unittest.TestCase):
    def test_integer(self):
        self.assertEqual(5, utils.parse_number("5"))
        self.assertIsInstance(utils.parse_number("5"), int)

    def test_float(self):
        self.assertEqual(0.01, utils.parse_number("0.01"))

    def test_exponential_integer(self):
        self.assertEqual(100_000, utils.parse_number("1e5"))
        self.assertIsInstance(utils.parse_number("1e5"), int)

    def test_small_exponential_stays_float(self):
        self.assertEqual(0.001, utils.parse_number("1e-3"))

    def test_text_raises(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_number("ten")

    def test_infinity_raises(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_number("inf")


class TestParseList(unittest.TestCase):
    def test_mixed_numbers(self):
        self.assertEqual([0, 1, 0.01], utils.parse_list("0,1,0.01"))

    def test_ignores_whitespace(self):
        self.assertEqual([1, 2], utils.parse_list(" 1, 2 "))

    def test_empty_list_raises(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_list("")


class TestParseGrid(unittest.TestCase):
    def test_powers_of_ten(self):
        self.assertEqual([100, 1000, 10_000], utils.parse_grid("1e2:1e4"))

    def test_equidistant(self):
        self.assertEqual(
            [0.0, 0.005, 0.01, 0.015, 0.02], utils.parse_grid("0:0.02:0.005")
        )

    def test_explicit_list(self):
        self.assertEqual([0.01, 0.02], utils.parse_grid("0.01,0.02"))

    def test_non_power_of_ten_raises(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_grid("100:500")

    def test_descending_grid_raises(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_grid("1e4:1e2")

    def test_too_many_parts_raise(self):
        with self.assertRaises(InvalidArgumentError):
            utils.parse_grid("0:1:2:3")


class TestPackageVersion(unittest.TestCase):
    def test_returns_string(self):
        self.assertIsInstance(utils.package_version(), str)


if __name__ == "__main__":
    unittest.main()
