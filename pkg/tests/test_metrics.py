import unittest

import numpy as np

from segcertify import metrics
from segcertify.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    UndefinedMetricError,
)
from segcertify.smoothing import ABSTAIN

IGNORE = metrics.IGNORE


def label_map(labels, num_classes=3):
    return metrics.LabelMap(labels, num_classes=num_classes)


def set_mean_iou(preds, truths, num_classes):
    """Mean IoU computed with Python sets, one pair per input and class."""
    ious = []
    for pred, truth in zip(preds, truths):
        for label in range(num_classes):
            predicted = {
                index
                for index, value in enumerate(pred)
                if value == label and truth[index] != IGNORE
            }
            true = {
                index for index, value in enumerate(truth) if value == label
            }
            union = predicted | true
            if union:
                ious.append(len(predicted & true) / len(union))
    return sum(ious) / len(ious)


class TestLabelMap(unittest.TestCase):
    def setUp(self):
        self.label_map = label_map([0, 1, 2, ABSTAIN, IGNORE])

    def test_instantiate_class(self):
        pass

    def test_has_length(self):
        self.assertEqual(5, len(self.label_map))

    def test_valid_excludes_ignored_components(self):
        np.testing.assert_array_equal(
            [True, True, True, True, False], self.label_map.valid
        )

    def test_label_out_of_range_raises(self):
        with self.assertRaises(InvalidArgumentError):
            label_map([0, 3])

    def test_ignore_colliding_with_class_raises(self):
        with self.assertRaises(InvalidArgumentError):
            metrics.LabelMap([0, 1], num_classes=3, ignore=2)

    def test_custom_ignore(self):
        labels = metrics.LabelMap([0, 99], num_classes=3, ignore=99)
        np.testing.assert_array_equal([True, False], labels.valid)


class TestCertifiedAccuracy(unittest.TestCase):
    def test_identical_maps(self):
        labels = label_map([0, 1, 2, 1])
        self.assertEqual(1.0, metrics.certified_accuracy(labels, labels))

    def test_abstentions_are_incorrect(self):
        self.assertEqual(
            0.0,
            metrics.certified_accuracy(
                label_map([ABSTAIN] * 3), label_map([0, 1, 2])
            ),
        )

    def test_ignored_components_are_excluded(self):
        accuracy = metrics.certified_accuracy(
            label_map([0, ABSTAIN, 1, 2]), label_map([0, 0, 1, IGNORE])
        )
        self.assertAlmostEqual(2 / 3, accuracy)

    def test_all_ignored_raises(self):
        with self.assertRaises(UndefinedMetricError):
            metrics.certified_accuracy(
                label_map([0, 1]), label_map([IGNORE, IGNORE])
            )

    def test_different_lengths_raise(self):
        with self.assertRaises(DimensionMismatchError):
            metrics.certified_accuracy(label_map([0]), label_map([0, 1]))


class TestAbstainRate(unittest.TestCase):
    def test_no_abstentions(self):
        self.assertEqual(
            0.0, metrics.abstain_rate(label_map([0, 1]), label_map([1, 1]))
        )

    def test_all_abstain(self):
        self.assertEqual(
            1.0,
            metrics.abstain_rate(
                label_map([ABSTAIN, ABSTAIN]), label_map([1, 1])
            ),
        )

    def test_rate(self):
        pred = [ABSTAIN] * 7 + [0] * 93 + [ABSTAIN] * 5
        truth = [0] * 100 + [IGNORE] * 5
        self.assertAlmostEqual(
            0.07, metrics.abstain_rate(label_map(pred), label_map(truth))
        )

    def test_accuracy_is_bounded_by_abstentions(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            pred = label_map(rng.integers(-1, 3, size=20))
            truth = label_map(rng.integers(0, 3, size=20))
            self.assertLessEqual(
                metrics.certified_accuracy(pred, truth),
                1 - metrics.abstain_rate(pred, truth) + 1e-12,
            )


class TestMeanIou(unittest.TestCase):
    def test_identical_maps(self):
        labels = label_map([1, 1, 1])
        self.assertEqual(1.0, metrics.mean_iou([labels], [labels]))

    def test_hand_computed_example(self):
        self.assertAlmostEqual(
            7 / 12,
            metrics.mean_iou(
                label_map([0, 1, 1, 1]), label_map([0, 0, 1, 1])
            ),
        )

    def test_all_abstain(self):
        self.assertEqual(
            0.0,
            metrics.mean_iou(
                label_map([ABSTAIN] * 4), label_map([0, 0, 2, 1])
            ),
        )

    def test_ignored_components_do_not_count(self):
        self.assertEqual(
            1.0,
            metrics.mean_iou(label_map([0, 1, 2]), label_map([0, 1, IGNORE])),
        )

    def test_pools_over_inputs_and_classes(self):
        preds = [label_map([0, 1, 1, 1]), label_map([2, 2])]
        truths = [label_map([0, 0, 1, 1]), label_map([2, 2])]
        self.assertAlmostEqual(
            (1 / 2 + 2 / 3 + 1) / 3, metrics.mean_iou(preds, truths)
        )

    def test_averages_per_input_first(self):
        preds = [label_map([0, 1, 1, 1]), label_map([2, 2])]
        truths = [label_map([0, 0, 1, 1]), label_map([2, 2])]
        self.assertAlmostEqual(
            (7 / 12 + 1) / 2,
            metrics.mean_iou(preds, truths, per_input_first=True),
        )

    def test_matches_set_arithmetic(self):
        rng = np.random.default_rng(9)
        for _ in range(1000):
            num_components = int(rng.integers(1, 9))
            num_classes = int(rng.integers(1, 4))
            truth = rng.integers(0, num_classes + 1, size=num_components)
            truth[truth == num_classes] = IGNORE
            truth[0] = 0
            pred = rng.integers(-1, num_classes, size=num_components)
            expected = set_mean_iou([pred], [truth], num_classes)
            self.assertAlmostEqual(
                expected,
                metrics.mean_iou(
                    label_map(pred, num_classes),
                    label_map(truth, num_classes),
                ),
            )

    def test_is_permutation_invariant(self):
        rng = np.random.default_rng(10)
        pred = rng.integers(-1, 3, size=50)
        truth = rng.integers(0, 3, size=50)
        permutation = rng.permutation(50)
        self.assertAlmostEqual(
            metrics.mean_iou(label_map(pred), label_map(truth)),
            metrics.mean_iou(
                label_map(pred[permutation]), label_map(truth[permutation])
            ),
        )

    def test_different_class_numbers_raise(self):
        with self.assertRaises(DimensionMismatchError):
            metrics.mean_iou(label_map([0], 2), label_map([0], 3))

    def test_different_input_numbers_raise(self):
        with self.assertRaises(DimensionMismatchError):
            metrics.mean_iou([label_map([0])], [])

    def test_no_inputs_raise(self):
        with self.assertRaises(UndefinedMetricError):
            metrics.mean_iou([], [])


class TestSummarize(unittest.TestCase):
    def test_summary(self):
        preds = [label_map([0, ABSTAIN, 1, 2]), label_map([2, 2])]
        truths = [label_map([0, 0, 1, IGNORE]), label_map([2, 1])]
        summary = metrics.summarize(preds, truths)
        self.assertEqual(
            ["accuracy", "mean_iou", "abstain_rate"], list(summary)
        )
        self.assertAlmostEqual(3 / 5, summary["accuracy"])
        self.assertAlmostEqual(1 / 5, summary["abstain_rate"])

    def test_all_ignored_raises(self):
        with self.assertRaises(UndefinedMetricError):
            metrics.summarize([label_map([0])], [label_map([IGNORE])])


if __name__ == "__main__":
    unittest.main()
