"""
Segmentation quality metrics over certified outputs.

Certified segmentations may contain the abstain sentinel
(:data:`segcertify.smoothing.ABSTAIN`) for components the certification
declined to commit to a class for. Ground truth may contain an ignore
sentinel (by default 255, as in many segmentation datasets) for components
without a valid label. Ignored components are excluded from all metrics.


Metrics
=======

certified accuracy
    Rate of correctly classified components among all non-ignored ones.
    Abstentions count as incorrect.

abstain rate
    Rate of abstentions among all non-ignored components.

mean intersection over union (mIoU)
    For every input and every class present in ground truth or prediction,
    the size of the intersection of the predicted and true component sets
    divided by the size of their union. The abstain sentinel is no class,
    hence abstentions only enlarge the union. By default, the average is
    pooled over all (input, class) pairs, optionally it is first taken per
    input and then over inputs.


Module documentation
====================

"""

import logging

import numpy as np

from segcertify.exceptions import (
    DimensionMismatchError,
    InvalidArgumentError,
    UndefinedMetricError,
)
from segcertify.smoothing import ABSTAIN

logger = logging.getLogger(__name__)

IGNORE = 255
"""Default ignore sentinel of ground-truth label maps."""


class LabelMap:
    """
    Labels of all components of one input.

    Attributes
    ----------
    labels : :class:`numpy.ndarray`
        Class id per component, or one of the sentinels

    num_classes : :class:`int`
        Number of classes *C*

    ignore : :class:`int`
        Ignore sentinel, must not be a valid class id

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised on creation if a label is neither a class id nor a sentinel

    """

    def __init__(self, labels=None, num_classes=2, ignore=IGNORE):
        if labels is None:
            labels = []
        self.labels = np.asarray(labels, dtype=np.int64).ravel()
        self.num_classes = num_classes
        self.ignore = ignore
        self._check()

    def __len__(self):
        return len(self.labels)

    def _check(self):
        if self.num_classes < 1:
            raise InvalidArgumentError("Need at least one class")
        if 0 <= self.ignore < self.num_classes or self.ignore == ABSTAIN:
            raise InvalidArgumentError(
                f"Ignore sentinel {self.ignore} collides with a label"
            )
        valid = (
            ((self.labels >= 0) & (self.labels < self.num_classes))
            | (self.labels == ABSTAIN)
            | (self.labels == self.ignore)
        )
        if not valid.all():
            offending = self.labels[~valid][0]
            raise InvalidArgumentError(
                f"Label {offending} neither class id nor sentinel"
            )

    @property
    def valid(self):
        """
        Mask of the components not ignored.

        Returns
        -------
        mask : :class:`numpy.ndarray`
            Boolean array, one entry per component

        """
        return self.labels != self.ignore


def _as_label_maps(maps):
    if isinstance(maps, LabelMap):
        return [maps]
    return list(maps)


def _check_pair(pred, truth):
    if len(pred) != len(truth):
        raise DimensionMismatchError(
            f"Prediction has {len(pred)} components, ground truth "
            f"{len(truth)}"
        )
    if pred.num_classes != truth.num_classes:
        raise DimensionMismatchError(
            f"Prediction has {pred.num_classes} classes, ground truth "
            f"{truth.num_classes}"
        )


def _check_lists(preds, truths):
    preds = _as_label_maps(preds)
    truths = _as_label_maps(truths)
    if len(preds) != len(truths):
        raise DimensionMismatchError(
            f"{len(preds)} predictions, but {len(truths)} ground truths"
        )
    if not preds:
        raise UndefinedMetricError("No inputs given")
    for pred, truth in zip(preds, truths):
        _check_pair(pred, truth)
    return preds, truths


def _counts(pred, truth):
    """Number of valid, correct and abstained components of one input."""
    valid = truth.valid
    predicted = pred.labels[valid]
    return (
        int(valid.sum()),
        int((predicted == truth.labels[valid]).sum()),
        int((predicted == ABSTAIN).sum()),
    )


def certified_accuracy(pred, truth):
    """
    Rate of correctly classified components.

    Parameters
    ----------
    pred : :class:`LabelMap`
        Certified prediction, may contain abstentions

    truth : :class:`LabelMap`
        Ground truth, may contain the ignore sentinel

    Returns
    -------
    accuracy : :class:`float`
        Correct components divided by non-ignored components

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised for label maps of different length

    segcertify.exceptions.UndefinedMetricError
        Raised if all components are ignored

    """
    _check_pair(pred, truth)
    num_valid, num_correct, _ = _counts(pred, truth)
    if not num_valid:
        raise UndefinedMetricError("All components ignored")
    return num_correct / num_valid


def abstain_rate(pred, truth):
    """
    Rate of abstentions.

    Parameters
    ----------
    pred : :class:`LabelMap`
        Certified prediction, may contain abstentions

    truth : :class:`LabelMap`
        Ground truth, may contain the ignore sentinel

    Returns
    -------
    rate : :class:`float`
        Abstained components divided by non-ignored components

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised for label maps of different length

    segcertify.exceptions.UndefinedMetricError
        Raised if all components are ignored

    """
    _check_pair(pred, truth)
    num_valid, _, num_abstained = _counts(pred, truth)
    if not num_valid:
        raise UndefinedMetricError("All components ignored")
    return num_abstained / num_valid


def _ious(pred, truth):
    """IoU of every class with nonempty union, for one input."""
    valid = truth.valid
    predicted = pred.labels[valid]
    true = truth.labels[valid]
    num_classes = truth.num_classes
    intersection = np.bincount(
        true[predicted == true], minlength=num_classes
    )
    is_class = (predicted >= 0) & (predicted < num_classes)
    predicted_size = np.bincount(predicted[is_class], minlength=num_classes)
    true_size = np.bincount(true, minlength=num_classes)
    union = predicted_size + true_size - intersection
    present = union > 0
    return intersection[present] / union[present]


def mean_iou(preds, truths, per_input_first=False):
    """
    Mean intersection over union.

    Parameters
    ----------
    preds : :class:`list`
        Certified predictions (:class:`LabelMap`), one per input

        A single label map is accepted as well.

    truths : :class:`list`
        Ground truths (:class:`LabelMap`), one per input

    per_input_first : :class:`bool`
        Whether to average per input first and then over inputs

        By default, the IoU values of all (input, class) pairs are pooled.

    Returns
    -------
    miou : :class:`float`
        Mean IoU

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised for label maps of different shape or class number

    segcertify.exceptions.UndefinedMetricError
        Raised if no class is present in any input

    """
    preds, truths = _check_lists(preds, truths)
    ious = [_ious(pred, truth) for pred, truth in zip(preds, truths)]
    if per_input_first:
        means = [values.mean() for values in ious if values.size]
        if not means:
            raise UndefinedMetricError("No class present in any input")
        return float(np.mean(means))
    pooled = np.concatenate(ious)
    if not pooled.size:
        raise UndefinedMetricError("No class present in any input")
    return float(pooled.mean())


def summarize(preds, truths, per_input_first=False):
    """
    Accuracy, mIoU and abstain rate pooled over several inputs.

    Accuracy and abstain rate are computed over all non-ignored components
    of all inputs, summed in the order of the inputs.

    Parameters
    ----------
    preds : :class:`list`
        Certified predictions (:class:`LabelMap`), one per input

    truths : :class:`list`
        Ground truths (:class:`LabelMap`), one per input

    per_input_first : :class:`bool`
        Averaging mode of the mIoU, see :func:`mean_iou`

    Returns
    -------
    summary : :class:`dict`
        Keys ``accuracy``, ``mean_iou`` and ``abstain_rate``

    Raises
    ------
    segcertify.exceptions.UndefinedMetricError
        Raised if all components of all inputs are ignored

    """
    preds, truths = _check_lists(preds, truths)
    totals = np.zeros(3, dtype=np.int64)
    for pred, truth in zip(preds, truths):
        totals += _counts(pred, truth)
    num_valid, num_correct, num_abstained = totals
    if not num_valid:
        raise UndefinedMetricError("All components ignored")
    logger.debug(
        "Metrics over %s inputs with %s valid components",
        len(preds),
        num_valid,
    )
    return {
        "accuracy": float(num_correct / num_valid),
        "mean_iou": mean_iou(preds, truths, per_input_first=per_input_first),
        "abstain_rate": float(num_abstained / num_valid),
    }
