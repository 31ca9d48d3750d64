"""
Certification algorithms for classifiers smoothed with Gaussian noise.

A smoothed classifier returns, for every component of its input, the class
the base classifier predicts most often under Gaussian noise. The
certification engine never sees the base classifier, the input or the noise,
but only the class counts obtained by sampling, stored in a
:class:`CountsMatrix` with one row per component.

Two independent sets of draws are needed: a small one (:math:`n_0` draws)
to guess the top class of each component, and a larger one (:math:`n`
draws) to estimate how likely this class actually is. Using the same draws
for both would invalidate the statistical guarantees. Hence, all functions
of this module take both count tables separately.


Algorithms
==========

* :func:`predict` and :func:`certify_single`: prediction and certification
  of a single classification output.

* :func:`seg_certify`: certification of all components of a segmentation at
  once. Each component gets a one-sided binomial test of its top-class
  probability against the threshold :math:`\\tau`, the tests are corrected
  for multiplicity (:func:`segcertify.stats.fwer_control`), and components
  whose test cannot be rejected abstain. All remaining components are
  robust within the same radius :math:`R = \\sigma\\Phi^{-1}(\\tau)`. With
  probability at least :math:`1 - \\alpha` none of them is a false
  certification (with an error budget *b*: at most *b* of them).

* :func:`joint_class_certify` and :func:`indiv_class_certify`: the two
  naive baselines treating the whole segmentation as a single
  classification, or certifying each component individually with a union
  bound. Both are all-or-nothing: a single unstable component makes them
  abstain on the whole input.

* :func:`radius`, :func:`cohen_radius` and :func:`sigma_for_target_radius`:
  radius arithmetic.


Ties
====

Whenever two classes have the same count, the one with the lower class id
wins. Certification is fully deterministic: identical counts and
configuration always give identical results.


Module documentation
====================

"""

import copy
import logging

import numpy as np

from segcertify import stats
from segcertify.exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    InvalidArgumentError,
    RowSumError,
)

logger = logging.getLogger(__name__)

ABSTAIN = -1
"""Label of an abstained component."""


class CountsMatrix:
    """
    Class frequencies of all components among a number of Monte Carlo draws.

    Attributes
    ----------
    counts : :class:`numpy.ndarray`
        Integer array of shape (N, C)

        Entry ``counts[i, c]`` is the number of draws the base classifier
        predicted class *c* for component *i*.

    draws : :class:`int`
        Number of draws, *i.e.* the sum of each row

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised if the counts are not a 2D table with N >= 1 and C >= 2

    segcertify.exceptions.RowSumError
        Raised if a row does not sum to ``draws`` or contains negative counts

    """

    def __init__(self, counts=None, draws=0):
        self.counts = np.asarray(counts, dtype=np.int64)
        self.draws = int(draws)
        self._check()

    def _check(self):
        if self.counts.ndim != 2:
            raise DimensionMismatchError("Counts need to be a 2D table")
        if self.counts.shape[0] < 1 or self.counts.shape[1] < 2:
            raise DimensionMismatchError(
                f"Need at least one component and two classes, "
                f"got shape {self.counts.shape}"
            )
        negative = np.flatnonzero((self.counts < 0).any(axis=1))
        if negative.size:
            raise RowSumError("negative count", component=int(negative[0]))
        wrong_sum = np.flatnonzero(self.counts.sum(axis=1) != self.draws)
        if wrong_sum.size:
            component = int(wrong_sum[0])
            raise RowSumError(
                f"counts sum to {self.counts[component].sum()}, "
                f"expected {self.draws}",
                component=component,
            )

    @classmethod
    def from_rows(cls, rows, draws=None):
        """
        Create counts matrix from rows, inferring the number of draws.

        Parameters
        ----------
        rows : array_like
            Either a single row (1D) or a table of rows (2D)

        draws : :class:`int`
            Number of draws

            If not given, the sum of the first row.

        Returns
        -------
        counts : :class:`CountsMatrix`
            Counts matrix with the given rows

        """
        rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
        if draws is None:
            draws = int(rows[0].sum())
        return cls(counts=rows, draws=draws)

    @property
    def num_components(self):
        """
        Number of components *N*.

        Returns
        -------
        num_components : :class:`int`
            Number of rows of the counts table

        """
        return self.counts.shape[0]

    @property
    def num_classes(self):
        """
        Number of classes *C*.

        Returns
        -------
        num_classes : :class:`int`
            Number of columns of the counts table

        """
        return self.counts.shape[1]

    def top_classes(self):
        """
        Most frequent class of each component, ties broken to lower class id.

        Returns
        -------
        top_classes : :class:`numpy.ndarray`
            Integer array of length N

        """
        return np.argmax(self.counts, axis=1)


class CertConfig:
    """
    Full parameterization of a certification run.

    Attributes
    ----------
    sigma : :class:`float`
        Standard deviation of the Gaussian noise (in input units)

    tau : :class:`float`
        Threshold the top-class probability of a component needs to
        exceed, in [0.5, 1)

    alpha : :class:`float`
        Overall significance level, in (0, 1)

    n0 : :class:`int`
        Number of draws used to guess the top class of each component

    n : :class:`int`
        Number of draws used to test the guessed classes

    correction : :class:`str`
        Multiple testing correction, one of
        :data:`segcertify.stats.METHODS`

    budget : :class:`int`
        Number *b* of erroneous certifications tolerated

        Only used with correction ``kfwer``, which then controls the
        *k*-FWER with :math:`k = b + 1`.

    Raises
    ------
    segcertify.exceptions.ConfigurationError
        Raised on creation if any value is out of its domain

    """

    def __init__(
        self,
        sigma=0.25,
        tau=0.75,
        alpha=0.001,
        n0=10,
        n=100,
        correction="holm",
        budget=0,
    ):
        self.sigma = sigma
        self.tau = tau
        self.alpha = alpha
        self.n0 = n0
        self.n = n
        self.correction = correction
        self.budget = budget
        self.validate()

    @property
    def k(self):
        """
        Order of the *k*-FWER controlled.

        Returns
        -------
        k : :class:`int`
            ``budget + 1`` for correction ``kfwer``, otherwise 1

        """
        if self.correction == "kfwer":
            return self.budget + 1
        return 1

    def validate(self):
        """
        Check all values for being in their domain.

        Raises
        ------
        segcertify.exceptions.ConfigurationError
            Raised for the first value out of its domain

        """
        if not self.sigma > 0:
            raise ConfigurationError(f"sigma needs to be > 0: {self.sigma}")
        if not 0.5 <= self.tau < 1.0:
            raise ConfigurationError(
                f"tau needs to be in [0.5, 1): {self.tau}"
            )
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError(
                f"alpha needs to be in (0, 1): {self.alpha}"
            )
        for name in ("n0", "n", "budget"):
            value = getattr(self, name)
            if int(value) != value:
                raise ConfigurationError(f"{name} needs to be integer")
        if self.n0 < 1 or self.n < 1:
            raise ConfigurationError("n0 and n need to be >= 1")
        if self.correction not in stats.METHODS:
            raise ConfigurationError(
                f"Unknown correction '{self.correction}', "
                f"use one of {', '.join(stats.METHODS)}"
            )
        if self.budget < 0:
            raise ConfigurationError("budget needs to be >= 0")

    def copy(self, **changes):
        """
        Copy of the configuration with some values changed.

        Parameters
        ----------
        changes
            Attributes to change, as keyword arguments

        Returns
        -------
        config : :class:`CertConfig`
            Validated new configuration

        """
        new_config = copy.copy(self)
        for key, value in changes.items():
            if not hasattr(self, key):
                raise ConfigurationError(f"Unknown configuration key '{key}'")
            setattr(new_config, key, value)
        new_config.validate()
        return new_config

    def to_dict(self):
        """
        Configuration as plain dict, *e.g.* for writing a manifest.

        Returns
        -------
        config : :class:`dict`
            All attributes with their values

        """
        return {
            "sigma": self.sigma,
            "tau": self.tau,
            "alpha": self.alpha,
            "n0": self.n0,
            "n": self.n,
            "correction": self.correction,
            "budget": self.budget,
        }


class ComponentDecision:
    """
    Certification outcome of a single component.

    Attributes
    ----------
    label : :class:`int`
        Certified class id or :data:`ABSTAIN`

    p_value : :class:`float`
        P-value of the test of the component

    guessed_class : :class:`int`
        Top class among the :math:`n_0` draws

    hit_count : :class:`int`
        Count of the guessed class among the *n* draws

    """

    def __init__(
        self, label=ABSTAIN, p_value=1.0, guessed_class=0, hit_count=0
    ):
        self.label = label
        self.p_value = p_value
        self.guessed_class = guessed_class
        self.hit_count = hit_count

    @property
    def abstained(self):
        """
        Whether the component abstained.

        Returns
        -------
        abstained : :class:`bool`
            ``True`` if the label is :data:`ABSTAIN`

        """
        return self.label == ABSTAIN


class CertificationResult:
    """
    Certification outcome of all components of a segmentation.

    The per-component results are stored as arrays, as the number of
    components can be in the millions. Use :meth:`decision` or
    :attr:`decisions` to get :class:`ComponentDecision` objects.

    Attributes
    ----------
    labels : :class:`numpy.ndarray`
        Certified class id or :data:`ABSTAIN` per component

    p_values : :class:`numpy.ndarray`
        P-value per component

    guessed_classes : :class:`numpy.ndarray`
        Top class among the :math:`n_0` draws per component

    hit_counts : :class:`numpy.ndarray`
        Count of the guessed class among the *n* draws per component

    radius : :class:`float`
        Radius (:math:`\\ell_2` norm) all certified components are robust in

        For :func:`seg_certify`, this is a property of the configuration
        and reported even if all components abstained. Always check the
        certified components, not the radius alone.

    config : :class:`CertConfig`
        Configuration used

    lower_bounds : :class:`numpy.ndarray`
        Clopper-Pearson lower bounds of the top-class probabilities

        Only set by :func:`indiv_class_certify`, otherwise ``None``.

    """

    def __init__(
        self,
        labels=None,
        p_values=None,
        guessed_classes=None,
        hit_counts=None,
        radius=0.0,
        config=None,
    ):
        self.labels = np.asarray(labels, dtype=np.int64)
        self.p_values = np.asarray(p_values, dtype=float)
        self.guessed_classes = np.asarray(guessed_classes, dtype=np.int64)
        self.hit_counts = np.asarray(hit_counts, dtype=np.int64)
        self.radius = radius
        self.config = config
        self.lower_bounds = None

    def __len__(self):
        return len(self.labels)

    @property
    def certified(self):
        """
        Mask of the certified (non-abstained) components.

        Returns
        -------
        certified : :class:`numpy.ndarray`
            Boolean array of length N

        """
        return self.labels != ABSTAIN

    @property
    def certified_fraction(self):
        """
        Fraction of certified components.

        Returns
        -------
        fraction : :class:`float`
            Number of non-abstained components divided by N

        """
        return float(np.count_nonzero(self.certified)) / len(self.labels)

    @property
    def method(self):
        """
        Multiple testing correction used.

        Returns
        -------
        method : :class:`str`
            Name of the correction

        """
        return self.config.correction

    @property
    def k(self):
        """
        Order of the *k*-FWER controlled.

        Returns
        -------
        k : :class:`int`
            1 for plain FWER control

        """
        return self.config.k

    @property
    def error_budget(self):
        """
        Number of erroneous certifications tolerated.

        Returns
        -------
        error_budget : :class:`int`
            :math:`k - 1`

        """
        return self.k - 1

    @property
    def may_contain_errors(self):
        """
        Whether certified components may be wrong even if the bound holds.

        With an error budget *b* >= 1, up to *b* certified components may
        be erroneous with probability at least :math:`1 - \\alpha`. Metrics
        reported for such a result need to carry this caveat.

        Returns
        -------
        caveat : :class:`bool`
            ``True`` if the error budget is positive

        """
        return self.error_budget > 0

    def decision(self, index):
        """
        Certification outcome of a single component.

        Parameters
        ----------
        index : :class:`int`
            Index of the component

        Returns
        -------
        decision : :class:`ComponentDecision`
            Outcome of the component

        """
        return ComponentDecision(
            label=int(self.labels[index]),
            p_value=float(self.p_values[index]),
            guessed_class=int(self.guessed_classes[index]),
            hit_count=int(self.hit_counts[index]),
        )

    @property
    def decisions(self):
        """
        Certification outcomes of all components.

        Returns
        -------
        decisions : :class:`list`
            :class:`ComponentDecision` objects, one per component

        """
        return [self.decision(index) for index in range(len(self))]


class SingleResult:
    """
    Prediction or certification outcome of a single classification.

    Attributes
    ----------
    label : :class:`int`
        Predicted class id or :data:`ABSTAIN`

    radius : :class:`float`
        Certified radius, 0 when abstained or not computed

    """

    def __init__(self, label=ABSTAIN, radius=0.0):
        self.label = label
        self.radius = radius if label != ABSTAIN else 0.0

    @property
    def abstained(self):
        """
        Whether the classification abstained.

        Returns
        -------
        abstained : :class:`bool`
            ``True`` if the label is :data:`ABSTAIN`

        """
        return self.label == ABSTAIN


class JointResult(SingleResult):
    """
    Outcome of certifying a whole labeling as a single classification.

    Attributes
    ----------
    labeling : :class:`numpy.ndarray`
        Certified labeling of all components, ``None`` when abstained

    """

    def __init__(self, labeling=None, radius=0.0):
        super().__init__(
            label=ABSTAIN if labeling is None else 0, radius=radius
        )
        self.labeling = labeling


def _check_pair(counts0, counts):
    if counts0.num_classes != counts.num_classes:
        raise DimensionMismatchError(
            f"Numbers of classes differ: {counts0.num_classes} "
            f"and {counts.num_classes}"
        )
    if counts0.num_components != counts.num_components:
        raise DimensionMismatchError(
            f"Numbers of components differ: {counts0.num_components} "
            f"and {counts.num_components}"
        )


def radius(sigma, tau):
    """
    Radius of the thresholded smoothed classifier.

    Parameters
    ----------
    sigma : :class:`float`
        Noise standard deviation, > 0

    tau : :class:`float`
        Threshold, in [0.5, 1)

    Returns
    -------
    radius : :class:`float`
        :math:`\\sigma\\Phi^{-1}(\\tau)`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised outside the domain

    """
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma needs to be > 0: {sigma}")
    if not 0.5 <= tau < 1.0:
        raise InvalidArgumentError(f"tau needs to be in [0.5, 1): {tau}")
    return sigma * stats.norm_quantile(tau)


def cohen_radius(sigma, p_a, p_b):
    """
    Robustness radius from bounds on the two top class probabilities.

    Parameters
    ----------
    sigma : :class:`float`
        Noise standard deviation

    p_a : :class:`float`
        Lower bound of the top class probability

    p_b : :class:`float`
        Upper bound of the runner-up class probability, at most ``p_a``

    Returns
    -------
    radius : :class:`float`
        :math:`\\sigma/2\\,(\\Phi^{-1}(p_A) - \\Phi^{-1}(p_B))`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if ``p_b > p_a`` or a probability is not in (0, 1)

    """
    if not (0.0 < p_b < 1.0 and 0.0 < p_a < 1.0):
        raise InvalidArgumentError(
            f"Probabilities need to be in (0, 1): {p_a}, {p_b}"
        )
    if p_b > p_a:
        raise InvalidArgumentError(f"p_b ({p_b}) exceeds p_a ({p_a})")
    return (
        sigma / 2 * (stats.norm_quantile(p_a) - stats.norm_quantile(p_b))
    )


def sigma_for_target_radius(target_radius, tau):
    """
    Noise level needed to certify a given radius at a given threshold.

    Useful if the radius is prescribed by the perturbation to be certified
    against, *e.g.* a rotation by a maximum angle mapped to an
    :math:`\\ell_2` distance.

    Parameters
    ----------
    target_radius : :class:`float`
        Radius to be certified, > 0

    tau : :class:`float`
        Threshold, in (0.5, 1)

    Returns
    -------
    sigma : :class:`float`
        Noise standard deviation with ``radius(sigma, tau) == target_radius``

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised outside the domain

    """
    if not 0.5 < tau < 1.0:
        raise InvalidArgumentError(f"tau needs to be in (0.5, 1): {tau}")
    if not target_radius > 0:
        raise InvalidArgumentError(
            f"target radius needs to be > 0: {target_radius}"
        )
    return target_radius / stats.norm_quantile(tau)


def _single_row(counts):
    if counts.num_components != 1:
        raise InvalidArgumentError(
            f"Need counts of a single component, got {counts.num_components}"
        )
    return counts.counts[0]


def predict(counts, alpha):
    """
    Predict the class of the smoothed classifier, or abstain.

    The prediction is the most frequent class if a two-sided binomial test
    shows it to be more likely than the runner-up at level alpha.

    Parameters
    ----------
    counts : :class:`CountsMatrix`
        Counts of a single component

    alpha : :class:`float`
        Probability of returning a class other than the one of the smoothed
        classifier

    Returns
    -------
    result : :class:`SingleResult`
        Predicted class (radius 0) or :data:`ABSTAIN`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if the counts contain more than one component

    """
    row = _single_row(counts)
    top_two = np.argsort(-row, kind="stable")[:2]
    count_a, count_b = row[top_two[0]], row[top_two[1]]
    if count_a + count_b == 0:
        return SingleResult()
    p_value = stats.binom_p_value_two_sided(count_a, count_a + count_b, 0.5)
    if p_value <= alpha:
        return SingleResult(label=int(top_two[0]))
    return SingleResult()


def _check_sigma(sigma):
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma needs to be > 0: {sigma}")


def _certify_row(guess, hits, draws, sigma, alpha):
    lower_bound = stats.clopper_pearson_lower(hits, draws, 1.0 - alpha)
    if lower_bound > 0.5:
        return SingleResult(
            label=int(guess), radius=sigma * stats.norm_quantile(lower_bound)
        ), lower_bound
    return SingleResult(), lower_bound


def certify_single(counts0, counts, sigma, alpha):
    """
    Certify the prediction of the smoothed classifier for a single input.

    The top class is guessed from the first set of draws, its probability
    bounded from below (Clopper-Pearson, confidence :math:`1 - \\alpha`)
    using the second set.

    Parameters
    ----------
    counts0 : :class:`CountsMatrix`
        Counts of a single component used for guessing the top class

    counts : :class:`CountsMatrix`
        Counts of a single component used for estimation

    sigma : :class:`float`
        Noise standard deviation

    alpha : :class:`float`
        Probability of a wrong certificate

    Returns
    -------
    result : :class:`SingleResult`
        Certified class and radius :math:`\\sigma\\Phi^{-1}(\\underline{p_A})`
        or :data:`ABSTAIN`

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised if the two counts differ in their number of classes

    segcertify.exceptions.InvalidArgumentError
        Raised if ``sigma`` is not positive

    """
    _check_sigma(sigma)
    _check_pair(counts0, counts)
    row0, row = _single_row(counts0), _single_row(counts)
    guess = int(np.argmax(row0))
    result, _ = _certify_row(
        guess, int(row[guess]), counts.draws, sigma, alpha
    )
    return result


def _check_draws(counts0, counts, config):
    if counts0.draws != config.n0 or counts.draws != config.n:
        raise ConfigurationError(
            f"Draws ({counts0.draws}, {counts.draws}) do not match "
            f"configuration (n0={config.n0}, n={config.n})"
        )


def seg_certify(counts0, counts, config):
    """
    Certify all components of a segmentation with a common radius.

    For each component *i*, the class guessed from the first set of draws is
    tested against the null hypothesis that its probability is at most
    :math:`\\tau`, using its count :math:`n_i` among the second set of
    draws. The p-values are corrected for multiple testing as set in the
    configuration, and every component whose null hypothesis cannot be
    rejected abstains.

    With probability at least :math:`1 - \\alpha`, every certified component
    returns the class of the thresholded smoothed classifier, robust within
    the radius :math:`R = \\sigma\\Phi^{-1}(\\tau)`. With an error budget
    *b* >= 1, this holds for all but at most *b* certified components.

    Parameters
    ----------
    counts0 : :class:`CountsMatrix`
        Counts used for guessing the top class per component

    counts : :class:`CountsMatrix`
        Counts used for testing the guessed classes

    config : :class:`CertConfig`
        Configuration of the certification

    Returns
    -------
    result : :class:`CertificationResult`
        Decisions per component and radius

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised if the counts differ in shape

    segcertify.exceptions.ConfigurationError
        Raised if the configuration is invalid or does not match the draws

    """
    _check_pair(counts0, counts)
    config.validate()
    _check_draws(counts0, counts, config)
    guesses = counts0.top_classes()
    hits = counts.counts[np.arange(counts.num_components), guesses]
    p_value_table = stats.binom_p_values_ge(
        np.arange(config.n + 1), config.n, config.tau
    )
    p_values = p_value_table[hits]
    k = min(config.k, counts.num_components)
    if k != config.k:
        logger.warning(
            "Error budget %s exceeds number of components, using k=%s",
            config.budget,
            k,
        )
    rejections = stats.fwer_control(
        p_values, config.alpha, method=config.correction, k=k
    )
    labels = np.where(rejections.flags, guesses, ABSTAIN)
    result = CertificationResult(
        labels=labels,
        p_values=p_values,
        guessed_classes=guesses,
        hit_counts=hits,
        radius=radius(config.sigma, config.tau),
        config=config,
    )
    logger.debug(
        "Certified %s of %s components (%s)",
        rejections.num_rejections,
        counts.num_components,
        config.correction,
    )
    return result


def indiv_class_certify(counts0, counts, sigma, alpha):
    """
    Certify each component individually, with a union bound over all.

    Every component gets certified as with :func:`certify_single` at level
    :math:`\\alpha/N`. A single abstaining component makes all components
    abstain. Otherwise, the overall radius is the minimum of the
    per-component radii.

    The p-value stored per component is the one of the equivalent test of
    the null hypothesis that the top-class probability is at most 1/2: the
    Clopper-Pearson bound exceeds 1/2 exactly if it is below
    :math:`\\alpha/N`.

    Parameters
    ----------
    counts0 : :class:`CountsMatrix`
        Counts used for guessing the top class per component

    counts : :class:`CountsMatrix`
        Counts used for estimation

    sigma : :class:`float`
        Noise standard deviation

    alpha : :class:`float`
        Probability of any wrong certificate

    Returns
    -------
    result : :class:`CertificationResult`
        Decisions per component and radius (0 if abstained)

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised if the counts differ in shape

    """
    _check_pair(counts0, counts)
    num_components = counts.num_components
    config = CertConfig(
        sigma=sigma,
        tau=0.5,
        alpha=alpha,
        n0=counts0.draws,
        n=counts.draws,
        correction="bonferroni",
    )
    component_alpha = alpha / num_components
    guesses = counts0.top_classes()
    hits = counts.counts[np.arange(num_components), guesses]
    results = []
    lower_bounds = np.empty(num_components)
    for index, (guess, hit_count) in enumerate(zip(guesses, hits)):
        result, lower_bounds[index] = _certify_row(
            guess, hit_count, counts.draws, sigma, component_alpha
        )
        results.append(result)
    if all(not result.abstained for result in results):
        labels = guesses
        overall_radius = min(result.radius for result in results)
    else:
        labels = np.full(num_components, ABSTAIN)
        overall_radius = 0.0
    result = CertificationResult(
        labels=labels,
        p_values=stats.binom_p_values_ge(hits, counts.draws, 0.5),
        guessed_classes=guesses,
        hit_counts=hits,
        radius=overall_radius,
        config=config,
    )
    result.lower_bounds = lower_bounds
    return result


def joint_class_certify(joint_samples0, joint_samples, sigma, alpha):
    """
    Certify a whole labeling as a single classification output.

    Each distinct labeling of all N components is treated as one class of
    the product label space. The most frequent labeling among the first set
    of draws gets certified as in :func:`certify_single` using its
    frequency among the second set. Only observed labelings are counted,
    the product space is never materialised.

    Parameters
    ----------
    joint_samples0 : array_like
        Labelings used for guessing, shape (n0, N)

    joint_samples : array_like
        Labelings used for estimation, shape (n, N)

    sigma : :class:`float`
        Noise standard deviation

    alpha : :class:`float`
        Probability of a wrong certificate

    Returns
    -------
    result : :class:`JointResult`
        Certified labeling and radius, or abstention on the whole input

    Raises
    ------
    segcertify.exceptions.DimensionMismatchError
        Raised if the labelings differ in length

    segcertify.exceptions.InvalidArgumentError
        Raised if ``sigma`` is not positive

    """
    _check_sigma(sigma)
    joint_samples0 = np.atleast_2d(np.asarray(joint_samples0))
    joint_samples = np.atleast_2d(np.asarray(joint_samples))
    if joint_samples0.shape[1] != joint_samples.shape[1]:
        raise DimensionMismatchError(
            f"Labelings differ in length: {joint_samples0.shape[1]} "
            f"and {joint_samples.shape[1]}"
        )
    labelings, frequencies = np.unique(
        joint_samples0, axis=0, return_counts=True
    )
    top_labeling = labelings[np.argmax(frequencies)]
    hits = int(np.count_nonzero((joint_samples == top_labeling).all(axis=1)))
    result, _ = _certify_row(0, hits, len(joint_samples), sigma, alpha)
    if result.abstained:
        return JointResult()
    return JointResult(labeling=top_labeling, radius=result.radius)
