"""
Exact scalar statistics underlying the certification procedures.

Everything the certification algorithms need from statistics lives in this
module:

* binomial tail and two-sided test p-values,
* Clopper-Pearson lower confidence bounds,
* the standard normal CDF and its inverse, and
* procedures controlling the family-wise error rate (FWER) of many
  simultaneous tests: Bonferroni, Holm, and the generalised step-down
  procedure controlling the *k*-FWER.


Binomial tails
==============

The upper tail of the binomial distribution is computed via the identity

.. math::

    P[X \\geq x] = I_{p_0}(x, n - x + 1), \\qquad X \\sim B(n, p_0),

with :math:`I` the regularized incomplete beta function as provided by
:func:`scipy.special.betainc`. This stays exact for draw counts of
:math:`10^4` to :math:`10^6`, where summing the probability mass function
would suffer from under- and overflow.


Multiple testing
================

A p-value vector is a one-dimensional :class:`numpy.ndarray` of
probabilities, one per test (*i.e.*, per component of a segmentation). The
correction procedures return a :class:`RejectionVector` with one flag per
test. Holm and the *k*-FWER procedure share their critical values (see
:func:`critical_values`), hence :func:`kfwer_stepdown` with ``k=1`` returns
exactly the same rejections as :func:`holm`.

None of the procedures mutates its input.


Module documentation
====================

"""

import functools
import logging

import numpy as np
from scipy import optimize, special
from scipy import stats as sp_stats

from segcertify.exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

METHODS = ("bonferroni", "holm", "kfwer")
"""Names of the available FWER control procedures."""


def _check_counts(x, n):
    if int(x) != x or int(n) != n:
        raise InvalidArgumentError(f"Counts need to be integers: {x}, {n}")
    if n < 1:
        raise InvalidArgumentError(f"Number of draws needs to be >= 1: {n}")
    if not 0 <= x <= n:
        raise InvalidArgumentError(f"Count {x} outside [0, {n}]")


def _check_open_probability(value, name="probability"):
    if not 0.0 < value < 1.0:
        raise InvalidArgumentError(f"{name} needs to be in (0, 1): {value}")


def _upper_tail(x, n, p0):
    """P[X >= x] for X ~ B(n, p0), without any checks, vectorized in x."""
    x = np.asarray(x)
    tail = special.betainc(np.maximum(x, 1), n - x + 1, p0)
    return np.where(x == 0, 1.0, tail)


def binom_p_value_ge(x, n, p0):
    """
    One-sided binomial p-value against the null hypothesis p <= p0.

    Parameters
    ----------
    x : :class:`int`
        Number of successes (hits) observed

    n : :class:`int`
        Number of draws

    p0 : :class:`float`
        Success probability under the null hypothesis, in (0, 1)

    Returns
    -------
    p_value : :class:`float`
        :math:`P[X \\geq x]` for :math:`X \\sim B(n, p_0)`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if ``x > n``, ``n < 1`` or ``p0`` not in (0, 1)

    """
    _check_counts(x, n)
    _check_open_probability(p0, "p0")
    return float(_upper_tail(int(x), int(n), p0))


def binom_p_values_ge(x, n, p0):
    """
    One-sided binomial p-values for an array of success counts.

    Vectorized form of :func:`binom_p_value_ge` sharing ``n`` and ``p0``.

    Parameters
    ----------
    x : array_like
        Numbers of successes, each in [0, n]

    n : :class:`int`
        Number of draws

    p0 : :class:`float`
        Success probability under the null hypothesis, in (0, 1)

    Returns
    -------
    p_values : :class:`numpy.ndarray`
        One p-value per entry of ``x``

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if any count is outside [0, n] or not an integer, ``n < 1``
        or ``p0`` not in (0, 1)

    """
    values = np.asarray(x)
    x = values.astype(np.int64)
    if not np.array_equal(values, x):
        raise InvalidArgumentError("Counts need to be integers")
    if n < 1:
        raise InvalidArgumentError(f"Number of draws needs to be >= 1: {n}")
    if x.size and (x.min() < 0 or x.max() > n):
        raise InvalidArgumentError(f"Counts outside [0, {n}]")
    _check_open_probability(p0, "p0")
    return _upper_tail(x, int(n), p0)


def binom_p_value_two_sided(x, n, p0=0.5):
    """
    Exact two-sided binomial test p-value.

    The p-value sums the probability of all outcomes not more likely than
    the observed one, as computed by :func:`scipy.stats.binomtest`. To
    guard against floating-point ties, an outcome counts as "not more
    likely" if its probability is at most ``1 + 1e-7`` times the
    probability of the observed outcome.

    Parameters
    ----------
    x : :class:`int`
        Number of successes observed

    n : :class:`int`
        Number of draws

    p0 : :class:`float`
        Success probability under the null hypothesis, in (0, 1)

    Returns
    -------
    p_value : :class:`float`
        Two-sided p-value, clamped to [0, 1]

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if ``x > n``, ``n < 1`` or ``p0`` not in (0, 1)

    """
    _check_counts(x, n)
    _check_open_probability(p0, "p0")
    result = sp_stats.binomtest(int(x), int(n), p0, alternative="two-sided")
    return float(min(1.0, result.pvalue))


def clopper_pearson_lower(x, n, conf):
    """
    One-sided Clopper-Pearson lower confidence bound of a binomial proportion.

    The bound :math:`\\underline{p}` solves
    :math:`P[B(n, \\underline{p}) \\geq x] = 1 - \\mathrm{conf}`, *i.e.* it
    is the :math:`1 - \\mathrm{conf}` quantile of the
    :math:`\\mathrm{Beta}(x, n - x + 1)` distribution. It is found by
    bisection on the regularized incomplete beta function and cached, as
    certification calls it with few distinct arguments over and over again.

    Parameters
    ----------
    x : :class:`int`
        Number of successes observed

    n : :class:`int`
        Number of draws

    conf : :class:`float`
        Confidence level, in (0, 1)

    Returns
    -------
    lower_bound : :class:`float`
        Lower confidence bound, 0 for ``x = 0``, accurate to 1e-10

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if ``x > n`` or ``conf`` not in (0, 1)

    """
    _check_counts(x, n)
    _check_open_probability(conf, "conf")
    return _clopper_pearson_lower(int(x), int(n), float(conf))


@functools.lru_cache(maxsize=1 << 16)
def _clopper_pearson_lower(x, n, conf):
    if x == 0:
        return 0.0
    target = 1.0 - conf
    return float(
        optimize.bisect(
            lambda p: _upper_tail(x, n, p) - target,
            0.0,
            1.0,
            xtol=1e-12,
            maxiter=200,
        )
    )


def norm_cdf(z):
    """
    Cumulative distribution function of the standard normal distribution.

    Parameters
    ----------
    z : :class:`float`
        Finite real value

    Returns
    -------
    probability : :class:`float`
        :math:`\\Phi(z)`

    """
    return float(special.ndtr(z))


def norm_quantile(p):
    """
    Quantile function (inverse CDF) of the standard normal distribution.

    Parameters
    ----------
    p : :class:`float`
        Probability, in (0, 1)

    Returns
    -------
    z : :class:`float`
        :math:`\\Phi^{-1}(p)`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if ``p`` not in (0, 1)

    """
    _check_open_probability(p, "p")
    return float(special.ndtri(p))


def as_p_value_vector(values):
    """
    Validate p-values and return them as float array.

    Parameters
    ----------
    values : array_like
        P-values, one per test

    Returns
    -------
    p_values : :class:`numpy.ndarray`
        One-dimensional float array (a copy only if conversion requires it)

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if empty, not one-dimensional or with entries outside [0, 1]

    """
    p_values = np.asarray(values, dtype=float)
    if p_values.ndim != 1 or not p_values.size:
        raise InvalidArgumentError("Need a nonempty vector of p-values")
    if not np.all((p_values >= 0.0) & (p_values <= 1.0)):
        raise InvalidArgumentError("P-values need to be in [0, 1]")
    return p_values


class RejectionVector:
    """
    Outcome of a FWER control procedure: which null hypotheses are rejected.

    Attributes
    ----------
    flags : :class:`numpy.ndarray`
        Boolean array, ``True`` for every rejected test, in the order of the
        p-values the procedure got

    method : :class:`str`
        Name of the procedure, one of :data:`METHODS`

    alpha : :class:`float`
        Significance level

    k : :class:`int`
        Order of the *k*-FWER controlled, 1 for plain FWER control

    """

    def __init__(self, flags=None, method="holm", alpha=0.05, k=1):
        self.flags = np.asarray(flags, dtype=bool)
        self.method = method
        self.alpha = alpha
        self.k = k

    def __len__(self):
        return len(self.flags)

    @property
    def num_rejections(self):
        """
        Number of rejected null hypotheses.

        Returns
        -------
        num_rejections : :class:`int`
            Number of flags set

        """
        return int(np.count_nonzero(self.flags))

    @property
    def rejected_indices(self):
        """
        Indices of the rejected null hypotheses, in ascending order.

        Returns
        -------
        indices : :class:`numpy.ndarray`
            Integer array of indices

        """
        return np.flatnonzero(self.flags)


def _check_alpha(alpha):
    _check_open_probability(alpha, "alpha")


def critical_values(num_tests, alpha, k=1):
    """
    Critical values of the generalised Holm step-down procedure.

    For rank :math:`j` (starting with 1) of the ascendingly sorted p-values,
    the critical value is :math:`\\alpha k / N` for :math:`j \\leq k` and
    :math:`\\alpha k / (N + k - j)` otherwise. For ``k=1`` these are the
    Holm levels :math:`\\alpha/N, \\dots, \\alpha/1`.

    Parameters
    ----------
    num_tests : :class:`int`
        Number of tests *N*

    alpha : :class:`float`
        Significance level

    k : :class:`int`
        Order of the *k*-FWER, in [1, N]

    Returns
    -------
    critical_values : :class:`numpy.ndarray`
        Critical value per rank

    """
    ranks = np.arange(1, num_tests + 1)
    denominators = np.where(ranks <= k, num_tests, num_tests + k - ranks)
    return alpha * k / denominators


def _step_down(p_values, critical):
    order = np.argsort(p_values, kind="stable")
    failures = np.flatnonzero(p_values[order] > critical)
    num_rejected = failures[0] if failures.size else len(p_values)
    flags = np.zeros(len(p_values), dtype=bool)
    flags[order[:num_rejected]] = True
    return flags


def bonferroni(pvs, alpha):
    """
    Bonferroni correction: reject every test with p-value at most alpha/N.

    Parameters
    ----------
    pvs : array_like
        P-values, one per test

    alpha : :class:`float`
        Significance level, in (0, 1)

    Returns
    -------
    rejections : :class:`RejectionVector`
        Rejected tests

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised on empty input or ``alpha`` out of range

    """
    p_values = as_p_value_vector(pvs)
    _check_alpha(alpha)
    flags = p_values <= alpha / len(p_values)
    return RejectionVector(flags=flags, method="bonferroni", alpha=alpha)


def holm(pvs, alpha):
    """
    Holm step-down correction.

    Steps through the ascendingly sorted p-values at levels
    :math:`\\alpha/N, \\dots, \\alpha/1` and rejects until the first p-value
    exceeding its level. Ties are sorted by their original index.

    Parameters
    ----------
    pvs : array_like
        P-values, one per test

    alpha : :class:`float`
        Significance level, in (0, 1)

    Returns
    -------
    rejections : :class:`RejectionVector`
        Rejected tests, in the original order of the p-values

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised on empty input or ``alpha`` out of range

    """
    p_values = as_p_value_vector(pvs)
    _check_alpha(alpha)
    flags = _step_down(p_values, critical_values(len(p_values), alpha, k=1))
    return RejectionVector(flags=flags, method="holm", alpha=alpha)


def kfwer_stepdown(pvs, alpha, k):
    """
    Step-down procedure controlling the k-FWER.

    Controls the probability of *k* or more false rejections at level
    alpha. With probability at least :math:`1 - \\alpha`, at most
    :math:`k - 1` of the rejections are erroneous. For ``k=1``, this is
    identical to :func:`holm`. For the critical values, see
    :func:`critical_values`.

    Parameters
    ----------
    pvs : array_like
        P-values, one per test

    alpha : :class:`float`
        Significance level, in (0, 1)

    k : :class:`int`
        Order of the *k*-FWER, in [1, N]

    Returns
    -------
    rejections : :class:`RejectionVector`
        Rejected tests, in the original order of the p-values

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised on empty input, ``alpha`` out of range, or ``k`` not in [1, N]

    """
    p_values = as_p_value_vector(pvs)
    _check_alpha(alpha)
    if int(k) != k or not 1 <= k <= len(p_values):
        raise InvalidArgumentError(
            f"k needs to be in [1, {len(p_values)}]: {k}"
        )
    k = int(k)
    flags = _step_down(p_values, critical_values(len(p_values), alpha, k=k))
    return RejectionVector(flags=flags, method="kfwer", alpha=alpha, k=k)


def fwer_control(pvs, alpha, method="holm", k=1):
    """
    Apply the FWER control procedure named by ``method``.

    Parameters
    ----------
    pvs : array_like
        P-values, one per test

    alpha : :class:`float`
        Significance level, in (0, 1)

    method : :class:`str`
        One of :data:`METHODS`

    k : :class:`int`
        Order of the *k*-FWER, only used for method ``kfwer``

    Returns
    -------
    rejections : :class:`RejectionVector`
        Rejected tests

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for unknown methods, besides the errors of the procedures

    """
    if method == "bonferroni":
        return bonferroni(pvs, alpha)
    if method == "holm":
        return holm(pvs, alpha)
    if method == "kfwer":
        return kfwer_stepdown(pvs, alpha, k)
    raise InvalidArgumentError(f"Unknown correction method '{method}'")
