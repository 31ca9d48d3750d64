"""
Synthetic experiments with an oracle base classifier.

To investigate the statistical power of the certification algorithms
independent of any neural network, the base classifier is replaced by an
oracle that does not even look at its input: for each of its *N*
components, it returns the true class with a fixed probability.

* On :math:`N - k` components, the oracle is correct with probability
  :math:`1 - \\gamma`.

* On the remaining *k* ("noisy") components, it is correct with probability
  :math:`1 - m\\gamma`, clamped to [0, 1], with a noise multiplier *m*
  (usually 5).

A sweep varies either :math:`\\gamma` or *N* along a grid, draws fresh
counts for each grid point and repetition, runs the certification
algorithms and records the rate of certified (rather than abstained)
components. A budget sweep repeats this for several error budgets of the
*k*-FWER correction.


Reproducibility
===============

Every random number is drawn from a generator keyed by the tuple (seed,
grid index, repetition index, phase), see :func:`component_rng`. Hence,
results depend neither on the number of worker threads nor on the order
tasks get executed in, and different algorithms or budgets evaluated in one
sweep see identical draws.


Module documentation
====================

"""

import concurrent.futures
import copy
import logging

import numpy as np
import pandas as pd
from scipy import signal

from segcertify import smoothing, utils
from segcertify.exceptions import ConfigurationError, InvalidArgumentError

logger = logging.getLogger(__name__)

PHASES = {"counts0": 0, "counts": 1, "labelings0": 2, "labelings": 3}
"""Phases of a repetition drawing random numbers, with their key."""

ALGORITHMS = (
    "seg_certify_holm",
    "seg_certify_bonferroni",
    "seg_certify_kfwer",
    "indiv_class",
    "joint_class",
)
"""Names of the algorithms a sweep can evaluate."""

AXES = ("gamma", "N")
"""Quantities a sweep can vary."""

RAW_COLUMNS = ["axis", "algorithm", "rep", "rate"]
"""Columns of the raw results of a sweep."""


def gamma_grid(maximum=0.1, step=0.001):
    """
    Equidistant grid of error rates starting at zero.

    Parameters
    ----------
    maximum : :class:`float`
        Largest error rate (included)

    step : :class:`float`
        Step size

    Returns
    -------
    grid : :class:`list`
        Error rates, rounded to get rid of floating-point noise

    """
    num_points = int(round(maximum / step)) + 1
    return [round(index * step, 10) for index in range(num_points)]


def log_grid(first_exponent=1, last_exponent=6):
    """
    Powers of ten, *e.g.* as grid of component numbers.

    Parameters
    ----------
    first_exponent : :class:`int`
        Exponent of the first grid point

    last_exponent : :class:`int`
        Exponent of the last grid point (included)

    Returns
    -------
    grid : :class:`list`
        Integer powers of ten

    """
    exponents = range(first_exponent, last_exponent + 1)
    return [10**exponent for exponent in exponents]


PRESETS = {
    "fig3a": {
        "axis": "gamma",
        "grid": gamma_grid(0.1, 0.001),
        "reps": 600,
        "oracle": {"num_components": 100, "num_noisy": 1},
        "config": {"tau": 0.75, "alpha": 0.001, "n0": 100, "n": 100},
        "algorithms": [
            "joint_class",
            "indiv_class",
            "seg_certify_holm",
            "seg_certify_bonferroni",
        ],
    },
    "fig3b": {
        "axis": "gamma",
        "grid": gamma_grid(0.1, 0.001),
        "reps": 600,
        "oracle": {"num_components": 100, "num_noisy": 1},
        "config": {"tau": 0.75, "alpha": 0.001, "n0": 1000, "n": 1000},
        "algorithms": [
            "joint_class",
            "indiv_class",
            "seg_certify_holm",
            "seg_certify_bonferroni",
        ],
    },
    "fig3c": {
        "axis": "N",
        "grid": log_grid(1, 5),
        "reps": 600,
        "oracle": {"num_noisy": 0, "gamma": 0.05},
        "config": {"tau": 0.9, "alpha": 0.1, "n0": 1000, "n": 1000},
        "algorithms": ["seg_certify_holm", "seg_certify_bonferroni"],
    },
    "fig7": {
        "axis": "N",
        "grid": log_grid(2, 6),
        "reps": 100,
        "oracle": {"num_noisy": 1, "gamma": 0.05},
        "config": {"tau": 0.9, "alpha": 0.1, "n0": 1000, "n": 1000},
        "algorithms": ["seg_certify_kfwer"],
    },
    "custom": {
        "axis": "gamma",
        "grid": [0.0],
        "reps": 100,
        "oracle": {"num_components": 100, "num_noisy": 1},
        "config": {"tau": 0.75, "alpha": 0.001, "n0": 100, "n": 100},
        "algorithms": [
            "joint_class",
            "indiv_class",
            "seg_certify_holm",
            "seg_certify_bonferroni",
        ],
    },
}
"""
Parameters of the experiments, by name.

``fig3a`` and ``fig3b`` sweep the error rate of the oracle with 100 and
1000 draws, ``fig3c`` sweeps the number of components, and ``fig7`` is the
setting of the error budget experiments.
"""

PRESET_ALIASES = {
    "noise-rate": "fig3a",
    "noise-rate-1000": "fig3b",
    "components": "fig3c",
    "error-budget": "fig7",
}
"""Descriptive names of the :data:`PRESETS`."""

DESK_STEP = 0.005
"""Step size of error rate grids of coarsened (desk-scale) presets."""

DESK_REPS = 100
"""Repetitions of coarsened (desk-scale) presets."""


def component_rng(seed, grid_index, rep_index, phase):
    """
    Random number generator for one phase of one repetition of a sweep.

    Parameters
    ----------
    seed : :class:`int`
        Seed of the experiment, >= 0

    grid_index : :class:`int`
        Index of the grid point

    rep_index : :class:`int`
        Index of the repetition

    phase : :class:`str`
        One of the keys of :data:`PHASES`

    Returns
    -------
    rng : :class:`numpy.random.Generator`
        Generator seeded with the whole key

    """
    return np.random.default_rng(
        [int(seed), int(grid_index), int(rep_index), PHASES[phase]]
    )


class OracleSpec:
    """
    Oracle base classifier returning the true class with fixed probability.

    Attributes
    ----------
    num_components : :class:`int`
        Number of components *N*

    num_noisy : :class:`int`
        Number *k* of components with elevated error rate

        These are the first *k* components.

    gamma : :class:`float`
        Error rate on all other components, in [0, 1]

    noise_multiplier : :class:`float`
        Factor applied to ``gamma`` for the noisy components

    num_classes : :class:`int`
        Number of classes *C*

    true_labels : :class:`numpy.ndarray`
        True class per component

        If not set explicitly, class 0 for every component.

    seed : :class:`int`
        Seed for the random number generators

    Raises
    ------
    segcertify.exceptions.ConfigurationError
        Raised on creation if the values are inconsistent

    """

    def __init__(
        self,
        num_components=100,
        num_noisy=1,
        gamma=0.0,
        noise_multiplier=5.0,
        num_classes=2,
        true_labels=None,
        seed=0,
    ):
        self.num_components = num_components
        self.num_noisy = num_noisy
        self.gamma = gamma
        self.noise_multiplier = noise_multiplier
        self.num_classes = num_classes
        self._true_labels = None
        if true_labels is not None:
            self._true_labels = np.asarray(true_labels, dtype=np.int64)
        self.seed = seed
        self.validate()

    @property
    def true_labels(self):
        # noinspection PyUnresolvedReferences
        """
        True class per component.

        Parameters
        ----------
        true_labels : array_like
            Class ids, one per component

        Returns
        -------
        true_labels : :class:`numpy.ndarray`
            Class ids, one per component

        """
        if self._true_labels is None:
            return np.zeros(self.num_components, dtype=np.int64)
        return self._true_labels

    @true_labels.setter
    def true_labels(self, true_labels):
        self._true_labels = np.asarray(true_labels, dtype=np.int64)

    @property
    def noisy_components(self):
        """
        Indices of the components with elevated error rate.

        Returns
        -------
        indices : :class:`numpy.ndarray`
            The first ``num_noisy`` component indices

        """
        return np.arange(self.num_noisy)

    def validate(self):
        """
        Check the oracle specification for consistency.

        Raises
        ------
        segcertify.exceptions.ConfigurationError
            Raised for the first inconsistency found

        """
        if self.num_components < 1:
            raise ConfigurationError("Need at least one component")
        if not 0 <= self.num_noisy <= self.num_components:
            raise ConfigurationError(
                f"Number of noisy components ({self.num_noisy}) not in "
                f"[0, {self.num_components}]"
            )
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigurationError(
                f"gamma needs to be in [0, 1]: {self.gamma}"
            )
        if self.num_classes < 2:
            raise ConfigurationError("Need at least two classes")
        if self.seed < 0:
            raise ConfigurationError("Seed needs to be >= 0")
        if self._true_labels is not None:
            if len(self._true_labels) != self.num_components:
                raise ConfigurationError(
                    "Need one true label per component"
                )
            if (self._true_labels < 0).any() or (
                self._true_labels >= self.num_classes
            ).any():
                raise ConfigurationError("True labels out of class range")

    def copy(self, **changes):
        """
        Copy of the specification with some values changed.

        Explicitly set true labels are dropped if the number of components
        changes.

        Parameters
        ----------
        changes
            Attributes to change, as keyword arguments

        Returns
        -------
        spec : :class:`OracleSpec`
            Validated new specification

        """
        new_spec = copy.copy(self)
        for key, value in changes.items():
            if not hasattr(self, key):
                raise ConfigurationError(f"Unknown oracle parameter '{key}'")
            setattr(new_spec, key, value)
        if new_spec.num_components != self.num_components:
            new_spec._true_labels = None  # pylint: disable=protected-access
        new_spec.validate()
        return new_spec

    def correctness_probabilities(self):
        """
        Probability of returning the true class, per component.

        Returns
        -------
        probabilities : :class:`numpy.ndarray`
            :math:`1 - \\gamma` for regular and :math:`1 - m\\gamma`
            (clamped to [0, 1]) for noisy components

        """
        probabilities = np.full(self.num_components, 1.0 - self.gamma)
        probabilities[self.noisy_components] = np.clip(
            1.0 - self.noise_multiplier * self.gamma, 0.0, 1.0
        )
        return probabilities

    def to_dict(self):
        """
        Specification as plain dict, *e.g.* for writing a manifest.

        Returns
        -------
        spec : :class:`dict`
            All parameters with their values

        """
        return {
            "num_components": self.num_components,
            "num_noisy": self.num_noisy,
            "gamma": self.gamma,
            "noise_multiplier": self.noise_multiplier,
            "num_classes": self.num_classes,
            "true_labels": (
                None
                if self._true_labels is None
                else self._true_labels.tolist()
            ),
            "seed": self.seed,
        }


def oracle_sample(spec, draws, rng):
    """
    Class counts of the oracle among a number of draws.

    The count of the true class of each component is binomially
    distributed. For two classes, all remaining draws go to the other
    class, for more classes, each wrong draw picks one of the wrong classes
    uniformly at random.

    Parameters
    ----------
    spec : :class:`OracleSpec`
        Oracle to sample from

    draws : :class:`int`
        Number of draws, >= 1

    rng : :class:`numpy.random.Generator`
        Source of randomness

    Returns
    -------
    counts : :class:`segcertify.smoothing.CountsMatrix`
        Counts with one row per component

    """
    if draws < 1:
        raise InvalidArgumentError(f"Need at least one draw: {draws}")
    true_labels = spec.true_labels
    rows = np.arange(spec.num_components)
    hits = rng.binomial(draws, spec.correctness_probabilities())
    counts = np.zeros((spec.num_components, spec.num_classes), dtype=np.int64)
    counts[rows, true_labels] = hits
    misses = draws - hits
    if spec.num_classes == 2:
        counts[rows, 1 - true_labels] = misses
    else:
        num_wrong = spec.num_classes - 1
        spread = rng.multinomial(misses, np.full(num_wrong, 1.0 / num_wrong))
        columns = (true_labels[:, None] + 1 + np.arange(num_wrong)) % (
            spec.num_classes
        )
        counts[rows[:, None], columns] = spread
    return smoothing.CountsMatrix(counts=counts, draws=draws)


def oracle_sample_labelings(spec, draws, rng):
    """
    Full labelings of all components returned by the oracle.

    Parameters
    ----------
    spec : :class:`OracleSpec`
        Oracle to sample from

    draws : :class:`int`
        Number of draws, >= 1

    rng : :class:`numpy.random.Generator`
        Source of randomness

    Returns
    -------
    labelings : :class:`numpy.ndarray`
        Integer array of shape (draws, N)

    """
    if draws < 1:
        raise InvalidArgumentError(f"Need at least one draw: {draws}")
    true_labels = spec.true_labels
    correct = (
        rng.random((draws, spec.num_components))
        < spec.correctness_probabilities()
    )
    if spec.num_classes == 2:
        wrong_labels = np.broadcast_to(1 - true_labels, correct.shape)
    else:
        offsets = rng.integers(
            1, spec.num_classes, size=(draws, spec.num_components)
        )
        wrong_labels = (true_labels + offsets) % spec.num_classes
    return np.where(correct, true_labels, wrong_labels)


class SweepSpec:
    """
    Experiment varying one quantity and evaluating certification algorithms.

    Attributes
    ----------
    axis : :class:`str`
        Quantity varied, one of :data:`AXES`: the error rate ``gamma`` or
        the number of components ``N``

    grid : :class:`list`
        Values of the quantity varied

    reps : :class:`int`
        Repetitions per grid point

    oracle : :class:`OracleSpec`
        Oracle template, the quantity varied gets replaced per grid point

    config : :class:`segcertify.smoothing.CertConfig`
        Certification configuration template

        The correction is set per algorithm.

    algorithms : :class:`list`
        Names of the algorithms to evaluate, see :data:`ALGORITHMS`

    threads : :class:`int`
        Number of worker threads, ``None`` for the default
        (see :func:`segcertify.utils.worker_count`)

    coarsened : :class:`bool`
        Whether grid and repetitions were reduced from the original setting

    Raises
    ------
    segcertify.exceptions.ConfigurationError
        Raised on creation if the values are inconsistent

    """

    def __init__(
        self,
        axis="gamma",
        grid=None,
        reps=1,
        oracle=None,
        config=None,
        algorithms=None,
        threads=None,
    ):
        self.axis = axis
        self.grid = list(grid) if grid is not None else [0.0]
        self.reps = reps
        self.oracle = oracle or OracleSpec()
        self.config = config or smoothing.CertConfig()
        self.algorithms = list(algorithms or ["seg_certify_holm"])
        self.threads = threads
        self.coarsened = False
        self.validate()

    @classmethod
    def from_preset(
        cls,
        name,
        reps=None,
        seed=None,
        grid=None,
        desk=False,
        oracle=None,
        config=None,
        algorithms=None,
        threads=None,
    ):
        """
        Create sweep from one of the :data:`PRESETS`, with overrides.

        Parameters
        ----------
        name : :class:`str`
            Name of the preset, or one of the :data:`PRESET_ALIASES`

        reps : :class:`int`
            Repetitions per grid point, overriding the preset

        seed : :class:`int`
            Seed of the oracle

        grid : :class:`list`
            Grid, overriding the preset

        desk : :class:`bool`
            Whether to coarsen the preset to desk scale

            Error rate grids get a step size of :data:`DESK_STEP` and the
            repetitions are reduced to :data:`DESK_REPS`, unless given
            explicitly.

        oracle : :class:`dict`
            Oracle parameters overriding the preset

        config : :class:`dict`
            Certification parameters overriding the preset

        algorithms : :class:`list`
            Algorithms, overriding the preset

        threads : :class:`int`
            Number of worker threads

        Returns
        -------
        spec : :class:`SweepSpec`
            Validated sweep specification

        Raises
        ------
        segcertify.exceptions.ConfigurationError
            Raised for unknown preset names

        """
        name = PRESET_ALIASES.get(name, name)
        if name not in PRESETS:
            names = [*PRESETS, *PRESET_ALIASES]
            raise ConfigurationError(
                f"Unknown preset '{name}', use one of {', '.join(names)}"
            )
        preset = copy.deepcopy(PRESETS[name])
        preset["oracle"].update(oracle or {})
        preset["config"].update(config or {})
        if seed is not None:
            preset["oracle"]["seed"] = seed
        coarsened = False
        if desk:
            if preset["axis"] == "gamma" and grid is None:
                preset["grid"] = gamma_grid(max(preset["grid"]), DESK_STEP)
            if reps is None:
                preset["reps"] = min(preset["reps"], DESK_REPS)
            coarsened = True
            logger.warning("Preset '%s' coarsened to desk scale", name)
        spec = cls(
            axis=preset["axis"],
            grid=grid if grid is not None else preset["grid"],
            reps=reps if reps is not None else preset["reps"],
            oracle=OracleSpec(**preset["oracle"]),
            config=smoothing.CertConfig(**preset["config"]),
            algorithms=algorithms or preset["algorithms"],
            threads=threads,
        )
        spec.coarsened = coarsened
        return spec

    def validate(self):
        """
        Check the sweep specification for consistency.

        Raises
        ------
        segcertify.exceptions.ConfigurationError
            Raised for the first inconsistency found

        """
        if self.axis not in AXES:
            raise ConfigurationError(
                f"Unknown axis '{self.axis}', use one of {', '.join(AXES)}"
            )
        if not self.grid:
            raise ConfigurationError("Grid must not be empty")
        if self.reps < 1:
            raise ConfigurationError("Need at least one repetition")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ConfigurationError(
                f"Unknown algorithms: {', '.join(sorted(unknown))}"
            )
        for value in self.grid:
            self.oracle_at(value)

    def oracle_at(self, value):
        """
        Oracle for a grid point.

        Parameters
        ----------
        value : :class:`float`
            Value of the quantity varied

        Returns
        -------
        oracle : :class:`OracleSpec`
            Oracle template with the quantity varied replaced

        """
        if self.axis == "gamma":
            return self.oracle.copy(gamma=float(value))
        return self.oracle.copy(num_components=int(value))

    def to_dict(self):
        """
        Sweep specification as plain dict, *e.g.* for writing a manifest.

        Returns
        -------
        spec : :class:`dict`
            All parameters with their values

        """
        return {
            "axis": self.axis,
            "grid": list(self.grid),
            "reps": self.reps,
            "oracle": self.oracle.to_dict(),
            "config": self.config.to_dict(),
            "algorithms": list(self.algorithms),
            "coarsened": self.coarsened,
        }


class SweepResult:
    """
    Certified-component rates of a sweep.

    Attributes
    ----------
    raw : :class:`pandas.DataFrame`
        One row per grid point, algorithm and repetition

        Columns are the key columns (at least ``axis`` and ``algorithm``),
        ``rep`` and ``rate``.

    keys : :class:`list`
        Columns identifying a curve point, the mean rate gets computed over
        all repetitions with identical keys

    coarsened : :class:`bool`
        Whether the sweep was run at reduced (desk) scale

    """

    def __init__(self, raw=None, keys=None, coarsened=False):
        self.keys = list(keys or ["axis", "algorithm"])
        if raw is None:
            raw = pd.DataFrame(columns=self.keys + ["rep", "rate"])
        self.raw = raw
        self.coarsened = coarsened

    @property
    def frame(self):
        """
        Mean rate per grid point and algorithm.

        Rows are ordered by first appearance in :attr:`raw`, *i.e.* by grid
        index and then algorithm, independent of execution order.

        Returns
        -------
        frame : :class:`pandas.DataFrame`
            Key columns and ``rate``

        """
        return (
            self.raw.groupby(self.keys, sort=False)["rate"]
            .mean()
            .reset_index()
        )

    def rates(self, algorithm, **keys):
        """
        Mean rates of one algorithm along the axis.

        Parameters
        ----------
        algorithm : :class:`str`
            Name of the algorithm

        keys
            Further key columns to select, *e.g.* ``budget=1``

        Returns
        -------
        rates : :class:`pandas.Series`
            Mean rates indexed by axis value

        """
        frame = self.frame
        mask = frame["algorithm"] == algorithm
        for key, value in keys.items():
            mask &= frame[key] == value
        return frame[mask].set_index("axis")["rate"]

    def smoothed(self, window=11, degree=1):
        """
        Mean rates with rates smoothed along the axis per curve.

        Parameters
        ----------
        window : :class:`int`
            Window length of the smoothing filter

        degree : :class:`int`
            Degree of the polynomial of the smoothing filter

        Returns
        -------
        frame : :class:`pandas.DataFrame`
            Key columns, ``raw_rate`` and ``smoothed_rate``

        """
        frame = self.frame.rename(columns={"rate": "raw_rate"})
        curve_keys = [key for key in self.keys if key != "axis"]
        curves = frame.groupby(curve_keys, sort=False)["raw_rate"]
        frame["smoothed_rate"] = curves.transform(
            lambda series: savgol_smooth(series.to_numpy(), window, degree)
        )
        return frame


def _rate(algorithm, oracle, config, keys):
    """Certified-component rate of one algorithm in one repetition."""
    if algorithm == "joint_class":
        labelings0 = oracle_sample_labelings(
            oracle, config.n0, component_rng(*keys, "labelings0")
        )
        labelings = oracle_sample_labelings(
            oracle, config.n, component_rng(*keys, "labelings")
        )
        result = smoothing.joint_class_certify(
            labelings0, labelings, config.sigma, config.alpha
        )
        return 0.0 if result.abstained else 1.0
    counts0 = oracle_sample(
        oracle, config.n0, component_rng(*keys, "counts0")
    )
    counts = oracle_sample(oracle, config.n, component_rng(*keys, "counts"))
    if algorithm == "indiv_class":
        result = smoothing.indiv_class_certify(
            counts0, counts, config.sigma, config.alpha
        )
    else:
        result = smoothing.seg_certify(counts0, counts, config)
    return result.certified_fraction


def _algorithm_config(algorithm, config):
    if algorithm.startswith("seg_certify_"):
        return config.copy(correction=algorithm[len("seg_certify_") :])
    return config


def _run_task(spec, configs, grid_index, rep_index):
    oracle = spec.oracle_at(spec.grid[grid_index])
    keys = (oracle.seed, grid_index, rep_index)
    logger.debug("Grid point %s, repetition %s", grid_index, rep_index)
    return [
        _rate(algorithm, oracle, configs[grid_index][algorithm], keys)
        for algorithm in spec.algorithms
    ]


def _sweep(spec, configs, threads=None):
    """
    Run all repetitions at all grid points with per-grid-point configs.

    Returns the raw rows ordered by (grid index, repetition, algorithm).
    """
    if threads is None:
        threads = spec.threads
    workers = utils.worker_count(threads)
    tasks = [
        (grid_index, rep_index)
        for grid_index in range(len(spec.grid))
        for rep_index in range(spec.reps)
    ]
    logger.info(
        "Running %s repetitions at %s grid points with %s worker(s)",
        spec.reps,
        len(spec.grid),
        workers,
    )

    def run(task):
        return _run_task(spec, configs, *task)

    if workers == 1:
        results = [run(task) for task in tasks]
    else:
        executor = concurrent.futures.ThreadPoolExecutor
        with executor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))
    rows = []
    for (grid_index, rep_index), rates in zip(tasks, results):
        for algorithm, rate in zip(spec.algorithms, rates):
            rows.append(
                (spec.grid[grid_index], algorithm, rep_index, rate)
            )
    return rows


def run_sweep(spec, threads=None):
    """
    Run a sweep and record the rate of certified components.

    For each grid point and repetition, fresh counts are drawn from the
    oracle, and every algorithm of the sweep is evaluated on the same
    counts. The rate of the all-or-nothing baselines is 1 if they certify
    and 0 otherwise, regardless of whether the certified classes are
    correct.

    Parameters
    ----------
    spec : :class:`SweepSpec`
        Sweep to run

    threads : :class:`int`
        Number of worker threads, overriding ``spec.threads``

        Does not affect the results.

    Returns
    -------
    result : :class:`SweepResult`
        Rates per grid point, algorithm and repetition

    """
    spec.validate()
    configs = [
        {
            algorithm: _algorithm_config(algorithm, spec.config)
            for algorithm in spec.algorithms
        }
    ] * len(spec.grid)
    rows = _sweep(spec, configs, threads=threads)
    raw = pd.DataFrame(rows, columns=RAW_COLUMNS)
    return SweepResult(raw=raw, coarsened=spec.coarsened)


def resolve_budget(budget, num_components):
    """
    Absolute error budget for a number of components.

    Parameters
    ----------
    budget : :class:`int` or :class:`float`
        Either a non-negative integer, or a fraction of the number of
        components in (0, 1), *e.g.* 0.01 for one percent

    num_components : :class:`int`
        Number of components *N*

    Returns
    -------
    budget : :class:`int`
        Number of tolerated erroneous certifications, at most N - 1

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for negative budgets or non-integer budgets >= 1

    """
    if isinstance(budget, float) and 0.0 < budget < 1.0:
        absolute = int(round(budget * num_components))
    elif budget >= 0 and int(budget) == budget:
        absolute = int(budget)
    else:
        raise InvalidArgumentError(
            f"Budget needs to be a non-negative integer or a fraction in "
            f"(0, 1): {budget}"
        )
    return min(absolute, num_components - 1)


def run_budget_sweep(spec, budgets, threads=None):
    """
    Run a sweep of certification with k-FWER control for several budgets.

    For a budget *b*, the *k*-FWER gets controlled with :math:`k = b + 1`.
    All budgets see identical draws, hence budget 0 reproduces the results
    of a sweep with Holm correction.

    Parameters
    ----------
    spec : :class:`SweepSpec`
        Sweep to run, the algorithms get replaced by ``seg_certify_kfwer``

    budgets : :class:`list`
        Error budgets, see :func:`resolve_budget`

    threads : :class:`int`
        Number of worker threads, overriding ``spec.threads``

    Returns
    -------
    result : :class:`SweepResult`
        Rates per grid point, budget and repetition, with key columns
        ``axis``, ``algorithm``, ``budget`` and ``alpha``

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for an empty list of budgets or invalid budgets

    """
    if not budgets:
        raise InvalidArgumentError("Need at least one budget")
    spec = copy.copy(spec)
    spec.algorithms = ["seg_certify_kfwer"]
    spec.validate()
    frames = []
    for budget in budgets:
        configs = []
        for value in spec.grid:
            num_components = spec.oracle_at(value).num_components
            absolute = resolve_budget(budget, num_components)
            configs.append(
                {
                    "seg_certify_kfwer": spec.config.copy(
                        correction="kfwer", budget=absolute
                    )
                }
            )
        logger.info("Budget sweep for budget %s", budget)
        rows = _sweep(spec, configs, threads=threads)
        frame = pd.DataFrame(rows, columns=RAW_COLUMNS)
        frame.insert(2, "budget", budget)
        frame.insert(3, "alpha", spec.config.alpha)
        frames.append(frame)
    return SweepResult(
        raw=pd.concat(frames, ignore_index=True),
        keys=["axis", "algorithm", "budget", "alpha"],
        coarsened=spec.coarsened,
    )


def savgol_smooth(series, window=11, degree=1):
    """
    Smooth a series with a Savitzky-Golay filter of degree 1.

    Each point gets replaced by the value of a straight line fitted (least
    squares) to the window centered around it. For equidistant points,
    this is the moving average over the window. Near the ends of the series,
    the window shrinks symmetrically to the neighbours available.

    Parameters
    ----------
    series : array_like
        Values to smooth

    window : :class:`int`
        Window length, odd and at least ``degree + 1``

    degree : :class:`int`
        Degree of the fitted polynomial, only 1 is supported

    Returns
    -------
    smoothed : :class:`numpy.ndarray`
        Smoothed values

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for even windows, windows too short, or degrees other than 1

    """
    if degree != 1:
        raise InvalidArgumentError(f"Only degree 1 is supported: {degree}")
    if window % 2 == 0 or window < degree + 1:
        raise InvalidArgumentError(
            f"Window needs to be odd and >= {degree + 1}: {window}"
        )
    series = np.asarray(series, dtype=float)
    size = len(series)
    half_width = window // 2
    if size >= window:
        smoothed = signal.savgol_filter(
            series, window, degree, mode="nearest"
        )
    else:
        smoothed = series.copy()
    for index in range(size):
        width = min(half_width, index, size - 1 - index)
        if width < half_width:
            smoothed[index] = series[index - width : index + width + 1].mean()
    return smoothed
