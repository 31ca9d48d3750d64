"""
io module of the segcertify package.

Reading and writing the files certification runs consume and produce.
Importers read a file (the :attr:`Importer.source`) into an object,
exporters write an object to a file (the :attr:`Exporter.target`). For
convenience, each of them comes with a function doing the whole job.


File formats
============

Counts files
    Line-oriented ASCII text. The first line is ``segcert-counts 1``, the
    second line ``N=<int> C=<int> n0=<int> n=<int>``. Each of the following
    *N* lines holds the *C* counts of one component among the :math:`n_0`
    selection draws, a pipe character, and its *C* counts among the *n*
    estimation draws, all separated by single spaces::

        segcert-counts 1
        N=2 C=3 n0=10 n=100
        9 1 0 | 95 3 2
        0 10 0 | 4 96 0

    Row sums need to match :math:`n_0` and *n* exactly.

Label files
    One token per component and line: a class id, ``~`` for an abstention
    or ``*`` for an ignored component.

Decision files
    CSV with header row and the columns ``component``, ``label`` (``~`` for
    abstentions), ``guessed_class``, ``hit_count`` and ``p_value``.

Run manifests
    JSON files accompanying every output as ``<output>.manifest.json``, with
    all parameters necessary to reproduce the run.

All text files are written with LF line endings.


Module documentation
====================

"""

import datetime
import json
import logging
import re

import numpy as np
import pandas as pd

from segcertify import metrics, smoothing, utils
from segcertify.exceptions import (
    DimensionMismatchError,
    FormatError,
    RowSumError,
)

logger = logging.getLogger(__name__)

COUNTS_MAGIC = "segcert-counts 1"
"""First line of every counts file."""

COUNTS_HEADER = re.compile(
    r"^N=(?P<N>\d+) C=(?P<C>\d+) n0=(?P<n0>\d+) n=(?P<n>\d+)$"
)

ABSTAIN_TOKEN = "~"
"""Token for abstentions in label and decision files."""

IGNORE_TOKEN = "*"
"""Token for ignored components in label files."""

CHUNK_SIZE = 100_000
"""Number of rows of counts files read at once."""

DECISION_COLUMNS = [
    "component",
    "label",
    "guessed_class",
    "hit_count",
    "p_value",
]


class _StrictParseNeeded(Exception):
    """Fast parse of a counts file failed, line-wise parse needed."""


class CountsFile:
    """
    Contents of a counts file.

    Attributes
    ----------
    counts0 : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the selection draws

    counts : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the estimation draws

    """

    def __init__(self, counts0=None, counts=None):
        self.counts0 = counts0
        self.counts = counts

    def import_from(self, importer):
        """
        Import contents using the given importer.

        Parameters
        ----------
        importer : :class:`CountsImporter`
            Importer with its source set

        """
        importer.import_into(self)


class Importer:
    """
    Base class for importers.

    Although not formally an abstract class, it does not implement any
    actual functionality, but leaves this for the child classes

    Attributes
    ----------
    source : :class:`str`
        Filename (typically the complete path) of the file to read

    """

    def __init__(self, source=""):
        self.source = source
        self._target = None

    def import_into(self, target=None):
        """
        Import the contents of the source into the given object.

        Parameters
        ----------
        target
            Object to import into, type depends on the importer

        Raises
        ------
        segcertify.exceptions.FormatError
            Raised if the source is malformed

        OSError
            Raised if the source cannot be read

        """
        self._target = target
        self._import()

    def _import(self):
        pass


class CountsImporter(Importer):
    """
    Importer for counts files.

    Files are read in chunks of :data:`CHUNK_SIZE` rows into preallocated
    arrays. Only if this fails, the file gets parsed line by line to
    report the exact location of the problem.

    Attributes
    ----------
    num_components : :class:`int`
        Number of components *N* read from the header

    num_classes : :class:`int`
        Number of classes *C* read from the header

    n0 : :class:`int`
        Number of selection draws read from the header

    n : :class:`int`
        Number of estimation draws read from the header

    """

    def __init__(self, source=""):
        super().__init__(source=source)
        self.num_components = 0
        self.num_classes = 0
        self.n0 = 0
        self.n = 0

    def _import(self):
        try:
            counts0, counts = self._read()
        except UnicodeDecodeError as error:
            raise FormatError("Counts file is no ASCII text") from error
        self._check_rows(counts0, self.n0, "n0")
        self._check_rows(counts, self.n, "n")
        self._target.counts0 = smoothing.CountsMatrix(counts0, draws=self.n0)
        self._target.counts = smoothing.CountsMatrix(counts, draws=self.n)
        logger.debug(
            "Read counts of %s components and %s classes from %s",
            self.num_components,
            self.num_classes,
            self.source,
        )

    def _read(self):
        self._read_header()
        try:
            return self._read_chunks()
        except (ValueError, _StrictParseNeeded) as error:
            logger.debug("Chunked read failed (%s), parsing lines", error)
        return self._read_lines()

    def _read_header(self):
        with open(self.source, encoding="ascii") as file:
            magic = file.readline().strip()
            header = file.readline().strip()
        if magic != COUNTS_MAGIC:
            raise FormatError(
                f"Expected '{COUNTS_MAGIC}', found '{magic}'", line=1
            )
        match = COUNTS_HEADER.match(header)
        if not match:
            raise FormatError(
                f"Expected 'N=<int> C=<int> n0=<int> n=<int>', found "
                f"'{header}'",
                line=2,
            )
        self.num_components = int(match["N"])
        self.num_classes = int(match["C"])
        self.n0 = int(match["n0"])
        self.n = int(match["n"])
        if self.num_components < 1:
            raise FormatError("Need at least one component", line=2)
        if self.num_classes < 2:
            raise FormatError("Need at least two classes", line=2)
        if self.n0 < 1 or self.n < 1:
            raise FormatError("Need at least one draw", line=2)

    def _allocate(self):
        shape = (self.num_components, self.num_classes)
        return np.empty(shape, np.int64), np.empty(shape, np.int64)

    def _read_chunks(self):
        num_classes = self.num_classes
        dtypes = {column: np.int64 for column in range(2 * num_classes + 1)}
        dtypes[num_classes] = str
        counts0, counts = self._allocate()
        row = 0
        reader = pd.read_csv(
            self.source,
            sep=" ",
            header=None,
            names=list(range(2 * num_classes + 1)),
            skiprows=2,
            dtype=dtypes,
            skip_blank_lines=False,
            chunksize=CHUNK_SIZE,
        )
        with reader:
            for chunk in reader:
                if row + len(chunk) > self.num_components:
                    raise _StrictParseNeeded("too many rows")
                if not (chunk[num_classes] == "|").all():
                    raise _StrictParseNeeded("separator missing")
                values = chunk.drop(columns=num_classes).to_numpy()
                counts0[row : row + len(chunk)] = values[:, :num_classes]
                counts[row : row + len(chunk)] = values[:, num_classes:]
                row += len(chunk)
        if row != self.num_components:
            raise _StrictParseNeeded("too few rows")
        return counts0, counts

    def _read_lines(self):
        num_classes = self.num_classes
        counts0, counts = self._allocate()
        row = 0
        blank_line = None
        with open(self.source, encoding="ascii") as file:
            for line_number, line in enumerate(file, start=1):
                if line_number <= 2:
                    continue
                line = line.rstrip("\n")
                if not line:
                    blank_line = blank_line or line_number
                    continue
                if blank_line:
                    raise FormatError("Empty line", line=blank_line)
                tokens = line.split(" ")
                if row == self.num_components:
                    raise FormatError(
                        f"More than {self.num_components} component rows",
                        line=line_number,
                    )
                if (
                    len(tokens) != 2 * num_classes + 1
                    or tokens[num_classes] != "|"
                ):
                    raise FormatError(
                        f"Expected {num_classes} counts, '|' and "
                        f"{num_classes} counts",
                        line=line_number,
                    )
                del tokens[num_classes]
                try:
                    values = [int(token) for token in tokens]
                except ValueError as error:
                    raise FormatError(
                        "Counts need to be integers", line=line_number
                    ) from error
                counts0[row] = values[:num_classes]
                counts[row] = values[num_classes:]
                row += 1
        if row != self.num_components:
            raise FormatError(
                f"Expected {self.num_components} component rows, found {row}"
            )
        return counts0, counts

    @staticmethod
    def _check_rows(counts, draws, name):
        negative = np.flatnonzero((counts < 0).any(axis=1))
        if negative.size:
            raise FormatError("Negative count", line=int(negative[0]) + 3)
        sums = counts.sum(axis=1)
        wrong = np.flatnonzero(sums != draws)
        if wrong.size:
            component = int(wrong[0])
            raise RowSumError(
                f"{name}-counts sum to {sums[component]}, expected {draws}",
                component=component,
                line=component + 3,
            )


class LabelImporter(Importer):
    """
    Importer for label files.

    Attributes
    ----------
    num_classes : :class:`int`
        Number of classes *C*

    ignore : :class:`int`
        Id the ignore token gets converted to

    """

    def __init__(self, source="", num_classes=2, ignore=metrics.IGNORE):
        super().__init__(source=source)
        self.num_classes = num_classes
        self.ignore = ignore

    def _import(self):
        try:
            tokens = pd.read_csv(
                self.source,
                header=None,
                names=["label"],
                dtype=str,
                keep_default_na=False,
                skip_blank_lines=False,
            )["label"].str.strip()
        except pd.errors.EmptyDataError as error:
            raise FormatError("Empty label file") from error
        except pd.errors.ParserError as error:
            raise FormatError(f"Malformed label file: {error}") from error
        if tokens.empty:
            raise FormatError("Empty label file")
        labels = pd.to_numeric(tokens, errors="coerce")
        labels[tokens == ABSTAIN_TOKEN] = smoothing.ABSTAIN
        labels[tokens == IGNORE_TOKEN] = self.ignore
        is_class = (labels >= 0) & (labels < self.num_classes)
        is_sentinel = tokens.isin([ABSTAIN_TOKEN, IGNORE_TOKEN])
        valid = (is_class & (labels % 1 == 0)) | is_sentinel
        if not valid.all():
            index = int(np.flatnonzero(~valid.to_numpy())[0])
            raise FormatError(
                f"Invalid label '{tokens.iloc[index]}'", line=index + 1
            )
        self._target.labels = labels.to_numpy(dtype=np.int64)
        self._target.num_classes = self.num_classes
        self._target.ignore = self.ignore


class Exporter:
    """
    Base class for exporters.

    Although not formally an abstract class, it does not implement any
    actual functionality, but leaves this for the child classes

    Attributes
    ----------
    target : :class:`str`
        Filename (typically the complete path) of the file to write

    """

    def __init__(self, target=""):
        self.target = target
        self._source = None

    def export_from(self, source=None):
        """
        Export the given object to the target.

        Parameters
        ----------
        source
            Object to export, type depends on the exporter

        """
        self._source = source
        self._export()

    def _export(self):
        pass


class CountsExporter(Exporter):
    """Exporter for counts files, the inverse of :class:`CountsImporter`."""

    def _export(self):
        counts0 = self._source.counts0
        counts = self._source.counts
        if counts0.counts.shape != counts.counts.shape:
            raise DimensionMismatchError(
                f"Counts of shape {counts0.counts.shape} and "
                f"{counts.counts.shape}"
            )
        num_components, num_classes = counts.counts.shape
        row_format = " ".join(["%d"] * num_classes)
        with open(self.target, "w", encoding="ascii", newline="\n") as file:
            file.write(f"{COUNTS_MAGIC}\n")
            file.write(
                f"N={num_components} C={num_classes} n0={counts0.draws} "
                f"n={counts.draws}\n"
            )
            np.savetxt(
                file,
                np.hstack([counts0.counts, counts.counts]),
                fmt=f"{row_format} | {row_format}",
            )


class LabelExporter(Exporter):
    """Exporter for label files, the inverse of :class:`LabelImporter`."""

    def _export(self):
        labels = self._source.labels
        tokens = labels.astype(str).astype(object)
        tokens[labels == smoothing.ABSTAIN] = ABSTAIN_TOKEN
        tokens[labels == self._source.ignore] = IGNORE_TOKEN
        with open(self.target, "w", encoding="ascii", newline="\n") as file:
            file.writelines(f"{token}\n" for token in tokens)


class DecisionsExporter(Exporter):
    """Exporter writing the decisions of a certification run as CSV."""

    def _export(self):
        result = self._source
        labels = result.labels.astype(str).astype(object)
        labels[result.labels == smoothing.ABSTAIN] = ABSTAIN_TOKEN
        frame = pd.DataFrame(
            {
                "component": np.arange(len(result)),
                "label": labels,
                "guessed_class": result.guessed_classes,
                "hit_count": result.hit_counts,
                "p_value": result.p_values,
            },
            columns=DECISION_COLUMNS,
        )
        write_csv(frame, self.target)


def parse_counts_file(path):
    """
    Read a counts file.

    Parameters
    ----------
    path : :class:`str`
        Name of the file

    Returns
    -------
    counts0 : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the selection draws

    counts : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the estimation draws

    Raises
    ------
    segcertify.exceptions.FormatError
        Raised for malformed files, with the line number if possible

    segcertify.exceptions.RowSumError
        Raised for rows not summing up to the number of draws

    OSError
        Raised if the file cannot be read

    """
    counts_file = CountsFile()
    counts_file.import_from(CountsImporter(source=path))
    return counts_file.counts0, counts_file.counts


def write_counts_file(path, counts0, counts):
    """
    Write a counts file.

    Parameters
    ----------
    path : :class:`str`
        Name of the file

    counts0 : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the selection draws

    counts : :class:`segcertify.smoothing.CountsMatrix`
        Counts of the estimation draws

    """
    exporter = CountsExporter(target=path)
    exporter.export_from(CountsFile(counts0=counts0, counts=counts))


def parse_label_file(path, num_classes, ignore=metrics.IGNORE):
    """
    Read a label file.

    Parameters
    ----------
    path : :class:`str`
        Name of the file

    num_classes : :class:`int`
        Number of classes *C*

    ignore : :class:`int`
        Id of ignored components

    Returns
    -------
    labels : :class:`segcertify.metrics.LabelMap`
        Labels read

    Raises
    ------
    segcertify.exceptions.FormatError
        Raised for invalid tokens, with the line number

    """
    label_map = metrics.LabelMap(num_classes=num_classes, ignore=ignore)
    importer = LabelImporter(
        source=path, num_classes=num_classes, ignore=ignore
    )
    importer.import_into(label_map)
    return label_map


def write_label_file(path, labels):
    """
    Write a label file.

    Parameters
    ----------
    path : :class:`str`
        Name of the file

    labels : :class:`segcertify.metrics.LabelMap`
        Labels to write
    """
    LabelExporter(target=path).export_from(labels)


def write_decisions_file(path, result):
    """
    Write the per-component decisions of a certification run.

    Parameters
    ----------
    path : :class:`str`
        Name of the file

    result : :class:`segcertify.smoothing.CertificationResult`
        Result to write

    """
    DecisionsExporter(target=path).export_from(result)


def write_csv(frame, path):
    """
    Write a table as CSV with header row and LF line endings.

    Floats are written in their shortest round-trip representation, hence
    identical tables result in identical files.

    Parameters
    ----------
    frame : :class:`pandas.DataFrame`
        Table to write

    path : :class:`str` or file-like
        Name of the file or open text stream

    """
    frame.to_csv(path, index=False, lineterminator="\n")


def manifest_path(output):
    """
    Name of the manifest accompanying an output file.

    Parameters
    ----------
    output : :class:`str`
        Name of the output file

    Returns
    -------
    path : :class:`str`
        Name of the manifest file

    """
    return f"{output}.manifest.json"


class RunManifest:
    """
    Everything necessary to reproduce a run.

    Attributes
    ----------
    command : :class:`str`
        Name of the command run

    arguments : :class:`list`
        Command-line arguments

    version : :class:`str`
        Version of the segcertify package

    config : :class:`dict`
        Certification configuration, see
        :meth:`segcertify.smoothing.CertConfig.to_dict`

    sweep : :class:`dict`
        Sweep specification, see
        :meth:`segcertify.synthetic.SweepSpec.to_dict`

    seeds : :class:`list`
        Seeds of all random number generators

    outputs : :class:`list`
        Names of the files written

    results : :class:`dict`
        Summary of the results, *e.g.* metrics

    start : :class:`datetime.datetime`
        Date and time of the start of the run

    end : :class:`datetime.datetime`
        Date and time of the end of the run

    """

    def __init__(self, command="", arguments=None):
        self.command = command
        self.arguments = list(arguments or [])
        self.version = utils.package_version()
        self.config = {}
        self.sweep = {}
        self.seeds = []
        self.outputs = []
        self.results = {}
        self.start = datetime.datetime.now()
        self.end = self.start

    @property
    def duration(self):
        """
        Duration of the run.

        Returns
        -------
        duration : :class:`datetime.timedelta`
            Time difference between start and end of the run

        """
        return self.end - self.start

    def finish(self):
        """Set the end of the run to now."""
        self.end = datetime.datetime.now()

    def to_dict(self):
        """
        Manifest as plain dict suitable for JSON.

        Returns
        -------
        manifest : :class:`dict`
            All attributes, timestamps in ISO format, duration in seconds

        """
        return {
            "command": self.command,
            "arguments": self.arguments,
            "version": self.version,
            "config": self.config,
            "sweep": self.sweep,
            "seeds": self.seeds,
            "outputs": self.outputs,
            "results": self.results,
            "start": self.start.isoformat(),
            "end": self.end.isoformat(),
            "duration": self.duration.total_seconds(),
        }

    def write(self, path):
        """
        Write the manifest as JSON.

        Parameters
        ----------
        path : :class:`str`
            Name of the file

        """
        with open(path, "w", encoding="utf-8", newline="\n") as file:
            json.dump(self.to_dict(), file, indent=2)
            file.write("\n")
