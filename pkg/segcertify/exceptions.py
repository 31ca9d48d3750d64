"""
Exceptions of the segcertify package.

All exceptions raised deliberately by the package derive from :class:`Error`,
hence catching this class catches every problem the package detects itself.
Those exceptions signalling invalid values additionally derive from
:class:`ValueError` to play well with code expecting the builtin.

The command-line interface maps the classes to exit codes, see
:func:`segcertify.cli.main`.
"""


class Error(Exception):
    """Base class for all exceptions of the segcertify package."""


class InvalidArgumentError(Error, ValueError):
    """Argument outside the domain of a function."""


class DimensionMismatchError(Error, ValueError):
    """Inputs of incompatible shape, *e.g.* differing numbers of classes."""


class ConfigurationError(Error, ValueError):
    """Invalid configuration of a certification run or an experiment."""


class UndefinedMetricError(Error, ValueError):
    """Metric with an empty denominator, *e.g.* only ignored positions."""


class FormatError(Error):
    """
    Malformed input file.

    Parameters
    ----------
    message : :class:`str`
        Description of the problem

    line : :class:`int`
        Line number (starting with 1) the problem was detected in

        ``None`` if the problem cannot be attributed to a single line.

    """

    def __init__(self, message="", line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class RowSumError(FormatError):
    """
    Counts row not summing up to the number of draws given in the header.

    Parameters
    ----------
    message : :class:`str`
        Description of the problem

    component : :class:`int`
        Index (starting with 0) of the offending component

    line : :class:`int`
        Line number (starting with 1) the component is stored in

    """

    def __init__(self, message="", component=None, line=None):
        if component is not None:
            message = f"component {component}: {message}"
        super().__init__(message, line=line)
        self.component = component
