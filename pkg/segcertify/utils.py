"""
General utils of the segcertify package.

Mostly small functions that are more general and get used in the other
modules, *e.g.* for parsing numbers and lists given on the command line.
"""

import importlib.metadata
import math
import os

from segcertify.exceptions import ConfigurationError, InvalidArgumentError

THREADS_VARIABLE = "SEGCERT_THREADS"
"""Environment variable with the default number of worker threads."""


def worker_count(threads=None):
    """
    Number of worker threads to use.

    Parameters
    ----------
    threads : :class:`int`
        Number of threads requested explicitly

        If ``None``, the environment variable :data:`THREADS_VARIABLE` is
        used, and if it is unset, a single thread.

    Returns
    -------
    threads : :class:`int`
        Number of worker threads, >= 1

    Raises
    ------
    segcertify.exceptions.ConfigurationError
        Raised if the number is not a positive integer

    """
    if threads is None:
        threads = os.environ.get(THREADS_VARIABLE) or 1
    try:
        threads = int(threads)
    except ValueError as error:
        raise ConfigurationError(
            f"Number of threads needs to be an integer: {threads}"
        ) from error
    if threads < 1:
        raise ConfigurationError(f"Need at least one thread: {threads}")
    return threads


def format_number(value):
    """
    Shortest decimal representation reading back to the same number.

    Integers are written without decimal point, floats with Python's
    shortest round-trip representation. Hence, output is deterministic.

    Parameters
    ----------
    value : :class:`int` or :class:`float`
        Number to format

    Returns
    -------
    text : :class:`str`
        Formatted number

    """
    if isinstance(value, (bool, int)) or (
        hasattr(value, "dtype") and value.dtype.kind in "iub"
    ):
        return str(int(value))
    return repr(float(value))


def parse_number(token):
    """
    Convert a token to an integer if possible, otherwise to a float.

    Tokens in exponential notation denoting integers, such as ``1e5``, are
    converted to integers as well.

    Parameters
    ----------
    token : :class:`str`
        Text to convert

    Returns
    -------
    number : :class:`int` or :class:`float`
        Converted number

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised if the token is no number

    """
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        pass
    try:
        number = float(token)
    except ValueError as error:
        raise InvalidArgumentError(f"Not a number: '{token}'") from error
    if not math.isfinite(number):
        raise InvalidArgumentError(f"Not a finite number: '{token}'")
    if "e" in token.lower() and number >= 1 and number.is_integer():
        return int(number)
    return number


def parse_list(text):
    """
    Convert a comma-separated list of numbers.

    Parameters
    ----------
    text : :class:`str`
        Numbers separated by commas, *e.g.* ``0,1,0.01``

    Returns
    -------
    numbers : :class:`list`
        Numbers, see :func:`parse_number`

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for empty lists or invalid numbers

    """
    tokens = [token for token in text.split(",") if token.strip()]
    if not tokens:
        raise InvalidArgumentError("Empty list")
    return [parse_number(token) for token in tokens]


def parse_grid(text):
    """
    Convert a grid specification.

    Three forms are understood:

    ``first:last``
        Powers of ten from ``first`` to ``last`` (both included, both
        powers of ten), *e.g.* ``1e2:1e6``

    ``start:stop:step``
        Equidistant values from ``start`` to ``stop`` (included), *e.g.*
        ``0:0.1:0.005``

    ``a,b,c``
        Explicit list, see :func:`parse_list`

    Parameters
    ----------
    text : :class:`str`
        Grid specification

    Returns
    -------
    grid : :class:`list`
        Grid values

    Raises
    ------
    segcertify.exceptions.InvalidArgumentError
        Raised for malformed specifications

    """
    parts = text.split(":")
    if len(parts) == 1:
        return parse_list(text)
    if len(parts) == 2:
        first, last = (parse_number(part) for part in parts)
        exponents = []
        for value in (first, last):
            if value <= 0:
                raise InvalidArgumentError(f"Not a power of ten: {value}")
            exponent = round(math.log10(value))
            if 10**exponent != value:
                raise InvalidArgumentError(f"Not a power of ten: {value}")
            exponents.append(exponent)
        if exponents[0] > exponents[1]:
            raise InvalidArgumentError(f"Empty grid: '{text}'")
        first, last = exponents
        return [10**exponent for exponent in range(first, last + 1)]
    if len(parts) == 3:
        start, stop, step = (parse_number(part) for part in parts)
        if step <= 0 or stop < start:
            raise InvalidArgumentError(f"Empty grid: '{text}'")
        num_points = int(round((stop - start) / step)) + 1
        return [
            round(start + index * step, 10) for index in range(num_points)
        ]
    raise InvalidArgumentError(f"Malformed grid: '{text}'")


def package_version():
    """
    Version of the installed segcertify package.

    Returns
    -------
    version : :class:`str`
        Version string, ``unknown`` if the package is not installed

    """
    try:
        return importlib.metadata.version("segcertify")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"
