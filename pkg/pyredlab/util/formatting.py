"""Number formatting and small environment helpers for output files."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math
import os

from ..errors import ConfigurationError


SIGNIFICANT_DIGITS = 12
"""number of significant digits in every emitted number"""

THREADS_VARIABLE = "REDLAB_THREADS"
"""environment variable capping the worker pool"""


def format_number(value):
    """Format a number with 12 significant digits.

    Integers, booleans and strings pass through unchanged, None becomes
    the empty string (used for blank CSV cells).
    """
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, int)):
        return str(value)
    return "{:.{}g}".format(float(value), SIGNIFICANT_DIGITS)


def rounded(obj):
    """Return a copy of a JSON-like structure with floats rounded.

    Floats are rounded to 12 significant digits, containers are copied
    recursively, everything else is returned as is.
    """
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(format_number(obj))
        return obj
    if isinstance(obj, dict):
        return {key: rounded(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [rounded(value) for value in obj]
    return obj


def threads_from_environment(default=None):
    """Read the worker cap from REDLAB_THREADS.

    Returns the positive integer stored in the variable, or ``default``
    (falling back to ``os.cpu_count()``) if it is unset.
    """
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None or raw.strip() == "":
        return default or os.cpu_count() or 1
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads < 1:
        raise ConfigurationError("must be a positive integer, got {!r}"
                                 .format(raw), field=THREADS_VARIABLE)
    return threads
