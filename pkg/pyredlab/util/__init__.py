"""Auxiliary functions used throughout pyredlab."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .functions import compare, positive_part, safe_div
from .seeding import STREAM_NAMES, make_streams
from .formatting import format_number, rounded, threads_from_environment
