"""Stability tables and simulation sweeps written as CSV."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .tables import TABLE_COLUMNS, reproduce_table
from .sweeps import (ROW_COLUMNS, SweepFamily, SweepPoint, SweepSpec,
                     sweep_mean_jobs, write_csv, write_manifest)
