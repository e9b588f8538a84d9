"""Internal helper classes of pyredlab."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from ._trajectory_dictionary import FILE_VERSION, TrajectoryDictionary
