"""Test suite of pyredlab."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license
