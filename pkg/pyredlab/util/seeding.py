"""Per-caller random streams.

Every simulation owns its generators; nothing is seeded globally. One
integer seed is expanded into named, statistically independent streams so
that e.g. changing the dispatch policy never shifts the arrival sequence.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np


STREAM_NAMES = ("arrivals", "sizes", "initial", "dispatch", "scheduling",
                "modulation")
"""names of the independent streams derived from one seed"""


def make_streams(seed):
    """Derive the named generators for one replication.

    Parameters
    ----------
    seed : int
        non-negative seed (64 bit)

    Returns
    -------
    dict
        stream name -> numpy.random.Generator
    """
    assert seed >= 0, "seed must be non-negative"
    children = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
    return {name: np.random.default_rng(child)
            for name, child in zip(STREAM_NAMES, children)}
