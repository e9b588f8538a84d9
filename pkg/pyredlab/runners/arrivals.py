"""Poisson arrival stream shared by coupled systems."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math
from dataclasses import dataclass

import numpy as np


BATCH_SIZE = 4096
"""arrivals drawn per refill"""


@dataclass(frozen=True)
class Arrival:
    """One arriving job."""

    time: float
    job_type: int
    """index into topology.types"""
    size: float
    """service requirement shared by all copies"""


class ArrivalStream:
    """Draws interarrival times, types and sizes in batches.

    The draws only depend on the ``arrivals`` and ``sizes`` generators, so
    systems that consume the same stream see the same jobs.
    """

    def __init__(self, topology, service, arrivals_rng, sizes_rng,
                 batch_size=BATCH_SIZE):
        self.lam = topology.lam
        self.probabilities = np.array(topology.probabilities)
        self.probabilities = self.probabilities / self.probabilities.sum()
        self.service = service
        self.arrivals_rng = arrivals_rng
        self.sizes_rng = sizes_rng
        self.batch_size = batch_size
        self.time = 0.0
        self.count = 0
        self._gaps = self._types = self._sizes = ()
        self._position = 0

    def _refill(self):
        self._gaps = self.arrivals_rng.exponential(1.0 / self.lam,
                                                   self.batch_size)
        self._types = self.arrivals_rng.choice(len(self.probabilities),
                                               self.batch_size,
                                               p=self.probabilities)
        self._sizes = self.service.sample(self.sizes_rng, self.batch_size)
        self._position = 0

    def next(self):
        """the next Arrival, or None if the arrival rate is zero"""
        if self.lam == 0:
            return None
        if self._position >= len(self._gaps):
            self._refill()
        position = self._position
        self._position += 1
        self.count += 1
        self.time += float(self._gaps[position])
        assert math.isfinite(self.time)
        return Arrival(self.time, int(self._types[position]),
                       float(self._sizes[position]))
