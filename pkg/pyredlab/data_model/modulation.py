"""Markov-modulated server capacities.

Every server carries an exponential clock with mean epsilon. When it
rings the server draws a new slowdown S from a discrete distribution and
works at capacity mu_s / S until the next ring.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigurationError


PMF_SUM_TOL = 1e-12
"""absolute tolerance on the sum of the slowdown probabilities"""

DOLLY_1_12 = ((1, 0.23), (2, 0.14), (3, 0.09), (4, 0.03), (5, 0.08),
              (6, 0.10), (7, 0.04), (8, 0.14), (9, 0.12), (10, 0.021),
              (11, 0.007), (12, 0.002))
"""empirical Dolly(1,12) slowdown distribution as (S, probability) pairs"""


@dataclass(frozen=True)
class CapacityModulation:
    """Slowdown process shared by all servers (each with its own clock)."""

    epsilon: float
    """mean time between two rings of a server's clock"""
    slowdowns: tuple = DOLLY_1_12
    """(slowdown value S >= 1, probability) pairs"""

    def __post_init__(self):
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "slowdowns", tuple(
            (float(value), float(p)) for value, p in self.slowdowns))
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ConfigurationError("must be positive",
                                     field="modulation.epsilon")
        if not self.slowdowns:
            raise ConfigurationError("needs at least one value",
                                     field="modulation.slowdowns")
        for value, p in self.slowdowns:
            if value < 1:
                raise ConfigurationError(
                    "slowdown values must be >= 1, got {!r}".format(value),
                    field="modulation.slowdowns")
            if p < 0:
                raise ConfigurationError(
                    "probabilities must be non-negative",
                    field="modulation.slowdowns")
        total = math.fsum(p for _, p in self.slowdowns)
        if abs(total - 1) > PMF_SUM_TOL:
            raise ConfigurationError(
                "probabilities sum to {:.12g}".format(total),
                field="modulation.slowdowns")

    @property
    def values(self):
        return np.array([value for value, _ in self.slowdowns])

    @property
    def probabilities(self):
        weights = np.array([p for _, p in self.slowdowns])
        # numpy insists on an exact sum
        return weights / weights.sum()

    def mean_slowdown(self):
        """E[S]"""
        return float(np.dot(self.values, self.probabilities))

    def sample_slowdown(self, rng):
        """draw a slowdown value S"""
        return float(rng.choice(self.values, p=self.probabilities))

    def next_ring(self, rng):
        """time until the next ring of one server's clock"""
        return float(rng.exponential(self.epsilon))

    def to_dict(self):
        return {"epsilon": self.epsilon,
                "slowdowns": [{"s": value, "p": p}
                              for value, p in self.slowdowns]}

    @classmethod
    def from_dict(cls, raw):
        """Parse ``{"epsilon": 1.0, "slowdowns": [{"s": 1, "p": 0.23}, ...]}``.

        ``slowdowns`` may be the string ``"dolly"`` or be omitted, both
        meaning Dolly(1,12). ``epsilon`` is required.
        """
        if not isinstance(raw, dict):
            raise ConfigurationError("must be a JSON object",
                                     field="modulation")
        unknown = set(raw) - {"epsilon", "slowdowns"}
        if unknown:
            raise ConfigurationError(
                "unknown key(s) {}".format(sorted(unknown)),
                field="modulation")
        if "epsilon" not in raw:
            raise ConfigurationError("missing key",
                                     field="modulation.epsilon")
        slowdowns = raw.get("slowdowns", "dolly")
        if slowdowns == "dolly":
            slowdowns = DOLLY_1_12
        else:
            try:
                slowdowns = tuple((entry["s"], entry["p"])
                                  for entry in slowdowns)
            except (KeyError, TypeError) as error:
                raise ConfigurationError(
                    "entries need 's' and 'p'",
                    field="modulation.slowdowns") from error
        return cls(raw["epsilon"], slowdowns)
