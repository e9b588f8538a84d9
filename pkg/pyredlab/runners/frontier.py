"""Empirical check of a stability frontier.

For every arrival rate of a grid a few long runs are started; a run counts
as diverged if the total number of copies still trends upward over the
last half of its events. The verdict per rate is a majority vote over the
seeds. This is a heuristic, never a proof.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import logging
from dataclasses import dataclass

from ..data_model import ServiceDistribution
from .config import SimConfig
from .hooks import Hooks
from .runner import Runner
from .statistics import DRIFT_BATCHES, drift_test


logger = logging.getLogger(__name__)

DEFAULT_SEEDS = (0, 1, 2, 3, 4)
DEFAULT_FRONTIER_EVENTS = 10 ** 6


class DriftMonitor:
    """Mid-hook recording (time, total copies) after every event."""

    def __init__(self):
        self.times = []
        self.totals = []

    def __call__(self, runner, t):
        self.times.append(t)
        self.totals.append(sum(runner.system.copies))

    def test(self, batches=DRIFT_BATCHES):
        return drift_test(self.times, self.totals, batches)


@dataclass(frozen=True)
class FrontierPoint:
    """Verdict at one arrival rate."""

    lam: float
    diverged: bool
    votes: tuple
    """diverged flag of every seed"""
    slopes: tuple
    t_stats: tuple

    def to_dict(self):
        return {"lambda": self.lam, "diverged": self.diverged,
                "votes": list(self.votes), "slopes": list(self.slopes),
                "t_stats": list(self.t_stats)}


def estimate_stability_frontier(topology, dispatch, scheduling, lambdas, *,
                                service=None, seeds=DEFAULT_SEEDS,
                                max_events=DEFAULT_FRONTIER_EVENTS,
                                batches=DRIFT_BATCHES):
    """Divergence flags along a grid of arrival rates.

    Parameters
    ----------
    topology : Topology
        its own arrival rate is ignored
    dispatch, scheduling : Dispatch, Scheduling
    lambdas : sequence of float
    service : ServiceDistribution, optional
        exponential by default
    seeds : sequence of int
        one run per seed and rate
    max_events : int
        length of every run

    Returns
    -------
    list of FrontierPoint
    """
    service = service or ServiceDistribution.exponential()
    points = []
    for lam in lambdas:
        votes, slopes, t_stats = [], [], []
        for seed in seeds:
            config = SimConfig(topology.with_arrival_rate(lam), dispatch,
                               scheduling, service, seed=seed,
                               max_events=max_events)
            monitor = DriftMonitor()
            hooks = Hooks()
            hooks.register_hook(Hooks.Types.mid, monitor)
            Runner(config, hooks=hooks).run_for(events=max_events)
            result = monitor.test(batches)
            votes.append(result.diverged)
            slopes.append(result.slope)
            t_stats.append(result.t_stat)
        diverged = 2 * sum(votes) > len(votes)
        logger.info("lambda=%.6g: %d of %d runs diverged", lam, sum(votes),
                    len(votes))
        points.append(FrontierPoint(lam, diverged, tuple(votes),
                                    tuple(slopes), tuple(t_stats)))
    return points
