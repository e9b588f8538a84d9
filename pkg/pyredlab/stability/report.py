"""Stability report, improvement verdict and the crossover capacity mu*.

analyze() bundles everything the package knows about one topology into a
StabilityReport that can be written to and read back from JSON.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

import logging
from dataclasses import dataclass

from scipy import optimize

from ..data_model import Topology
from ..errors import StabilityError
from ..util import compare
from .frontiers import lambda_B, lambda_J
from .subsystems import (Stage, SubsystemChain, Verdict, classify_servers,
                         subsystem_chain)


logger = logging.getLogger(__name__)

MU_STAR_XTOL = 1e-4
"""absolute tolerance of the mu* bisection"""

ATOM_WARNING = ("service distribution {} has atoms; the stability results "
                "assume an atomless distribution")


def improvement_verdict(topology):
    """Whether redundancy is at least as stable as Bernoulli routing.

    Returns
    -------
    (bool, float)
        (lambda_R >= lambda_B, lambda_R / lambda_B)
    """
    redundancy = subsystem_chain(topology).lambda_R
    bernoulli = lambda_B(topology)
    return compare(redundancy, bernoulli) >= 0, redundancy / bernoulli


def frontier_gap(family, mu):
    """lambda_R - lambda_B of the topology family(mu)"""
    topology = family(mu)
    return subsystem_chain(topology).lambda_R - lambda_B(topology)


def mu_star(family, bracket=(1.0, 3.0), xtol=MU_STAR_XTOL):
    """Heterogeneity at which redundancy and Bernoulli frontiers meet.

    Parameters
    ----------
    family : callable
        mu -> Topology, e.g. geometric capacities mu^(k-1)
    bracket : (float, float)
        interval on which lambda_R - lambda_B changes sign
    xtol : float
        absolute tolerance on mu

    Raises
    ------
    StabilityError
        if there is no sign change on the bracket
    """
    low, high = bracket
    gap_low, gap_high = frontier_gap(family, low), frontier_gap(family, high)
    if gap_low == 0:
        return low
    if gap_high == 0:
        return high
    if (gap_low > 0) == (gap_high > 0):
        raise StabilityError(
            "lambda_R - lambda_B does not change sign on [{}, {}] "
            "({:.6g}, {:.6g})".format(low, high, gap_low, gap_high))
    return optimize.bisect(lambda mu: frontier_gap(family, mu), low, high,
                           xtol=xtol)


#
# Definition of class StabilityReport
#


@dataclass(frozen=True)
class StabilityReport:
    """Everything known about the stability of one topology."""

    chain: SubsystemChain
    lam: float
    """arrival rate the verdicts refer to"""
    lambda_R: float
    lambda_B: float
    lambda_J: float
    verdicts: tuple
    """(server, Verdict) pairs"""
    redundancy_beats_bernoulli: bool
    improvement_factor: float
    warnings: tuple = ()

    @property
    def i_star(self):
        return self.chain.i_star

    @property
    def per_server_verdict(self):
        """dict server -> Verdict"""
        return dict(self.verdicts)

    def to_dict(self):
        """JSON representation with 0-based server indices"""
        topology = self.chain.topology
        return {
            "topology": topology.to_dict(),
            "lambda": self.lam,
            "stages": [{"stage": stage.number,
                        "S": sorted(stage.servers),
                        "C": [list(topology.types[index].servers)
                              for index in stage.types],
                        "L": sorted(stage.least_loaded),
                        "CAR": stage.car,
                        "ratios": {str(server): ratio
                                   for server, ratio in stage.ratios},
                        "typeless": sorted(stage.typeless)}
                       for stage in self.chain.stages],
            "i_star": self.chain.i_star,
            "least_loaded": [{"type": list(job_type.servers),
                              "R": sorted(servers),
                              "stage": removal}
                             for job_type, servers, removal in zip(
                                 topology.types, self.chain.least_loaded,
                                 self.chain.removal_stage)],
            "lambda_R": self.lambda_R,
            "lambda_B": self.lambda_B,
            "lambda_J": self.lambda_J,
            "bottleneck_stages": list(self.chain.bottleneck_stages()),
            "verdicts": {str(server): verdict.value
                         for server, verdict in self.verdicts},
            "redundancy_beats_bernoulli": self.redundancy_beats_bernoulli,
            "improvement_factor": self.improvement_factor,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, raw):
        """Rebuild a report from its JSON representation."""
        topology = Topology.from_dict(raw["topology"])
        stages = []
        for entry in raw["stages"]:
            stages.append(Stage(
                entry["stage"], frozenset(entry["S"]),
                tuple(topology.type_index(servers)
                      for servers in entry["C"]),
                frozenset(entry["L"]), entry["CAR"],
                tuple((int(server), ratio)
                      for server, ratio in entry["ratios"].items()),
                frozenset(entry["typeless"])))
        chain = SubsystemChain(
            topology, tuple(stages),
            tuple(frozenset(entry["R"]) for entry in raw["least_loaded"]),
            tuple(entry["stage"] for entry in raw["least_loaded"]))
        return cls(chain, raw["lambda"], raw["lambda_R"], raw["lambda_B"],
                   raw["lambda_J"],
                   tuple((int(server), Verdict(value))
                         for server, value in raw["verdicts"].items()),
                   raw["redundancy_beats_bernoulli"],
                   raw["improvement_factor"], tuple(raw["warnings"]))


def analyze(topology, service=None, lam=None):
    """Compute the full stability report of a topology.

    Parameters
    ----------
    topology : Topology
    service : ServiceDistribution, optional
        checked against the atomless-distribution assumption
    lam : float, optional
        arrival rate for the verdicts, defaults to topology.lam

    Returns
    -------
    StabilityReport
    """
    lam = topology.lam if lam is None else lam
    chain = subsystem_chain(topology)
    redundancy = chain.lambda_R
    bernoulli = lambda_B(topology)
    best_split = lambda_J(topology)
    assert compare(bernoulli, best_split) <= 0, \
        "lambda_B must not exceed lambda_J"
    assert compare(redundancy, best_split) <= 0, \
        "lambda_R must not exceed lambda_J"
    warnings = []
    if service is not None and service.has_atoms:
        message = ATOM_WARNING.format(service.kind.value)
        logger.warning(message)
        warnings.append(message)
    verdicts = classify_servers(topology, lam, chain)
    logger.debug("lambda_R=%.12g lambda_B=%.12g lambda_J=%.12g over %d "
                 "stages", redundancy, bernoulli, best_split, chain.i_star)
    return StabilityReport(
        chain, lam, redundancy, bernoulli, best_split,
        tuple(sorted(verdicts.items())),
        compare(redundancy, bernoulli) >= 0, redundancy / bernoulli,
        tuple(warnings))
