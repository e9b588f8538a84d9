"""Saturated drift of every least-loaded server."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from ..stability import subsystem_chain
from ..util import compare


def classify_drifts(topology, lam=None):
    """Signed fluid drift of every server in some L_i.

    If all stages before i drain, the drift of s in L_i is
    lambda * sum_{c in C_i(s)} p_c - mu_s. Otherwise the first stage l
    with lambda > CAR_l (or lambda = CAR_l) never drains, and s grows
    with the lower-bound rate (lambda - CAR_l) * sum_{c in C_l(s)} p_c.
    The sign therefore matches the stability verdict of the server.

    Parameters
    ----------
    topology : Topology
    lam : float, optional
        defaults to topology.lam

    Returns
    -------
    dict
        server -> drift (copies per unit time)
    """
    lam = topology.lam if lam is None else lam
    chain = subsystem_chain(topology)
    drifts = {}
    for stage in chain.stages:
        signs = [compare(lam, earlier.car)
                 for earlier in chain.stages[:stage.number]]
        if 1 in signs:
            governing = chain.stages[signs.index(1)]
        elif 0 in signs:
            governing = chain.stages[signs.index(0)]
        else:
            governing = stage
        for server in stage.least_loaded:
            load = sum(topology.types[index].p for index in governing.types
                       if server in topology.types[index])
            if compare(lam, governing.car) == 0:
                drifts[server] = 0.0
            elif governing is stage:
                drifts[server] = lam * load - topology.capacities[server]
            else:
                drifts[server] = (lam - governing.car) * load
    return drifts
