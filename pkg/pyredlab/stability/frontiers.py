"""Stability frontiers of the non-redundant dispatch policies.

lambda_B is the frontier of Bernoulli routing (one copy to a uniformly
chosen compatible server). lambda_J is the best frontier reachable by any
static split of the types over their servers, which is the frontier of
join-the-shortest-queue dispatch.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math

import networkx as nx
from networkx.algorithms.flow import edmonds_karp


BISECTION_STEPS = 60
"""halvings of the bracket in the lambda_J search"""

FEASIBILITY_TOL = 1e-12
"""relative shortfall of the max flow still counted as feasible"""

SOURCE, SINK = "source", "sink"


def bernoulli_loads(topology):
    """sum_{c in C(s)} p_c / |c| for every server"""
    loads = [[] for _ in topology.capacities]
    for job_type in topology.types:
        for server in job_type.servers:
            loads[server].append(job_type.p / len(job_type))
    return [math.fsum(load) for load in loads]


def lambda_B(topology):
    """Maximum stable arrival rate under Bernoulli routing.

    The system splits into K independent queues; server s receives the
    fraction sum_{c in C(s)} p_c/|c| of all jobs.
    """
    return min(mu / load for mu, load in zip(topology.capacities,
                                             bernoulli_loads(topology))
               if load > 0)


def _split_network(topology):
    """bipartite flow network types -> servers with server capacities"""
    graph = nx.DiGraph()
    for index, job_type in enumerate(topology.types):
        graph.add_edge(SOURCE, ("type", index), capacity=0.0)
        for server in job_type.servers:
            # no capacity attribute means unbounded
            graph.add_edge(("type", index), ("server", server))
    for server, mu in enumerate(topology.capacities):
        graph.add_edge(("server", server), SINK, capacity=mu)
    return graph


def _split_feasible(graph, topology, lam):
    """whether demand lam * p_c of every type can be routed"""
    for index, job_type in enumerate(topology.types):
        graph[SOURCE][("type", index)]["capacity"] = lam * job_type.p
    flow = nx.maximum_flow_value(graph, SOURCE, SINK,
                                 flow_func=edmonds_karp)
    return flow >= lam * (1.0 - FEASIBILITY_TOL)


def lambda_J(topology):
    """Maximum arrival rate supported by a static split.

    Solves max over splits p_{c,s} of min_s mu_s / sum_c p_{c,s} by a
    bisection on lam whose feasibility oracle is a max-flow computation on
    the type/server network.
    """
    graph = _split_network(topology)
    lower = lambda_B(topology)
    upper = math.fsum(topology.capacities)
    if _split_feasible(graph, topology, upper):
        return upper
    assert _split_feasible(graph, topology, lower * (1 - 1e-9)), \
        "the Bernoulli split must be feasible"
    for _ in range(BISECTION_STEPS):
        middle = 0.5 * (lower + upper)
        if _split_feasible(graph, topology, middle):
            lower = middle
        else:
            upper = middle
    return lower
