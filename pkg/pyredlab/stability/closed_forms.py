"""Closed-form stability frontiers of structured topologies.

The formulas are kept as sympy expressions (so they can be printed,
inspected and differentiated) and evaluated through cached lambdified
callables. Every closed form coincides with the general recursion of
pyredlab.stability.subsystems on the corresponding topology.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

#
# Imports
#

from functools import lru_cache

import sympy as sp

from ..errors import StabilityError
from ..util import compare, positive_part, safe_div


MU1, MU2 = sp.symbols("mu1 mu2", positive=True)
P, P1 = sp.symbols("p p1", nonnegative=True)
"""symbols of the two-server models; p is the probability of type {2} in
the N-model, p1 the probability of type {1} in the W-model"""


#
# Redundancy-d with homogeneous arrivals
#


def capacity_symbols(num_servers):
    """symbols mu_1..mu_K"""
    return sp.symbols("mu_1:{}".format(num_servers + 1), positive=True)


@lru_cache(maxsize=None)
def red_d_expression(num_servers, d):
    """min_{i=d..K} C(K,d)/C(i-1,d-1) * mu_i for sorted capacities"""
    mus = capacity_symbols(num_servers)
    return sp.Min(*(sp.binomial(num_servers, d)
                    / sp.binomial(i - 1, d - 1) * mus[i - 1]
                    for i in range(d, num_servers + 1)))


@lru_cache(maxsize=None)
def _red_d_callable(num_servers, d):
    return sp.lambdify(capacity_symbols(num_servers),
                       red_d_expression(num_servers, d), "math")


def red_d_lambda_R(num_servers, d, capacities):
    """Redundancy-d frontier for strictly increasing capacities.

    Parameters
    ----------
    num_servers : int
        K
    d : int
        copies per job, 1 <= d <= K
    capacities : sequence of float
        mu_1 < ... < mu_K

    Raises
    ------
    StabilityError
        for unsorted or tied capacities (use the general recursion)
    """
    if not 1 <= d <= num_servers:
        raise StabilityError("need 1 <= d <= K")
    if len(capacities) != num_servers:
        raise StabilityError("expected {} capacities".format(num_servers))
    if any(later <= earlier
           for earlier, later in zip(capacities, capacities[1:])):
        raise StabilityError(
            "capacities must be strictly increasing, got {}".format(
                list(capacities)))
    return float(_red_d_callable(num_servers, d)(*capacities))


def bernoulli_red_d_lambda_B(num_servers, capacities):
    """Bernoulli frontier of redundancy-d types: K * min_s mu_s"""
    assert len(capacities) == num_servers
    return num_servers * min(capacities)


def linear_red_d_lambda_R(num_servers, d, upper):
    """Redundancy-d frontier for capacities linear on [1, M].

    Equals M*K/d for d > 1 and K for d = 1.
    """
    if upper < 1:
        raise StabilityError("the linear family needs M >= 1")
    if d == 1:
        return float(num_servers)
    return upper * num_servers / d


#
# N-model: types {2} with probability p and {1,2} with 1-p
#


def n_model_expression():
    """three-branch frontier of the N-model"""
    return sp.Piecewise(
        (MU2, P <= (MU2 - MU1) / MU2),
        (MU1 / (1 - P), P <= MU2 / (MU1 + MU2)),
        (MU2 / P, True))


def n_model_bernoulli_expression():
    """Bernoulli frontier of the N-model"""
    return sp.Min(safe_div(2 * MU1, 1 - P), 2 * MU2 / (1 + P))


@lru_cache(maxsize=None)
def _n_model_callables():
    arguments = (MU1, MU2, P)
    return (sp.lambdify(arguments, n_model_expression(), "math"),
            sp.lambdify(arguments, n_model_bernoulli_expression(), "math"))


def _check_two_servers(mu1, mu2):
    if mu1 <= 0 or mu2 <= 0:
        raise StabilityError("capacities must be positive")


def n_model_lambda_R(mu1, mu2, p):
    """Redundancy frontier of the N-model.

    Parameters
    ----------
    mu1, mu2 : float
        capacities of servers 1 and 2
    p : float
        probability of the single-server type {2}, in [0, 1]
    """
    _check_two_servers(mu1, mu2)
    if not 0 <= p <= 1:
        raise StabilityError("p must lie in [0, 1]")
    return float(_n_model_callables()[0](mu1, mu2, p))


def n_model_lambda_B(mu1, mu2, p):
    """Bernoulli frontier of the N-model, min(2mu1/(1-p), 2mu2/(1+p))"""
    _check_two_servers(mu1, mu2)
    if not 0 <= p <= 1:
        raise StabilityError("p must lie in [0, 1]")
    return float(_n_model_callables()[1](mu1, mu2, p))


def n_model_improvement_intervals(mu1, mu2):
    """Open p-intervals on which redundancy beats Bernoulli routing.

    Returns
    -------
    list of (float, float)
        nonempty open intervals (low, high) within (0, 1)
    """
    _check_two_servers(mu1, mu2)
    upper_start = positive_part((2 * mu2 - mu1) / (2 * mu2 + mu1))
    if mu2 <= mu1:
        candidates = [(upper_start, 1.0)]
    else:
        candidates = [(0.0, positive_part((mu2 - 2 * mu1) / mu2)),
                      ((2 * mu2 - mu1) / (2 * mu2 + mu1), 1.0)]
    return [(float(low), float(high)) for low, high in candidates
            if low < high]


#
# W-model: types {1}, {2} and {1,2}
#


def w_model_expression():
    """frontier of the W-model when server 1 carries the larger load"""
    return sp.Piecewise(
        (MU2 / (1 - P1), P1 <= MU1 / (MU1 + MU2)),
        (MU1 / P1, True))


@lru_cache(maxsize=None)
def _w_model_callable():
    return sp.lambdify((MU1, MU2, P1), w_model_expression(), "math")


W_MODEL_SUM_TOL = 1e-9
"""tolerance on p1 + p2 + p12 = 1"""


def w_model_lambda_R(mu1, mu2, p1, p2, p12):
    """Redundancy frontier of the W-model.

    The servers are relabeled if necessary so that server 1 carries the
    larger load, (1-p2)/mu1 >= (1-p1)/mu2. On equal loads both servers
    leave in the first stage and the frontier is mu2/(1-p1).
    """
    _check_two_servers(mu1, mu2)
    if min(p1, p2, p12) < 0 or abs(p1 + p2 + p12 - 1) > W_MODEL_SUM_TOL:
        raise StabilityError("probabilities must be non-negative and sum "
                             "to 1")
    if (1 - p2) / mu1 < (1 - p1) / mu2:
        mu1, mu2, p1, p2 = mu2, mu1, p2, p1
    if compare((1 - p2) / mu1, (1 - p1) / mu2) == 0:
        return mu2 / (1 - p1)
    return float(_w_model_callable()(mu1, mu2, p1))
