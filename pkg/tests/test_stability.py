"""Randomized checks of the stability frontiers.

Closed forms against the recursion, the improvement criteria of the
redundancy-d family and the invariances every frontier must have.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math

import numpy as np
import pytest

from pyredlab.data_model import linear_capacities, make_nested, make_red_d
from pyredlab.stability import (improvement_verdict, lambda_B, lambda_J,
                                lambda_R, linear_red_d_lambda_R,
                                n_model_lambda_R, red_d_lambda_R,
                                subsystem_chain, w_model_lambda_R)

from .conftest import random_topology


def _sorted_capacities(rng, num_servers):
    return tuple(float(mu)
                 for mu in np.sort(rng.uniform(0.5, 5.0, num_servers)))


def test_red_d_wins_when_dth_server_is_fast():
    """mu_1 * d < mu_d makes redundancy beat Bernoulli routing."""
    rng = np.random.default_rng(6)
    for _ in range(500):
        num_servers = int(rng.integers(2, 9))
        d = int(rng.integers(2, num_servers + 1))
        capacities = np.array(_sorted_capacities(rng, num_servers))
        if capacities[d - 1] <= d * capacities[0]:
            factor = d * capacities[0] / capacities[d - 1] \
                * rng.uniform(1.01, 2.0)
            capacities[d - 1:] *= factor
        assert d * capacities[0] < capacities[d - 1]
        topology = make_red_d(num_servers, d, tuple(capacities))
        better, ratio = improvement_verdict(topology)
        assert better
        assert ratio >= 1 - 1e-12


def test_linear_red_d_wins_iff_upper_reaches_d():
    rng = np.random.default_rng(7)
    for _ in range(500):
        num_servers = int(rng.integers(2, 9))
        d = int(rng.integers(1, num_servers + 1))
        if rng.random() < 0.3:
            upper = float(rng.integers(1, num_servers + 3))
        else:
            upper = float(rng.uniform(1.0, num_servers + 2))
        topology = make_red_d(num_servers, d,
                              linear_capacities(num_servers, upper))
        better, _ = improvement_verdict(topology)
        assert better == (upper >= d)
        assert lambda_R(topology) == pytest.approx(
            linear_red_d_lambda_R(num_servers, d, upper))


def test_red_d_closed_form_matches_recursion():
    rng = np.random.default_rng(8)
    for _ in range(1000):
        num_servers = int(rng.integers(2, 9))
        d = int(rng.integers(1, num_servers + 1))
        capacities = _sorted_capacities(rng, num_servers)
        topology = make_red_d(num_servers, d, capacities)
        assert red_d_lambda_R(num_servers, d, capacities) \
            == pytest.approx(lambda_R(topology), rel=1e-9)


def test_n_model_closed_form_matches_recursion():
    rng = np.random.default_rng(9)
    for _ in range(1000):
        mu1, mu2 = rng.uniform(0.2, 5.0, 2)
        p = float(rng.uniform(0.0, 1.0))
        topology = make_nested("N", (mu1, mu2), (p, 1 - p))
        assert n_model_lambda_R(mu1, mu2, p) \
            == pytest.approx(lambda_R(topology), rel=1e-9)


def test_w_model_closed_form_matches_recursion():
    rng = np.random.default_rng(10)
    for _ in range(1000):
        mu1, mu2 = rng.uniform(0.2, 5.0, 2)
        p1, p2, p12 = rng.dirichlet(np.ones(3))
        topology = make_nested("W", (mu1, mu2), (p1, p2, p12))
        assert w_model_lambda_R(mu1, mu2, p1, p2, p12) \
            == pytest.approx(lambda_R(topology), rel=1e-9)


def test_reduced_system_has_the_same_frontier():
    rng = np.random.default_rng(12)
    for _ in range(1000):
        chain = subsystem_chain(random_topology(rng))
        assert chain.reduced_capacity_bound() \
            == pytest.approx(chain.lambda_R, rel=1e-8)


def test_frontiers_scale_with_capacities():
    rng = np.random.default_rng(13)
    for _ in range(100):
        topology = random_topology(rng)
        factor = float(rng.uniform(0.1, 10.0))
        scaled = topology.scaled(factor)
        for frontier in (lambda_R, lambda_B, lambda_J):
            assert frontier(scaled) \
                == pytest.approx(factor * frontier(topology), rel=1e-8)


def test_frontiers_ignore_server_labels():
    rng = np.random.default_rng(14)
    for _ in range(100):
        topology = random_topology(rng)
        order = rng.permutation(topology.num_servers).tolist()
        permuted = topology.permuted(order)
        for frontier in (lambda_R, lambda_B, lambda_J):
            assert frontier(permuted) \
                == pytest.approx(frontier(topology), rel=1e-8)


def test_static_split_dominates():
    """No policy beats the best static split."""
    rng = np.random.default_rng(15)
    for _ in range(200):
        topology = random_topology(rng)
        best = lambda_J(topology) * (1 + 1e-9)
        assert lambda_B(topology) <= best
        assert lambda_R(topology) <= best


@pytest.mark.parametrize("mu1, mu2", [(1, 2), (2, 1), (1, 1), (0.7, 3.1),
                                      (4.0, 1.3)])
def test_n_model_profile(mu1, mu2):
    """Continuous in p with its maximum mu1 + mu2 at p = mu2/(mu1+mu2)."""
    grid = np.linspace(0.0, 1.0, 1001)
    values = np.array([n_model_lambda_R(mu1, mu2, p) for p in grid])
    peak = mu2 / (mu1 + mu2)
    assert n_model_lambda_R(mu1, mu2, peak) == pytest.approx(mu1 + mu2)
    assert values.max() <= (mu1 + mu2) * (1 + 1e-12)
    assert abs(grid[values.argmax()] - peak) <= grid[1]
    lipschitz = (mu1 + mu2) ** 2 / min(mu1, mu2)
    assert np.abs(np.diff(values)).max() <= lipschitz * grid[1] * 1.0001
    for branch_point in (peak, (mu2 - mu1) / mu2):
        if 0 < branch_point < 1:
            left = n_model_lambda_R(mu1, mu2, branch_point - 1e-9)
            right = n_model_lambda_R(mu1, mu2, branch_point + 1e-9)
            assert math.isclose(left, right, rel_tol=1e-6)
