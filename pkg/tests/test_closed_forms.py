"""Test file for the closed-form frontiers.

Every closed form is cross-checked against the general recursion.
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np
import pytest

from pyredlab.data_model import (geometric_capacities, linear_capacities,
                                 make_nested, make_red_d)
from pyredlab.errors import StabilityError
from pyredlab.stability import (bernoulli_red_d_lambda_B, lambda_B,
                                lambda_R, linear_red_d_lambda_R,
                                n_model_improvement_intervals,
                                n_model_lambda_B, n_model_lambda_R,
                                red_d_lambda_R, w_model_lambda_R)


def test_red_d_table_values():
    capacities = geometric_capacities(5, 1.4)
    assert red_d_lambda_R(5, 2, capacities) == pytest.approx(9.146, abs=0.01)
    assert red_d_lambda_R(10, 3, geometric_capacities(10, 2)) \
        == pytest.approx(320.0)
    assert red_d_lambda_R(3, 2, geometric_capacities(3, 1.2)) \
        == pytest.approx(2.16)


@pytest.mark.parametrize("num_servers, d", [(3, 2), (4, 2), (5, 3), (6, 1),
                                            (6, 6)])
def test_red_d_matches_recursion(num_servers, d):
    rng = np.random.default_rng(num_servers * 10 + d)
    capacities = tuple(np.sort(rng.uniform(0.5, 5.0, num_servers)))
    topology = make_red_d(num_servers, d, capacities)
    assert red_d_lambda_R(num_servers, d, capacities) \
        == pytest.approx(lambda_R(topology))
    assert bernoulli_red_d_lambda_B(num_servers, capacities) \
        == pytest.approx(lambda_B(topology))


def test_red_d_needs_increasing_capacities():
    with pytest.raises(StabilityError):
        red_d_lambda_R(3, 2, (1, 1, 2))
    with pytest.raises(StabilityError):
        red_d_lambda_R(3, 4, (1, 2, 3))


@pytest.mark.parametrize("num_servers, d, upper", [(4, 2, 4), (5, 3, 6),
                                                   (10, 2, 2), (4, 1, 3)])
def test_linear_red_d(num_servers, d, upper):
    topology = make_red_d(num_servers, d,
                          linear_capacities(num_servers, upper))
    assert linear_red_d_lambda_R(num_servers, d, upper) \
        == pytest.approx(lambda_R(topology))


@pytest.mark.parametrize("p, expected", [(2 / 3, 3.0), (0.25, 2.0),
                                         (0.9, 2 / 0.9), (0.6, 2.5)])
def test_n_model_branches(p, expected):
    assert n_model_lambda_R(1, 2, p) == pytest.approx(expected)
    topology = make_nested("N", (1, 2), (p, 1 - p))
    assert lambda_R(topology) == pytest.approx(expected)


def test_n_model_bernoulli():
    assert n_model_lambda_B(1, 2, 0.8) == pytest.approx(4 / 1.8)
    assert n_model_lambda_B(1, 2, 1.0) == pytest.approx(2.0)
    for p in (0.1, 0.5, 0.8):
        topology = make_nested("N", (1, 2), (p, 1 - p))
        assert n_model_lambda_B(1, 2, p) == pytest.approx(lambda_B(topology))


def test_n_model_improvement_intervals():
    """Inside an interval redundancy wins, outside it does not."""
    for mu1, mu2 in ((1, 2), (1, 3), (2, 1)):
        intervals = n_model_improvement_intervals(mu1, mu2)
        for p in np.linspace(0.01, 0.99, 99):
            inside = any(low < p < high for low, high in intervals)
            gap = n_model_lambda_R(mu1, mu2, p) - n_model_lambda_B(mu1, mu2, p)
            if inside:
                assert gap > -1e-9
            elif all(abs(p - bound) > 1e-6 for pair in intervals
                     for bound in pair):
                assert gap <= 1e-9


@pytest.mark.parametrize("mu, probs, expected", [
    ((1, 2), (1 / 3, 2 / 3 - 0.2, 0.2), 3.0),
    ((1, 1), (0.25, 0.25, 0.5), 4 / 3),
    ((1, 2), (0.35, 0.40, 0.25), 1 / 0.35),
    ((2, 1), (0.40, 0.35, 0.25), 1 / 0.35),
])
def test_w_model(mu, probs, expected):
    assert w_model_lambda_R(*mu, *probs) == pytest.approx(expected)
    assert lambda_R(make_nested("W", mu, probs)) == pytest.approx(expected)


def test_w_model_rejects_bad_probabilities():
    with pytest.raises(StabilityError):
        w_model_lambda_R(1, 2, 0.5, 0.5, 0.5)
