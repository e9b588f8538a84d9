"""Test file for the topology generators."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import math

import pytest

from pyredlab.data_model import (NESTED_TYPE_SETS, geometric_capacities,
                                 is_nested, linear_capacities, make_nested,
                                 make_red_d)
from pyredlab.errors import ConfigurationError


def test_red_2_on_four_servers():
    topology = make_red_d(4, 2, (1, 2, 4, 5))
    assert len(topology.types) == 6
    assert all(job_type.p == pytest.approx(1 / 6)
               for job_type in topology.types)


def test_red_d_counts():
    assert [t.servers for t in make_red_d(3, 3, (1, 1, 1)).types] \
        == [(0, 1, 2)]
    topology = make_red_d(5, 2, (1,) * 5)
    assert len(topology.types) == 10
    assert math.fsum(topology.probabilities) == pytest.approx(1.0)


def test_red_d_rejects_bad_d():
    with pytest.raises(ConfigurationError):
        make_red_d(3, 4, (1, 1, 1))
    with pytest.raises(ConfigurationError):
        make_red_d(3, 2, (1, 1))


def test_nested_models():
    w_model = make_nested("W", (1, 2), (1 / 3, 1 / 3, 1 / 3))
    assert [t.servers for t in w_model.types] == [(0,), (1,), (0, 1)]
    n_model = make_nested("N", (1, 2), (0.3, 0.7))
    assert [t.servers for t in n_model.types] == [(1,), (0, 1)]
    ww_model = make_nested("WW", (1, 1, 1, 1))
    assert len(ww_model.types) == 7
    assert is_nested(ww_model)
    assert is_nested(make_nested("WWWW", (1,) * 8))


def test_nested_drops_zero_probability_types():
    topology = make_nested("W", (1, 2), (0.5, 0.5, 0.0))
    assert len(topology.types) == 2


def test_red_2_is_not_nested():
    assert not is_nested(make_red_d(3, 2, (1, 1, 1)))


def test_nested_model_errors():
    with pytest.raises(ConfigurationError):
        make_nested("V", (1, 1))
    with pytest.raises(ConfigurationError):
        make_nested("WW", (1, 1))
    assert set(NESTED_TYPE_SETS) == {"N", "W", "WW", "WWWW"}


def test_capacity_families():
    assert geometric_capacities(3, 2) == (1.0, 2.0, 4.0)
    assert linear_capacities(4, 4) == (1.0, 2.0, 3.0, 4.0)
    assert linear_capacities(1, 5) == (1.0,)
