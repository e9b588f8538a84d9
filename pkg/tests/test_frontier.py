"""Test file for the empirical frontier check."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np
import pytest

from pyredlab.data_model import make_nested
from pyredlab.runners import (Dispatch, DriftMonitor, Scheduling,
                              drift_test, estimate_stability_frontier,
                              slope_test)
from pyredlab.stability import w_model_lambda_R

from .conftest import example_topology


def test_slope_test_detects_trend():
    rng = np.random.default_rng(0)
    times = np.arange(2000.0)
    growing = slope_test(times, 0.05 * times + rng.normal(0, 1, 2000))
    assert growing.diverged
    assert growing.slope == pytest.approx(0.05, rel=0.1)
    flat = slope_test(times, rng.normal(5, 1, 2000))
    assert not flat.diverged
    assert slope_test(times[:2], times[:2]).points == 2


def test_drift_test_uses_last_half():
    times = np.arange(1000.0)
    values = np.where(times < 500, times, 500.0)
    assert drift_test(times, values).slope == pytest.approx(0.0)
    assert slope_test(times, values).slope > 0


def test_drift_monitor_records_every_event():
    points = estimate_stability_frontier(
        example_topology(), Dispatch.redundancy, Scheduling.ps, [0.1],
        seeds=(0, 1, 2), max_events=5000)
    assert len(points) == 1
    assert not points[0].diverged
    assert points[0].votes == (False, False, False)
    assert points[0].to_dict()["lambda"] == 0.1
    assert DriftMonitor().times == []
def _assert_bracketed(points):
    below, above = points
    assert len(below.votes) == len(above.votes) == 5
    assert sum(below.votes) <= 2 and not below.diverged
    assert sum(above.votes) >= 3 and above.diverged


@pytest.mark.slow
def test_example_frontier():
    points = estimate_stability_frontier(
        example_topology(), Dispatch.redundancy, Scheduling.ps,
        [0.9 * 8, 1.1 * 8])
    _assert_bracketed(points)


@pytest.mark.slow
def test_w_model_frontier():
    topology = make_nested("W", (1, 2), (0.35, 0.40, 0.25))
    frontier = w_model_lambda_R(1, 2, 0.35, 0.40, 0.25)
    points = estimate_stability_frontier(
        topology, "redundancy", "ps", [0.9 * frontier, 1.1 * frontier])
    _assert_bracketed(points)
