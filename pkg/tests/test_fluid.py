"""Test file for the fluid module."""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

import numpy as np
import pytest

from pyredlab.data_model import (ServiceDistribution, make_nested,
                                 make_red_d)
from pyredlab.errors import ConfigurationError, FluidError
from pyredlab.fluid import (classify_drifts, lb_alpha_trajectory,
                            server_mass, ub_drain_schedule)
from pyredlab.runners import SimConfig, Variant, run_fluid_scaled
from pyredlab.stability import Verdict, classify_servers

from .conftest import example_topology, random_topology


def test_example_drain_order():
    """Servers 4, 3 and then 1 and 2 (1-based) empty in turn."""
    trajectory = ub_drain_schedule(example_topology(7.5), (40, 40, 40, 30))
    assert trajectory.stalled_stage is None
    assert [event.servers for event in trajectory.drain_events] \
        == [(3,), (2,), (0, 1)]
    first = 30 / 1.625
    second = first + (40 - 0.625 * first) / 1.75
    mass_1 = 40 + 2.875 * first + 1.375 * (second - first)
    third = second + mass_1 / 0.125
    times = [event.time for event in trajectory.drain_events]
    assert times == pytest.approx([first, second, third])
    assert trajectory.drain_time(0) == pytest.approx(third)
    assert np.all(trajectory.mass_array() >= 0)
    assert np.all(trajectory.mass_at(third + 1) == 0)


def test_drained_servers_stay_empty():
    trajectory = ub_drain_schedule(example_topology(7.5), (40, 40, 40, 30))
    masses = trajectory.mass_array()
    for event in trajectory.drain_events:
        later = np.array(trajectory.times) >= event.time
        for server in event.servers:
            assert np.all(masses[later, server] == 0)


def test_homogeneous_drains_in_one_phase():
    topology = make_red_d(4, 2, (1, 1, 1, 1), lam=1.8)
    trajectory = ub_drain_schedule(topology, (5, 5, 5, 5))
    assert len(trajectory.drain_events) == 1
    event = trajectory.drain_events[0]
    assert event.servers == (0, 1, 2, 3)
    assert event.time == pytest.approx(5 / 0.1)


def test_zero_arrivals_least_loaded_servers_drain_at_capacity():
    topology = example_topology(0.0)
    initial = (10, 10, 10, 10)
    trajectory = ub_drain_schedule(topology, initial)
    for time in (0.5, 1.5, 2.5, 4.0):
        masses = trajectory.mass_at(time)
        for server in (1, 2, 3):
            expected = max(initial[server]
                           - topology.capacities[server] * time, 0)
            assert masses[server] == pytest.approx(expected)
    assert trajectory.mass_at(trajectory.horizon)[0] == 0


def test_stalled_stage():
    trajectory = ub_drain_schedule(example_topology(9.0), (1, 1, 1, 1))
    assert trajectory.stalled_stage == 3
    assert [event.servers for event in trajectory.drain_events] \
        == [(3,), (2,)]
    assert trajectory.mass_at(trajectory.horizon)[0] > 1


def test_drain_errors():
    topology = example_topology(7.5)
    with pytest.raises(FluidError):
        ub_drain_schedule(topology, (1, 1, 1, 1),
                          service=ServiceDistribution.deterministic())
    with pytest.raises(ConfigurationError):
        ub_drain_schedule(topology, (1, 1, 1))
    with pytest.raises(ConfigurationError):
        ub_drain_schedule(topology, (1, 1, 1, -1))


def test_server_mass(example):
    masses = server_mass(example, (1, 0, 0, 0, 0, 2))
    assert list(masses) == [1, 1, 2, 2]
    with pytest.raises(ConfigurationError):
        server_mass(example, (1, 2))


def test_trajectory_table(example):
    trajectory = ub_drain_schedule(example.with_arrival_rate(7.5),
                                   (4, 4, 4, 3), horizon=10)
    table = trajectory.to_trajectory_dictionary()
    assert table.columns == ["time", "server", "mass"]
    assert table.num_rows == 4 * len(trajectory.times)
    assert trajectory.horizon == 10
    assert set(table["server"]) == {1, 2, 3, 4}


def test_alpha_at_frontier_is_constant():
    topology = example_topology(8.0)
    alpha = lb_alpha_trajectory(topology, 3, 1.0, 50)
    assert alpha.slope == 0
    assert alpha.value_at(25) == pytest.approx(1.0)
    assert not alpha.diverges


def test_alpha_grows_above_frontier():
    alpha = lb_alpha_trajectory(example_topology(9.0), 3, 0.0, 40)
    assert alpha.slope == pytest.approx(0.125)
    assert alpha.value_at(40) == pytest.approx(5.0)
    assert alpha.diverges


def test_alpha_absorbed_at_zero():
    alpha = lb_alpha_trajectory(example_topology(4.0), 3, 2.0, 10)
    assert alpha.slope == pytest.approx(-0.5)
    assert alpha.value_at(4.0) == pytest.approx(0.0)
    assert alpha.value_at(9.0) == 0.0
    assert alpha.times == (0.0, 4.0, 10.0)


def test_alpha_errors():
    with pytest.raises(FluidError):
        lb_alpha_trajectory(example_topology(1.0), 4, 1.0, 1)
    with pytest.raises(ConfigurationError):
        lb_alpha_trajectory(example_topology(1.0), 1, -1.0, 1)
    with pytest.raises(ConfigurationError):
        lb_alpha_trajectory(example_topology(1.0), 1, 1.0, 0)


def test_example_drifts():
    drifts = classify_drifts(example_topology(9.0))
    assert drifts[1] == pytest.approx(0.25)
    assert drifts[3] == pytest.approx(9 * 0.45 - 5)
    assert drifts[2] == pytest.approx(9 * 0.3 - 4)
    assert all(drift < 0
               for drift in classify_drifts(example_topology(7.5)).values())
    zero = classify_drifts(example_topology(0.0))
    assert zero == pytest.approx({1: -2.0, 2: -4.0, 3: -5.0})


def test_drift_signs_match_verdicts():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        topology = random_topology(rng)
        lam = float(rng.uniform(0, 2 * sum(topology.capacities)))
        verdicts = classify_servers(topology, lam)
        for server, drift in classify_drifts(topology, lam).items():
            if drift > 0:
                assert verdicts[server] is Verdict.unstable
            elif drift < 0:
                assert verdicts[server] is Verdict.stable
            else:
                assert verdicts[server] is Verdict.critical


@pytest.mark.slow
@pytest.mark.parametrize("topology", [
    make_red_d(4, 2, (1, 1, 1, 1), lam=1.5),
    make_nested("W", (1, 2), (0.35, 0.40, 0.25), lam=2.0),
    example_topology(6.0),
], ids=["red-2", "W", "example"])
def test_fluid_scaled_simulation_approaches_schedule(topology):
    """The scaled upper-bound system gets closer to the fluid limit."""
    type_mass = (0.5,) * len(topology.types)
    fluid = ub_drain_schedule(topology, server_mass(topology, type_mass))
    horizon = 1.5 * max(event.time for event in fluid.drain_events)
    config = SimConfig(topology, variant=Variant.upper_bound, seed=5,
                       max_events=10 ** 7)
    gaps = []
    for scale in (50, 200):
        times, masses = run_fluid_scaled(config, scale, type_mass, horizon)
        expected = fluid.mass_at(times).T
        gaps.append(np.abs(masses - expected).max())
    assert gaps[1] < gaps[0]
