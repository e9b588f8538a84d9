"""Script to plot the upper-bound fluid drain of the four-server example."""

import os

from pylab import figure, legend, plot, show, xlabel, ylabel

from pyredlab.config_file import ConfigFile
from pyredlab.fluid import server_mass, ub_drain_schedule

here = os.path.dirname(os.path.abspath(__file__))
config = ConfigFile.load(os.path.join(here, "example4_fluid.json"))
topology = config.topology
trajectory = ub_drain_schedule(
    topology, server_mass(topology, config.fluid.initial_types),
    config.fluid.horizon)

masses = trajectory.mass_array()
figure()
for server in range(trajectory.num_servers):
    plot(trajectory.times, masses[:, server],
         label="server {}".format(server + 1))
xlabel("t")
ylabel("copy mass")
legend()
show()
