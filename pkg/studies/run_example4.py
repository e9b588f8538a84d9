"""Script to analyse the four-server example: report, fluid drain, simulation
and coupled bounds."""

import logging
import os

from pyredlab.config_file import ConfigFile
from pyredlab.fluid import classify_drifts, server_mass, ub_drain_schedule
from pyredlab.runners import run, run_coupled_bounds
from pyredlab.stability import analyze

logging.basicConfig(level=logging.INFO)

here = os.path.dirname(os.path.abspath(__file__))
config = ConfigFile.load(os.path.join(here, "example4.json"))
topology = config.topology

# stability report at a few arrival rates:
for lam in (7.5, 9.0, 10.5, 12.0):
    report = analyze(topology, lam=lam)
    print("lambda", lam, "lambda_R", report.lambda_R,
          "i*", report.i_star)
    for server, verdict in report.verdicts:
        print("   server", server + 1, verdict.value)

report = analyze(topology)
print("lambda_B", report.lambda_B, "lambda_J", report.lambda_J,
      "improvement", report.improvement_factor)

# fluid drain of the upper-bound system from unit mass per type:
fluid_topology = topology.with_arrival_rate(7.5)
trajectory = ub_drain_schedule(
    fluid_topology, server_mass(fluid_topology, [1.0] * len(topology.types)))
for event in trajectory.drain_events:
    print("t =", round(event.time, 4), "servers",
          [server + 1 for server in event.servers], "stage", event.stage)
print("drifts at lambda=9:", classify_drifts(topology.with_arrival_rate(9)))

# simulation and dominance check:
result = run(config.sim_config(lam=7.5))
print("mean jobs", result.mean_jobs, "+-", result.ci_half_width)
bounds = run_coupled_bounds(config.sim_config(lam=7.5),
                            raise_on_violation=False)
print("bounds hold:", bounds.ok)
