"""Stability regions of redundancy systems.

The general recursion (subsystems), the frontiers of the non-redundant
policies (frontiers), closed forms for structured topologies
(closed_forms) and the combined report (report).
"""

# This file is part of pyredlab.
#
# License: BSD 2-clause license

from .subsystems import (Stage, SubsystemChain, Verdict, classify_servers,
                         lambda_R, lower_bound_capacities, subsystem_chain)
from .frontiers import bernoulli_loads, lambda_B, lambda_J
from .closed_forms import (bernoulli_red_d_lambda_B, linear_red_d_lambda_R,
                           n_model_expression, n_model_improvement_intervals,
                           n_model_lambda_B, n_model_lambda_R,
                           red_d_expression, red_d_lambda_R,
                           w_model_expression, w_model_lambda_R)
from .report import (StabilityReport, analyze, frontier_gap,
                     improvement_verdict, mu_star)
